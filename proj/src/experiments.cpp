#include "kdr/experiments.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "kdr/newlap.hpp"
#include "kdr/rff.hpp"
#include "kdr/rng.hpp"

namespace kdr {

Matrix generate_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("generate_points: n and d must be >= 1");
  Matrix points(n, d);
  Rng rng(seed);
  for (double& v : points.data) v = rng.normal();
  return points;
}

static std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << contents;
  if (!out) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_points_csv(const Matrix& points, const std::string& path) {
  std::string out;
  for (std::size_t c = 0; c < points.cols; ++c) {
    if (c) out += ',';
    out += "dim" + std::to_string(c);
  }
  out += '\n';
  for (std::size_t i = 0; i < points.rows; ++i) {
    for (std::size_t c = 0; c < points.cols; ++c) {
      if (c) out += ',';
      out += format_double(points.at(i, c));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

static std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

static double parse_double_field(const std::string& s, const char* what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty()) {
    throw DataError(std::string("malformed ") + what + " field: '" + s + "'");
  }
  return v;
}

static std::size_t parse_size_field(const std::string& s, const char* what) {
  const char* begin = s.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(begin, &end, 10);
  if (end != begin + s.size() || s.empty()) {
    throw DataError(std::string("malformed ") + what + " field: '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

Matrix load_points_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset is empty: " + path);
  auto header = split_csv_line(line);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != "dim" + std::to_string(c)) {
      throw DataError("dataset header malformed at column " + std::to_string(c) + ": " + path);
    }
  }
  std::size_t d = header.size();
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != d) {
      throw DataError("dataset row " + std::to_string(rows + 1) + " has " +
                      std::to_string(fields.size()) + " columns, expected " + std::to_string(d));
    }
    for (const auto& f : fields) values.push_back(parse_double_field(f, "dataset"));
    ++rows;
  }
  if (rows == 0) throw DataError("dataset has no data rows: " + path);
  Matrix points(rows, d);
  points.data = std::move(values);
  return points;
}

std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& method, std::size_t D,
                         std::size_t trial) {
  return derive_seed(master_seed, {hash_str(method.c_str()), D, trial});
}

namespace {

Matrix embed_all_rff(const RffMap& map, const Matrix& points) {
  Matrix out(points.rows, 2 * map.target_dim);
  std::vector<double> x(points.cols);
  for (std::size_t i = 0; i < points.rows; ++i) {
    for (std::size_t c = 0; c < points.cols; ++c) x[c] = points.at(i, c);
    auto e = rff_embed(map, x);
    std::copy(e.begin(), e.end(), out.data.begin() + i * out.cols);
  }
  return out;
}

Matrix embed_all_newlap(const NewLapMap& map, const Matrix& points) {
  Matrix out(points.rows, 2 * map.target_dim);
  std::vector<double> x(points.cols);
  for (std::size_t i = 0; i < points.rows; ++i) {
    for (std::size_t c = 0; c < points.cols; ++c) x[c] = points.at(i, c);
    auto e = newlap_embed(map, x);
    std::copy(e.begin(), e.end(), out.data.begin() + i * out.cols);
  }
  return out;
}

}  // namespace

TradeoffResult run_tradeoff(const ExperimentConfig& cfg, const Matrix& points) {
  ShiftInvariantKernel kernel = parse_kernel_spec(cfg.kernel_spec);
  if (cfg.dims.empty()) throw std::invalid_argument("tradeoff: D grid must be nonempty");
  if (cfg.methods.empty()) throw std::invalid_argument("tradeoff: method list must be nonempty");
  if (cfg.trials < 1) throw std::invalid_argument("tradeoff: trials must be >= 1");
  std::vector<Method> methods;
  for (const auto& name : cfg.methods) methods.push_back(method_from_string(name));

  bool needs_gram = false;
  for (Method m : methods) {
    if (m == Method::Svd || m == Method::Jl) needs_gram = true;
    if (m == Method::Svd) {
      for (std::size_t D : cfg.dims) {
        if (D > points.rows) {
          throw std::invalid_argument(
              "tradeoff: svd requires D <= n (rank cannot exceed the point count)");
        }
      }
    }
    if (m == Method::NewLap) {
      if (kernel.family != KernelFamily::Laplacian) {
        throw std::invalid_argument("tradeoff: newlap requires a laplacian kernel");
      }
      BoundedSpec bounds(cfg.delta, cfg.rho);
      std::vector<double> x(points.cols);
      for (std::size_t i = 0; i < points.rows; ++i) {
        for (std::size_t c = 0; c < points.cols; ++c) x[c] = points.at(i, c);
        if (!is_bounded(bounds, x)) {
          throw DataError("tradeoff: point " + std::to_string(i) +
                          " is not (delta, rho)-bounded for newlap");
        }
      }
    }
  }

  DistanceMatrix exact = pairwise_exact(kernel, points);
  GramMatrix gram;
  if (needs_gram) gram = gram_build(kernel, points);

  struct Task {
    Method method;
    std::string method_name;
    std::size_t D;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t D : cfg.dims) {
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        tasks.push_back({methods[mi], cfg.methods[mi], D, t});
      }
    }
  }

  std::vector<TradeoffRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      std::uint64_t seed = trial_seed(cfg.master_seed, task.method_name, task.D, task.trial);
      double mre = 0.0;
      switch (task.method) {
        case Method::Rff: {
          RffMap map = rff_new(kernel, points.cols, task.D, seed);
          mre = max_relative_error(exact, pairwise_from_embedding(embed_all_rff(map, points)));
          break;
        }
        case Method::NewLap: {
          NewLapMap map = newlap_new(kernel.bandwidth, BoundedSpec(cfg.delta, cfg.rho),
                                     points.cols, task.D, seed);
          mre = max_relative_error(exact, pairwise_from_embedding(embed_all_newlap(map, points)));
          break;
        }
        case Method::Svd: {
          DistanceMatrix approx(gram.n, gram.n);
          for (std::size_t i = 0; i < gram.n; ++i) {
            for (std::size_t j = i + 1; j < gram.n; ++j) {
              double d = svd_distance(gram, task.D, i, j);
              approx.at(i, j) = d;
              approx.at(j, i) = d;
            }
          }
          mre = max_relative_error(exact, approx);
          break;
        }
        case Method::Jl: {
          Matrix projected = jl_project(gram, task.D, seed);
          mre = max_relative_error(exact, pairwise_from_embedding(projected));
          break;
        }
      }
      records[idx] = TradeoffRecord{task.method, task.D, task.trial, mre};
    }
  };

  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t nthreads = cfg.threads ? cfg.threads : hw;
  nthreads = std::min(nthreads, tasks.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  TradeoffResult result;
  result.records = std::move(records);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
      std::size_t base = (mi * cfg.dims.size() + di) * cfg.trials;
      double mean = 0.0;
      for (std::size_t t = 0; t < cfg.trials; ++t) mean += result.records[base + t].max_rel_err;
      mean /= static_cast<double>(cfg.trials);
      double var = 0.0;
      if (cfg.trials > 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          double diff = result.records[base + t].max_rel_err - mean;
          var += diff * diff;
        }
        var /= static_cast<double>(cfg.trials - 1);
      }
      double half = 1.96 * std::sqrt(var) / std::sqrt(static_cast<double>(cfg.trials));
      result.summary.push_back(
          SummaryRow{cfg.methods[mi], cfg.dims[di], mean, mean - half, mean + half});
    }
  }
  return result;
}

std::string records_csv(const std::vector<TradeoffRecord>& records) {
  std::string out = "method,D,trial,max_rel_err\n";
  for (const auto& r : records) {
    out += method_to_string(r.method) + ',' + std::to_string(r.D) + ',' + std::to_string(r.trial) +
           ',' + format_double(r.max_rel_err) + '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "method,D,mean,ci95_lo,ci95_hi\n";
  for (const auto& r : rows) {
    out += r.method + ',' + std::to_string(r.D) + ',' + format_double(r.mean) + ',' +
           format_double(r.ci95_lo) + ',' + format_double(r.ci95_hi) + '\n';
  }
  return out;
}

std::vector<TradeoffRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) !=
                                     std::vector<std::string>{"method", "D", "trial",
                                                              "max_rel_err"}) {
    throw DataError("records CSV header mismatch");
  }
  std::vector<TradeoffRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 4) throw DataError("records CSV row has wrong arity");
    Method m;
    try {
      m = method_from_string(f[0]);
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
    records.push_back(TradeoffRecord{m, parse_size_field(f[1], "records D"),
                                     parse_size_field(f[2], "records trial"),
                                     parse_double_field(f[3], "records max_rel_err")});
  }
  return records;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"method", "D", "mean", "ci95_lo", "ci95_hi"}) {
    throw DataError("summary CSV header mismatch");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 5) throw DataError("summary CSV row has wrong arity");
    rows.push_back(SummaryRow{f[0], parse_size_field(f[1], "summary D"),
                              parse_double_field(f[2], "summary mean"),
                              parse_double_field(f[3], "summary ci95_lo"),
                              parse_double_field(f[4], "summary ci95_hi")});
  }
  return rows;
}

std::vector<KmeansCheckRow> run_kmeans_check(const ExperimentConfig& cfg, const Matrix& points,
                                             std::size_t k, std::size_t partitions) {
  ShiftInvariantKernel kernel = parse_kernel_spec(cfg.kernel_spec);
  if (cfg.dims.size() != 1) {
    throw std::invalid_argument("kmeans-check: exactly one D must be given");
  }
  if (k < 1) throw std::invalid_argument("kmeans-check: k must be >= 1");
  if (k > points.rows) throw std::invalid_argument("kmeans-check: k cannot exceed n");
  std::size_t D = cfg.dims[0];
  GramMatrix gram = gram_build(kernel, points);
  RffMap map = rff_new(kernel, points.cols, D,
                       derive_seed(cfg.master_seed, {hash_str("kmeans-map"), D}));
  Matrix embedded = embed_all_rff(map, points);
  Rng part_rng(derive_seed(cfg.master_seed, {hash_str("kmeans-partitions"), k}));
  std::vector<KmeansCheckRow> rows;
  for (std::size_t p = 0; p < partitions; ++p) {
    Partition part;
    part.k = k;
    part.assignment.resize(points.rows);
    for (auto& id : part.assignment) {
      id = static_cast<std::size_t>(part_rng.uniform01() * static_cast<double>(k));
      if (id >= k) id = k - 1;
    }
    double exact = kernel_kmeans_cost_exact(gram, part);
    double embedded_cost = kmeans_cost_embedded(embedded, part);
    double ratio = exact > 0.0 ? embedded_cost / exact : 1.0;
    rows.push_back(KmeansCheckRow{p, exact, embedded_cost, ratio});
  }
  return rows;
}

std::string kmeans_check_csv(const std::vector<KmeansCheckRow>& rows) {
  std::string out = "partition,exact_cost,embedded_cost,ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.partition) + ',' + format_double(r.exact_cost) + ',' +
           format_double(r.embedded_cost) + ',' + format_double(r.ratio) + '\n';
  }
  return out;
}

SkstatReport run_skstat(const std::string& kernel_spec, double delta, double rho) {
  ShiftInvariantKernel kernel = parse_kernel_spec(kernel_spec);
  BoundedSpec bounds(delta, rho);
  SkstatReport r;
  r.sup = s_k_bounded_sup(kernel, bounds, 1);
  r.dim_floor_eps_10 = r.sup / 0.01;
  r.dim_floor_eps_20 = r.sup / 0.04;
  return r;
}

}  // namespace kdr
