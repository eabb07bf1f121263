#include <cinttypes>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kdr/experiments.hpp"
#include "kdr/newlap.hpp"

namespace {

std::string summary_path_for(const std::string& records_path) {
  const std::string suffix = ".csv";
  if (records_path.size() > suffix.size() &&
      records_path.compare(records_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return records_path.substr(0, records_path.size() - suffix.size()) + ".summary.csv";
  }
  return records_path + ".summary.csv";
}

int run(int argc, char** argv) {
  CLI::App app{"Dimension-error tradeoff harness for shift-invariant kernel embeddings"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data", "Generate a standard-normal dataset CSV");
  std::size_t gen_n = 100, gen_d = 60;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "point count");
  gen->add_option("--d", gen_d, "dimensions per point");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  auto* tr = app.add_subcommand("tradeoff", "Run the dimension-error tradeoff experiment");
  kdr::ExperimentConfig cfg;
  std::string tr_data, tr_out;
  std::string methods_csv = "rff";
  std::string dims_csv = "64,256,1024,4096";
  tr->add_option("--kernel", cfg.kernel_spec, "kernel spec, e.g. gaussian:0.5")->required();
  tr->add_option("--methods", methods_csv, "comma list from {rff,newlap,svd,jl}");
  tr->add_option("--dims", dims_csv, "comma list of target dimensions D");
  tr->add_option("--trials", cfg.trials, "trials per (method, D)");
  tr->add_option("--seed", cfg.master_seed, "master seed");
  tr->add_option("--data", tr_data, "dataset CSV path")->required();
  tr->add_option("--out", tr_out, "records CSV path (summary lands beside it)")->required();
  tr->add_option("--delta", cfg.delta, "magnitude bound for newlap");
  tr->add_option("--rho", cfg.rho, "resolution bound for newlap");
  tr->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");

  auto* sk = app.add_subcommand("skstat", "Print the bounded s_K supremum and dimension floors");
  std::string sk_kernel;
  double sk_delta = 1.0, sk_rho = 0.01;
  sk->add_option("--kernel", sk_kernel, "kernel spec")->required();
  sk->add_option("--delta", sk_delta, "magnitude bound");
  sk->add_option("--rho", sk_rho, "resolution bound");

  auto* km = app.add_subcommand("kmeans-check", "Compare exact vs embedded k-means costs");
  kdr::ExperimentConfig km_cfg;
  std::string km_data, km_out, km_dims = "4096";
  std::size_t km_k = 5, km_partitions = 100;
  km->add_option("--kernel", km_cfg.kernel_spec, "kernel spec")->required();
  km->add_option("--data", km_data, "dataset CSV path")->required();
  km->add_option("--dims", km_dims, "target dimension D (exactly one)");
  km->add_option("--k", km_k, "cluster count");
  km->add_option("--partitions", km_partitions, "random partitions to sample");
  km->add_option("--seed", km_cfg.master_seed, "master seed");
  km->add_option("--out", km_out, "output CSV path")->required();

  auto* ni = app.add_subcommand("newlap-info", "Parse a newlap parameter line, print derived grid");
  std::string ni_line;
  std::size_t ni_d = 1;
  ni->add_option("--map", ni_line, "line like 'newlap lambda=.. delta=.. rho=.. D=.. seed=..'")
      ->required();
  ni->add_option("--d", ni_d, "input dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto parse_list = [](const std::string& text, const char* what) {
    std::vector<std::string> items;
    std::string cur;
    for (char ch : text) {
      if (ch == ',') {
        items.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    items.push_back(cur);
    for (const auto& s : items) {
      if (s.empty()) throw std::invalid_argument(std::string("empty entry in ") + what);
    }
    return items;
  };
  auto parse_dims = [&parse_list](const std::string& text) {
    std::vector<std::size_t> dims;
    for (const auto& s : parse_list(text, "--dims")) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(s, &pos);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad --dims entry: " + s);
      }
      if (pos != s.size() || v < 1) throw std::invalid_argument("bad --dims entry: " + s);
      dims.push_back(static_cast<std::size_t>(v));
    }
    return dims;
  };

  if (gen->parsed()) {
    kdr::Matrix points = kdr::generate_points(gen_n, gen_d, gen_seed);
    kdr::save_points_csv(points, gen_out);
    std::printf("wrote %zu x %zu dataset to %s\n", points.rows, points.cols, gen_out.c_str());
    return 0;
  }
  if (tr->parsed()) {
    cfg.methods = parse_list(methods_csv, "--methods");
    cfg.dims = parse_dims(dims_csv);
    kdr::Matrix points = kdr::load_points_csv(tr_data);
    for (const auto& name : cfg.methods) {
      if (name == "newlap") {
        for (std::size_t D : cfg.dims) {
          kdr::NewLapMap map =
              kdr::newlap_new(kdr::parse_kernel_spec(cfg.kernel_spec).bandwidth,
                              kdr::BoundedSpec(cfg.delta, cfg.rho), points.cols, D,
                              kdr::trial_seed(cfg.master_seed, name, D, 0));
          std::fprintf(stderr, "%s\n", kdr::newlap_to_string(map).c_str());
        }
      }
    }
    kdr::TradeoffResult result = kdr::run_tradeoff(cfg, points);
    kdr::write_text_file(tr_out, kdr::records_csv(result.records));
    std::string spath = summary_path_for(tr_out);
    kdr::write_text_file(spath, kdr::summary_csv(result.summary));
    std::printf("wrote %zu records to %s and summary to %s\n", result.records.size(),
                tr_out.c_str(), spath.c_str());
    return 0;
  }
  if (sk->parsed()) {
    kdr::SkstatReport r = kdr::run_skstat(sk_kernel, sk_delta, sk_rho);
    std::printf("s_k_bounded_sup = %.6g\n", r.sup);
    std::printf("dimension floor at eps=0.1: %.6g\n", r.dim_floor_eps_10);
    std::printf("dimension floor at eps=0.2: %.6g\n", r.dim_floor_eps_20);
    return 0;
  }
  if (km->parsed()) {
    km_cfg.dims = parse_dims(km_dims);
    kdr::Matrix points = kdr::load_points_csv(km_data);
    auto rows = kdr::run_kmeans_check(km_cfg, points, km_k, km_partitions);
    kdr::write_text_file(km_out, kdr::kmeans_check_csv(rows));
    std::printf("wrote %zu partition checks to %s\n", rows.size(), km_out.c_str());
    return 0;
  }
  if (ni->parsed()) {
    kdr::NewLapMap map = kdr::newlap_from_string(ni_line, ni_d);
    std::printf("t=%" PRIu64 " s=%" PRIu64 " N=%" PRIu64 " h=%u leaf_variance=%.17g\n",
                map.scale_t, map.shift_s, map.grid_max, map.tree_depth, map.leaf_variance);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const kdr::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
