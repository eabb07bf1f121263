#include "kdr/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "kdr/rff.hpp"
#include "kdr/rng.hpp"

namespace kdr {

bool partition_valid(const Partition& p) {
  if (p.k < 1) return false;
  for (std::size_t id : p.assignment) {
    if (id >= p.k) return false;
  }
  return true;
}

Method method_from_string(const std::string& name) {
  if (name == "rff") return Method::Rff;
  if (name == "newlap") return Method::NewLap;
  if (name == "svd") return Method::Svd;
  if (name == "jl") return Method::Jl;
  throw std::invalid_argument("unknown method name: " + name);
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::Rff: return "rff";
    case Method::NewLap: return "newlap";
    case Method::Svd: return "svd";
    case Method::Jl: return "jl";
  }
  throw std::logic_error("unreachable method");
}

DistanceMatrix pairwise_exact(const ShiftInvariantKernel& k, const Matrix& points) {
  std::size_t n = points.rows;
  DistanceMatrix dm(n, n);
  std::vector<double> diff(points.cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t c = 0; c < points.cols; ++c) diff[c] = points.at(i, c) - points.at(j, c);
      double v = 2.0 - 2.0 * kernel_eval(k, diff);
      double d = std::sqrt(v < 0.0 ? 0.0 : v);
      dm.at(i, j) = d;
      dm.at(j, i) = d;
    }
  }
  return dm;
}

DistanceMatrix pairwise_from_embedding(const Matrix& embedded) {
  std::size_t n = embedded.rows;
  DistanceMatrix dm(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* ri = embedded.data.data() + i * embedded.cols;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* rj = embedded.data.data() + j * embedded.cols;
      double sq = 0.0;
      for (std::size_t c = 0; c < embedded.cols; ++c) {
        double diff = ri[c] - rj[c];
        sq += diff * diff;
      }
      double d = std::sqrt(sq);
      dm.at(i, j) = d;
      dm.at(j, i) = d;
    }
  }
  return dm;
}

double max_relative_error(const DistanceMatrix& exact, const DistanceMatrix& approx) {
  if (exact.rows != approx.rows || exact.cols != approx.cols || exact.rows != exact.cols) {
    throw std::invalid_argument("max_relative_error: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.rows; ++i) {
    for (std::size_t j = i + 1; j < exact.cols; ++j) {
      double e = exact.at(i, j);
      if (e <= 0.0) continue;  // duplicate points carry no relative error
      double rel = std::fabs(approx.at(i, j) - e) / e;
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

double kernel_kmeans_cost_exact(const GramMatrix& g, const Partition& part) {
  if (!partition_valid(part) || part.assignment.size() != g.n) {
    throw std::invalid_argument("kernel_kmeans_cost_exact: invalid partition");
  }
  std::vector<std::vector<std::size_t>> clusters(part.k);
  for (std::size_t i = 0; i < part.assignment.size(); ++i) {
    clusters[part.assignment[i]].push_back(i);
  }
  double cost = 0.0;
  for (const auto& members : clusters) {
    if (members.empty()) continue;
    double self = 0.0;
    double cross = 0.0;
    for (std::size_t x : members) {
      self += g.entries.at(x, x);
      for (std::size_t y : members) cross += g.entries.at(x, y);
    }
    cost += self - cross / static_cast<double>(members.size());
  }
  return cost;
}

double kmeans_cost_embedded(const Matrix& embedded, const Partition& part) {
  if (!partition_valid(part) || part.assignment.size() != embedded.rows) {
    throw std::invalid_argument("kmeans_cost_embedded: invalid partition");
  }
  std::size_t dim = embedded.cols;
  Matrix means(part.k, dim);
  std::vector<std::size_t> counts(part.k, 0);
  for (std::size_t i = 0; i < embedded.rows; ++i) {
    std::size_t c = part.assignment[i];
    ++counts[c];
    for (std::size_t k = 0; k < dim; ++k) means.at(c, k) += embedded.at(i, k);
  }
  for (std::size_t c = 0; c < part.k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t k = 0; k < dim; ++k) means.at(c, k) /= static_cast<double>(counts[c]);
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < embedded.rows; ++i) {
    std::size_t c = part.assignment[i];
    for (std::size_t k = 0; k < dim; ++k) {
      double diff = embedded.at(i, k) - means.at(c, k);
      cost += diff * diff;
    }
  }
  return cost;
}

LowerBoundSummary lower_bound_experiment(const ShiftInvariantKernel& kernel,
                                         const BoundedSpec& bounds, std::size_t D,
                                         std::size_t trials, std::uint64_t seed) {
  if (D < 16) throw std::invalid_argument("lower_bound_experiment: D must be >= 16");
  if (trials < 100) throw std::invalid_argument("lower_bound_experiment: trials must be >= 100");
  double rho = bounds.rho_min;
  std::vector<double> displacement{rho};
  double kx = kernel_eval(kernel, displacement);
  double exact_sq = 2.0 - 2.0 * kx;
  double mean = 0.0;
  std::vector<double> errs(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    RffMap map = rff_new(kernel, 1, D, derive_seed(seed, {t}));
    // dist^2 in feature space = 2 - (2/D) sum_i cos(w_i * rho).
    double acc = 0.0;
    for (std::size_t i = 0; i < D; ++i) acc += std::cos(map.freqs[i][0] * rho);
    double approx_sq = 2.0 - 2.0 * acc / static_cast<double>(D);
    errs[t] = (approx_sq - exact_sq) / exact_sq;
    mean += errs[t];
  }
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (double e : errs) var += (e - mean) * (e - mean);
  var /= static_cast<double>(trials - 1);
  LowerBoundSummary s;
  s.empirical_std_rel_sq_err = std::sqrt(var);
  s.predicted = std::sqrt(s_k_statistic(kernel, displacement) / static_cast<double>(D));
  return s;
}

}  // namespace kdr
