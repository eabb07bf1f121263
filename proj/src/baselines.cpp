#include "kdr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kdr/rng.hpp"

namespace kdr {

void jacobi_eigendecompose(const Matrix& a, std::vector<double>& values, Matrix& vectors) {
  if (a.rows != a.cols) throw std::invalid_argument("jacobi: matrix must be square");
  std::size_t n = a.rows;
  Matrix w = a;
  vectors = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) vectors.at(i, i) = 1.0;

  double fro = 0.0;
  for (double v : a.data) fro += v * v;
  double threshold = 1e-11 * std::sqrt(fro);

  const int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        max_off = std::max(max_off, std::fabs(w.at(p, q)));
      }
    }
    if (max_off < threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = w.at(p, q);
        if (std::fabs(apq) < threshold) continue;
        double theta = 0.5 * std::atan2(2.0 * apq, w.at(q, q) - w.at(p, p));
        double c = std::cos(theta);
        double s = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          double wkp = w.at(k, p);
          double wkq = w.at(k, q);
          w.at(k, p) = c * wkp - s * wkq;
          w.at(k, q) = s * wkp + c * wkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double wpk = w.at(p, k);
          double wqk = w.at(q, k);
          w.at(p, k) = c * wpk - s * wqk;
          w.at(q, k) = s * wpk + c * wqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = vectors.at(k, p);
          double vkq = vectors.at(k, q);
          vectors.at(k, p) = c * vkp - s * vkq;
          vectors.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = w.at(i, i);
  // Sort eigenpairs by descending eigenvalue, permuting vector columns along.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  std::vector<double> sorted_values(n);
  Matrix sorted_vectors(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    sorted_values[c] = values[order[c]];
    for (std::size_t r = 0; r < n; ++r) sorted_vectors.at(r, c) = vectors.at(r, order[c]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

GramMatrix gram_from_entries(const Matrix& entries) {
  if (entries.rows != entries.cols) throw std::invalid_argument("gram: matrix must be square");
  for (std::size_t i = 0; i < entries.rows; ++i) {
    for (std::size_t j = i + 1; j < entries.cols; ++j) {
      if (std::fabs(entries.at(i, j) - entries.at(j, i)) > 1e-12) {
        throw std::invalid_argument("gram: matrix must be symmetric");
      }
    }
  }
  GramMatrix g;
  g.n = entries.rows;
  g.entries = entries;
  jacobi_eigendecompose(entries, g.eigenvalues, g.vectors);
  double top = g.eigenvalues.empty() ? 0.0 : std::max(g.eigenvalues.front(), 0.0);
  for (double& v : g.eigenvalues) {
    if (v < -1e-9 * top) {
      throw std::invalid_argument("gram: matrix is not positive semidefinite");
    }
    if (v < 0.0) v = 0.0;
  }
  return g;
}

GramMatrix gram_build(const ShiftInvariantKernel& kernel, const Matrix& points) {
  if (points.rows < 1) throw std::invalid_argument("gram_build: need at least one point");
  std::size_t n = points.rows;
  std::size_t d = points.cols;
  Matrix entries(n, n);
  std::vector<double> diff(d);
  for (std::size_t i = 0; i < n; ++i) {
    entries.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < d; ++k) diff[k] = points.at(i, k) - points.at(j, k);
      double v = kernel_eval(kernel, diff);
      entries.at(i, j) = v;
      entries.at(j, i) = v;
    }
  }
  return gram_from_entries(entries);
}

double svd_distance(const GramMatrix& g, std::size_t rank, std::size_t i, std::size_t j) {
  if (rank < 1 || rank > g.n) throw std::invalid_argument("svd_distance: rank out of range");
  if (i >= g.n || j >= g.n) throw std::invalid_argument("svd_distance: index out of range");
  double aii = 0.0, ajj = 0.0, aij = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    double lam = g.eigenvalues[k];
    double vi = g.vectors.at(i, k);
    double vj = g.vectors.at(j, k);
    aii += lam * vi * vi;
    ajj += lam * vj * vj;
    aij += lam * vi * vj;
  }
  double sq = aii + ajj - 2.0 * aij;
  return std::sqrt(sq < 0.0 ? 0.0 : sq);
}

Matrix gram_features(const GramMatrix& g) {
  Matrix f(g.n, g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    double root = std::sqrt(g.eigenvalues[k]);
    for (std::size_t i = 0; i < g.n; ++i) f.at(i, k) = g.vectors.at(i, k) * root;
  }
  return f;
}

Matrix jl_project(const GramMatrix& g, std::size_t D, std::uint64_t seed) {
  if (D < 1) throw std::invalid_argument("jl_project: target dimension must be >= 1");
  Matrix features = gram_features(g);
  // Projector entries drawn row-major so any (n, D, seed) triple names one
  // unique matrix regardless of how many points get projected.
  Matrix projected(g.n, D);
  Rng rng(seed);
  double scale = std::sqrt(1.0 / static_cast<double>(D));
  std::vector<double> row(D);
  for (std::size_t k = 0; k < g.n; ++k) {
    for (std::size_t c = 0; c < D; ++c) row[c] = scale * rng.normal();
    for (std::size_t i = 0; i < g.n; ++i) {
      double f = features.at(i, k);
      if (f == 0.0) continue;
      double* out = projected.data.data() + i * D;
      for (std::size_t c = 0; c < D; ++c) out[c] += f * row[c];
    }
  }
  return projected;
}

double jl_distance(const GramMatrix& g, std::size_t D, std::uint64_t seed, std::size_t i,
                   std::size_t j) {
  if (i >= g.n || j >= g.n) throw std::invalid_argument("jl_distance: index out of range");
  Matrix projected = jl_project(g, D, seed);
  double sq = 0.0;
  for (std::size_t c = 0; c < D; ++c) {
    double diff = projected.at(i, c) - projected.at(j, c);
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

}  // namespace kdr
