#pragma once

#include <cstdint>
#include <vector>

#include "kdr/kernels.hpp"

namespace kdr {

// Minimal dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Exact kernel matrix with its full symmetric eigendecomposition
// (eigenvalues descending, negatives clamped to 0, orthonormal eigenvectors
// as columns of `vectors`).
struct GramMatrix {
  std::size_t n = 0;
  Matrix entries;
  std::vector<double> eigenvalues;
  Matrix vectors;
};

GramMatrix gram_build(const ShiftInvariantKernel& kernel, const Matrix& points);

// Eigendecomposition of an arbitrary symmetric matrix (used by gram_build and
// by tests that assemble Gram matrices from explicit inner products).
GramMatrix gram_from_entries(const Matrix& entries);

// Cyclic Jacobi rotations, row-major sweep order, iterated until every
// off-diagonal magnitude drops below 1e-11 * ||A||_F. Deterministic.
void jacobi_eigendecompose(const Matrix& a, std::vector<double>& values, Matrix& vectors);

// Distance under the top-D eigen-truncation A_D:
// sqrt(max(0, A_D[i,i] + A_D[j,j] - 2 A_D[i,j])).
double svd_distance(const GramMatrix& g, std::size_t rank, std::size_t i, std::size_t j);

// Exact feature vectors (rows of V * Lambda^(1/2)) projected by an n x D
// matrix of iid normal(0, 1/D) entries drawn from `seed`.
double jl_distance(const GramMatrix& g, std::size_t D, std::uint64_t seed, std::size_t i,
                   std::size_t j);

// The exact n-dimensional feature realization: row i is phi(x_i).
Matrix gram_features(const GramMatrix& g);

// The same projection jl_distance uses, applied to all points at once:
// returns the n x D matrix of projected features.
Matrix jl_project(const GramMatrix& g, std::size_t D, std::uint64_t seed);

}  // namespace kdr
