#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kdr/baselines.hpp"
#include "kdr/kernels.hpp"

namespace kdr {

// Cluster assignment over n points; ids live in [0, k) and clusters may be
// empty (they contribute zero cost).
struct Partition {
  std::vector<std::size_t> assignment;
  std::size_t k = 0;
};

bool partition_valid(const Partition& p);

enum class Method { Rff, NewLap, Svd, Jl };
Method method_from_string(const std::string& name);
std::string method_to_string(Method m);

// One experiment measurement: the max pairwise relative distance error for
// (method, D) at a given trial.
struct TradeoffRecord {
  Method method;
  std::size_t D;
  std::size_t trial;
  double max_rel_err;
};

// Symmetric pairwise distances stored densely; helper of the harness.
using DistanceMatrix = Matrix;

DistanceMatrix pairwise_exact(const ShiftInvariantKernel& k, const Matrix& points);
DistanceMatrix pairwise_from_embedding(const Matrix& embedded);

// max over unordered pairs with exact > 0 of |approx - exact| / exact.
double max_relative_error(const DistanceMatrix& exact, const DistanceMatrix& approx);

// Exact kernel k-means cost at p=2 via the Gram identity:
// sum over clusters of (sum_x G[x,x] - (1/|C|) sum_{x,y} G[x,y]).
double kernel_kmeans_cost_exact(const GramMatrix& g, const Partition& part);

// Explicit-vector k-means cost: sum over clusters of squared distances to the
// cluster mean, in the embedded space.
double kmeans_cost_embedded(const Matrix& embedded, const Partition& part);

struct LowerBoundSummary {
  double empirical_std_rel_sq_err;
  double predicted;  // sqrt(s_K(rho) / D)
};

// Fixes the 1-d pair x=0, y=rho, builds `trials` independent RFF maps of
// dimension D, and measures the spread of the relative error of the squared
// embedded distance against the prediction sqrt(s_K(rho)/D).
LowerBoundSummary lower_bound_experiment(const ShiftInvariantKernel& kernel,
                                         const BoundedSpec& bounds, std::size_t D,
                                         std::size_t trials, std::uint64_t seed);

}  // namespace kdr
