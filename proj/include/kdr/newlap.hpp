#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kdr/kernels.hpp"

namespace kdr {

// Address of one node in the virtual prefix-sum tree. There is one tree per
// (input coordinate, output frequency) pair; level 0 is the root and offsets
// index nodes left-to-right within a level.
struct NodeId {
  std::size_t dim_index;
  std::size_t freq_index;
  unsigned level;
  std::uint64_t offset;  // < 2^level
};

// 256 bits of node-keyed pseudorandomness.
struct NodeBits {
  std::uint64_t word[4];
};

// Data-oblivious Laplacian-kernel embedding. Input coordinates are snapped to
// a grid of spacing 1/t, shifted by s and scaled by t so they land in
// {0,...,N}; the embedding evaluates sin/cos of per-frequency inner products
// with a virtual unary expansion, sampled lazily through a conditional-
// Gaussian prefix-sum tree of depth h. Everything is a pure function of
// (parameters, master_seed, point).
struct NewLapMap {
  double lambda;
  BoundedSpec bounds;
  std::size_t input_dim;
  std::size_t target_dim;  // D; output has 2D coordinates
  std::uint64_t master_seed;
  // Derived constants.
  std::uint64_t scale_t;      // t = ceil(2*delta/rho)
  std::uint64_t shift_s;      // s = t
  std::uint64_t grid_max;     // N = t*s + ceil(2*t*delta)
  unsigned tree_depth;        // h, smallest with N <= 2^h
  double leaf_variance;       // sigma_0^2 = 2*lambda/t
  // Precomputed per-level conditional stddevs and key material.
  std::vector<double> cond_std;  // index: parent level 0..h-1
  double root_std;
  std::uint64_t seed_key;
  std::vector<std::uint64_t> dim_keys;
};

NewLapMap newlap_new(double lambda, const BoundedSpec& bounds, std::size_t d, std::size_t D,
                     std::uint64_t master_seed);

// Grid-snap, shift and scale each coordinate to an integer in [0, N].
// Throws if x is not (delta, rho)-bounded.
std::vector<std::uint64_t> preprocess(const NewLapMap& m, const std::vector<double>& x);

// Reference unary expansion: each entry v becomes a block of N bits with the
// first v set. Test oracle only; the fast path never materializes this.
std::vector<std::uint8_t> unary_embed(const std::vector<std::uint64_t>& v, std::uint64_t N);

// The 256-bit block attached to a tree node; pure function of
// (master_seed, id), repeatable, distinct ids decorrelated.
NodeBits node_gaussian_bits(const NewLapMap& m, const NodeId& id);

// Left-child draw given the parent's value: for independent halves summing to
// the parent, the left half is normal(parent/2, 2^(l-1)*leaf_var/2), where the
// parent covers 2^l leaves. Deterministic in `bits`.
double conditional_child_sample(double parent_value, std::uint64_t parent_leaf_count,
                                double leaf_variance, const NodeBits& bits);

// Sampled sum of the first x leaf Gaussians of tree (dim_index, freq_index),
// via a root-to-leaf walk costing O(h). Values at shared nodes agree across
// calls because randomness is id-keyed.
double prefix_sum_sample(const NewLapMap& m, std::size_t dim_index, std::size_t freq_index,
                         std::uint64_t x);

// Full embedding: per frequency j, inner_j = sum_i prefix_sum_sample(i, j,
// preprocess(x)_i); output is sqrt(1/D) * (sin inner_j, cos inner_j) pairs.
std::vector<double> newlap_embed(const NewLapMap& m, const std::vector<double>& x);

// One-line parameter serialization:
// "newlap lambda=<l> delta=<d> rho=<r> D=<D> seed=<s>".
std::string newlap_to_string(const NewLapMap& m);
NewLapMap newlap_from_string(const std::string& line, std::size_t input_dim);

}  // namespace kdr
