#pragma once

#include <cstdint>
#include <vector>

#include "kdr/kernels.hpp"

namespace kdr {

// Random Fourier feature map: D frozen frequency vectors; embeds x in R^d to
// the 2D-dimensional vector sqrt(1/D) * (sin<w_1,x>, cos<w_1,x>, ...), whose
// inner products estimate K and whose norm is exactly 1.
struct RffMap {
  ShiftInvariantKernel kernel;
  std::size_t input_dim;
  std::size_t target_dim;                 // D; output has 2D coordinates
  std::vector<std::vector<double>> freqs;  // D vectors of dimension d
};

RffMap rff_new(const ShiftInvariantKernel& kernel, std::size_t d, std::size_t D,
               std::uint64_t seed);

std::vector<double> rff_embed(const RffMap& m, const std::vector<double>& x);

// Closed-form E[cos^k <w, x>] = (1/2^k) sum_j C(k,j) K((2j - k) x); no sampling.
double cos_power_moment(const ShiftInvariantKernel& kernel, const std::vector<double>& x,
                        unsigned k);

// Monte-Carlo estimate of E[|cos<w,x> - K(x)|^k] over n_samples spectral draws.
double centered_moment_mc(const ShiftInvariantKernel& kernel, const std::vector<double>& x,
                          unsigned k, std::size_t n_samples, std::uint64_t seed);

}  // namespace kdr
