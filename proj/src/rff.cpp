#include "kdr/rff.hpp"

#include <cmath>
#include <stdexcept>

namespace kdr {

RffMap rff_new(const ShiftInvariantKernel& kernel, std::size_t d, std::size_t D,
               std::uint64_t seed) {
  if (d < 1 || D < 1) throw std::invalid_argument("rff_new: d and D must be >= 1");
  RffMap m{kernel, d, D, {}};
  m.freqs.reserve(D);
  Rng rng(seed);
  for (std::size_t i = 0; i < D; ++i) {
    m.freqs.push_back(sample_spectral(kernel, d, rng));
  }
  return m;
}

std::vector<double> rff_embed(const RffMap& m, const std::vector<double>& x) {
  if (x.size() != m.input_dim) throw std::invalid_argument("rff_embed: dimension mismatch");
  std::vector<double> out(2 * m.target_dim);
  double scale = std::sqrt(1.0 / static_cast<double>(m.target_dim));
  for (std::size_t i = 0; i < m.target_dim; ++i) {
    const auto& w = m.freqs[i];
    double angle = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) angle += w[j] * x[j];
    out[2 * i] = scale * std::sin(angle);
    out[2 * i + 1] = scale * std::cos(angle);
  }
  return out;
}

static double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

double cos_power_moment(const ShiftInvariantKernel& kernel, const std::vector<double>& x,
                        unsigned k) {
  if (k == 0) return 1.0;
  double sum = 0.0;
  std::vector<double> scaled(x.size());
  for (unsigned j = 0; j <= k; ++j) {
    double factor = static_cast<double>(2.0 * j) - static_cast<double>(k);
    double term;
    if (factor == 0.0) {
      term = 1.0;  // K(0)
    } else {
      for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = factor * x[i];
      term = kernel_eval(kernel, scaled);
    }
    sum += binomial(k, j) * term;
  }
  return std::ldexp(sum, -static_cast<int>(k));
}

double centered_moment_mc(const ShiftInvariantKernel& kernel, const std::vector<double>& x,
                          unsigned k, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("centered_moment_mc: n_samples must be >= 1");
  double kx = kernel_eval(kernel, x);
  Rng rng(seed);
  double acc = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    auto w = sample_spectral(kernel, x.size(), rng);
    double angle = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) angle += w[i] * x[i];
    double centered = std::fabs(std::cos(angle) - kx);
    acc += std::pow(centered, static_cast<double>(k));
  }
  return acc / static_cast<double>(n_samples);
}

}  // namespace kdr
