#include "kdr/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kdr {

ShiftInvariantKernel::ShiftInvariantKernel(KernelFamily f, double bw) : family(f), bandwidth(bw) {
  if (!(bw > 0.0) || !std::isfinite(bw)) {
    throw std::invalid_argument("kernel bandwidth must be positive and finite");
  }
}

BoundedSpec::BoundedSpec(double delta, double rho) : delta_max(delta), rho_min(rho) {
  if (!(rho > 0.0) || !(delta >= rho) || !std::isfinite(delta)) {
    throw std::invalid_argument("bounded spec requires delta >= rho > 0");
  }
}

bool is_bounded(const BoundedSpec& b, const std::vector<double>& x) {
  for (double c : x) {
    if (!std::isfinite(c)) return false;
    double a = std::fabs(c);
    if (a > b.delta_max) return false;
    if (a != 0.0 && a < b.rho_min) return false;
  }
  return true;
}

static void check_finite(const std::vector<double>& u) {
  if (u.empty()) throw std::invalid_argument("kernel input must have dimension >= 1");
  for (double c : u) {
    if (!std::isfinite(c)) throw std::invalid_argument("kernel input has non-finite coordinate");
  }
}

double kernel_eval(const ShiftInvariantKernel& k, const std::vector<double>& u) {
  check_finite(u);
  switch (k.family) {
    case KernelFamily::Gaussian: {
      double sq = 0.0;
      for (double c : u) sq += c * c;
      return std::exp(-k.bandwidth * sq);
    }
    case KernelFamily::Laplacian: {
      double l1 = 0.0;
      for (double c : u) l1 += std::fabs(c);
      return std::exp(-k.bandwidth * l1);
    }
    case KernelFamily::Cauchy: {
      double prod = 1.0;
      double g2 = k.bandwidth * k.bandwidth;
      for (double c : u) prod /= 1.0 + c * c / g2;
      return prod;
    }
  }
  throw std::logic_error("unreachable kernel family");
}

double kernel_distance(const ShiftInvariantKernel& k, const std::vector<double>& x,
                       const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_distance: dimension mismatch");
  }
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i] - y[i];
  double v = 2.0 - 2.0 * kernel_eval(k, u);
  return std::sqrt(v < 0.0 ? 0.0 : v);
}

std::vector<double> sample_spectral(const ShiftInvariantKernel& k, std::size_t d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_spectral: dimension must be >= 1");
  std::vector<double> w(d);
  switch (k.family) {
    case KernelFamily::Gaussian: {
      double stddev = std::sqrt(2.0 * k.bandwidth);
      for (auto& c : w) c = stddev * rng.normal();
      break;
    }
    case KernelFamily::Laplacian:
      for (auto& c : w) c = rng.cauchy(k.bandwidth);
      break;
    case KernelFamily::Cauchy:
      for (auto& c : w) c = rng.laplace(1.0 / k.bandwidth);
      break;
  }
  return w;
}

double s_k_statistic(const ShiftInvariantKernel& k, const std::vector<double>& x) {
  check_finite(x);
  bool all_zero = true;
  for (double c : x) {
    if (c != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) throw std::domain_error("s_k_statistic undefined at x = 0");
  // Evaluating (1 + K(2x) - 2K(x)^2) / (2(1 - K(x))^2) directly cancels
  // catastrophically as x -> 0 (the numerator shrinks like x^4 while its
  // terms stay O(1)), so each family uses an exact algebraic rewrite that
  // stays stable there.
  switch (k.family) {
    case KernelFamily::Gaussian: {
      // K(2x) = K(x)^4, so the ratio collapses to (1 + K(x))^2 / 2.
      double q = kernel_eval(k, x);
      return 0.5 * (1.0 + q) * (1.0 + q);
    }
    case KernelFamily::Laplacian: {
      // K(2x) = K(x)^2, so the ratio collapses to (1 + K)/(2(1 - K)).
      double a = 0.0;
      for (double c : x) a += std::fabs(c);
      a *= k.bandwidth;
      return (1.0 + std::exp(-a)) / (2.0 * -std::expm1(-a));
    }
    case KernelFamily::Cauchy: {
      // With u_i = (x_i/gamma)^2, a = prod(1+u_i) - 1 and b =
      // prod(1+4u_i) - 1, the ratio equals
      // (4a - b + 2ab + a^2(2+b)) / (2(1+b) a^2); a and b accumulate from
      // nonnegative terms, and in one dimension 4a - b vanishes exactly.
      double a = 0.0, b = 0.0;
      for (double c : x) {
        double u = (c / k.bandwidth) * (c / k.bandwidth);
        a += u + a * u;
        b += 4.0 * u + b * (4.0 * u);
      }
      double num = (4.0 * a - b) + 2.0 * a * b + a * a * (2.0 + b);
      return num / (2.0 * (1.0 + b) * a * a);
    }
  }
  throw std::logic_error("unreachable kernel family");
}

double s_k_bounded_sup(const ShiftInvariantKernel& k, const BoundedSpec& b, std::size_t dim) {
  if (dim < 1) throw std::invalid_argument("s_k_bounded_sup: dimension must be >= 1");
  auto eval_at = [&](double mag) {
    std::vector<double> x(dim, 0.0);
    x[0] = mag;
    return s_k_statistic(k, x);
  };
  double best = eval_at(b.rho_min);
  if (b.delta_max > b.rho_min) {
    const int kGridPoints = 10000;
    double log_lo = std::log(b.rho_min);
    double log_hi = std::log(b.delta_max);
    for (int i = 0; i < kGridPoints; ++i) {
      double mag =
          std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) / (kGridPoints - 1));
      if (mag < b.rho_min) mag = b.rho_min;
      if (mag > b.delta_max) mag = b.delta_max;
      double v = eval_at(mag);
      if (v > best) best = v;
    }
  }
  return best;
}

ShiftInvariantKernel parse_kernel_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= spec.size()) {
    throw std::invalid_argument("kernel spec must look like 'gaussian:<bw>': " + spec);
  }
  std::string name = spec.substr(0, colon);
  std::string num = spec.substr(colon + 1);
  std::size_t used = 0;
  double bw = 0.0;
  try {
    bw = std::stod(num, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("kernel spec has unparsable bandwidth: " + spec);
  }
  if (used != num.size()) {
    throw std::invalid_argument("kernel spec has trailing junk after bandwidth: " + spec);
  }
  KernelFamily fam;
  if (name == "gaussian") {
    fam = KernelFamily::Gaussian;
  } else if (name == "laplacian") {
    fam = KernelFamily::Laplacian;
  } else if (name == "cauchy") {
    fam = KernelFamily::Cauchy;
  } else {
    throw std::invalid_argument("unknown kernel family: " + name);
  }
  return ShiftInvariantKernel(fam, bw);
}

std::string kernel_spec_string(const ShiftInvariantKernel& k) {
  const char* name = "gaussian";
  switch (k.family) {
    case KernelFamily::Gaussian: break;
    case KernelFamily::Laplacian: name = "laplacian"; break;
    case KernelFamily::Cauchy: name = "cauchy"; break;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s:%.17g", name, k.bandwidth);
  return buf;
}

}  // namespace kdr
