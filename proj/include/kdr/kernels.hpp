#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kdr/rng.hpp"

namespace kdr {

enum class KernelFamily { Gaussian, Laplacian, Cauchy };

// Shift-invariant kernel K(x, y) = K(x - y), normalized so K(0) = 1.
//   Gaussian:  K(u) = exp(-gamma * ||u||_2^2)
//   Laplacian: K(u) = exp(-lambda * ||u||_1)
//   Cauchy:    K(u) = prod_i 1 / (1 + u_i^2 / gamma^2)
struct ShiftInvariantKernel {
  KernelFamily family;
  double bandwidth;  // gamma for Gaussian/Cauchy, lambda for Laplacian

  ShiftInvariantKernel(KernelFamily f, double bw);
};

// Magnitude/resolution bounds: x is (delta, rho)-bounded iff ||x||_inf <= delta
// and every nonzero coordinate satisfies |x_i| >= rho.
struct BoundedSpec {
  double delta_max;
  double rho_min;

  BoundedSpec(double delta, double rho);
};

bool is_bounded(const BoundedSpec& b, const std::vector<double>& x);

// K(u). Throws on non-finite input. Result in (0, 1].
double kernel_eval(const ShiftInvariantKernel& k, const std::vector<double>& u);

// Feature-space distance sqrt(2 - 2 K(x - y)).
double kernel_distance(const ShiftInvariantKernel& k, const std::vector<double>& x,
                       const std::vector<double>& y);

// One frequency vector drawn from the kernel's spectral measure:
// Gaussian gamma -> coords iid normal(0, 2*gamma); Laplacian lambda -> iid
// Cauchy(scale lambda); Cauchy gamma -> iid Laplace(scale 1/gamma).
std::vector<double> sample_spectral(const ShiftInvariantKernel& k, std::size_t d, Rng& rng);

// s_K(x) = (1 + K(2x) - 2 K(x)^2) / (2 (1 - K(x))^2), the variance-to-
// squared-expectation ratio of the RFF distance error at displacement x.
// Throws for x = 0 where the statistic is undefined.
double s_k_statistic(const ShiftInvariantKernel& k, const std::vector<double>& x);

// sup of s_k_statistic over (delta, rho)-bounded displacements, located by a
// logarithmic grid of single-active-coordinate magnitudes in [rho, delta]
// (10^4 points) plus the analytic candidate x = rho, where the Laplacian
// supremum is attained.
double s_k_bounded_sup(const ShiftInvariantKernel& k, const BoundedSpec& b, std::size_t dim);

// Serialization used by the CLI: "gaussian:<gamma>", "laplacian:<lambda>",
// "cauchy:<gamma>".
ShiftInvariantKernel parse_kernel_spec(const std::string& spec);
std::string kernel_spec_string(const ShiftInvariantKernel& k);

}  // namespace kdr
