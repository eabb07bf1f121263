#pragma once

#include <cstdint>
#include <initializer_list>

namespace kdr {

// 64-bit finalizer used everywhere we need to turn structured integers into
// well-mixed bits. Bijective on uint64, so distinct inputs never collide.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Collapses (seed, tag, tag, ...) into a fresh stream seed. Order-sensitive.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept;

// FNV-1a, for folding short strings (method names, kernel tags) into seeds.
std::uint64_t hash_str(const char* s) noexcept;

// Sequential pseudorandom stream (splitmix64). One instance per logical
// consumer; never share a stream across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept;

  // Uniform on the open interval (0, 1); safe to pass to log/tan.
  double uniform01() noexcept;

  // Standard normal via Box-Muller. Each call consumes two uniforms.
  double normal() noexcept;

  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  // Cauchy with the given scale (median 0).
  double cauchy(double scale) noexcept;

  // Laplace (double exponential) with the given scale.
  double laplace(double scale) noexcept;

 private:
  std::uint64_t state_;
};

// Inverse standard normal CDF (Acklam's rational approximation, abs error
// below 1.2e-8 over (0,1)).
double inverse_normal_cdf(double u);

// Maps 64 random bits to a uniform double in the open interval (0, 1).
double bits_to_open_unit(std::uint64_t bits) noexcept;

}  // namespace kdr
