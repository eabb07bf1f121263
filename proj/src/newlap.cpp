#include "kdr/newlap.hpp"

#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kdr {

namespace {

// Distinct odd multipliers keeping the (dim, freq, node) key chains disjoint.
constexpr std::uint64_t kDimSalt = 0xa0761d6478bd642fULL;
constexpr std::uint64_t kFreqSalt = 0xe7037ed1a0b428dbULL;
constexpr std::uint64_t kNodeSalt = 0x8ebc6af09c88c6e3ULL;
constexpr std::uint64_t kWordSalt[3] = {0x589965cc75374cc3ULL, 0x1d8e4e27c47d124fULL,
                                        0xeb44accab455d165ULL};

std::uint64_t freq_key(const NewLapMap& m, std::size_t dim_index, std::size_t freq_index) {
  return mix64(m.dim_keys[dim_index] ^ ((freq_index + 1) * kFreqSalt));
}

std::uint64_t node_key(std::uint64_t fkey, unsigned level, std::uint64_t offset) {
  std::uint64_t heap = (std::uint64_t{1} << level) | offset;
  return mix64(fkey ^ (heap * kNodeSalt));
}

double gaussian_from_key(std::uint64_t key) { return inverse_normal_cdf(bits_to_open_unit(key)); }

}  // namespace

NewLapMap newlap_new(double lambda, const BoundedSpec& bounds, std::size_t d, std::size_t D,
                     std::uint64_t master_seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("newlap_new: lambda must be positive");
  if (d < 1 || D < 1) throw std::invalid_argument("newlap_new: d and D must be >= 1");
  double ratio = 2.0 * bounds.delta_max / bounds.rho_min;
  if (ratio > 9e15) throw std::invalid_argument("newlap_new: delta/rho ratio too large for grid");
  std::uint64_t t = static_cast<std::uint64_t>(std::ceil(ratio));
  std::uint64_t s = t;
  if (static_cast<double>(s) < bounds.delta_max) {
    // s >= delta is what keeps shifted coordinates nonnegative; it only fails
    // for resolution bounds above 2, which the grid construction does not
    // support.
    throw std::invalid_argument("newlap_new: rho_min must be <= 2 so the shift covers delta_max");
  }
  std::uint64_t N = t * s + static_cast<std::uint64_t>(
                                std::ceil(2.0 * static_cast<double>(t) * bounds.delta_max));
  unsigned h = 0;
  while ((std::uint64_t{1} << h) < N) {
    ++h;
    if (h > 62) throw std::invalid_argument("newlap_new: grid requires tree depth above 62");
  }
  NewLapMap m{lambda, bounds, d,    D,   master_seed, t, s,
              N,      h,      0.0,  {},  0.0,         0, {}};
  m.leaf_variance = 2.0 * lambda / static_cast<double>(t);
  m.root_std = std::sqrt(std::ldexp(m.leaf_variance, static_cast<int>(h)));
  m.cond_std.resize(h);
  for (unsigned l = 0; l < h; ++l) {
    // Parent at level l covers 2^(h-l) leaves; its children's conditional
    // variance is half their unconditional variance 2^(h-l-1)*sigma0^2.
    m.cond_std[l] = std::sqrt(std::ldexp(m.leaf_variance, static_cast<int>(h - l) - 2));
  }
  m.seed_key = mix64(master_seed ^ 0x9e3779b97f4a7c15ULL);
  m.dim_keys.resize(d);
  for (std::size_t i = 0; i < d; ++i) m.dim_keys[i] = mix64(m.seed_key ^ ((i + 1) * kDimSalt));
  return m;
}

std::vector<std::uint64_t> preprocess(const NewLapMap& m, const std::vector<double>& x) {
  if (x.size() != m.input_dim) throw std::invalid_argument("preprocess: dimension mismatch");
  std::vector<std::uint64_t> v(x.size());
  double t = static_cast<double>(m.scale_t);
  std::uint64_t shift = m.scale_t * m.shift_s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double c = x[i];
    if (!std::isfinite(c) || std::fabs(c) > m.bounds.delta_max ||
        (c != 0.0 && std::fabs(c) < m.bounds.rho_min)) {
      throw std::domain_error("preprocess: coordinate " + std::to_string(i) +
                              " is not (delta, rho)-bounded");
    }
    auto snapped = static_cast<std::int64_t>(std::floor(c * t + 0.5));
    auto shifted = snapped + static_cast<std::int64_t>(shift);
    if (shifted < 0 || static_cast<std::uint64_t>(shifted) > m.grid_max) {
      throw std::logic_error("preprocess: grid landing invariant violated");
    }
    v[i] = static_cast<std::uint64_t>(shifted);
  }
  return v;
}

std::vector<std::uint8_t> unary_embed(const std::vector<std::uint64_t>& v, std::uint64_t N) {
  std::vector<std::uint8_t> out(v.size() * N, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > N) throw std::invalid_argument("unary_embed: entry exceeds N");
    for (std::uint64_t j = 0; j < v[i]; ++j) out[i * N + j] = 1;
  }
  return out;
}

NodeBits node_gaussian_bits(const NewLapMap& m, const NodeId& id) {
  if (id.dim_index >= m.input_dim || id.freq_index >= m.target_dim ||
      id.level > m.tree_depth || id.offset >= (std::uint64_t{1} << id.level)) {
    throw std::invalid_argument("node_gaussian_bits: invalid node id");
  }
  std::uint64_t k = node_key(freq_key(m, id.dim_index, id.freq_index), id.level, id.offset);
  NodeBits b;
  b.word[0] = k;
  for (int i = 0; i < 3; ++i) b.word[i + 1] = mix64(k ^ kWordSalt[i]);
  return b;
}

double conditional_child_sample(double parent_value, std::uint64_t parent_leaf_count,
                                double leaf_variance, const NodeBits& bits) {
  if (parent_leaf_count < 2 || (parent_leaf_count & (parent_leaf_count - 1)) != 0) {
    throw std::invalid_argument("conditional_child_sample: leaf count must be a power of two >= 2");
  }
  int l = std::bit_width(parent_leaf_count) - 1;
  double cond_std = std::sqrt(std::ldexp(leaf_variance, l - 2));
  return 0.5 * parent_value + cond_std * inverse_normal_cdf(bits_to_open_unit(bits.word[0]));
}

double prefix_sum_sample(const NewLapMap& m, std::size_t dim_index, std::size_t freq_index,
                         std::uint64_t x) {
  if (dim_index >= m.input_dim || freq_index >= m.target_dim) {
    throw std::invalid_argument("prefix_sum_sample: index out of range");
  }
  if (x > m.grid_max) throw std::invalid_argument("prefix_sum_sample: x exceeds grid maximum");
  if (x == 0) return 0.0;
  std::uint64_t fkey = freq_key(m, dim_index, freq_index);
  double a = m.root_std * gaussian_from_key(node_key(fkey, 0, 0));
  double z = a;
  std::uint64_t j = x - 1;
  std::uint64_t offset = 0;
  unsigned h = m.tree_depth;
  for (unsigned l = 0; l < h; ++l) {
    double b = 0.5 * a + m.cond_std[l] * gaussian_from_key(node_key(fkey, l + 1, 2 * offset));
    if (((j >> (h - 1 - l)) & 1) == 0) {
      z += b - a;
      a = b;
      offset = 2 * offset;
    } else {
      a -= b;
      offset = 2 * offset + 1;
    }
  }
  return z;
}

std::vector<double> newlap_embed(const NewLapMap& m, const std::vector<double>& x) {
  std::vector<std::uint64_t> v = preprocess(m, x);
  // Per-dimension path data reused across all frequencies: the multiplied
  // heap index of the left child entered at each level, and the turn bit.
  unsigned h = m.tree_depth;
  std::vector<std::uint64_t> heap_mult(x.size() * h);
  std::vector<std::uint8_t> turn(x.size() * h);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    std::uint64_t j = v[i] - 1;
    std::uint64_t offset = 0;
    for (unsigned l = 0; l < h; ++l) {
      std::uint64_t heap = (std::uint64_t{2} << l) | (2 * offset);
      heap_mult[i * h + l] = heap * kNodeSalt;
      unsigned bit = (j >> (h - 1 - l)) & 1;
      turn[i * h + l] = static_cast<std::uint8_t>(bit);
      offset = 2 * offset + bit;
    }
  }
  constexpr std::uint64_t kRootMult = kNodeSalt;  // heap index of the root is 1
  std::vector<double> out(2 * m.target_dim);
  double scale = std::sqrt(1.0 / static_cast<double>(m.target_dim));
  const double* cs = m.cond_std.data();
  for (std::size_t f = 0; f < m.target_dim; ++f) {
    double inner = 0.0;
    std::uint64_t fsalt = (f + 1) * kFreqSalt;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      std::uint64_t fkey = mix64(m.dim_keys[i] ^ fsalt);
      double a = m.root_std * gaussian_from_key(mix64(fkey ^ kRootMult));
      double z = a;
      const std::uint64_t* hm = heap_mult.data() + i * h;
      const std::uint8_t* tb = turn.data() + i * h;
      for (unsigned l = 0; l < h; ++l) {
        double b = 0.5 * a + cs[l] * gaussian_from_key(mix64(fkey ^ hm[l]));
        if (tb[l] == 0) {
          z += b - a;
          a = b;
        } else {
          a -= b;
        }
      }
      inner += z;
    }
    out[2 * f] = scale * std::sin(inner);
    out[2 * f + 1] = scale * std::cos(inner);
  }
  return out;
}

std::string newlap_to_string(const NewLapMap& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "newlap lambda=%.17g delta=%.17g rho=%.17g D=%zu seed=%" PRIu64,
                m.lambda, m.bounds.delta_max, m.bounds.rho_min, m.target_dim, m.master_seed);
  return buf;
}

NewLapMap newlap_from_string(const std::string& line, std::size_t input_dim) {
  double lambda = 0.0, delta = 0.0, rho = 0.0;
  std::size_t D = 0;
  std::uint64_t seed = 0;
  int matched = std::sscanf(line.c_str(), "newlap lambda=%lf delta=%lf rho=%lf D=%zu seed=%" SCNu64,
                            &lambda, &delta, &rho, &D, &seed);
  if (matched != 5) throw std::invalid_argument("newlap_from_string: unparsable line: " + line);
  return newlap_new(lambda, BoundedSpec(delta, rho), input_dim, D, seed);
}

}  // namespace kdr
