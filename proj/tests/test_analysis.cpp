#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kdr/analysis.hpp"
#include "kdr/experiments.hpp"
#include "kdr/rff.hpp"
#include "kdr/rng.hpp"
#include "test_util.hpp"

using namespace kdr;

namespace {

Partition random_partition(Rng& rng, std::size_t n, std::size_t k) {
  Partition p;
  p.k = k;
  p.assignment.resize(n);
  for (auto& id : p.assignment) id = rng.next_u64() % k;
  return p;
}

}  // namespace

TEST_CASE("partition validity and method names") {
  Partition p{{0, 1, 2, 1}, 3};
  CHECK(partition_valid(p));
  CHECK_FALSE(partition_valid(Partition{{0, 3}, 3}));
  CHECK_FALSE(partition_valid(Partition{{0}, 0}));

  for (Method m : {Method::Rff, Method::NewLap, Method::Svd, Method::Jl}) {
    CHECK(method_from_string(method_to_string(m)) == m);
  }
  CHECK(method_to_string(Method::NewLap) == "newlap");
  CHECK_THROWS_AS(method_from_string("pca"), std::invalid_argument);
}

TEST_CASE("pairwise distance matrices") {
  ShiftInvariantKernel g(KernelFamily::Gaussian, 0.5);
  Matrix pts(3, 2);
  pts.data = {0.0, 0.0, 1.0, 0.0, 0.0, -1.0};
  DistanceMatrix dm = pairwise_exact(g, pts);
  REQUIRE(dm.rows == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(dm.at(i, i) == 0.0);
  double expect = std::sqrt(2.0 - 2.0 * std::exp(-0.5));
  CHECK(dm.at(0, 1) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(dm.at(0, 1) == dm.at(1, 0));
  CHECK(dm.at(1, 2) == doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-1.0))).epsilon(1e-14));

  Matrix emb(2, 3);
  emb.data = {1.0, 2.0, 2.0, 1.0, 2.0, 0.0};
  DistanceMatrix de = pairwise_from_embedding(emb);
  CHECK(de.at(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("max relative error") {
  DistanceMatrix exact(3, 3);
  exact.data = {0, 1, 2, 1, 0, 4, 2, 4, 0};
  CHECK(max_relative_error(exact, exact) == 0.0);

  DistanceMatrix scaled = exact;
  for (double& v : scaled.data) v *= 1.1;
  CHECK(max_relative_error(exact, scaled) == doctest::Approx(0.1).epsilon(1e-12));

  DistanceMatrix two(2, 2);
  two.data = {0, 2, 2, 0};
  DistanceMatrix approx(2, 2);
  approx.data = {0, 1.5, 1.5, 0};
  CHECK(max_relative_error(two, approx) == doctest::Approx(0.25).epsilon(1e-15));

  // A zero exact distance (duplicate points) is skipped, not divided by.
  DistanceMatrix dup(3, 3);
  dup.data = {0, 0, 1, 0, 0, 1, 1, 1, 0};
  DistanceMatrix noisy(3, 3);
  noisy.data = {0, 0.7, 1.1, 0.7, 0, 1.1, 1.1, 1.1, 0};
  CHECK(max_relative_error(dup, noisy) == doctest::Approx(0.1).epsilon(1e-12));

  DistanceMatrix wide(2, 3);
  CHECK_THROWS_AS(max_relative_error(exact, wide), std::invalid_argument);
}

TEST_CASE("exact kernel k-means cost via the Gram identity") {
  ShiftInvariantKernel ker(KernelFamily::Gaussian, 0.3);
  Matrix pts = generate_points(6, 2, 13);
  GramMatrix g = gram_build(ker, pts);

  Partition singletons{{0, 1, 2, 3, 4, 5}, 6};
  CHECK(kernel_kmeans_cost_exact(g, singletons) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));

  // Two points in one cluster cost half their squared feature distance.
  Matrix two(2, 2);
  two.data = {pts.at(0, 0), pts.at(0, 1), pts.at(1, 0), pts.at(1, 1)};
  GramMatrix g2 = gram_build(ker, two);
  double kxy = g2.entries.at(0, 1);
  Partition pair{{0, 0}, 1};
  CHECK(kernel_kmeans_cost_exact(g2, pair) ==
        doctest::Approx((2.0 - 2.0 * kxy) / 2.0).epsilon(1e-12));

  // Unused cluster ids contribute nothing.
  Partition two_ids{{0, 1, 0, 1, 0, 1}, 2};
  Partition five_ids{{0, 1, 0, 1, 0, 1}, 5};
  CHECK(kernel_kmeans_cost_exact(g, two_ids) == kernel_kmeans_cost_exact(g, five_ids));

  CHECK_THROWS_AS(kernel_kmeans_cost_exact(g, Partition{{0, 0, 0, 0, 0, 9}, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_kmeans_cost_exact(g, Partition{{0, 0}, 1}), std::invalid_argument);
}

TEST_CASE("embedded cost: singletons, pair, exact doubling") {
  Matrix emb(4, 3);
  Rng rng(21);
  for (auto& v : emb.data) v = rng.normal();

  Partition singles{{0, 1, 2, 3}, 4};
  CHECK(kmeans_cost_embedded(emb, singles) == 0.0);

  Partition pair01{{0, 0, 1, 2}, 3};
  double sq = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    double d = emb.at(0, c) - emb.at(1, c);
    sq += d * d;
  }
  CHECK(kmeans_cost_embedded(emb, pair01) == doctest::Approx(sq / 2.0).epsilon(1e-12));

  Partition part{{0, 1, 0, 1}, 2};
  double base = kmeans_cost_embedded(emb, part);
  Matrix doubled(8, 3);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t c = 0; c < 3; ++c) doubled.at(i, c) = emb.at(i % 4, c);
  }
  Partition dpart{{0, 1, 0, 1, 0, 1, 0, 1}, 2};
  CHECK(kmeans_cost_embedded(doubled, dpart) == doctest::Approx(2.0 * base).epsilon(1e-12));

  CHECK_THROWS_AS(kmeans_cost_embedded(emb, Partition{{0, 0}, 1}), std::invalid_argument);
}

TEST_CASE("Gram identity equals explicit-vector cost on embedded points") {
  ShiftInvariantKernel ker(KernelFamily::Gaussian, 0.4);
  const std::size_t n = 12;
  Matrix pts = generate_points(n, 3, 404);
  RffMap map = rff_new(ker, 3, 32, 11);
  Matrix emb(n, 64);
  for (std::size_t i = 0; i < n; ++i) {
    auto e = rff_embed(map, {pts.at(i, 0), pts.at(i, 1), pts.at(i, 2)});
    for (std::size_t c = 0; c < 64; ++c) emb.at(i, c) = e[c];
  }
  // Gram matrix of the embedded vectors themselves.
  Matrix inner(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < 64; ++c) dot += emb.at(i, c) * emb.at(j, c);
      inner.at(i, j) = dot;
    }
  }
  GramMatrix g = gram_from_entries(inner);
  Rng rng(500);
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t k = 1 + rng.next_u64() % 5;
    Partition p = random_partition(rng, n, k);
    double exact = kernel_kmeans_cost_exact(g, p);
    double direct = kmeans_cost_embedded(emb, p);
    CHECK(std::fabs(exact - direct) <= 1e-8);
  }
}

TEST_CASE("splitting a cluster never increases the cost") {
  ShiftInvariantKernel ker(KernelFamily::Gaussian, 0.3);
  const std::size_t n = 10;
  Matrix pts = generate_points(n, 3, 606);
  GramMatrix g = gram_build(ker, pts);
  Matrix emb(n, 3);
  emb.data = pts.data;

  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    Partition p = random_partition(rng, n, 3);
    Partition split = p;
    split.k = 4;
    for (auto& id : split.assignment) {
      if (id == 0 && (rng.next_u64() & 1)) id = 3;
    }
    CHECK(kernel_kmeans_cost_exact(g, split) <= kernel_kmeans_cost_exact(g, p) + 1e-9);
    CHECK(kmeans_cost_embedded(emb, split) <= kmeans_cost_embedded(emb, p) + 1e-9);
  }
}

TEST_CASE("lower-bound experiment: Laplacian spike vs Gaussian control") {
  BoundedSpec bounds(1.0, 0.01);
  ShiftInvariantKernel lap(KernelFamily::Laplacian, 1.0);
  LowerBoundSummary ls = lower_bound_experiment(lap, bounds, 1000, 2000, 321);
  CHECK(ls.predicted == doctest::Approx(0.3162).epsilon(0.01));
  CHECK(ls.empirical_std_rel_sq_err >= 0.5 * ls.predicted);
  CHECK(ls.empirical_std_rel_sq_err <= 2.0 * ls.predicted);

  ShiftInvariantKernel gau(KernelFamily::Gaussian, 0.5);
  LowerBoundSummary gs = lower_bound_experiment(gau, bounds, 1000, 2000, 321);
  CHECK(gs.predicted == doctest::Approx(std::sqrt(2.0 / 1000.0)).epsilon(1e-3));
  CHECK(gs.empirical_std_rel_sq_err >= 0.5 * gs.predicted);
  CHECK(gs.empirical_std_rel_sq_err <= 2.0 * gs.predicted);

  // The non-analytic kernel needs an order of magnitude more dimensions for
  // the same spread.
  CHECK(ls.predicted > 5.0 * gs.predicted);

  CHECK_THROWS_AS(lower_bound_experiment(lap, bounds, 8, 2000, 1), std::invalid_argument);
  CHECK_THROWS_AS(lower_bound_experiment(lap, bounds, 1000, 50, 1), std::invalid_argument);
}

TEST_CASE("lower-bound spread scales like one over sqrt D") {
  BoundedSpec bounds(1.0, 0.01);
  ShiftInvariantKernel lap(KernelFamily::Laplacian, 1.0);
  LowerBoundSummary lo = lower_bound_experiment(lap, bounds, 250, 2000, 111);
  LowerBoundSummary hi = lower_bound_experiment(lap, bounds, 1000, 2000, 222);
  double ratio = lo.empirical_std_rel_sq_err / hi.empirical_std_rel_sq_err;
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.7);
}

TEST_CASE("lower-bound spread grows as the resolution bound shrinks") {
  ShiftInvariantKernel lap(KernelFamily::Laplacian, 1.0);
  double prev = 0.0;
  for (double rho : {0.1, 0.03, 0.01}) {
    std::vector<double> reps(3);
    for (std::size_t r = 0; r < 3; ++r) {
      reps[r] = lower_bound_experiment(lap, BoundedSpec(1.0, rho), 1000, 2000, 900 + r)
                    .empirical_std_rel_sq_err;
    }
    double med = testutil::median(reps);
    CHECK(med >= prev);
    prev = med;
  }
}
