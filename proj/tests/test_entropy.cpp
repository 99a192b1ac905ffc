#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace graphent;
using testing_support::log_golden;

namespace {

std::vector<BigInt> geometric(double c, long base, std::size_t n_max) {
  std::vector<BigInt> out;
  BigInt power = 1;
  for (std::size_t n = 0; n <= n_max; ++n) {
    mpz_class scaled(c * 1e6);
    out.push_back(scaled * power);
    power *= base;
  }
  return out;
}

// Largest real eigenvalue of a small integer matrix by bisection on
// det(xI - A), with the determinant from Gaussian elimination.
double largest_root(const std::vector<std::vector<long>>& a) {
  const std::size_t d = a.size();
  auto charpoly = [&](double x) {
    std::vector<std::vector<double>> m(d, std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m[i][j] = (i == j ? x : 0.0) - a[i][j];
    double det = 1;
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < d; ++r)
        if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
      if (m[piv][c] == 0) return 0.0;
      if (piv != c) {
        std::swap(m[piv], m[c]);
        det = -det;
      }
      det *= m[c][c];
      for (std::size_t r = c + 1; r < d; ++r) {
        const double f = m[r][c] / m[c][c];
        for (std::size_t k = c; k < d; ++k) m[r][k] -= f * m[c][k];
      }
    }
    return det;
  };
  // Row sums bound the spectral radius; charpoly > 0 above the largest root.
  double hi = 1;
  for (const auto& row : a) {
    double sum = 0;
    for (long x : row) sum += static_cast<double>(x);
    hi = std::max(hi, sum + 1);
  }
  const double step = 1e-3;
  while (hi > step && charpoly(hi - step) > 0) hi -= step;
  double lo = hi - step, up = hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + up) / 2;
    (charpoly(mid) > 0 ? up : lo) = mid;
  }
  return (lo + up) / 2;
}

std::vector<std::vector<long>> adjacency(const FiniteGraph& g) {
  std::vector<std::vector<long>> a(g.vertex_count(), std::vector<long>(g.vertex_count(), 0));
  for (const auto& e : g.edges()) a[e.src][e.dst] += 1;
  return a;
}

}  // namespace

TEST(GrowthRate, PureExponentialIsExact) {
  std::vector<BigInt> counts;
  BigInt p = 1;
  for (int n = 0; n <= 40; ++n) {
    counts.push_back(p);
    p *= 3;
  }
  for (std::size_t stride : {1u, 2u, 3u, 5u}) {
    EXPECT_NEAR(growth_rate(counts, {stride}).value, std::log(3.0), 1e-12);
  }
}

TEST(GrowthRate, RecoversScaledExponentials) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const long base = 2 + static_cast<long>(rng() % 9);
    const double c = 0.5 + static_cast<double>(rng() % 1000) / 10.0;
    const auto counts = geometric(c, base, 30 + rng() % 60);
    EXPECT_NEAR(growth_rate(counts).value, std::log(static_cast<double>(base)), 1e-6);
  }
}

TEST(GrowthRate, ScalingInvariance) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testing_support::random_corpus_graph(1 + trial);
    const auto w = whole_graph_window(g);
    auto counts = count_class(w, 0, PathClass::Source, 40).counts;
    const long c = 2 + static_cast<long>(rng() % 50);
    auto scaled = counts;
    for (auto& x : scaled) x *= c;
    for (auto estimator : {Estimator::Slope, Estimator::Max}) {
      GrowthOptions opts;
      opts.estimator = estimator;
      const auto a = growth_rate(counts, opts);
      const auto b = growth_rate(scaled, opts);
      EXPECT_LE(std::abs(a.value - b.value),
                std::log(static_cast<double>(c)) / static_cast<double>(a.n_lo) + 1e-12);
    }
  }
}

TEST(GrowthRate, StrideAndAnchoring) {
  // Nonzero only at n = 1 mod 4: the stride-4 tail must be read there.
  std::vector<BigInt> counts(41, 0);
  BigInt p = 1;
  for (std::size_t n = 1; n <= 40; n += 4) {
    counts[n] = p;
    p *= 16;
  }
  const auto est = growth_rate(counts, {4});
  EXPECT_NEAR(est.value, std::log(2.0), 1e-12);
  EXPECT_EQ(support_period(counts), 4u);
}

TEST(GrowthRate, Errors) {
  std::vector<BigInt> zeros(20, 0);
  zeros[0] = 1;
  EXPECT_THROW(
      {
        try {
          growth_rate(zeros);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::AllZeroTail);
          throw;
        }
      },
      Error);
  EXPECT_THROW(growth_rate(std::vector<BigInt>{1, 2}), Error);
}

TEST(GrowthRate, FibonacciSource) {
  const auto w = whole_graph_window(testing_support::fibonacci());
  EXPECT_NEAR(block_entropy(w, w.vertex("a"), 40).value, log_golden(), 1e-2);
}

TEST(NamedEstimates, E28) {
  const auto family = salama_2_8();
  const auto w = materialize(family.oracle, {"0"}, 120);
  const VertexId v = w.vertex("0");
  EXPECT_NEAR(block_entropy(w, v, 60).value, std::log(8.0), 0.02);
  EXPECT_NEAR(loop_entropy(w, v, 120).value, std::log(2.0), 0.05);
  EXPECT_NEAR(coblock_entropy(w, v, 120).value, std::log(2.0), 0.05);
  EXPECT_NEAR(
      radius_inverse(count_class(w, v, PathClass::SourceStar, 60)).value, std::log(8.0), 0.02);
  const auto r = radius_inverse(count_class(w, v, PathClass::RangeStar, 100), {4});
  EXPECT_NEAR(r.value, 0.75 * std::log(2.0), 0.02);
  EXPECT_EQ(r.quantity, "log_inv_R_r_star");
}

TEST(NamedEstimates, TwoCycleRadiusIsZero) {
  const auto w = whole_graph_window(testing_support::two_cycle());
  const auto r = radius_inverse(count_class(w, "a", PathClass::SourceStar, 10));
  EXPECT_EQ(r.value, 0.0);
}

TEST(FiniteEntropy, Examples) {
  const auto three_loops =
      build_finite({"x"}, {{"a", "x", "x"}, {"b", "x", "x"}, {"c", "x", "x"}});
  EXPECT_NEAR(finite_entropy(three_loops).value, std::log(3.0), 1e-9);
  EXPECT_NEAR(finite_entropy(testing_support::two_cycle()).value, 0.0, 1e-9);
  // Edge matrix characteristic polynomial lambda (lambda^2 - lambda - 1).
  EXPECT_NEAR(finite_entropy(testing_support::fibonacci()).value, log_golden(), 1e-9);
  const auto acyclic = build_finite({"a", "b"}, {{"e", "a", "b"}});
  const auto none = finite_entropy(acyclic);
  EXPECT_EQ(none.value, 0.0);
}

TEST(FiniteEntropy, MatchesCharacteristicPolynomialRoot) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = testing_support::random_corpus_graph(seed);
    EXPECT_NEAR(finite_entropy(g).value, std::log(largest_root(adjacency(g))), 1e-6) << seed;
  }
}

TEST(Checks, BlockVsRadius) {
  const auto family = salama_2_8();
  const auto w = materialize(family.oracle, {"0"}, 100);
  EXPECT_TRUE(block_vs_radius_check(w, w.vertex("0"), 100, 0.05).passed);
  const auto fib = whole_graph_window(testing_support::fibonacci());
  EXPECT_TRUE(block_vs_radius_check(fib, fib.vertex("a"), 40, 0.02).passed);
  const auto cyc = whole_graph_window(testing_support::two_cycle());
  const auto r = block_vs_radius_check(cyc, cyc.vertex("a"), 20, 0.01);
  EXPECT_TRUE(r.passed);
  for (const auto& e : r.estimates) EXPECT_NEAR(e.value, 0.0, 1e-12);
}

TEST(Checks, FiniteCoincidence) {
  EXPECT_TRUE(finite_coincidence_check(testing_support::fibonacci(), 0, 40, 0.05).passed);
  EXPECT_TRUE(finite_coincidence_check(testing_support::two_cycle(), 0, 40, 1e-9).passed);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    EXPECT_TRUE(finite_coincidence_check(testing_support::random_corpus_graph(seed), 0, 40, 0.1).passed);
  }
  EXPECT_THROW(
      {
        try {
          finite_coincidence_check(build_finite({"a", "b"}, {{"e", "a", "b"}}), 0, 40, 0.1);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::NotIrreducible);
          throw;
        }
      },
      Error);
}

TEST(Checks, ThroughVsBlocks) {
  const auto family = salama_2_8();
  const auto w = materialize(family.oracle, {"0"}, 60);
  const auto r = through_vs_blocks_check(w, w.vertex("0"), 60, 0.05);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.estimates[0].value, std::log(8.0), 0.05);
  const auto fib = whole_graph_window(testing_support::fibonacci());
  EXPECT_NEAR(through_growth(fib, 0, 40).value, log_golden(), 0.02);
  const auto cyc = whole_graph_window(testing_support::two_cycle());
  EXPECT_NEAR(through_growth(cyc, 0, 20).value, 0.0, 1e-12);
}

TEST(Subgraphs, Supremum) {
  const auto sup = subgraph_supremum(salama_2_8().oracle, "0", {5, 9, 13, 17});
  for (std::size_t i = 1; i < sup.size(); ++i) EXPECT_GE(sup[i], sup[i - 1] - 1e-12);
  EXPECT_NEAR(sup.back(), std::log(2.0), 0.1);
  const auto fib = subgraph_supremum(oracle_from_graph(testing_support::fibonacci(), "a"),
                                     "a", {2});
  EXPECT_NEAR(fib[0], log_golden(), 1e-9);
  EXPECT_EQ(subgraph_supremum(ray(false).oracle, "0", {3, 6}), (std::vector<double>{0, 0}));
  EXPECT_THROW(subgraph_supremum(ray(false).oracle, "0", {6, 3}), Error);
}

TEST(Sandwich, Examples) {
  const auto pp = sandwich(salama_pp(2).oracle, "0", 120, 0.05);
  EXPECT_TRUE(pp.exact);
  EXPECT_NEAR(pp.lower, std::log(2.0), 0.05);
  const auto e28 = sandwich(salama_2_8().oracle, "0", 120, 0.05);
  EXPECT_FALSE(e28.exact);
  EXPECT_NEAR(e28.lower, std::log(2.0), 0.05);
  EXPECT_NEAR(e28.upper, std::log(8.0), 0.05);
  const auto fib =
      sandwich(oracle_from_graph(testing_support::fibonacci(), "a"), "a", 40, 0.05);
  EXPECT_TRUE(fib.exact);
  EXPECT_NEAR(fib.lower, log_golden(), 0.05);
}

TEST(Sandwich, LowerNeverExceedsUpper) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = testing_support::random_corpus_graph(seed);
    const auto w = whole_graph_window(g);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const auto s = sandwich(w, v, 40, 0.1);
      EXPECT_LE(s.lower, s.upper + 0.1);
    }
  }
  for (long p = 2; p <= 4; ++p) {
    const auto s = sandwich(salama_pp(p).oracle, "0", 80, 0.1);
    EXPECT_LE(s.lower, s.upper + 0.1);
  }
}

TEST(Serialization, EstimateJson) {
  const auto w = whole_graph_window(testing_support::fibonacci());
  const auto est = block_entropy(w, 0, 20);
  const auto j = to_json(est);
  EXPECT_EQ(j["quantity"], "h_b");
  EXPECT_TRUE(j.contains("value_bits"));
  EXPECT_EQ(j["raw"].size(), est.raw.size());
  std::ostringstream out;
  write_raw_csv(out, est);
  EXPECT_EQ(out.str().rfind("n,rate\n", 0), 0u);
  // Identical inputs, identical bytes.
  EXPECT_EQ(to_json(block_entropy(w, 0, 20)).dump(), j.dump());
}
