#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace graphent;

namespace {

struct Fib {
  GraphWindow w = whole_graph_window(testing_support::fibonacci());
  VertexId a = w.vertex("a");
  VertexId b = w.vertex("b");
  EdgeId e1 = w.graph.edge_id("e1");
  EdgeId e2 = w.graph.edge_id("e2");
  EdgeId e3 = w.graph.edge_id("e3");
  Path p(std::vector<EdgeId> edges) const { return edge_path(w.graph, std::move(edges)); }
};

PathPair random_pair(const std::vector<PathPair>& pool, std::mt19937_64& rng) {
  return pool[rng() % pool.size()];
}

// Matrix unit e_{ij} independently: rows are explicit path lists.
SparseMatrix unit(std::size_t dim, std::size_t i, std::size_t j) {
  SparseMatrix m;
  m.dim = dim;
  m.add(i, j, 1);
  return m;
}

}  // namespace

TEST(PathPairs, MultiplyExamples) {
  const Fib f;
  const auto& g = f.w.graph;
  const PathPair pa = projection(f.a);
  const PathPair e1e1{f.p({f.e1}), f.p({f.e1})};
  const PathPair e2e2{f.p({f.e2}), f.p({f.e2})};
  const PathPair e3e3{f.p({f.e3}), f.p({f.e3})};
  // p_a s_e s_e^* = s_e s_e^* when s(e) = a
  EXPECT_EQ(multiply(g, pa, e1e1), e1e1);
  EXPECT_EQ(multiply(g, pa, e2e2), e2e2);
  // p_a s_e3 s_e3^* = 0 since s(e3) = b
  EXPECT_FALSE(multiply(g, pa, e3e3));
  // (s_e1 s_e3^*)(s_e3 s_e3^*) = s_e1 s_e3^*
  const PathPair x = make_pair_checked(g, f.p({f.e1}), f.p({f.e3}));
  EXPECT_EQ(multiply(g, x, e3e3), x);
  // Longer second factor: (s_e1 s_e3^*)(s_{e3 e1} s_{e3 e1}^*) = s_{e1 e1} s_{e3 e1}^*
  const PathPair y{f.p({f.e3, f.e1}), f.p({f.e3, f.e1})};
  EXPECT_EQ(*multiply(g, x, y), (PathPair{f.p({f.e1, f.e1}), f.p({f.e3, f.e1})}));
  // Longer first factor: (s_{e2 e3} s_{e2 e3}^*)(s_e2 s_e2^*) = s_{e2 e3} s_{e2 e3}^*
  const PathPair z{f.p({f.e2, f.e3}), f.p({f.e2, f.e3})};
  EXPECT_EQ(*multiply(g, z, e2e2), z);
}

TEST(PathPairs, Adjoint) {
  const Fib f;
  EXPECT_EQ(adjoint(projection(f.a)), projection(f.a));
  const PathPair x{f.p({f.e1}), f.p({f.e3})};
  EXPECT_EQ(adjoint(x), (PathPair{f.p({f.e3}), f.p({f.e1})}));
}

TEST(PathPairs, ConstructionErrors) {
  const Fib f;
  EXPECT_THROW(make_pair_checked(f.w.graph, f.p({f.e1}), f.p({f.e2})), Error);
  EXPECT_THROW(make_pair_checked(f.w.graph, f.p({f.e1}), vertex_path(f.a)), Error);
  EXPECT_THROW(edge_path(f.w.graph, {f.e2, f.e2}), Error);
}

TEST(PathPairs, AssociativityOnOmega) {
  const Fib f;
  const auto& g = f.w.graph;
  for (VertexId v : {f.a, f.b}) {
    const auto gens = omega(f.w, v, 2);
    for (const auto& x : gens)
      for (const auto& y : gens)
        for (const auto& z : gens) {
          std::optional<PathPair> left, right;
          if (auto xy = multiply(g, x, y)) left = multiply(g, *xy, z);
          if (auto yz = multiply(g, y, z)) right = multiply(g, x, *yz);
          ASSERT_EQ(left, right);
        }
  }
  // Across different ranges too: products of generators from omega(2, a) and omega(2, b).
  auto mixed = omega(f.w, f.a, 2);
  const auto more = omega(f.w, f.b, 2);
  mixed.insert(mixed.end(), more.begin(), more.end());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto x = random_pair(mixed, rng), y = random_pair(mixed, rng),
               z = random_pair(mixed, rng);
    std::optional<PathPair> left, right;
    if (auto xy = multiply(g, x, y)) left = multiply(g, *xy, z);
    if (auto yz = multiply(g, y, z)) right = multiply(g, x, *yz);
    ASSERT_EQ(left, right);
  }
}

TEST(PathPairs, AdjointIsAntiMultiplicativeInvolution) {
  const auto w = materialize(salama_2_8().oracle, {"0"}, 6);
  const auto pool = omega(w, w.vertex("0"), 3);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_pair(pool, rng);
    const auto y = random_pair(pool, rng);
    EXPECT_EQ(adjoint(adjoint(x)), x);
    const auto xy = multiply(w.graph, x, y);
    const auto yx = multiply(w.graph, adjoint(y), adjoint(x));
    ASSERT_EQ(xy.has_value(), yx.has_value());
    if (xy) {
      EXPECT_EQ(adjoint(*xy), *yx);
    }
  }
}

TEST(Elements, LinearCombinations) {
  const Fib f;
  AlgebraElement x(projection(f.a), ComplexRational(Rational(1, 2), Rational(3)));
  x.add(projection(f.a), ComplexRational(Rational(-1, 2), Rational(-3)));
  EXPECT_TRUE(x.is_zero());
  const AlgebraElement y(PathPair{f.p({f.e1}), f.p({f.e3})}, ComplexRational(0, 1));
  const auto ys = adjoint(y);
  ASSERT_EQ(ys.size(), 1u);
  EXPECT_EQ(ys.terms().begin()->second, ComplexRational(0, -1));
  // JSON round trip
  const auto j = to_json(f.w.graph, y);
  EXPECT_EQ(algebra_element_from_json(f.w.graph, nlohmann::json::parse(j.dump())), y);
}

TEST(Omega, Examples) {
  const Fib f;
  const auto gens = omega(f.w, f.a, 1);
  EXPECT_EQ(gens.size(), 5u);
  const auto e28 = materialize(salama_2_8().oracle, {"0"}, 2);
  EXPECT_EQ(omega(e28, e28.vertex("0"), 1).size(), 5u);
  const auto src = whole_graph_window(build_finite({"s", "t"}, {{"e", "s", "t"}}));
  EXPECT_EQ(omega(src, src.vertex("s"), 3).size(), 1u);
  EXPECT_THROW(omega(e28, e28.vertex("0"), 3), Error);
}

TEST(Phi, Examples) {
  const Fib f;
  const MatrixUnitRepresentation rep(f.w, f.a, 1);
  // basis: (a), e1, e3
  ASSERT_EQ(rep.dim(), 3u);
  const auto labels = rep.labels();
  EXPECT_EQ(labels, (std::vector<std::string>{"(a)", "e1", "e3"}));
  SparseMatrix expected = unit(3, 0, 0);
  expected.add(1, 1, 1);
  EXPECT_EQ(rep.phi(projection(f.a)), expected);
  EXPECT_EQ(rep.phi(PathPair{f.p({f.e1}), f.p({f.e3})}), unit(3, 1, 2));
  EXPECT_TRUE(rep.phi(AlgebraElement{}).is_zero());
  EXPECT_THROW(
      {
        try {
          rep.phi(PathPair{f.p({f.e2, f.e3}), f.p({f.e2, f.e3})});
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::NotInOmega);
          throw;
        }
      },
      Error);
}

TEST(Phi, Homomorphism) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const Fib f;
    EXPECT_TRUE(verify_homomorphism(f.w, f.a, n).passed) << n;
    const auto cyc = whole_graph_window(testing_support::two_cycle());
    EXPECT_TRUE(verify_homomorphism(cyc, cyc.vertex("a"), n).passed) << n;
    const auto e28 = materialize(salama_2_8().oracle, {"0"}, 2 * n);
    const auto r = verify_homomorphism(e28, e28.vertex("0"), n);
    EXPECT_TRUE(r.passed) << n;
    EXPECT_EQ(r.violations, 0u);
  }
}

TEST(Phi, HomomorphismOnLinearCombinations) {
  const Fib f;
  const MatrixUnitRepresentation rep(f.w, f.a, 2);
  const auto gens = omega(f.w, f.a, 2);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    AlgebraElement x, y;
    for (int k = 0; k < 4; ++k) {
      x.add(random_pair(gens, rng),
            ComplexRational(Rational(static_cast<long>(rng() % 7) - 3, 2),
                            Rational(static_cast<long>(rng() % 5) - 2)));
      y.add(random_pair(gens, rng), ComplexRational(static_cast<long>(rng() % 9) - 4));
    }
    EXPECT_EQ(rep.phi(multiply(f.w.graph, x, y)), rep.phi(x) * rep.phi(y));
    EXPECT_EQ(rep.phi(adjoint(x)), conjugate_transpose(rep.phi(x)));
  }
}

TEST(Phi, Independence) {
  const Fib f;
  const auto r = verify_independence(f.w, f.a, 2);
  EXPECT_TRUE(r.applicable);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.rank, 14u);  // 1 + 2^2 + 3^2
  const auto cyc = whole_graph_window(testing_support::two_cycle());
  const auto c = verify_independence(cyc, cyc.vertex("a"), 1);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.rank, 2u);
  const auto loops = whole_graph_window(build_finite({"x"}, {{"e", "x", "x"}, {"f", "x", "x"}}));
  const auto single = verify_independence(loops, 0, 2);
  EXPECT_FALSE(single.applicable);
  const auto e28 = materialize(salama_2_8().oracle, {"0"}, 6);
  const auto wr = verify_independence(e28, e28.vertex("0"), 3, {true, true});
  EXPECT_TRUE(wr.passed);
  EXPECT_EQ(wr.rank, omega(e28, e28.vertex("0"), 3).size());
}

TEST(ExactRank, DetectsDependence) {
  using Row = std::map<int, ComplexRational>;
  std::vector<Row> rows{{{0, 1}, {1, 2}}, {{0, 2}, {1, 4}}, {{2, ComplexRational(0, 1)}}};
  EXPECT_EQ(exact_rank(rows), 2u);
  rows.push_back({{0, 1}, {1, 3}});
  EXPECT_EQ(exact_rank(rows), 3u);
}

TEST(Dimensions, Examples) {
  const Fib f;
  const auto d = dimension_report(f.w, f.a, 1);
  EXPECT_EQ(d.omega_cardinality, 5);
  EXPECT_EQ(d.r_n, 3);
  EXPECT_EQ(d.r_n_squared, 9);
  EXPECT_FALSE(d.coincide);
  const auto cyc = whole_graph_window(testing_support::two_cycle());
  const auto c = dimension_report(cyc, cyc.vertex("a"), 1);
  EXPECT_EQ(c.omega_cardinality, 2);
  EXPECT_EQ(c.r_n_squared, 4);
  EXPECT_FALSE(c.coincide);
  const auto src = whole_graph_window(build_finite({"s", "t"}, {{"e", "s", "t"}}));
  const auto s = dimension_report(src, src.vertex("s"), 1);
  EXPECT_EQ(s.omega_cardinality, 1);
  EXPECT_EQ(s.r_n, 1);
  EXPECT_TRUE(s.coincide);
}

TEST(Shift, Examples) {
  const Fib f;
  AlgebraElement expected;
  expected.add(PathPair{f.p({f.e1}), f.p({f.e1})}, 1);
  expected.add(PathPair{f.p({f.e3}), f.p({f.e3})}, 1);
  EXPECT_EQ(phi_E(AlgebraElement(projection(f.a)), f.w), expected);
  const auto src = whole_graph_window(build_finite({"s", "t"}, {{"e", "s", "t"}}));
  const PathPair ee{edge_path(src.graph, {0}), edge_path(src.graph, {0})};
  EXPECT_TRUE(phi_E(AlgebraElement(ee), src).is_zero());
  // Different sources: zero.
  const PathPair mixed{f.p({f.e1}), f.p({f.e3})};
  EXPECT_TRUE(phi_E_power(mixed, 1, f.w).is_zero());
  const auto e28 = materialize(salama_2_8().oracle, {"0"}, 3);
  EXPECT_THROW(phi_E_power(projection(e28.vertex("0")), 4, e28), Error);
}

TEST(Shift, SemigroupProperty) {
  const auto e28 = materialize(salama_2_8().oracle, {"0"}, 9);
  const VertexId zero = e28.vertex("0");
  for (const auto& x : omega(e28, zero, 2)) {
    for (std::size_t l = 0; l <= 3; ++l) {
      for (std::size_t m = 0; m + l <= 4; ++m) {
        const auto lhs = phi_E_power(phi_E_power(AlgebraElement(x), l, e28), m, e28);
        EXPECT_EQ(lhs, phi_E_power(AlgebraElement(x), l + m, e28));
      }
    }
  }
}

TEST(Shift, MapsOmegaIntoLongerOmega) {
  // Phi^l(omega(n0, v)) lies in the span of pairs of length n0 + l ending at v.
  const Fib f;
  for (std::size_t n0 = 0; n0 <= 2; ++n0) {
    for (std::size_t l = 0; l <= 3; ++l) {
      const auto big = omega(f.w, f.a, n0 + l);
      for (const auto& x : omega(f.w, f.a, n0)) {
        const auto image = phi_E_power(AlgebraElement(x), l, f.w);
        for (const auto& [pair, c] : image.terms()) {
          EXPECT_EQ(pair.alpha.length(), x.alpha.length() + l);
          EXPECT_NE(std::find(big.begin(), big.end(), pair), big.end());
        }
      }
    }
  }
}

TEST(Shift, MultiplicativeOnSourceDiagonalGenerators) {
  // Phi(x) Phi(y) = Phi(xy) when each factor has s(alpha) = s(beta).
  const Fib f;
  std::vector<PathPair> gens;
  for (const auto& x : omega(f.w, f.a, 2)) {
    if (x.alpha.source() == x.beta.source()) gens.push_back(x);
  }
  ASSERT_FALSE(gens.empty());
  for (const auto& x : gens) {
    for (const auto& y : gens) {
      const auto xy = multiply(f.w.graph, x, y);
      const AlgebraElement lhs = xy ? phi_E(AlgebraElement(*xy), f.w) : AlgebraElement{};
      EXPECT_EQ(lhs, multiply(f.w.graph, phi_E(AlgebraElement(x), f.w),
                              phi_E(AlgebraElement(y), f.w)));
    }
  }
}

TEST(Shift, NotMultiplicativeInGeneral) {
  // x = s_{e3} s_{e1}* has different sources so Phi(x) = 0, yet x x* = s_{e3} s_{e3}*.
  const Fib f;
  const PathPair x{f.p({f.e3}), f.p({f.e1})};
  const auto xx = multiply(f.w.graph, x, adjoint(x));
  ASSERT_TRUE(xx.has_value());
  EXPECT_TRUE(phi_E(AlgebraElement(x), f.w).is_zero());
  EXPECT_FALSE(phi_E(AlgebraElement(*xx), f.w).is_zero());
}

TEST(RankBounds, Examples) {
  const auto ray2 = materialize(ray(true).oracle, {"0"}, 20);
  const auto rb = rank_bound_sequences(ray2, {ray2.vertex("0")}, 20);
  for (std::size_t n = 0; n <= 20; ++n) EXPECT_EQ(rb.r_n.counts[n], n + 1);
  const Fib f;
  const auto fb = rank_bound_sequences(f.w, {f.a}, 10);
  for (std::size_t n = 0; n <= 10; ++n) {
    EXPECT_EQ(fb.k_n.counts[n], count_class(f.w, f.a, PathClass::Through, 10)[n]);
  }
}

TEST(Serialization, CsvCoordinates) {
  const Fib f;
  const MatrixUnitRepresentation rep(f.w, f.a, 1);
  std::ostringstream out;
  write_csv(out, rep.phi(PathPair{f.p({f.e1}), f.p({f.e3})}), rep.labels());
  EXPECT_EQ(out.str(), "# paths: (a) e1 e3\nrow,col,re,im\ne1,e3,1,0\n");
}
