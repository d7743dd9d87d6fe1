#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypermp/error.hpp"
#include "hypermp/homophily.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace hypermp;

namespace {

LabelAssignment labels_of(std::vector<ClassId> l, std::size_t c) { return {std::move(l), c}; }

}  // namespace

TEST(EdgeHomophily0, Examples) {
  Hypergraph h(3, {{0, 1, 2}});
  auto s = edge_homophily_0<Rational>(h, labels_of({0, 0, 1}, 3));
  EXPECT_EQ(s.at(0, 0), Rational(2, 3));
  EXPECT_EQ(s.at(0, 1), Rational(1, 3));
  EXPECT_EQ(s.at(0, 2), Rational(0));

  auto single = edge_homophily_0<Rational>(Hypergraph(3, {{1}}), labels_of({0, 2, 0}, 3));
  EXPECT_EQ(single.at(0, 2), Rational(1));
  EXPECT_EQ(single.at(0, 0), Rational(0));
}

TEST(EdgeHomophily0, RowsSumToOne) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = testutil::random_instance(gen, 20, 15, 4);
    auto exact = edge_homophily_0<Rational>(inst.h, inst.labels);
    auto approx = edge_homophily_0<double>(inst.h, inst.labels);
    for (EdgeId e = 0; e < inst.h.num_edges(); ++e) {
      Rational sum = 0;
      double fsum = 0;
      for (ClassId c = 0; c < inst.labels.num_classes; ++c) {
        sum += exact.at(e, c);
        fsum += approx.at(e, c);
      }
      EXPECT_EQ(sum, Rational(1));
      EXPECT_NEAR(fsum, 1.0, 1e-12);
    }
  }
}

TEST(MpHomophily, SingleClassIsConstantOne) {
  Hypergraph h(5, {{0, 1}, {1, 2, 3}});
  auto trace = mp_homophily<Rational>(h, labels_of({0, 0, 0, 0, 0}, 1), 4);
  for (std::size_t t = 0; t <= 4; ++t)
    for (NodeId v = 0; v < 4; ++v) EXPECT_EQ(trace.node_scores[t][v], Rational(1));
  EXPECT_FALSE(trace.defined[4]);
}

TEST(MpHomophily, TwoNodeEdgeStaysHalf) {
  auto trace = mp_homophily<Rational>(Hypergraph(2, {{0, 1}}), labels_of({0, 1}, 2), 5);
  for (std::size_t t = 0; t <= 5; ++t) {
    EXPECT_EQ(trace.node_scores[t][0], Rational(1, 2));
    EXPECT_EQ(trace.node_scores[t][1], Rational(1, 2));
    EXPECT_EQ(trace.edge_scores[t].at(0, 0), Rational(1, 2));
    EXPECT_EQ(trace.edge_scores[t].at(0, 1), Rational(1, 2));
  }
}

TEST(MpHomophily, ThreeNodeHandIteration) {
  auto trace = mp_homophily<Rational>(Hypergraph(3, {{0, 1}, {1, 2}}), labels_of({0, 0, 1}, 2), 1);
  EXPECT_EQ(trace.edge_scores[0].at(0, 0), Rational(1));
  EXPECT_EQ(trace.edge_scores[0].at(1, 0), Rational(1, 2));
  EXPECT_EQ(trace.edge_scores[0].at(1, 1), Rational(1, 2));
  EXPECT_EQ(trace.node_scores[0][0], Rational(1));
  EXPECT_EQ(trace.node_scores[0][1], Rational(3, 4));
  EXPECT_EQ(trace.node_scores[0][2], Rational(1, 2));
  // h_e1^1(0) = (1 + 3/4)/2, h_e2^1(0) = 3/4, h_e2^1(1) = 1/2
  EXPECT_EQ(trace.node_scores[1][0], Rational(7, 8));
  EXPECT_EQ(trace.node_scores[1][1], Rational(13, 16));
  EXPECT_EQ(trace.node_scores[1][2], Rational(1, 2));
}

TEST(MpHomophily, MatchesRecursiveOracleExactly) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> levels(0, 5);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = testutil::random_instance(gen, 20, 15, 4);
    auto T = levels(gen);
    auto trace = mp_homophily<Rational>(inst.h, inst.labels, T);
    oracle::Homophily ref(inst.h.edges(), inst.labels.labels);
    for (NodeId v = 0; v < inst.h.num_nodes(); ++v) {
      ASSERT_EQ(trace.defined[v], ref.defined(v));
      if (!ref.defined(v)) continue;
      for (std::size_t t = 0; t <= T; ++t) ASSERT_EQ(trace.node_scores[t][v], ref.node(v, t));
    }
    for (std::size_t t = 0; t <= T; ++t)
      for (EdgeId e = 0; e < inst.h.num_edges(); ++e)
        for (ClassId c = 0; c < inst.labels.num_classes; ++c)
          ASSERT_EQ(trace.edge_scores[t].at(e, c), ref.edge(e, c, t));
  }
}

TEST(MpHomophily, FloatModeTracksRationalAndStaysInUnitInterval) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testutil::random_instance(gen, 20, 15, 4);
    auto exact = mp_homophily<Rational>(inst.h, inst.labels, 4);
    auto approx = mp_homophily<double>(inst.h, inst.labels, 4);
    for (std::size_t t = 0; t <= 4; ++t) {
      for (NodeId v = 0; v < inst.h.num_nodes(); ++v) {
        if (!approx.defined[v]) continue;
        double s = approx.node_scores[t][v];
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        EXPECT_NEAR(s, static_cast<double>(exact.node_scores[t][v]), 1e-12);
      }
      for (double s : approx.edge_scores[t].values) {
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
      }
    }
  }
}

TEST(MpHomophily, LabelPermutationEquivariance) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = testutil::random_instance(gen, 15, 10, 4);
    std::vector<ClassId> perm(inst.labels.num_classes);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), gen);
    LabelAssignment relabeled = inst.labels;
    for (auto& l : relabeled.labels) l = perm[l];

    auto a = mp_homophily<Rational>(inst.h, inst.labels, 3);
    auto b = mp_homophily<Rational>(inst.h, relabeled, 3);
    EXPECT_EQ(a.node_scores, b.node_scores);
    for (std::size_t t = 0; t <= 3; ++t)
      for (EdgeId e = 0; e < inst.h.num_edges(); ++e)
        for (ClassId c = 0; c < inst.labels.num_classes; ++c)
          EXPECT_EQ(a.edge_scores[t].at(e, c), b.edge_scores[t].at(e, perm[c]));

    EXPECT_DOUBLE_EQ(ce_homophily(inst.h, inst.labels), ce_homophily(inst.h, relabeled));
    auto fa = mp_homophily<double>(inst.h, inst.labels, 2);
    auto fb = mp_homophily<double>(inst.h, relabeled, 2);
    EXPECT_EQ(delta_homophily(fa, 2, 0.1).value, delta_homophily(fb, 2, 0.1).value);
  }
}

TEST(Delta, Examples) {
  auto same = mp_homophily<double>(Hypergraph(4, {{0, 1, 2}, {2, 3}}), labels_of({1, 1, 1, 1}, 2), 1);
  for (double mu : {1e-9, 0.1, 0.5}) EXPECT_DOUBLE_EQ(delta_homophily(same, 1, mu).value, 1.0);

  // |h^1 - h^0| = 1/8, 1/16, 0
  auto three = mp_homophily<double>(Hypergraph(3, {{0, 1}, {1, 2}}), labels_of({0, 0, 1}, 2), 1);
  EXPECT_DOUBLE_EQ(delta_homophily(three, 1, 0.1).value, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(delta_homophily(three, 1, 0.05).value, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(delta_homophily(three, 1, 0.2).value, 1.0);
}

TEST(Delta, IsolatedPolicies) {
  // node 3 isolated; the other three reproduce the example above
  auto trace = mp_homophily<double>(Hypergraph(4, {{0, 1}, {1, 2}}), labels_of({0, 0, 1, 0}, 2), 1);
  EXPECT_DOUBLE_EQ(delta_homophily(trace, 1, 0.1, IsolatedPolicy::kCountAsStable).value, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(delta_homophily(trace, 1, 0.1, IsolatedPolicy::kExclude).value, 2.0 / 3.0);
}

TEST(Delta, Errors) {
  auto trace = mp_homophily<double>(Hypergraph(2, {{0, 1}}), labels_of({0, 1}, 2), 2);
  EXPECT_THROW(delta_homophily(trace, 0, 0.1), InvalidArgument);
  EXPECT_THROW(delta_homophily(trace, 3, 0.1), InvalidArgument);
  EXPECT_THROW(delta_homophily(trace, 1, 0.0), InvalidArgument);
  EXPECT_NO_THROW(delta_homophily(trace, 2, 0.1));
}

TEST(Delta, MonotoneInMuAndOneAboveOne) {
  std::mt19937_64 gen(31);
  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(k / 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testutil::random_instance(gen, 20, 15, 4);
    auto trace = mp_homophily<double>(inst.h, inst.labels, 3);
    for (auto policy : {IsolatedPolicy::kCountAsStable, IsolatedPolicy::kExclude}) {
      for (std::size_t t = 1; t <= 3; ++t) {
        double prev = -1;
        for (double mu : grid) {
          double v = delta_homophily(trace, t, mu, policy).value;
          EXPECT_GE(v, prev);
          EXPECT_GE(v, 0.0);
          EXPECT_LE(v, 1.0);
          prev = v;
        }
        bool any_defined = std::find(trace.defined.begin(), trace.defined.end(), true) != trace.defined.end();
        if (policy == IsolatedPolicy::kCountAsStable || any_defined) {
          EXPECT_DOUBLE_EQ(delta_homophily(trace, t, 1.0001, policy).value, 1.0);
        }
      }
    }
  }
}

TEST(CeHomophily, Examples) {
  EXPECT_NEAR(ce_homophily(Hypergraph(3, {{0, 1, 2}}), labels_of({0, 0, 1}, 2)), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(ce_homophily(Hypergraph(4, {{0, 1}, {1, 2, 3}}), labels_of({2, 2, 2, 2}, 3)), 1.0);
  // isolated node and singleton-only node contribute 1
  EXPECT_DOUBLE_EQ(ce_homophily(Hypergraph(4, {{0, 1}, {2}}), labels_of({0, 1, 0, 0}, 2)), 0.5);
}

TEST(CeHomophily, MatchesBruteForce) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = testutil::random_instance(gen, 20, 15, 4);
    EXPECT_NEAR(ce_homophily(inst.h, inst.labels), oracle::ce_homophily(inst.h.edges(), inst.labels.labels), 1e-12);
  }
}

TEST(KUniform, BaselineArithmetic) {
  EXPECT_NEAR(kuniform_baseline(4, 2, 2, 2), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(kuniform_baseline(4, 2, 2, 1), 2.0 / 3.0, 1e-14);
  // impossible type: more class members than the class has
  EXPECT_EQ(kuniform_baseline(10, 2, 4, 4), 0.0);
}

TEST(KUniform, BaselineSumsToOne) {
  for (std::size_t n = 2; n <= 40; n += 3)
    for (std::size_t nc = 1; nc <= n; nc += 2)
      for (std::size_t k = 1; k <= std::min<std::size_t>(n, 6); ++k) {
        double sum = 0;
        for (std::size_t t = 1; t <= k; ++t) sum += kuniform_baseline(n, nc, k, t);
        EXPECT_NEAR(sum, 1.0, 1e-12) << n << " " << nc << " " << k;
      }
}

TEST(KUniform, SingleClassEdges) {
  Hypergraph h(6, {{0, 1, 2}, {3, 4, 5}, {0, 1}});
  auto r = kuniform_scores(h, labels_of({0, 0, 0, 1, 1, 1}, 2), 3);
  EXPECT_EQ(r.num_size_k_edges, 2u);
  for (const auto& c : r.classes) {
    ASSERT_TRUE(c.participates);
    EXPECT_DOUBLE_EQ(c.affinity[2], 1.0);
    EXPECT_DOUBLE_EQ(c.affinity[0], 0.0);
    EXPECT_DOUBLE_EQ(c.affinity[1], 0.0);
  }
}

TEST(KUniform, HandComputedMixedInstance) {
  // size-2 edges only; class 0 = {0,1}, class 1 = {2,3}
  Hypergraph h(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 1, 2}});
  auto r = kuniform_scores(h, labels_of({0, 0, 1, 1}, 2), 2);
  ASSERT_EQ(r.classes.size(), 2u);
  // class 0: node0 in {0,1}(t=2),{0,2}(t=1); node1 in {0,1}(t=2),{1,3}(t=1)
  EXPECT_DOUBLE_EQ(r.classes[0].affinity[0], 0.5);
  EXPECT_DOUBLE_EQ(r.classes[0].affinity[1], 0.5);
  EXPECT_NEAR(r.classes[0].baseline[1], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(r.classes[0].ratio[1], 1.5, 1e-12);
  // f = (eta - b)/(1 - b) = (1/2 - 1/3)/(2/3) = 1/4; t=1: (1/2 - 2/3)/(2/3) = -1/4
  EXPECT_NEAR(r.classes[0].normalized_bias[1], 0.25, 1e-12);
  EXPECT_NEAR(r.classes[0].normalized_bias[0], -0.25, 1e-12);
}

TEST(KUniform, AffinitySumsAndMasking) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = testutil::random_instance(gen, 20, 15, 4);
    for (std::size_t k = 1; k <= 4; ++k) {
      auto r = kuniform_scores(inst.h, inst.labels, k);
      if (r.num_size_k_edges == 0) {
        EXPECT_TRUE(r.classes.empty());
        continue;
      }
      for (const auto& c : r.classes) {
        if (!c.participates) {
          for (double a : c.affinity) EXPECT_TRUE(std::isnan(a));
          continue;
        }
        double sum = 0;
        for (double a : c.affinity) sum += a;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        for (double f : c.normalized_bias)
          if (!std::isnan(f)) {
            EXPECT_GE(f, -1.0);
            EXPECT_LE(f, 1.0);
          }
      }
    }
  }
}

TEST(KUniform, ZeroBiasWhenAffinityEqualsBaseline) {
  // complete 2-uniform hypergraph: every pair once, so eta = b exactly
  std::vector<std::vector<NodeId>> edges;
  for (NodeId a = 0; a < 6; ++a)
    for (NodeId b = a + 1; b < 6; ++b) edges.push_back({a, b});
  auto r = kuniform_scores(Hypergraph(6, edges), labels_of({0, 0, 1, 1, 1, 2}, 3), 2);
  for (const auto& c : r.classes)
    for (std::size_t t = 0; t < 2; ++t) {
      EXPECT_NEAR(c.affinity[t], c.baseline[t], 1e-12);
      if (!std::isnan(c.normalized_bias[t])) EXPECT_NEAR(c.normalized_bias[t], 0.0, 1e-12);
    }
}

TEST(NormalizedAccuracy, Arithmetic) {
  EXPECT_DOUBLE_EQ(normalized_accuracy(70.0, 70.0), 0.0);
  EXPECT_DOUBLE_EQ(normalized_accuracy(100.0, 42.0), 1.0);
  EXPECT_NEAR(normalized_accuracy(88.57, 86.13), 2.44 / 13.87, 1e-12);
  EXPECT_NEAR(normalized_accuracy(88.57, 86.13), 0.1759, 1e-4);
  EXPECT_THROW(normalized_accuracy(100.0, 100.0), InvalidArgument);
  EXPECT_THROW(normalized_accuracy(101.0, 50.0), InvalidArgument);
  EXPECT_THROW(normalized_accuracy(50.0, -1.0), InvalidArgument);
}

TEST(Summaries, MeanAndPerClass) {
  std::vector<double> s{1.0, 0.5, 0.0, 0.25};
  std::vector<bool> defined{true, true, false, true};
  EXPECT_DOUBLE_EQ(mean_defined(s, defined), 1.75 / 3.0);
  EXPECT_DOUBLE_EQ(mean_defined(s, defined, true), 1.75 / 4.0);
  auto pc = per_class_mean(s, defined, labels_of({0, 1, 1, 0}, 3));
  EXPECT_DOUBLE_EQ(pc[0], 0.625);
  EXPECT_DOUBLE_EQ(pc[1], 0.5);
  EXPECT_TRUE(std::isnan(pc[2]));
}
