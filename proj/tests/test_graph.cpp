#include "causal/graph.hpp"
#include "causal/parser.hpp"
#include "causal/scm_io.hpp"
#include "causal/semantics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace causal;

namespace {

std::string fixture(const char* name) { return std::string(CAUSAL_FIXTURES) + "/" + name; }

Dag chain() { return parse_graph("A -> B\nB -> C\n"); }
Dag collider() { return parse_graph("A -> B\nC -> B\n"); }

// Enumerates simple undirected paths and tests each for activity.
bool separated_by_paths(const Dag& g, std::size_t x, std::size_t y, const NodeSet& z) {
  std::vector<std::size_t> path{x};
  std::vector<bool> on(g.size(), false);
  on[x] = true;
  auto active = [&] {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      std::size_t a = path[i - 1], n = path[i], b = path[i + 1];
      bool coll = g.has_edge(a, n) && g.has_edge(b, n);
      if (coll) {
        auto desc = g.descendants({n});
        bool hit = false;
        for (auto d : desc) hit |= z.count(d) > 0;
        if (!hit) return false;
      } else if (z.count(n)) {
        return false;
      }
    }
    return true;
  };
  auto walk = [&](auto&& self, std::size_t n) -> bool {
    if (n == y) return active();
    std::set<std::size_t> nb(g.parents(n).begin(), g.parents(n).end());
    nb.insert(g.children(n).begin(), g.children(n).end());
    for (auto m : nb) {
      if (on[m]) continue;
      on[m] = true;
      path.push_back(m);
      bool found = self(self, m);
      path.pop_back();
      on[m] = false;
      if (found) return true;
    }
    return false;
  };
  return !walk(walk, x);
}

Dag random_dag(std::mt19937& rng, std::size_t n, double p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
  Dag g(names);
  std::bernoulli_distribution coin(p);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (coin(rng)) g.add_edge(a, b);
  return g;
}

}  // namespace

TEST(DSeparation, ChainAndCollider) {
  EXPECT_FALSE(d_separated(chain(), {"A"}, {"C"}, {}));
  EXPECT_TRUE(d_separated(chain(), {"A"}, {"C"}, {"B"}));
  EXPECT_TRUE(d_separated(collider(), {"A"}, {"C"}, {}));
  EXPECT_FALSE(d_separated(collider(), {"A"}, {"C"}, {"B"}));
  Dag g = parse_graph("A -> B\nC -> B\nB -> D\n");
  EXPECT_FALSE(d_separated(g, {"A"}, {"C"}, {"D"}));
}

TEST(DSeparation, RejectsOverlapAndUnknown) {
  EXPECT_THROW(d_separated(chain(), {"A"}, {"A"}, {}), InputError);
  EXPECT_THROW(d_separated(chain(), {"A"}, {"Q"}, {}), InputError);
}

TEST(DSeparation, MatchesPathEnumeration) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 3 + trial % 5;
    Dag g = random_dag(rng, n, 0.4);
    // shuffle node roles
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::size_t x = perm[0], y = perm[1];
    NodeSet z;
    for (std::size_t i = 2; i < n; ++i)
      if (rng() % 2) z.insert(perm[i]);
    ASSERT_EQ(d_separated(g, {x}, {y}, z), separated_by_paths(g, x, y, z)) << write_graph(g);
  }
}

TEST(Mutilate, RemovesIncomingAndOutgoing) {
  Dag g = load_graph(fixture("frontdoor.g"));
  auto x = g.indices({"X"});
  Dag under = mutilate(g, {}, x);
  EXPECT_FALSE(under.has_edge(g.require("X"), g.require("Z")));
  EXPECT_TRUE(under.has_edge(g.require("W"), g.require("X")));
  EXPECT_TRUE(d_separated(under, {"Z"}, {"X"}, {}));
  Dag over = mutilate(g, x, {});
  EXPECT_FALSE(over.has_edge(g.require("W"), g.require("X")));
  EXPECT_TRUE(over.has_edge(g.require("X"), g.require("Z")));
}

TEST(Docalc, PremisesOnExampleGraph) {
  Dag g = load_graph(fixture("frontdoor.g"));
  auto s = [&](std::vector<std::string> v) { return g.indices(v); };
  // P([X]Z) == P(Z | X)
  EXPECT_TRUE(docalc_premise(g, 2, {}, s({"Z"}), s({"X"}), {}));
  // P([Z]Y | ...) needs W blocked: not with nothing conditioned
  EXPECT_FALSE(docalc_premise(g, 2, {}, s({"Y"}), s({"Z"}), {}));
  // P([Z]X) == P(X)
  EXPECT_TRUE(docalc_premise(g, 3, {}, s({"X"}), s({"Z"}), {}));
  // P([X,Z]Y) == P([Z]Y)
  EXPECT_TRUE(docalc_premise(g, 3, s({"Z"}), s({"Y"}), s({"X"}), {}));
  // P([X]Y | [X]Z) == P([X,Z]Y)
  EXPECT_TRUE(docalc_premise(g, 2, s({"X"}), s({"Y"}), s({"Z"}), {}));
  // P([Z]Y | [Z]X) == P(Y | X & Z)
  EXPECT_TRUE(docalc_premise(g, 2, {}, s({"Y"}), s({"Z"}), s({"X"})));
  EXPECT_THROW(docalc_premise(g, 4, {}, {}, {}, {}), InputError);
}

TEST(Docalc, ZOfW) {
  Dag g = parse_graph("Z -> W\nZ -> Y\nX -> Z\n");
  auto s = [&](std::vector<std::string> v) { return g.indices(v); };
  EXPECT_TRUE(z_of_w(g, {}, s({"Z"}), s({"W"})).empty());
  EXPECT_EQ(z_of_w(g, {}, s({"Z"}), {}), s({"Z"}));
}

TEST(Docalc, InstanceCountAndRefusal) {
  Dag empty = parse_graph("X\nY\n");
  auto inst = docalc_instances(empty, 2, {{}, {"Y"}, {"X"}, {}});
  EXPECT_EQ(inst.size(), 4u);
  for (const auto& f : inst) EXPECT_TRUE(f.is_sugar_free());
  EXPECT_EQ(inst[0], desugar(parse_formula("P([X=0]Y=0) == P(Y=0 | X=0)")));
  Dag g = load_graph(fixture("frontdoor.g"));
  EXPECT_THROW(docalc_instances(g, 2, {{}, {"Y"}, {"Z"}, {}}), InputError);
  DomainMap doms{{"X", {"a", "b", "c"}}};
  EXPECT_EQ(docalc_instances(empty, 3, {{}, {"Y"}, {"X"}, {}}, doms).size(), 6u);
}

TEST(RandomModel, InfluenceGraphAndMarkov) {
  Dag g = load_graph(fixture("frontdoor.g"));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandomModelOptions opt;
    opt.seed = seed;
    Scm m = random_markov_scm(g, opt);
    EXPECT_EQ(influence_graph(m), g);
    EXPECT_TRUE(check_markov(m).markov);
    Rational total = 0;
    for (const auto& e : m.exo()) total += e.weight;
    EXPECT_EQ(total, 1);
  }
  RandomModelOptions ternary;
  ternary.default_domain = 3;
  ternary.seed = 9;
  Scm m3 = random_markov_scm(parse_graph("A -> B\n"), ternary);
  EXPECT_EQ(m3.signature().domains[0].size(), 3u);
  EXPECT_TRUE(check_markov(m3).markov);
}

TEST(RandomModel, DSeparationImpliesIndependence) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    Dag g = random_dag(rng, 4 + trial % 2, 0.5);
    RandomModelOptions opt;
    opt.seed = static_cast<std::uint64_t>(trial);
    opt.max_denominator = 7;
    Scm m = random_markov_scm(g, opt);
    auto joint = joint_distribution(m);
    std::size_t n = g.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (mask & (1u << x) || mask & (1u << y)) continue;
          NodeSet z;
          std::vector<std::size_t> zv;
          for (std::size_t k = 0; k < n; ++k)
            if (mask & (1u << k)) z.insert(k), zv.push_back(k);
          if (d_separated(g, {x}, {y}, z)) {
            EXPECT_TRUE(independent(joint, {x}, {y}, zv));
          }
        }
  }
}

TEST(RandomModel, ConnectedPairsAreDependentForSomeSeed) {
  Dag g = parse_graph("A -> B\nB -> C\nD -> C\n");
  auto a = g.require("A"), c = g.require("C"), d = g.require("D");
  bool dep_ac = false, dep_ad_given_c = false;
  for (std::uint64_t seed = 0; seed < 5 && !(dep_ac && dep_ad_given_c); ++seed) {
    RandomModelOptions opt;
    opt.seed = seed;
    auto joint = joint_distribution(random_markov_scm(g, opt));
    dep_ac |= !independent(joint, {a}, {c}, {});
    dep_ad_given_c |= !independent(joint, {a}, {d}, {c});
  }
  EXPECT_TRUE(dep_ac);
  EXPECT_TRUE(dep_ad_given_c);
}

TEST(Docalc, InstancesHoldInRandomMarkovModels) {
  Dag g = load_graph(fixture("frontdoor.g"));
  std::vector<std::pair<int, DocalcQuery>> cases = {
      {2, {{}, {"Z"}, {"X"}, {}}},
      {3, {{}, {"X"}, {"Z"}, {}}},
      {3, {{"Z"}, {"Y"}, {"X"}, {}}},
      {2, {{"X"}, {"Y"}, {"Z"}, {}}},
      {2, {{}, {"Y"}, {"Z"}, {"X"}}},
  };
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    RandomModelOptions opt;
    opt.seed = seed;
    Scm m = random_markov_scm(g, opt);
    Evaluator ev(m);
    for (const auto& [rule, q] : cases)
      for (const auto& f : docalc_instances(g, rule, q)) EXPECT_TRUE(ev.check(f)) << to_string(f);
  }
}
