#include "causal/scm.hpp"
#include "causal/scm_io.hpp"

#include <gtest/gtest.h>

using namespace causal;

namespace {

std::string fixture(const char* name) { return std::string(CAUSAL_FIXTURES) + "/" + name; }

Scm shared_cause() {
  // X := U, Y := U, no endogenous link
  return Scm::from_functions(Signature::binary({"X", "Y"}), {{"u0", make_rational(1, 2)}, {"u1", make_rational(1, 2)}},
                             {{}, {}}, [](std::size_t, const std::vector<std::size_t>&, std::size_t u) { return u; });
}

Scm constant_model() {
  return Scm::from_functions(Signature::binary({"A", "B", "C"}), {{"u", 1}}, {{}, {0}, {0, 1}},
                             [](std::size_t v, const std::vector<std::size_t>&, std::size_t) { return v % 2; });
}

}  // namespace

TEST(ScmIo, LoadsFixtures) {
  Scm m1 = load_scm(fixture("m1.scm"));
  EXPECT_EQ(m1.var_count(), 2u);
  EXPECT_EQ(m1.exo_count(), 2u);
  EXPECT_EQ(parse_scm(write_scm(m1)), m1);
  for (const char* f : {"m2.scm", "cf_m1.scm", "cf_m2.scm"}) {
    Scm m = load_scm(fixture(f));
    EXPECT_EQ(parse_scm(write_scm(m)), m) << f;
  }
}

TEST(ScmIo, RejectsBadTables) {
  const char* head = "variables\n X: 0 1\nexogenous\n a: 1/2\n b: 1/2\nmechanisms\n X:\n";
  EXPECT_THROW(parse_scm(std::string(head) + "  a -> 0\n"), InputError);                      // b uncovered
  EXPECT_THROW(parse_scm(std::string(head) + "  _ -> 0\n  a -> 1\n"), InputError);           // conflict
  EXPECT_THROW(parse_scm(std::string(head) + "  _ -> 2\n"), InputError);                     // value
  EXPECT_THROW(parse_scm(std::string(head) + "  c -> 0\n"), InputError);                     // label
  EXPECT_NO_THROW(parse_scm(std::string(head) + "  _ -> 0\n  a -> 0\n"));                    // agreeing overlap
  EXPECT_THROW(parse_scm("variables\n X: 0 1\nexogenous\n a: 1/3\nmechanisms\n X:\n  _ -> 0\n"), InputError);
}

TEST(Intervention, ReplacesMechanismWithConstant) {
  Scm m1 = load_scm(fixture("m1.scm"));
  Scm mx = apply_intervention(m1, Intervention::from_atoms(std::vector<Atom>{{"X", "0"}}));
  EXPECT_TRUE(mx.mechanism(0).parents.empty());
  EXPECT_EQ(mx.mechanism(1), m1.mechanism(1));
  for (std::size_t u = 0; u < 2; ++u) EXPECT_EQ(solve(mx, u)[0], 0u);
  EXPECT_EQ(apply_intervention(m1, Intervention{}), m1);
}

TEST(Intervention, OnEffectLeavesCause) {
  Scm m1 = load_scm(fixture("m1.scm"));
  Scm my = apply_intervention(m1, Intervention::from_atoms(std::vector<Atom>{{"Y", "1"}}));
  EXPECT_EQ(solve(my, 0), (Instantiation{0, 1}));
}

TEST(Intervention, Composition) {
  Scm m = load_scm(fixture("cf_m1.scm"));
  Intervention i = Intervention::from_atoms(std::vector<Atom>{{"X", "1"}});
  Intervention j = Intervention::from_atoms(std::vector<Atom>{{"Y", "0"}});
  EXPECT_EQ(apply_intervention(apply_intervention(m, i), j), apply_intervention(m, i.conjoin(j)));
  Intervention k = Intervention::from_atoms(std::vector<Atom>{{"X", "0"}});
  EXPECT_EQ(apply_intervention(apply_intervention(m, i), k), apply_intervention(m, i.overridden_by(k)));
}

TEST(Intervention, RejectsOutOfDomain) {
  Scm m1 = load_scm(fixture("m1.scm"));
  EXPECT_THROW(apply_intervention(m1, Intervention::from_atoms(std::vector<Atom>{{"X", "7"}})), InputError);
}

TEST(Solve, Examples) {
  Scm m1 = load_scm(fixture("m1.scm"));
  EXPECT_EQ(solve(m1, 1), (Instantiation{1, 1}));
  Scm mx = apply_intervention(m1, Intervention::from_atoms(std::vector<Atom>{{"X", "0"}}));
  EXPECT_EQ(solve(mx, 1), (Instantiation{0, 0}));
  // cf_m1 at (U_X=1, U_Y=2): X=1, Y=(1 <-> false)=0
  Scm a1 = load_scm(fixture("cf_m1.scm"));
  EXPECT_EQ(solve(a1, 5), (Instantiation{1, 0}));
}

TEST(Solve, CyclicDeclaredParentsButRecursiveFunctions) {
  // X declares Y as a parent but ignores it; Y := X.
  Scm m = Scm::from_functions(Signature::binary({"X", "Y"}), {{"u0", make_rational(1, 2)}, {"u1", make_rational(1, 2)}},
                              {{1}, {0}}, [](std::size_t v, const std::vector<std::size_t>& pv, std::size_t u) {
                                return v == 0 ? u : pv[0];
                              });
  EXPECT_EQ(solve(m, 1), (Instantiation{1, 1}));
  EXPECT_TRUE(check_recursive(m).recursive);
}

TEST(Influence, Examples) {
  Dag g1 = influence_graph(load_scm(fixture("m1.scm")));
  EXPECT_EQ(g1.edges().size(), 1u);
  EXPECT_TRUE(g1.has_edge(0, 1));
  Dag g2 = influence_graph(load_scm(fixture("m2.scm")));
  EXPECT_EQ(g2.edges().size(), 1u);
  EXPECT_TRUE(g2.has_edge(1, 0));
  EXPECT_TRUE(influence_graph(constant_model()).edges().empty());
}

TEST(Influence, IgnoresZeroWeightPoints) {
  Scm m = Scm::from_functions(Signature::binary({"X", "Y"}), {{"live", 1}, {"dead", 0}}, {{}, {0}},
                              [](std::size_t v, const std::vector<std::size_t>& pv, std::size_t u) -> std::size_t {
                                if (v == 0) return 0;
                                return u == 1 ? pv[0] : 0;
                              });
  EXPECT_TRUE(influence_graph(m).edges().empty());
}

TEST(Recursive, OrderAndCycle) {
  auto r1 = check_recursive(load_scm(fixture("m1.scm")));
  ASSERT_TRUE(r1.recursive);
  EXPECT_EQ(r1.order, (std::vector<std::size_t>{0, 1}));

  Scm cyc = Scm::from_functions(Signature::binary({"X", "Y"}), {{"u", 1}}, {{1}, {0}},
                                [](std::size_t, const std::vector<std::size_t>& pv, std::size_t) { return pv[0]; });
  auto rc = check_recursive(cyc);
  EXPECT_FALSE(rc.recursive);
  std::set<std::size_t> cycle(rc.cycle.begin(), rc.cycle.end());
  EXPECT_EQ(cycle, (std::set<std::size_t>{0, 1}));
  EXPECT_THROW(solve(cyc, 0), Error);

  auto rk = check_recursive(constant_model());
  ASSERT_TRUE(rk.recursive);
  EXPECT_EQ(rk.order, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Markov, Examples) {
  EXPECT_TRUE(check_markov(load_scm(fixture("m1.scm"))).markov);
  auto bad = check_markov(shared_cause());
  ASSERT_FALSE(bad.markov);
  ASSERT_TRUE(bad.violation);
  EXPECT_TRUE(bad.violation->parents.empty());
  EXPECT_NE(bad.violation->p_given_both, bad.violation->p_given_parents);
  EXPECT_TRUE(check_markov(constant_model()).markov);
}

TEST(Distribution, SumsToOneUnderEveryIntervention) {
  for (const char* f : {"m1.scm", "m2.scm", "cf_m1.scm", "cf_m2.scm"}) {
    Scm m = load_scm(fixture(f));
    for (const char* var : {"X", "Y"})
      for (const char* val : {"0", "1"}) {
        Scm mi = apply_intervention(m, Intervention::from_atoms(std::vector<Atom>{{var, val}}));
        Rational total = 0;
        for (const auto& [inst, p] : joint_distribution(mi)) total += p;
        EXPECT_EQ(total, 1);
        auto vi = m.signature().require(var);
        for (std::size_t u = 0; u < m.exo_count(); ++u)
          EXPECT_EQ(solve(mi, u)[vi], m.signature().require_value(vi, val));
      }
  }
}

TEST(GraphIo, ParsesEdgeList) {
  Dag g = load_graph(fixture("frontdoor.g"));
  EXPECT_EQ(g.size(), 4u);
  EXPECT_EQ(g.edges().size(), 4u);
  EXPECT_TRUE(g.has_edge(g.require("W"), g.require("X")));
  EXPECT_EQ(parse_graph(write_graph(g)), g);
  EXPECT_THROW(parse_graph("A -> B\nB -> A\n"), InputError);
}
