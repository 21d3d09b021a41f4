#include "causal/parser.hpp"
#include "causal/scm_io.hpp"
#include "causal/semantics.hpp"

#include <gtest/gtest.h>

using namespace causal;

namespace {

std::string fixture(const char* name) { return std::string(CAUSAL_FIXTURES) + "/" + name; }

Rational p(const Scm& m, const char* base) { return prob(m, parse_base(base)); }

}  // namespace

TEST(EvalBase, Examples) {
  Scm m1 = load_scm(fixture("m1.scm"));
  EXPECT_TRUE(eval_base(m1, 1, parse_base("[X=0]Y=0")));
  EXPECT_TRUE(eval_base(m1, 0, parse_base("[X=1]true")));
  EXPECT_FALSE(eval_base(m1, 0, parse_base("false")));
  Scm a1 = load_scm(fixture("cf_m1.scm"));
  // (U_X=1, U_Y=0) is point index 3
  EXPECT_TRUE(eval_base(a1, 3, parse_base("[X=0]Y=0 & [X=1]Y=1")));
}

TEST(Prob, InterventionalPair) {
  EXPECT_EQ(p(load_scm(fixture("m1.scm")), "[X=1]Y=1"), 1);
  EXPECT_EQ(p(load_scm(fixture("m2.scm")), "[X=1]Y=1"), make_rational(1, 2));
}

TEST(Prob, NecessityAndSufficiencyPair) {
  Scm a1 = load_scm(fixture("cf_m1.scm")), a2 = load_scm(fixture("cf_m2.scm"));
  EXPECT_EQ(p(a1, "[X=0]Y=0 & [X=1]Y=1"), make_rational(1, 3));
  EXPECT_EQ(p(a2, "[X=0]Y=0 & [X=1]Y=1"), 0);
  EXPECT_EQ(p(a1, "Y=1 & [X=1]Y=1"), make_rational(1, 6));
  EXPECT_EQ(p(a2, "Y=1 & [X=1]Y=1"), make_rational(1, 3));
}

TEST(ModelCheck, ObservationVersusIntervention) {
  Scm m1 = load_scm(fixture("m1.scm")), m2 = load_scm(fixture("m2.scm"));
  Formula f = parse_formula("P(Y=1 | X=1) == P([X=1]Y=1)");
  EXPECT_TRUE(model_check(m1, f));
  EXPECT_FALSE(model_check(m2, f));
  EXPECT_TRUE(model_check(m1, parse_formula("P([X=1]Y=1) == 1")));
  EXPECT_FALSE(model_check(m2, parse_formula("P([X=1]Y=1) == 1")));
}

TEST(ModelCheck, Normalization) {
  for (const char* f : {"m1.scm", "m2.scm", "cf_m1.scm", "cf_m2.scm"}) {
    Scm m = load_scm(fixture(f));
    EXPECT_TRUE(model_check(m, parse_formula("P(true) == 1")));
    EXPECT_TRUE(model_check(m, parse_formula("P(false) == 0")));
    EXPECT_TRUE(model_check(m, parse_formula("P([X=1]true) == 1")));
  }
}

TEST(ModelCheck, ConnectivesAndRationals) {
  Scm m1 = load_scm(fixture("m1.scm"));
  EXPECT_TRUE(model_check(m1, parse_formula("P(X=1) >= 1/2 & P(X=1) <= 0.5")));
  EXPECT_TRUE(model_check(m1, parse_formula("~(P(X=1) > 1/2)")));
  EXPECT_TRUE(model_check(m1, parse_formula("P(X=1) > 1/2 | P(X=1) == 1/2")));
  EXPECT_TRUE(model_check(m1, parse_formula("P(X=1) * P(X=1) == 1/4")));
  EXPECT_TRUE(model_check(m1, parse_formula("P(X=1) - P(Y=1) == 0")));
  // P(.|false) clears to 0 >= 0 style comparisons
  EXPECT_TRUE(model_check(m1, parse_formula("P(X=1 | false) >= 1")));
}

TEST(Properties, AdditivityAndBounds) {
  const char* events[] = {"X=1", "[X=0]Y=1", "[Y=1]X=0 & Y=1", "~[X=1]Y=0", "true", "false"};
  for (const char* f : {"m1.scm", "m2.scm", "cf_m1.scm", "cf_m2.scm"}) {
    Scm m = load_scm(fixture(f));
    Evaluator ev(m);
    for (const char* e : events)
      for (const char* z : events) {
        Base eb = parse_base(e), zb = parse_base(z);
        Rational whole = ev.prob(eb);
        EXPECT_EQ(ev.prob(Base::conj(eb, zb)) + ev.prob(Base::conj(eb, Base::negate(zb))), whole);
        EXPECT_GE(whole, 0);
        EXPECT_LE(whole, 1);
      }
  }
}
