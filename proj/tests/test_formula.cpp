#include "causal/desugar.hpp"
#include "causal/parser.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace causal;

namespace {

Base cond(std::vector<Atom> alpha, Prop beta) { return Base::cond(Intervention::from_atoms(alpha), beta); }
Prop at(const char* v, const char* x) { return Prop::atom(v, x); }

Term sum_of_ones(int n) {
  std::vector<Term> parts(n, Term::one());
  return Term::sum(parts);
}

}  // namespace

TEST(Parse, InterventionalComparison) {
  Formula f = parse_formula("P([X=1] Y=1) >= 1/2");
  ASSERT_EQ(f.kind(), Formula::Kind::Geq);
  EXPECT_EQ(f.left(), Term::prob(cond({{"X", "1"}}, at("Y", "1"))));
  EXPECT_EQ(f.right(), Term::literal(make_rational(1, 2)));
}

TEST(Parse, BarePropIsTopIntervention) {
  Term t = parse_term("P(X=1 & ~Y=0)");
  Base expected = Base::cond({}, Prop::conj(at("X", "1"), Prop::negate(at("Y", "0"))));
  EXPECT_EQ(t, Term::prob(expected));
  EXPECT_EQ(t.event().level(), 1);
}

TEST(Parse, RejectsDuplicateAssignment) {
  try {
    parse_formula("P([X=1, X=0] Y=1) >= 0");
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("duplicate assignment to X"), std::string::npos);
  }
}

TEST(Parse, RepeatedSameValueIsFine) {
  EXPECT_NO_THROW(parse_formula("P([X=1, X=1] Y=1) >= 0"));
}

TEST(Parse, SyntaxErrorsCarryColumn) {
  try {
    parse_formula("P(X=1) >= ");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
  }
  EXPECT_THROW(parse_formula("P([X=1][Y=0]Z=1) > 0"), InputError);
  EXPECT_THROW(parse_formula("P(X=1) >= 1/0"), InputError);
  EXPECT_THROW(parse_formula("P(X=1"), InputError);
}

TEST(Parse, SignatureChecks) {
  Signature sig = Signature::binary({"X", "Y"});
  EXPECT_NO_THROW(parse_formula("P([X=1]Y=0) > 0", &sig));
  EXPECT_THROW(parse_formula("P([X=2]Y=0) > 0", &sig), InputError);
  EXPECT_THROW(parse_formula("P(Z=0) > 0", &sig), InputError);
}

TEST(Parse, SurfaceComparisons) {
  Term a = parse_term("P(X=1)"), b = parse_term("P(Y=1)");
  EXPECT_EQ(parse_formula("P(X=1) <= P(Y=1)"), Formula::geq(b, a));
  EXPECT_EQ(parse_formula("P(X=1) < P(Y=1)"), Formula::gt(b, a));
  EXPECT_EQ(parse_formula("P(X=1) = P(Y=1)"), Formula::equiv(a, b));
  EXPECT_EQ(parse_formula("P(X=1) != P(Y=1)"), Formula::negate(Formula::equiv(a, b)));
}

TEST(Parse, ParenthesizedComparisonVersusFormula) {
  Formula f = parse_formula("(P(X=1) + P(X=0)) * 2 >= 1");
  EXPECT_EQ(f.kind(), Formula::Kind::Geq);
  Formula g = parse_formula("(P(X=1) >= 0 & P(X=0) >= 0) -> P(X=1) >= 0");
  EXPECT_EQ(g.kind(), Formula::Kind::Implies);
}

TEST(Parse, ConditioningBarAndDisjunctionInsideP) {
  Term t = parse_term("P(Y=1 | X=1)");
  EXPECT_EQ(t.kind(), Term::Kind::CondProb);
  Term d = parse_term("P((Y=1 | X=1))");
  EXPECT_EQ(d.kind(), Term::Kind::Prob);
  EXPECT_EQ(d.event(), Base::prop(Prop::disj(at("Y", "1"), at("X", "1"))));
}

TEST(Desugar, ConditionalProbabilityWithRational) {
  Formula f = desugar(parse_formula("P(Y=1 | X=1) >= 1/2"));
  Formula expected = Formula::geq(Term::mul(sum_of_ones(2), Term::prob(Base::prop(Prop::conj(at("Y", "1"), at("X", "1"))))),
                                  Term::prob(Base::prop(at("X", "1"))));
  EXPECT_EQ(f, expected);
  EXPECT_EQ(to_string(f), "(P(true) + P(true)) * P(Y=1 & X=1) >= P(X=1)");
}

TEST(Desugar, EquivalenceIsTwoInequalities) {
  Term t = parse_term("P(X=1) * P(Y=0)");
  Formula f = desugar(Formula::equiv(t, t));
  EXPECT_EQ(f, Formula::conj(Formula::geq(t, t), Formula::geq(t, t)));
}

TEST(Desugar, ConditionalEffect) {
  Formula f = desugar(parse_formula("P([X=1]Y=1 | [X=1]Z=0) >= 1/3"));
  Base joint = cond({{"X", "1"}}, Prop::conj(at("Y", "1"), at("Z", "0")));
  Formula expected = Formula::geq(Term::mul(sum_of_ones(3), Term::prob(joint)), Term::prob(cond({{"X", "1"}}, at("Z", "0"))));
  EXPECT_EQ(f, expected);
  EXPECT_EQ(level(f), 2);
}

TEST(Desugar, OutputIsPrimitiveAndIdempotent) {
  const char* samples[] = {
      "P(X=1) > 1/2 & P(X=0) > 1/2",
      "P(Y=1 | X=1) == P([X=1]Y=1)",
      "P(X=1) - 3/4 * P(Y=0) < 2 | ~(P(X=1) = 0)",
      "P(X=1) >= 0 -> P(X=1) <= 1",
      "(P(X=1) >= 0) <-> (P([X=0]Y=1 & [X=1]Y=0) > 0)",
      "P(Y=1 | X=1) + P(Y=0 | X=0) >= 5/4",
      "0 >= 0",
      "-P(X=1) * -2/3 >= 0.25",
  };
  for (const char* s : samples) {
    Formula d = desugar(parse_formula(s));
    EXPECT_TRUE(d.is_sugar_free()) << s;
    EXPECT_EQ(desugar(d), d) << s;
  }
}

TEST(Level, Examples) {
  EXPECT_EQ(level(desugar(parse_formula("P(X=1) >= P(Y=0)"))), 1);
  EXPECT_EQ(level(desugar(parse_formula("P([X=1]Y=1) >= 0"))), 2);
  EXPECT_EQ(level(desugar(parse_formula("P([X=0]Y=0 & [X=1]Y=1) > 0"))), 3);
  EXPECT_EQ(level(parse_formula("P([]Y=1) >= 0")), 1);
}

TEST(Level, MonotoneUnderEmbedding) {
  Formula a = desugar(parse_formula("P(X=1) >= 1/3"));
  Formula b = desugar(parse_formula("P([X=1]Y=1) >= 0"));
  Formula c = desugar(parse_formula("P([X=0]Y=0 & [X=1]Y=1) > 0"));
  for (const Formula& sub : {a, b, c})
    for (const Formula& other : {a, b, c}) {
      EXPECT_LE(level(sub), level(Formula::conj(sub, other)));
      EXPECT_LE(level(sub), level(Formula::negate(sub)));
    }
}

TEST(Canonical, ConditionalFolding) {
  Base a = cond({{"X", "1"}}, at("Y", "1"));
  Base b = cond({{"X", "1"}}, at("Z", "0"));
  EXPECT_EQ(Base::conj(a, b).kind(), Base::Kind::Cond);
  EXPECT_EQ(Base::negate(a), cond({{"X", "1"}}, Prop::negate(at("Y", "1"))));
  Base c = cond({{"X", "0"}}, at("Y", "0"));
  EXPECT_EQ(Base::conj(a, c).kind(), Base::Kind::And);
  EXPECT_EQ(Base::conj(a, c).level(), 3);
}

TEST(RoundTrip, InterventionMapSurvivesPrinting) {
  Intervention alpha = Intervention::from_atoms(std::vector<Atom>{{"Z", "0"}, {"X", "1"}, {"W", "a"}});
  Base b = parse_base(to_string(Base::cond(alpha, at("Y", "1"))));
  EXPECT_EQ(b.intervention(), alpha);
  EXPECT_EQ(b.intervention().assignments().at("W"), "a");
}

namespace {

// Random AST generator for the parse-print round trip.
struct Gen {
  std::mt19937 rng;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Prop prop(int depth) {
    const char* vars[] = {"X", "Y", "Z"};
    int k = depth <= 0 ? pick(4) : pick(7);
    switch (k) {
      case 0: return Prop::top();
      case 1: return Prop::bottom();
      case 2:
      case 3: return at(vars[pick(3)], pick(2) ? "1" : "0");
      case 4: return Prop::negate(prop(depth - 1));
      default: return Prop::conj(prop(depth - 1), prop(depth - 1));
    }
  }
  Intervention intervention() {
    std::map<std::string, std::string> m;
    if (pick(2)) m["X"] = pick(2) ? "1" : "0";
    if (pick(3) == 0) m["Z"] = "1";
    return Intervention(m);
  }
  Base base(int depth) {
    int k = depth <= 0 ? 0 : pick(4);
    switch (k) {
      case 0:
      case 1: return Base::cond(intervention(), prop(2));
      case 2: return Base::negate(base(depth - 1));
      default: return Base::conj(base(depth - 1), base(depth - 1));
    }
  }
  Term term(int depth) {
    int k = depth <= 0 ? pick(2) : pick(7);
    switch (k) {
      case 0: return Term::prob(base(2));
      case 1: return Term::literal(make_rational(pick(5), 1 + pick(4)));
      case 2: return Term::cond_prob(base(1), base(1));
      case 3: return Term::add(term(depth - 1), term(depth - 1));
      case 4: return Term::mul(term(depth - 1), term(depth - 1));
      case 5: return Term::neg(term(depth - 1));
      default: return Term::prob(base(2));
    }
  }
  Formula formula(int depth) {
    int k = depth <= 0 ? pick(3) : pick(10);
    switch (k) {
      case 0: return Formula::geq(term(2), term(2));
      case 1: return Formula::equiv(term(2), term(2));
      case 2: return Formula::gt(term(2), term(2));
      case 3: return Formula::negate(formula(depth - 1));
      case 4: return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 6: return Formula::implies(formula(depth - 1), formula(depth - 1));
      case 7: return Formula::iff(formula(depth - 1), formula(depth - 1));
      default: return Formula::geq(term(1), term(1));
    }
  }
};

}  // namespace

TEST(RoundTrip, ParseOfPrintIsIdentity) {
  Gen g{std::mt19937(7)};
  for (int i = 0; i < 500; ++i) {
    Formula f = g.formula(3);
    std::string text = to_string(f);
    Formula back = parse_formula(text);
    ASSERT_EQ(back, f) << text << "\n" << to_string(back);
    Formula d = desugar(f);
    ASSERT_EQ(desugar(d), d);
    ASSERT_EQ(parse_formula(to_string(d)), d);
  }
}
