#include "causal/graph.hpp"
#include "causal/simprog.hpp"
#include "model_zoo.hpp"

#include <gtest/gtest.h>

using namespace causal;

namespace {

const std::string kFixtures = CAUSAL_FIXTURES;

Intervention iv(const std::string& var, const std::string& val) { return Intervention(Intervention::Map{{var, val}}); }

Rational total(const Distribution& d) {
  Rational s = 0;
  for (const auto& [k, p] : d) s += p;
  return s;
}

}  // namespace

TEST(SimProgram, ParsesAndRuns) {
  auto p = load_program(kFixtures + "/m1.prog");
  EXPECT_EQ(p.bit_bound, 1u);
  EXPECT_EQ(run(p, {0}), (Instantiation{0, 0}));
  EXPECT_EQ(run(p, {1}), (Instantiation{1, 1}));
  auto again = parse_program(write_program(p));
  EXPECT_EQ(write_program(again), write_program(p));
}

TEST(SimProgram, RejectsBrokenPrograms) {
  const std::string head = "signature: X:0,1; Y:0,1\nbits: 1\n";
  EXPECT_THROW(parse_program(head + "READBIT r1\nWRITE X <- r1\n"), InputError);                      // Y unwritten
  EXPECT_THROW(parse_program(head + "WRITE Y <- X\nWRITE X <- 0\n"), InputError);                     // read first
  EXPECT_THROW(parse_program(head + "WRITE X <- 0\nWRITE X <- 1\nWRITE Y <- 0\n"), InputError);       // two writes
  EXPECT_THROW(parse_program(head + "READBIT r1\nREADBIT r2\nWRITE X <- r1\nWRITE Y <- r2\n"), InputError);
  EXPECT_THROW(parse_program(head + "WRITE X <- 2\nWRITE Y <- 0\n"), InputError);                     // domain
  EXPECT_THROW(parse_program(head + "GOTO +5\nWRITE X <- 0\nWRITE Y <- 0\n"), InputError);
  EXPECT_THROW(parse_program(head + "IF r1 GOTO +1\nWRITE X <- 0\nWRITE Y <- 0\n"), InputError);      // unset register
  EXPECT_THROW(parse_program("bits: 0\nWRITE X <- 0\n"), InputError);
  EXPECT_THROW(parse_program(head + "WRITE X <- (r1 = 1 ? 0 : 1)\nWRITE Y <- 0\n"), InputError);
}

TEST(SimProgram, BranchingProgram) {
  // X = r1, Y = r1 or r2 via jumps
  auto p = parse_program(
      "signature: X:0,1; Y:0,1\nbits: 2\n"
      "READBIT r1\nREADBIT r2\nWRITE X <- r1\nIF r1 GOTO +3\nWRITE Y <- r2\nGOTO +2\nWRITE Y <- 1\n");
  auto d = distribution(p);
  EXPECT_EQ(d.at({0, 0}), Rational(1, 4));
  EXPECT_EQ(d.at({0, 1}), Rational(1, 4));
  EXPECT_EQ(d.at({1, 1}), Rational(1, 2));
  EXPECT_EQ(total(distribution(p, iv("X", "0"))), 1);
}

TEST(SimProgram, InterventionRewritesWrites) {
  auto p = load_program(kFixtures + "/m1.prog");
  auto d = distribution(p, iv("X", "1"));
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.at({1, 1}), 1);
  auto y = distribution(p, iv("Y", "0"));
  EXPECT_EQ(y.at({0, 0}), Rational(1, 2));
  EXPECT_EQ(y.at({1, 0}), Rational(1, 2));
  EXPECT_THROW(distribution(p, iv("X", "7")), InputError);
}

TEST(EquivCheck, MatchesItsModelAndSeparatesTheOther) {
  auto p = load_program(kFixtures + "/m1.prog");
  Scm m1 = load_scm(kFixtures + "/m1.scm");
  Scm m2 = load_scm(kFixtures + "/m2.scm");
  auto ivs = single_interventions(m1.signature());
  EXPECT_EQ(ivs.size(), 5u);
  EXPECT_TRUE(equiv_check(p, m1, ivs).equal);
  // same observational law, different causal law
  EXPECT_TRUE(equiv_check(p, m2, {Intervention{}}).equal);
  auto r = equiv_check(p, m2, ivs);
  ASSERT_FALSE(r.equal);
  EXPECT_NE(r.program_prob, r.model_prob);
  ASSERT_TRUE(r.at);
  EXPECT_FALSE(r.at->empty());
}

TEST(CompileScm, PointMassNeedsNoBits) {
  Signature sig = Signature::binary({"X", "Y"});
  Scm m = Scm::from_functions(sig, {{"u", 1}}, {{}, {0}},
                              [](std::size_t v, const std::vector<std::size_t>& pv, std::size_t) {
                                return v == 0 ? std::size_t{1} : 1 - pv[0];
                              });
  auto c = compile_scm(m);
  EXPECT_EQ(c.program.bit_bound, 0u);
  for (const auto& in : c.program.code) EXPECT_NE(in.kind, Instr::Kind::ReadBit);
  EXPECT_TRUE(equiv_check(c.program, m, all_interventions(sig)).equal);
}

TEST(CompileScm, DyadicWeightsAndApproximation) {
  Signature sig = Signature::binary({"X"});
  auto f = [](std::size_t, const std::vector<std::size_t>&, std::size_t u) { return u == 0 ? std::size_t{0} : 1; };
  Scm quarter = Scm::from_functions(sig, {{"a", Rational(1, 4)}, {"b", Rational(3, 4)}}, {{}}, f);
  auto c = compile_scm(quarter);
  EXPECT_EQ(c.program.bit_bound, 2u);
  EXPECT_EQ(c.total_variation, 0);
  EXPECT_EQ(distribution(c.program).at({0}), Rational(1, 4));

  // a uniform three-way choice has no exact finite-tape program
  Signature y3;
  y3.add("Y", {"0", "1", "2"});
  Scm third = Scm::from_functions(y3, {{"a", Rational(1, 3)}, {"b", Rational(1, 3)}, {"c", Rational(1, 3)}}, {{}},
                                  [](std::size_t, const std::vector<std::size_t>&, std::size_t u) { return u; });
  EXPECT_THROW(compile_scm(third), InputError);
  for (unsigned k : {2u, 4u, 8u}) {
    auto approx = compile_scm(third, {.approximate_bits = k});
    auto d = distribution(approx.program);
    EXPECT_EQ(total(d), 1);
    Rational tv = 0;
    for (std::size_t y = 0; y < 3; ++y) tv += abs((d.count({y}) ? d.at({y}) : Rational(0)) - Rational(1, 3));
    tv /= 2;
    EXPECT_EQ(tv, approx.total_variation);
    EXPECT_LE(approx.total_variation, Rational(3, static_cast<long>(1u << k)));
  }
}

TEST(CompileScm, CyclicDeclaredParentsUsePerPointOrder) {
  // X reads Y only at u0, Y reads X only at u1
  Signature sig = Signature::binary({"X", "Y"});
  Scm m = Scm::from_functions(sig, {{"u0", Rational(1, 2)}, {"u1", Rational(1, 2)}}, {{1}, {0}},
                              [](std::size_t v, const std::vector<std::size_t>& pv, std::size_t u) {
                                if (v == 0) return u == 0 ? pv[0] : std::size_t{1};
                                return u == 1 ? 1 - pv[0] : std::size_t{0};
                              });
  ASSERT_FALSE(evaluation_order(m));
  auto c = compile_scm(m);
  EXPECT_TRUE(equiv_check(c.program, m, all_interventions(sig)).equal);
  EXPECT_NO_THROW(parse_program(write_program(c.program)));
}

TEST(CompileScm, ZooModelsAgreeUnderEveryIntervention) {
  std::size_t checked = 0;
  for (const auto& m : zoo::model_zoo(5, 25, kFixtures)) {
    bool dyadic = std::all_of(m.exo().begin(), m.exo().end(), [](const ExoPoint& p) { return detail::dyadic(p.weight); });
    CompileOptions opt;
    if (!dyadic) opt.approximate_bits = 6;
    auto c = compile_scm(m, opt);
    auto text = write_program(c.program);
    auto back = parse_program(text);
    if (dyadic) {
      EXPECT_EQ(c.total_variation, 0);
      EXPECT_TRUE(equiv_check(back, m, all_interventions(m.signature())).equal) << text;
      ++checked;
    }
    // tabulation keeps the program's own semantics
    Scm t = tabulate(back);
    EXPECT_TRUE(equiv_check(back, t, all_interventions(m.signature())).equal) << text;
  }
  EXPECT_GT(checked, 3u);
}

TEST(Tabulate, RoundTripThroughModel) {
  auto p = load_program(kFixtures + "/m1.prog");
  Scm t = tabulate(p);
  EXPECT_EQ(t.exo_count(), 2u);
  EXPECT_EQ(t.mechanism(1).parents, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(equiv_check(p, t, all_interventions(t.signature())).equal);
  auto c = compile_scm(t);
  EXPECT_TRUE(equiv_check(c.program, t, all_interventions(t.signature())).equal);
}

TEST(Tabulate, DataflowLocality) {
  // intervening on a variable only moves its descendants
  Dag g = load_graph(kFixtures + "/frontdoor.g");
  RandomModelOptions opt;
  opt.seed = 3;
  opt.max_denominator = 4;
  Scm m = random_markov_scm(g, opt);
  bool dyadic = std::all_of(m.exo().begin(), m.exo().end(), [](const ExoPoint& p) { return detail::dyadic(p.weight); });
  auto c = compile_scm(m, dyadic ? CompileOptions{} : CompileOptions{.approximate_bits = 6});
  const auto& sig = m.signature();
  auto z = *sig.index_of("Z"), w = *sig.index_of("W");
  auto base = distribution(c.program);
  auto moved = distribution(c.program, iv("Z", "1"));
  auto law_of = [&](const Distribution& d, std::size_t v) {
    std::map<std::size_t, Rational> out;
    for (const auto& [k, p] : d) out[k[v]] += p;
    return out;
  };
  EXPECT_EQ(law_of(base, w), law_of(moved, w));
  EXPECT_EQ(law_of(moved, z).at(1), 1);
}
