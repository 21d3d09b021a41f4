#pragma once

// Model checking: truth of base formulas at (F, u), probabilities of base
// formulas, evaluation of terms and of L_i formulas, all in exact rationals.

#include "causal/desugar.hpp"
#include "causal/parser.hpp"
#include "causal/scm.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace causal {

/// Caches intervened solutions per intervention and probabilities per base formula.
class Evaluator {
 public:
  explicit Evaluator(const Scm& m) : m_(m) {}

  const Scm& model() const { return m_; }

  /// Solutions of i_alpha(M) at every exogenous point (zero-weight points included when solvable).
  const std::vector<Instantiation>& solutions(const Intervention& alpha) {
    auto it = solved_.find(alpha);
    if (it != solved_.end()) return it->second;
    Scm mi = apply_intervention(m_, alpha);
    auto order = evaluation_order(mi);
    std::vector<Instantiation> sols(m_.exo_count());
    for (std::size_t u = 0; u < m_.exo_count(); ++u) {
      if (m_.exo()[u].weight == 0 && !order) continue;
      sols[u] = solve(mi, u, order ? &*order : nullptr);
    }
    return solved_.emplace(alpha, std::move(sols)).first->second;
  }

  bool eval_prop(const Instantiation& vals, const Prop& p) const {
    return p.eval([&](const std::string& var) -> const std::string& {
      auto v = m_.signature().require(var);
      return m_.signature().domains[v][vals[v]];
    });
  }

  bool eval_base(std::size_t u, const Base& e) {
    return e.eval([&](const Intervention& alpha) {
      const Instantiation& vals = solutions(alpha)[u];
      return [this, &vals](const std::string& var) -> const std::string& {
        auto v = m_.signature().require(var);
        return m_.signature().domains[v][vals[v]];
      };
    });
  }

  Rational prob(const Base& e) {
    std::string key = to_string(e);
    auto it = probs_.find(key);
    if (it != probs_.end()) return it->second;
    Rational total = 0;
    for (std::size_t u = 0; u < m_.exo_count(); ++u)
      if (m_.exo()[u].weight > 0 && eval_base(u, e)) total += m_.exo()[u].weight;
    probs_.emplace(std::move(key), total);
    return total;
  }

  /// Value of a term; literal and conditional sugar are evaluated directly.
  Rational eval(const Term& t) {
    using K = Term::Kind;
    switch (t.kind()) {
      case K::Prob: return prob(t.event());
      case K::Add: return eval(t.lhs()) + eval(t.rhs());
      case K::Mul: return eval(t.lhs()) * eval(t.rhs());
      case K::Neg: return -eval(t.operand());
      case K::Literal: return t.value();
      case K::CondProb: {
        Rational den = prob(t.given());
        if (den == 0) throw Error("conditioning event has probability 0: " + to_string(t.given()));
        return prob(Base::conj(t.event(), t.given())) / den;
      }
    }
    return 0;
  }

  /// Satisfaction of a formula; sugar is removed first so P(.|.) follows the cleared form.
  bool check(const Formula& f) { return check_primitive(desugar(f)); }

  bool check_primitive(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Geq: return eval(f.left()) >= eval(f.right());
      case K::Not: return !check_primitive(f.operand());
      case K::And: return check_primitive(f.lhs()) && check_primitive(f.rhs());
      default: return check(f);
    }
  }

 private:
  const Scm& m_;
  std::map<Intervention, std::vector<Instantiation>> solved_;
  std::unordered_map<std::string, Rational> probs_;
};

inline bool eval_base(const Scm& m, std::size_t u, const Base& e) { return Evaluator(m).eval_base(u, e); }

inline Rational prob(const Scm& m, const Base& e) { return Evaluator(m).prob(e); }

inline bool model_check(const Scm& m, const Formula& f) { return Evaluator(m).check(f); }

}  // namespace causal
