#pragma once

// Elimination of surface sugar: rational literals, conditional probabilities,
// ==, >, |, -> and <->. The output uses only Geq/Not/And over P(.) leaves.

#include "causal/formula.hpp"

#include <optional>
#include <vector>

namespace causal {

namespace detail {

// A term as numerator / denominator; nullopt stands for the unit P(true)
// and is dropped from products.
struct Fraction {
  std::optional<Term> num;
  std::optional<Term> den;
};

inline std::optional<Term> times(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a) return b;
  if (!b) return a;
  return Term::mul(*a, *b);
}

inline Term ones(const mpz_class& n) {
  std::vector<Term> parts;
  for (mpz_class k = 0; k < n; ++k) parts.push_back(Term::one());
  return Term::sum(parts);
}

inline bool same_unit(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

inline Fraction to_fraction(const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Prob: return {t, std::nullopt};
    case K::CondProb: return {Term::prob(Base::conj(t.event(), t.given())), Term::prob(t.given())};
    case K::Literal: {
      Rational q = t.value();
      mpz_class a = abs(q.get_num()), b = q.get_den();
      if (a > 1000000 || b > 1000000) throw GuardError("rational literal too large to expand: " + causal::to_string(q));
      std::optional<Term> num;
      if (a == 0) {
        num = Term::zero();
      } else if (a != 1) {
        num = ones(a);
      }
      if (q < 0) num = Term::neg(num ? *num : Term::one());
      std::optional<Term> den;
      if (b != 1) den = ones(b);
      return {num, den};
    }
    case K::Neg: {
      Fraction f = to_fraction(t.operand());
      return {Term::neg(f.num ? *f.num : Term::one()), f.den};
    }
    case K::Add: {
      Fraction l = to_fraction(t.lhs()), r = to_fraction(t.rhs());
      Term ln = l.num ? *l.num : Term::one(), rn = r.num ? *r.num : Term::one();
      if (same_unit(l.den, r.den)) return {Term::add(ln, rn), l.den};
      Term n = Term::add(times(l.num, r.den).value_or(Term::one()), times(r.num, l.den).value_or(Term::one()));
      return {n, times(l.den, r.den)};
    }
    case K::Mul: {
      Fraction l = to_fraction(t.lhs()), r = to_fraction(t.rhs());
      return {times(l.num, r.num), times(l.den, r.den)};
    }
  }
  return {t, std::nullopt};
}

inline Formula desugar_geq(const Term& a, const Term& b) {
  Fraction l = to_fraction(a), r = to_fraction(b);
  // n_l / d_l >= n_r / d_r  becomes  d_r * n_l >= n_r * d_l
  auto lhs = times(r.den, l.num).value_or(Term::one());
  auto rhs = times(r.num, l.den).value_or(Term::one());
  return Formula::geq(lhs, rhs);
}

}  // namespace detail

/// Rewrites `f` into the primitive Geq/Not/And fragment. Idempotent.
inline Formula desugar(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Geq: return detail::desugar_geq(f.left(), f.right());
    case K::Equiv:
      return Formula::conj(detail::desugar_geq(f.left(), f.right()), detail::desugar_geq(f.right(), f.left()));
    case K::Gt:
      return Formula::conj(detail::desugar_geq(f.left(), f.right()),
                           Formula::negate(detail::desugar_geq(f.right(), f.left())));
    case K::Not: return Formula::negate(desugar(f.operand()));
    case K::And: return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
    case K::Or:
      return Formula::negate(Formula::conj(Formula::negate(desugar(f.lhs())), Formula::negate(desugar(f.rhs()))));
    case K::Implies: return Formula::negate(Formula::conj(desugar(f.lhs()), Formula::negate(desugar(f.rhs()))));
    case K::Iff: {
      Formula a = desugar(f.lhs()), b = desugar(f.rhs());
      return Formula::conj(Formula::negate(Formula::conj(a, Formula::negate(b))),
                           Formula::negate(Formula::conj(b, Formula::negate(a))));
    }
  }
  return f;
}

/// Desugars a term that carries no denominators (no division sugar).
inline Term desugar_term(const Term& t) {
  auto f = detail::to_fraction(t);
  if (f.den) throw InputError("term has a denominator; use it inside a comparison");
  return f.num ? *f.num : Term::one();
}

}  // namespace causal
