#pragma once

// Recursive-descent reader and canonical printer for the surface syntax.
//
//   formula  := iff
//   iff      := implies ('<->' implies)*
//   implies  := or ('->' implies)?
//   or       := and ('|' and)*
//   and      := unary ('&' unary)*
//   unary    := '~' unary | '(' formula ')' | term rel term
//   rel      := '>=' | '>' | '==' | '=' | '<=' | '<' | '!='
//   term     := product (('+' | '-') product)*
//   product  := factor ('*' factor)*
//   factor   := '-' factor | number | 'P' '(' base ('|' base)? ')' | '(' term ')'
//   base     := bimp,  bimp := bor ('->' bimp)?,  bor := band ('|' band)*
//   band     := bunary ('&' bunary)*
//   bunary   := '~' bunary | '[' assignments ']' punary | '(' base ')' | atom | true | false
//
// Inside P(...) a top-level '|' is the conditioning bar, so disjunctions there
// must be parenthesized.

#include "causal/formula.hpp"
#include "causal/signature.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

namespace detail {

class Reader {
 public:
  Reader(std::string_view text, const Signature* sig) : text_(text), sig_(sig) {}

  Formula formula_to_end() {
    Formula f = iff();
    expect_end();
    return f;
  }
  Term term_to_end() {
    Term t = term();
    expect_end();
    return t;
  }
  Base base_to_end() {
    Base b = base(false);
    expect_end();
    return b;
  }

 private:
  std::string_view text_;
  const Signature* sig_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("syntax error at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + std::string(text_.substr(pos_, 8)) + "'");
  }
  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }
  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  bool peek_keyword(std::string_view kw) {
    if (!peek(kw)) return false;
    std::size_t end = pos_ + kw.size();
    return end >= text_.size() || !ident_char(text_[end]);
  }

  std::string identifier() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected a variable name");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string value_symbol() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    std::size_t body = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (body == pos_) fail("expected a value");
    return std::string(text_.substr(start, pos_ - start));
  }

  Atom checked(Atom a) const {
    if (sig_) {
      auto v = sig_->require(a.variable);
      sig_->require_value(v, a.value);
    }
    return a;
  }

  // ---- formulas ----------------------------------------------------------

  Formula iff() {
    Formula f = implies();
    while (accept("<->")) f = Formula::iff(f, implies());
    return f;
  }
  Formula implies() {
    Formula f = disj();
    if (!peek("<->") && accept("->")) return Formula::implies(f, implies());
    return f;
  }
  Formula disj() {
    Formula f = conj();
    while (accept("|")) f = Formula::disj(f, conj());
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (accept("&")) f = Formula::conj(f, unary());
    return f;
  }
  Formula unary() {
    if (accept("~")) return Formula::negate(unary());
    if (peek("(")) {
      std::size_t save = pos_;
      try {
        return comparison();
      } catch (const InputError&) {
        pos_ = save;
      }
      expect("(");
      Formula f = iff();
      expect(")");
      return f;
    }
    return comparison();
  }
  Formula comparison() {
    Term a = term();
    if (accept(">=")) return Formula::geq(a, term());
    if (accept("<=")) return Formula::geq(term(), a);
    if (accept("==")) return Formula::equiv(a, term());
    if (accept("!=")) return Formula::negate(Formula::equiv(a, term()));
    if (accept(">")) return Formula::gt(a, term());
    if (!peek("<->") && accept("<")) return Formula::gt(term(), a);
    if (accept("=")) return Formula::equiv(a, term());
    fail("expected a comparison operator");
  }

  // ---- terms ---------------------------------------------------------------

  Term term() {
    Term t = product();
    for (;;) {
      if (accept("+")) {
        t = Term::add(t, product());
      } else if (!peek("->") && accept("-")) {
        t = Term::add(t, Term::neg(product()));
      } else {
        return t;
      }
    }
  }
  Term product() {
    Term t = factor();
    while (accept("*")) t = Term::mul(t, factor());
    return t;
  }
  Term factor() {
    if (!peek("->") && accept("-")) return Term::neg(factor());
    skip_ws();
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) return number();
    if (peek_keyword("P")) {
      expect("P");
      expect("(");
      Base event = base(true);
      std::optional<Base> given;
      if (accept("|")) given = base(true);
      expect(")");
      return given ? Term::cond_prob(event, *given) : Term::prob(event);
    }
    if (accept("(")) {
      Term t = term();
      expect(")");
      return t;
    }
    fail("expected a term");
  }
  Term number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t from = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (from == pos_) fail("expected digits");
    };
    digits();
    if (pos_ < text_.size() && (text_[pos_] == '/' || text_[pos_] == '.')) {
      ++pos_;
      digits();
    }
    return Term::literal(parse_rational(text_.substr(start, pos_ - start)));
  }

  // ---- base formulas -----------------------------------------------------

  Base base(bool in_prob) {
    Base b = base_disj(in_prob);
    if (!peek("<->") && accept("->")) return Base::implies(b, base(in_prob));
    if (accept("<->")) {
      Base c = base(in_prob);
      return Base::conj(Base::implies(b, c), Base::implies(c, b));
    }
    return b;
  }
  Base base_disj(bool in_prob) {
    Base b = base_conj(in_prob);
    while (!in_prob && accept("|")) b = Base::disj(b, base_conj(in_prob));
    return b;
  }
  Base base_conj(bool in_prob) {
    Base b = base_unary(in_prob);
    while (accept("&")) b = Base::conj(b, base_unary(in_prob));
    return b;
  }
  Base base_unary(bool) {
    if (accept("~")) return Base::negate(base_unary(false));
    if (accept("[")) {
      std::vector<Atom> atoms;
      if (!accept("]")) {
        do {
          std::string var = identifier();
          expect("=");
          atoms.push_back(checked({var, value_symbol()}));
        } while (accept(",") || accept("&"));
        expect("]");
      }
      Intervention alpha = Intervention::from_atoms(atoms);
      if (peek("[")) fail("nested intervention brackets");
      return Base::cond(alpha, prop_unary());
    }
    if (accept("(")) {
      Base b = base(false);
      expect(")");
      return b;
    }
    return Base::prop(prop_leaf());
  }

  Prop prop_leaf() {
    if (peek_keyword("true")) {
      pos_ += 4;
      return Prop::top();
    }
    if (peek_keyword("false")) {
      pos_ += 5;
      return Prop::bottom();
    }
    std::string var = identifier();
    if (accept("!=")) return Prop::negate(Prop::atom(checked({var, value_symbol()})));
    expect("=");
    return Prop::atom(checked({var, value_symbol()}));
  }
  Prop prop_unary() {
    if (accept("~")) return Prop::negate(prop_unary());
    if (peek("[")) fail("nested intervention brackets");
    if (accept("(")) {
      Prop p = prop();
      expect(")");
      return p;
    }
    return prop_leaf();
  }
  Prop prop() {
    Prop p = prop_disj();
    if (!peek("<->") && accept("->")) return Prop::disj(Prop::negate(p), prop());
    return p;
  }
  Prop prop_disj() {
    Prop p = prop_conj();
    while (accept("|")) p = Prop::disj(p, prop_conj());
    return p;
  }
  Prop prop_conj() {
    Prop p = prop_unary();
    while (accept("&")) p = Prop::conj(p, prop_unary());
    return p;
  }
};

inline bool composite(const Prop& p) { return p.kind() == Prop::Kind::And; }

inline void print_prop(std::string& out, const Prop& p);

inline void print_prop_child(std::string& out, const Prop& p) {
  if (composite(p)) {
    out += '(';
    print_prop(out, p);
    out += ')';
  } else {
    print_prop(out, p);
  }
}

inline void print_prop(std::string& out, const Prop& p) {
  switch (p.kind()) {
    case Prop::Kind::True: out += "true"; break;
    case Prop::Kind::False: out += "false"; break;
    case Prop::Kind::Atom: out += p.atom().variable + "=" + p.atom().value; break;
    case Prop::Kind::Not:
      if (p.operand().kind() == Prop::Kind::Atom) {
        out += p.operand().atom().variable + "!=" + p.operand().atom().value;
      } else {
        out += '~';
        print_prop_child(out, p.operand());
      }
      break;
    case Prop::Kind::And:
      print_prop_child(out, p.lhs());
      out += " & ";
      print_prop_child(out, p.rhs());
      break;
  }
}

inline void print_intervention(std::string& out, const Intervention& alpha) {
  out += '[';
  bool first = true;
  for (const auto& [var, val] : alpha.assignments()) {
    if (!first) out += ", ";
    first = false;
    out += var + "=" + val;
  }
  out += ']';
}

inline void print_base(std::string& out, const Base& b);

inline void print_base_child(std::string& out, const Base& b) {
  bool paren = b.kind() == Base::Kind::And ||
               (b.kind() == Base::Kind::Cond && b.intervention().empty() && composite(b.consequent()));
  if (paren) out += '(';
  print_base(out, b);
  if (paren) out += ')';
}

inline void print_base(std::string& out, const Base& b) {
  switch (b.kind()) {
    case Base::Kind::Cond:
      if (b.intervention().empty()) {
        print_prop(out, b.consequent());
      } else {
        print_intervention(out, b.intervention());
        print_prop_child(out, b.consequent());
      }
      break;
    case Base::Kind::Not:
      out += '~';
      print_base_child(out, b.operand());
      break;
    case Base::Kind::And:
      print_base_child(out, b.lhs());
      out += " & ";
      print_base_child(out, b.rhs());
      break;
  }
}

inline void print_term(std::string& out, const Term& t);

inline void print_term_wrapped(std::string& out, const Term& t, bool wrap) {
  if (wrap) out += '(';
  print_term(out, t);
  if (wrap) out += ')';
}

inline void print_term(std::string& out, const Term& t) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Prob:
      out += "P(";
      print_base(out, t.event());
      out += ')';
      break;
    case K::CondProb:
      out += "P(";
      print_base(out, t.event());
      out += " | ";
      print_base(out, t.given());
      out += ')';
      break;
    case K::Literal:
      if (t.value() < 0) {
        out += "-(" + to_string(Rational(-t.value())) + ")";
      } else {
        out += to_string(t.value());
      }
      break;
    case K::Neg:
      out += '-';
      print_term_wrapped(out, t.operand(), t.operand().kind() == K::Add || t.operand().kind() == K::Mul);
      break;
    case K::Add:
      print_term(out, t.lhs());
      if (t.rhs().kind() == K::Neg) {
        out += " - ";
        Term r = t.rhs().operand();
        print_term_wrapped(out, r, r.kind() == K::Add);
      } else {
        out += " + ";
        print_term_wrapped(out, t.rhs(), t.rhs().kind() == K::Add);
      }
      break;
    case K::Mul:
      print_term_wrapped(out, t.lhs(), t.lhs().kind() == K::Add);
      out += " * ";
      print_term_wrapped(out, t.rhs(), t.rhs().kind() == K::Add || t.rhs().kind() == K::Mul);
      break;
  }
}

inline void print_formula(std::string& out, const Formula& f);

inline void print_formula_child(std::string& out, const Formula& f) {
  bool paren = !f.is_comparison() && f.kind() != Formula::Kind::Not;
  if (paren) out += '(';
  print_formula(out, f);
  if (paren) out += ')';
}

inline void print_formula(std::string& out, const Formula& f) {
  using K = Formula::Kind;
  auto binary = [&](const char* op) {
    print_formula_child(out, f.lhs());
    out += op;
    print_formula_child(out, f.rhs());
  };
  auto compare = [&](const char* op) {
    print_term(out, f.left());
    out += op;
    print_term(out, f.right());
  };
  switch (f.kind()) {
    case K::Geq: compare(" >= "); break;
    case K::Gt: compare(" > "); break;
    case K::Equiv: compare(" == "); break;
    case K::Not:
      out += '~';
      if (f.operand().kind() == K::Not) {
        print_formula(out, f.operand());
      } else {
        out += '(';
        print_formula(out, f.operand());
        out += ')';
      }
      break;
    case K::And: binary(" & "); break;
    case K::Or: binary(" | "); break;
    case K::Implies: binary(" -> "); break;
    case K::Iff: binary(" <-> "); break;
  }
}

}  // namespace detail

/// Parses an L_i formula; atoms are domain-checked when `sig` is given.
inline Formula parse_formula(std::string_view text, const Signature* sig = nullptr) {
  return detail::Reader(text, sig).formula_to_end();
}

inline Term parse_term(std::string_view text, const Signature* sig = nullptr) {
  return detail::Reader(text, sig).term_to_end();
}

/// Parses a base formula (the argument of P) where '|' is disjunction.
inline Base parse_base(std::string_view text, const Signature* sig = nullptr) {
  return detail::Reader(text, sig).base_to_end();
}

inline std::string to_string(const Prop& p) {
  std::string s;
  detail::print_prop(s, p);
  return s;
}
inline std::string to_string(const Intervention& a) {
  std::string s;
  detail::print_intervention(s, a);
  return s;
}
inline std::string to_string(const Base& b) {
  std::string s;
  detail::print_base(s, b);
  return s;
}
inline std::string to_string(const Term& t) {
  std::string s;
  detail::print_term(s, t);
  return s;
}
inline std::string to_string(const Formula& f) {
  std::string s;
  detail::print_formula(s, f);
  return s;
}

/// Checks every atom and intervention of `f` against `sig`.
inline void check_signature(const Formula& f, const Signature& sig) {
  f.for_each_base([&](const Base& b) {
    b.for_each_cond([&](const Intervention& alpha, const Prop& beta) {
      for (const auto& [var, val] : alpha.assignments()) sig.require_value(sig.require(var), val);
      beta.for_each_atom([&](const Atom& a) { sig.require_value(sig.require(a.variable), a.value); });
    });
  });
}

}  // namespace causal
