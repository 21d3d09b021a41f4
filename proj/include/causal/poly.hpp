#pragma once

// Sparse multivariate polynomials with rational coefficients in canonical
// expanded form, plus normalization of probability terms into them.

#include "causal/formula.hpp"
#include "causal/parser.hpp"
#include "causal/rational.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace causal {

/// Sorted multiset of unknown names; graded by degree, then lexicographic.
struct Monomial {
  std::vector<std::string> vars;

  std::size_t degree() const { return vars.size(); }
  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const {
    if (vars.size() != o.vars.size()) return vars.size() < o.vars.size();
    return vars < o.vars;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial m;
    m.vars.reserve(vars.size() + o.vars.size());
    std::merge(vars.begin(), vars.end(), o.vars.begin(), o.vars.end(), std::back_inserter(m.vars));
    return m;
  }
};

class Poly {
 public:
  using Terms = std::map<Monomial, Rational>;

  Poly() = default;
  Poly(const Rational& c) {  // NOLINT: constants convert implicitly
    if (c != 0) terms_[Monomial{}] = c;
  }
  Poly(int c) : Poly(Rational(c)) {}  // NOLINT

  static Poly var(const std::string& name) {
    Poly p;
    p.terms_[Monomial{{name}}] = 1;
    return p;
  }
  static Poly monomial(Monomial m, const Rational& c) {
    Poly p;
    if (c != 0) p.terms_[std::move(m)] = c;
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.vars.empty()); }
  Rational constant() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  std::size_t degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

  std::set<std::string> unknowns() const {
    std::set<std::string> out;
    for (const auto& [m, _] : terms_) out.insert(m.vars.begin(), m.vars.end());
    return out;
  }

  Poly operator-() const {
    Poly p = *this;
    for (auto& [_, c] : p.terms_) c = -c;
    return p;
  }
  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly p;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) p.add_term(ma * mb, ca * cb);
    return p;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  bool operator==(const Poly&) const = default;

  Poly pow(unsigned n) const {
    Poly r = 1, base = *this;
    while (n) {
      if (n & 1) r *= base;
      base *= base;
      n >>= 1;
    }
    return r;
  }

  Rational eval(const std::map<std::string, Rational>& at) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational v = c;
      for (const auto& x : m.vars) {
        auto it = at.find(x);
        if (it == at.end()) throw InputError("no value for unknown " + x);
        v *= it->second;
      }
      total += v;
    }
    return total;
  }

  double eval_double(const std::map<std::string, double>& at) const {
    double total = 0;
    for (const auto& [m, c] : terms_) {
      double v = c.get_d();
      for (const auto& x : m.vars) v *= at.at(x);
      total += v;
    }
    return total;
  }

  /// Replaces unknowns by polynomials; unknowns without an entry stay.
  Poly substitute(const std::map<std::string, Poly>& with) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      Poly t = c;
      Monomial kept;
      for (const auto& x : m.vars) {
        auto it = with.find(x);
        if (it == with.end())
          kept.vars.push_back(x);
        else
          t *= it->second;
      }
      out += t * Poly::monomial(kept, 1);
    }
    return out;
  }

  Poly derivative(const std::string& x) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      auto n = std::count(m.vars.begin(), m.vars.end(), x);
      if (!n) continue;
      Monomial rest = m;
      rest.vars.erase(std::find(rest.vars.begin(), rest.vars.end(), x));
      out.add_term(rest, c * static_cast<long>(n));
    }
    return out;
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Terms terms_;
};

namespace detail {

inline bool plain_symbol(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

inline std::string show_var(const std::string& s) { return plain_symbol(s) ? s : "{" + s + "}"; }

}  // namespace detail

/// Highest-degree terms first; unknowns that are not plain identifiers print as {name}.
inline std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = abs(c);
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    first = false;
    std::string factors;
    for (const auto& x : m.vars) factors += (factors.empty() ? "" : "*") + detail::show_var(x);
    if (factors.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += factors;
    else
      out += to_string(mag) + "*" + factors;
  }
  return out;
}

namespace detail {

// poly := sum ; sum := prod (('+'|'-') prod)* ; prod := unary ('*' unary)* ;
// unary := '-' unary | pow ; pow := atom ('^' nat)? ; atom := number | ident | '{' name '}' | '(' sum ')'
class PolyReader {
 public:
  explicit PolyReader(const std::string& s) : s_(s) {}

  Poly parse() {
    Poly p = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) return ++i_, true;
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("polynomial syntax error at column " + std::to_string(i_ + 1) + ": " + what);
  }
  Poly sum() {
    Poly p = prod();
    while (true) {
      if (eat('+'))
        p += prod();
      else if (eat('-'))
        p -= prod();
      else
        return p;
    }
  }
  Poly prod() {
    Poly p = unary();
    while (eat('*')) p *= unary();
    return p;
  }
  Poly unary() {
    if (eat('-')) return -unary();
    Poly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (start == i_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, i_ - start))));
    }
    return base;
  }
  Poly atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Poly p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '{') {
      std::size_t close = s_.find('}', i_);
      if (close == std::string::npos) fail("unterminated '{'");
      std::string name = s_.substr(i_ + 1, close - i_ - 1);
      i_ = close + 1;
      return Poly::var(name);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      std::string num = s_.substr(start, i_ - start);
      // a '/' directly followed by a digit continues the literal
      if (i_ + 1 < s_.size() && s_[i_] == '/' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        std::size_t d = ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        num += "/" + s_.substr(d, i_ - d);
      }
      return parse_rational(num);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '.')) ++i_;
      return Poly::var(s_.substr(start, i_ - start));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline Poly parse_poly(const std::string& text) { return detail::PolyReader(text).parse(); }

/// Unknown name used for P(e).
inline std::string prob_unknown(const Base& e) { return "P(" + to_string(e) + ")"; }

/// Canonical polynomial of a term; each P(e) becomes `leaf(e)`. Conditional sugar is rejected.
inline Poly normalize(const Term& t, const std::function<Poly(const Base&)>& leaf) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Prob: return leaf(t.event());
    case K::Add: return normalize(t.lhs(), leaf) + normalize(t.rhs(), leaf);
    case K::Mul: return normalize(t.lhs(), leaf) * normalize(t.rhs(), leaf);
    case K::Neg: return -normalize(t.operand(), leaf);
    case K::Literal: return t.value();
    case K::CondProb: throw InputError("conditional probability must be desugared before normalization");
  }
  return 0;
}

/// Default leaves: P(true) is the unit, P(false) is zero, any other P(e) is an unknown.
inline Poly normalize(const Term& t) {
  return normalize(t, [](const Base& e) -> Poly {
    if (e.is_top()) return 1;
    if (e.is_bottom()) return 0;
    return Poly::var(prob_unknown(e));
  });
}

}  // namespace causal
