#pragma once

// Abstract syntax for the intervention / propositional / conditional / full
// base languages and for the probabilistic term-inequality languages L1-L3.
//
// All nodes are immutable and shared; values are cheap to copy.

#include "causal/rational.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace causal {

struct Atom {
  std::string variable;
  std::string value;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

/// A conjunction of atoms from L_int, viewed as a partial map variable -> value.
/// The empty intervention is the tautology.
class Intervention {
 public:
  using Map = std::map<std::string, std::string>;

  Intervention() = default;
  explicit Intervention(Map assignments) : assign_(std::move(assignments)) {}

  /// Rejects two distinct values for one variable; repeating the same value is fine.
  static Intervention from_atoms(std::span<const Atom> atoms) {
    Map m;
    for (const auto& a : atoms) {
      auto [it, inserted] = m.emplace(a.variable, a.value);
      if (!inserted && it->second != a.value)
        throw InputError("duplicate assignment to " + a.variable + " in intervention");
    }
    return Intervention(std::move(m));
  }

  bool empty() const { return assign_.empty(); }
  std::size_t size() const { return assign_.size(); }
  const Map& assignments() const { return assign_; }

  bool contains(const std::string& var) const { return assign_.count(var) != 0; }
  const std::string* value_of(const std::string& var) const {
    auto it = assign_.find(var);
    return it == assign_.end() ? nullptr : &it->second;
  }

  /// Conjunction; throws when the two disagree on a variable.
  Intervention conjoin(const Intervention& other) const {
    Map m = assign_;
    for (const auto& [var, val] : other.assign_) {
      auto [it, inserted] = m.emplace(var, val);
      if (!inserted && it->second != val)
        throw InputError("duplicate assignment to " + var + " in intervention");
    }
    return Intervention(std::move(m));
  }

  /// `other` takes precedence on shared variables.
  Intervention overridden_by(const Intervention& other) const {
    Map m = assign_;
    for (const auto& [var, val] : other.assign_) m[var] = val;
    return Intervention(std::move(m));
  }

  std::vector<Atom> atoms() const {
    std::vector<Atom> out;
    for (const auto& [var, val] : assign_) out.push_back({var, val});
    return out;
  }

  auto operator<=>(const Intervention&) const = default;
  bool operator==(const Intervention&) const = default;

 private:
  Map assign_;
};

// ---------------------------------------------------------------------------
// L_prop

class Prop {
 public:
  enum class Kind { True, False, Atom, Not, And };

  static Prop top() { return Prop(std::make_shared<Node>(Node{Kind::True, {}, {}, {}})); }
  static Prop bottom() { return Prop(std::make_shared<Node>(Node{Kind::False, {}, {}, {}})); }
  static Prop atom(Atom a) { return Prop(std::make_shared<Node>(Node{Kind::Atom, std::move(a), {}, {}})); }
  static Prop atom(std::string var, std::string val) { return atom(Atom{std::move(var), std::move(val)}); }
  static Prop negate(Prop p) { return Prop(std::make_shared<Node>(Node{Kind::Not, {}, std::move(p.node_), {}})); }
  static Prop conj(Prop a, Prop b) {
    return Prop(std::make_shared<Node>(Node{Kind::And, {}, std::move(a.node_), std::move(b.node_)}));
  }
  /// Left-nested conjunction; the empty list is ⊤.
  static Prop conj_all(std::span<const Prop> parts) {
    if (parts.empty()) return top();
    Prop acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
  }
  static Prop conj_atoms(std::span<const Atom> atoms) {
    std::vector<Prop> parts;
    for (const auto& a : atoms) parts.push_back(atom(a));
    return conj_all(parts);
  }
  static Prop disj(Prop a, Prop b) { return negate(conj(negate(std::move(a)), negate(std::move(b)))); }

  Kind kind() const { return node_->kind; }
  const Atom& atom() const { return node_->atom; }
  Prop operand() const { return Prop(node_->lhs); }
  Prop lhs() const { return Prop(node_->lhs); }
  Prop rhs() const { return Prop(node_->rhs); }

  bool is_top() const { return kind() == Kind::True; }

  friend bool operator==(const Prop& a, const Prop& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::True:
      case Kind::False: return true;
      case Kind::Atom: return a.atom() == b.atom();
      case Kind::Not: return a.operand() == b.operand();
      case Kind::And: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return false;
  }

  /// Truth under a total assignment given as a lookup `var -> value`.
  template <class Lookup>
  bool eval(const Lookup& value_of) const {
    switch (kind()) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Atom: return value_of(atom().variable) == atom().value;
      case Kind::Not: return !operand().eval(value_of);
      case Kind::And: return lhs().eval(value_of) && rhs().eval(value_of);
    }
    return false;
  }

  template <class Fn>
  void for_each_atom(Fn&& fn) const {
    switch (kind()) {
      case Kind::Atom: fn(atom()); break;
      case Kind::Not: operand().for_each_atom(fn); break;
      case Kind::And:
        lhs().for_each_atom(fn);
        rhs().for_each_atom(fn);
        break;
      default: break;
    }
  }

 private:
  struct Node {
    Kind kind;
    Atom atom;
    std::shared_ptr<const Node> lhs, rhs;
  };
  explicit Prop(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Base formulas: L_cond leaves under boolean structure (L_full).
//
// Canonical form: a Not/And node only exists when its conditional leaves carry
// at least two distinct interventions. Anything else is folded into a single
// conditional [α]β, so the L_prop / L_cond / L_full fragment of a node is a
// syntactic property.

class Base {
 public:
  enum class Kind { Cond, Not, And };

  static Base cond(Intervention alpha, Prop beta) {
    return Base(std::make_shared<Node>(Node{Kind::Cond, std::move(alpha), std::move(beta), {}, {}}));
  }
  /// Shorthand P(β) = P([⊤]β).
  static Base prop(Prop beta) { return cond(Intervention{}, std::move(beta)); }
  static Base top() { return prop(Prop::top()); }
  static Base bottom() { return prop(Prop::bottom()); }

  static Base negate(const Base& b) {
    if (b.kind() == Kind::Cond) return cond(b.intervention(), Prop::negate(b.consequent()));
    return Base(std::make_shared<Node>(Node{Kind::Not, {}, Prop::top(), b.node_, {}}));
  }
  static Base conj(const Base& a, const Base& b) {
    if (a.kind() == Kind::Cond && b.kind() == Kind::Cond && a.intervention() == b.intervention())
      return cond(a.intervention(), Prop::conj(a.consequent(), b.consequent()));
    return Base(std::make_shared<Node>(Node{Kind::And, {}, Prop::top(), a.node_, b.node_}));
  }
  static Base disj(const Base& a, const Base& b) { return negate(conj(negate(a), negate(b))); }
  static Base implies(const Base& a, const Base& b) { return negate(conj(a, negate(b))); }
  static Base conj_all(std::span<const Base> parts) {
    if (parts.empty()) return top();
    Base acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
  }

  Kind kind() const { return node_->kind; }
  const Intervention& intervention() const { return node_->alpha; }
  const Prop& consequent() const { return node_->beta; }
  Base operand() const { return Base(node_->lhs); }
  Base lhs() const { return Base(node_->lhs); }
  Base rhs() const { return Base(node_->rhs); }

  bool is_top() const { return kind() == Kind::Cond && intervention().empty() && consequent().is_top(); }
  bool is_bottom() const {
    return kind() == Kind::Cond && intervention().empty() && consequent().kind() == Prop::Kind::False;
  }

  /// 1 for [⊤]β, 2 for [α]β, 3 for boolean combinations of conditionals.
  int level() const {
    if (kind() != Kind::Cond) return 3;
    return intervention().empty() ? 1 : 2;
  }

  friend bool operator==(const Base& a, const Base& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Cond: return a.intervention() == b.intervention() && a.consequent() == b.consequent();
      case Kind::Not: return a.operand() == b.operand();
      case Kind::And: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return false;
  }

  /// Visits every conditional leaf [α]β.
  template <class Fn>
  void for_each_cond(Fn&& fn) const {
    switch (kind()) {
      case Kind::Cond: fn(intervention(), consequent()); break;
      case Kind::Not: operand().for_each_cond(fn); break;
      case Kind::And:
        lhs().for_each_cond(fn);
        rhs().for_each_cond(fn);
        break;
    }
  }

  /// Truth given, for each intervention, a total outcome lookup.
  template <class OutcomeFor>
  bool eval(const OutcomeFor& outcome_for) const {
    switch (kind()) {
      case Kind::Cond: return consequent().eval(outcome_for(intervention()));
      case Kind::Not: return !operand().eval(outcome_for);
      case Kind::And: return lhs().eval(outcome_for) && rhs().eval(outcome_for);
    }
    return false;
  }

 private:
  struct Node {
    Kind kind;
    Intervention alpha;
    Prop beta;
    std::shared_ptr<const Node> lhs, rhs;
  };
  explicit Base(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Polynomial terms over P(ε). `Literal` and `CondProb` are surface sugar that
// desugar() eliminates.

class Term {
 public:
  enum class Kind { Prob, Add, Mul, Neg, Literal, CondProb };

  static Term prob(Base e) { return Term(make(Kind::Prob, std::move(e), {}, {}, {}, {})); }
  static Term add(const Term& a, const Term& b) { return Term(make(Kind::Add, {}, {}, a.node_, b.node_, {})); }
  static Term mul(const Term& a, const Term& b) { return Term(make(Kind::Mul, {}, {}, a.node_, b.node_, {})); }
  static Term neg(const Term& a) { return Term(make(Kind::Neg, {}, {}, a.node_, {}, {})); }
  static Term sub(const Term& a, const Term& b) { return add(a, neg(b)); }
  static Term literal(Rational q) { return Term(make(Kind::Literal, {}, {}, {}, {}, std::move(q))); }
  static Term cond_prob(Base event, Base given) {
    return Term(make(Kind::CondProb, std::move(event), std::move(given), {}, {}, {}));
  }
  /// The constant terms 0 and 1 as probabilities of false and true.
  static Term zero() { return prob(Base::bottom()); }
  static Term one() { return prob(Base::top()); }
  static Term sum(std::span<const Term> parts) {
    if (parts.empty()) return zero();
    Term acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = add(acc, parts[i]);
    return acc;
  }
  static Term product(std::span<const Term> parts) {
    if (parts.empty()) return one();
    Term acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = mul(acc, parts[i]);
    return acc;
  }

  Kind kind() const { return node_->kind; }
  const Base& event() const { return node_->event; }
  const Base& given() const { return node_->given; }
  Term lhs() const { return Term(node_->lhs); }
  Term rhs() const { return Term(node_->rhs); }
  Term operand() const { return Term(node_->lhs); }
  const Rational& value() const { return node_->value; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Prob: return a.event() == b.event();
      case Kind::Add:
      case Kind::Mul: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
      case Kind::Neg: return a.operand() == b.operand();
      case Kind::Literal: return a.value() == b.value();
      case Kind::CondProb: return a.event() == b.event() && a.given() == b.given();
    }
    return false;
  }

  bool is_sugar_free() const {
    switch (kind()) {
      case Kind::Prob: return true;
      case Kind::Add:
      case Kind::Mul: return lhs().is_sugar_free() && rhs().is_sugar_free();
      case Kind::Neg: return operand().is_sugar_free();
      default: return false;
    }
  }

  /// Visits every base formula under a probability operator, including both
  /// sides of conditional-probability sugar.
  template <class Fn>
  void for_each_base(Fn&& fn) const {
    switch (kind()) {
      case Kind::Prob: fn(event()); break;
      case Kind::CondProb:
        fn(event());
        fn(given());
        break;
      case Kind::Add:
      case Kind::Mul:
        lhs().for_each_base(fn);
        rhs().for_each_base(fn);
        break;
      case Kind::Neg: operand().for_each_base(fn); break;
      case Kind::Literal: break;
    }
  }

  int degree() const {
    switch (kind()) {
      case Kind::Prob: return 1;
      case Kind::Literal: return 0;
      case Kind::CondProb: return 1;
      case Kind::Add: return std::max(lhs().degree(), rhs().degree());
      case Kind::Mul: return lhs().degree() + rhs().degree();
      case Kind::Neg: return operand().degree();
    }
    return 0;
  }

 private:
  struct Node {
    Kind kind;
    Base event = Base::top();
    Base given = Base::top();
    std::shared_ptr<const Node> lhs, rhs;
    Rational value;
  };
  static std::shared_ptr<const Node> make(Kind k, std::optional<Base> e, std::optional<Base> g,
                                          std::shared_ptr<const Node> l, std::shared_ptr<const Node> r,
                                          Rational v) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    if (e) n->event = std::move(*e);
    if (g) n->given = std::move(*g);
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->value = std::move(v);
    return n;
  }
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// L_i formulas. Geq/Not/And are primitive; the rest is sugar.

class Formula {
 public:
  enum class Kind { Geq, Not, And, Or, Implies, Iff, Equiv, Gt };

  static Formula geq(const Term& a, const Term& b) { return Formula(make(Kind::Geq, a, b, {}, {})); }
  static Formula leq(const Term& a, const Term& b) { return geq(b, a); }
  static Formula negate(const Formula& f) { return Formula(make(Kind::Not, {}, {}, f.node_, {})); }
  static Formula conj(const Formula& a, const Formula& b) { return Formula(make(Kind::And, {}, {}, a.node_, b.node_)); }
  static Formula disj(const Formula& a, const Formula& b) { return Formula(make(Kind::Or, {}, {}, a.node_, b.node_)); }
  static Formula implies(const Formula& a, const Formula& b) {
    return Formula(make(Kind::Implies, {}, {}, a.node_, b.node_));
  }
  static Formula iff(const Formula& a, const Formula& b) { return Formula(make(Kind::Iff, {}, {}, a.node_, b.node_)); }
  static Formula equiv(const Term& a, const Term& b) { return Formula(make(Kind::Equiv, a, b, {}, {})); }
  static Formula gt(const Term& a, const Term& b) { return Formula(make(Kind::Gt, a, b, {}, {})); }
  static Formula conj_all(std::span<const Formula> parts) {
    if (parts.empty()) return geq(Term::one(), Term::one());
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
  }
  static Formula disj_all(std::span<const Formula> parts) {
    if (parts.empty()) return negate(geq(Term::one(), Term::one()));
    Formula acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
    return acc;
  }

  Kind kind() const { return node_->kind; }
  bool is_comparison() const { return kind() == Kind::Geq || kind() == Kind::Equiv || kind() == Kind::Gt; }
  const Term& left() const { return *node_->left; }
  const Term& right() const { return *node_->right; }
  Formula operand() const { return Formula(node_->lhs); }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.is_comparison()) return a.left() == b.left() && a.right() == b.right();
    if (a.kind() == Kind::Not) return a.operand() == b.operand();
    return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }

  bool is_sugar_free() const {
    switch (kind()) {
      case Kind::Geq: return left().is_sugar_free() && right().is_sugar_free();
      case Kind::Not: return operand().is_sugar_free();
      case Kind::And: return lhs().is_sugar_free() && rhs().is_sugar_free();
      default: return false;
    }
  }

  template <class Fn>
  void for_each_term(Fn&& fn) const {
    if (is_comparison()) {
      fn(left());
      fn(right());
    } else if (kind() == Kind::Not) {
      operand().for_each_term(fn);
    } else {
      lhs().for_each_term(fn);
      rhs().for_each_term(fn);
    }
  }

  template <class Fn>
  void for_each_base(Fn&& fn) const {
    for_each_term([&](const Term& t) { t.for_each_base(fn); });
  }

 private:
  struct Node {
    Kind kind;
    std::optional<Term> left, right;
    std::shared_ptr<const Node> lhs, rhs;
  };
  static std::shared_ptr<const Node> make(Kind k, std::optional<Term> a, std::optional<Term> b,
                                          std::shared_ptr<const Node> l, std::shared_ptr<const Node> r) {
    return std::make_shared<Node>(Node{k, std::move(a), std::move(b), std::move(l), std::move(r)});
  }
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Queries shared by several modules.

/// Minimal i such that every probability leaf lies in L_i^base.
inline int level(const Formula& f) {
  int lvl = 1;
  f.for_each_term([&](const Term& t) {
    std::vector<Term> stack{t};
    while (!stack.empty()) {
      Term cur = stack.back();
      stack.pop_back();
      switch (cur.kind()) {
        case Term::Kind::Prob: lvl = std::max(lvl, cur.event().level()); break;
        case Term::Kind::CondProb:
          lvl = std::max(lvl, Base::conj(cur.event(), cur.given()).level());
          lvl = std::max(lvl, cur.given().level());
          break;
        case Term::Kind::Add:
        case Term::Kind::Mul:
          stack.push_back(cur.lhs());
          stack.push_back(cur.rhs());
          break;
        case Term::Kind::Neg: stack.push_back(cur.operand()); break;
        case Term::Kind::Literal: break;
      }
    }
  });
  return lvl;
}

/// Variables and the values explicitly mentioned for them (atoms and interventions).
struct Vocabulary {
  std::map<std::string, std::set<std::string>> values;

  void add(const Atom& a) { values[a.variable].insert(a.value); }
  void add(const Intervention& i) {
    for (const auto& [var, val] : i.assignments()) values[var].insert(val);
  }
  void add(const Prop& p) {
    p.for_each_atom([&](const Atom& a) { add(a); });
  }
  void add(const Base& b) {
    b.for_each_cond([&](const Intervention& i, const Prop& p) {
      add(i);
      add(p);
    });
  }
  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& [v, _] : values) out.push_back(v);
    return out;
  }
};

inline Vocabulary vocabulary(const Formula& f) {
  Vocabulary voc;
  f.for_each_base([&](const Base& b) { voc.add(b); });
  return voc;
}

/// Distinct base formulas under P(·), in first-occurrence order.
inline std::vector<Base> base_formulas(const Formula& f) {
  std::vector<Base> out;
  f.for_each_base([&](const Base& b) {
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  });
  return out;
}

/// Distinct interventions of the conditional leaves, in first-occurrence order.
inline std::vector<Intervention> interventions_of(const Base& b) {
  std::vector<Intervention> out;
  b.for_each_cond([&](const Intervention& i, const Prop&) {
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  });
  return out;
}

}  // namespace causal
