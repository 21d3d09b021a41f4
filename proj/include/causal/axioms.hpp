#pragma once

// Axiom schemata: generators for every schema of the three calculi and a
// matcher that recognizes instances. Matching guesses the parameters from the
// formula, regenerates the instance and compares desugared forms, so a match
// is always exact up to surface sugar.

#include "causal/baselogic.hpp"
#include "causal/desugar.hpp"
#include "causal/parser.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causal {

enum class AxSystem { AX1 = 1, AX2 = 2, AX3 = 3 };

inline const char* system_name(AxSystem s) {
  switch (s) {
    case AxSystem::AX1: return "AX1";
    case AxSystem::AX2: return "AX2";
    case AxSystem::AX3: return "AX3";
  }
  return "?";
}

inline AxSystem parse_system(const std::string& s) {
  if (s == "AX1") return AxSystem::AX1;
  if (s == "AX2") return AxSystem::AX2;
  if (s == "AX3") return AxSystem::AX3;
  throw InputError("unknown axiom system " + s);
}

inline const std::vector<std::string>& poly_schemata() {
  static const std::vector<std::string> names = {"OrdTot",  "OrdTrans", "NonDegen", "AddComm",  "AddAssoc", "Zero",
                                                 "AddOrd",  "MulOrdG",  "MulOrdL",  "MulComm",  "MulAssoc", "One",
                                                 "MulDist", "ZeroMul",  "NoZeroDiv", "Neg"};
  return names;
}

inline const std::vector<std::string>& derived_schemata() {
  static const std::vector<std::string> names = {"AddPos", "MulPos", "NegAdd", "NegMul", "NegNeg", "OrdSq"};
  return names;
}

/// Every schema name the matcher knows.
inline std::vector<std::string> all_schemata() {
  std::vector<std::string> out = {"Def",  "Bool",  "NonNeg",    "Add",     "Dist",
                                  "ProbRec", "Add2", "ProbRec2", "IncExc"};
  out.insert(out.end(), poly_schemata().begin(), poly_schemata().end());
  out.insert(out.end(), derived_schemata().begin(), derived_schemata().end());
  return out;
}

/// Is the schema part of the given system? Derived Poly principles belong to all three;
/// AX3 also admits the level-2 variants, which it derives.
inline bool admissible(const std::string& schema, AxSystem sys) {
  if (schema == "Add" || schema == "ProbRec") return sys != AxSystem::AX2;
  if (schema == "Add2" || schema == "ProbRec2" || schema == "IncExc") return sys != AxSystem::AX1;
  auto all = all_schemata();
  return std::find(all.begin(), all.end(), schema) != all.end();
}

struct ProbRecStep {
  Intervention alpha;
  std::string var, value, alt, star;
};

struct SchemaLimits {
  std::size_t max_conjuncts = 200000;
  std::size_t max_bool_atoms = 20;
};

namespace schema {

inline Term zero() { return Term::literal(0); }
inline Term one() { return Term::literal(1); }
inline Formula eq(const Term& a, const Term& b) { return Formula::equiv(a, b); }
inline Formula geq(const Term& a, const Term& b) { return Formula::geq(a, b); }
inline Formula imp(const Formula& a, const Formula& b) { return Formula::implies(a, b); }
inline Formula conj(const Formula& a, const Formula& b) { return Formula::conj(a, b); }
inline Term P(const Base& e) { return Term::prob(e); }

inline Intervention assign(const std::vector<Atom>& atoms) { return Intervention::from_atoms(atoms); }

inline Formula nonneg(const Base& e) { return desugar(geq(P(e), zero())); }

inline Formula add(const Base& e, const Base& z) {
  return desugar(eq(Term::add(P(Base::conj(e, z)), P(Base::conj(e, Base::negate(z)))), P(e)));
}

inline Formula add2(const Intervention& a, const Prop& b, const Prop& g) {
  return desugar(eq(Term::add(P(Base::cond(a, Prop::conj(b, g))), P(Base::cond(a, Prop::conj(b, Prop::negate(g))))),
                    P(Base::cond(a, b))));
}

inline Formula dist(const Base& e, const Base& z, const Signature* sig = nullptr, const DeltaLimits& lim = {}) {
  auto check = base_valid(e, z, sig, lim);
  if (!check.holds)
    throw InputError("Dist needs equivalent base formulas; they differ at " + check.describe());
  return desugar(eq(P(e), P(z)));
}

/// The base formula of Def; its probability instance is P(def) ≡ 1.
inline Base def_base(const Intervention& a, const std::string& var, const std::vector<std::string>& values) {
  if (values.empty()) throw InputError("Def needs at least one value");
  std::vector<Base> parts;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      parts.push_back(Base::negate(Base::cond(a, Prop::conj(Prop::atom(var, values[i]), Prop::atom(var, values[j])))));
  Base some = Base::cond(a, Prop::atom(var, values[0]));
  for (std::size_t i = 1; i < values.size(); ++i) some = Base::disj(some, Base::cond(a, Prop::atom(var, values[i])));
  parts.push_back(some);
  return Base::conj_all(parts);
}

inline Formula def(const Intervention& a, const std::string& var, const std::vector<std::string>& values) {
  return desugar(eq(P(def_base(a, var, values)), one()));
}

inline Base prob_rec_event(const ProbRecStep& s, const ProbRecStep& next) {
  Intervention on = s.alpha.conjoin(Intervention(Intervention::Map{{s.var, s.value}}));
  Intervention off = s.alpha.conjoin(Intervention(Intervention::Map{{s.var, s.alt}}));
  Prop hit = Prop::atom(next.var, next.star);
  return Base::conj(Base::cond(on, hit), Base::cond(off, Prop::negate(hit)));
}

inline Formula prob_rec(const std::vector<ProbRecStep>& steps) {
  if (steps.size() < 2) throw InputError("ProbRec needs at least two steps");
  if (steps.front().var == steps.back().var) throw InputError("ProbRec needs X1 different from Xn");
  for (const auto& s : steps) {
    if (s.value == s.alt) throw InputError("ProbRec needs two distinct values of " + s.var);
    if (s.alpha.contains(s.var)) throw InputError("ProbRec intervention already sets " + s.var);
  }
  std::size_t n = steps.size();
  std::vector<Formula> ante;
  for (std::size_t i = 0; i + 1 < n; ++i)
    ante.push_back(Formula::negate(eq(P(prob_rec_event(steps[i], steps[i + 1])), zero())));
  Formula cons = eq(P(prob_rec_event(steps[n - 1], steps[0])), zero());
  return desugar(imp(Formula::conj_all(ante), cons));
}

using Domains = std::vector<std::pair<std::string, std::vector<std::string>>>;

inline std::vector<std::vector<std::string>> value_tuples(const Domains& w, unsigned mask, std::size_t cap) {
  std::vector<std::vector<std::string>> out{{}};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!((mask >> i) & 1)) continue;
    std::vector<std::vector<std::string>> next;
    for (const auto& t : out)
      for (const auto& v : w[i].second) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
        if (next.size() > cap) throw GuardError("schema instance too large");
      }
    out = std::move(next);
  }
  return out;
}

inline std::vector<Atom> atoms_of(const Domains& w, unsigned mask, const std::vector<std::string>& vals) {
  std::vector<Atom> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    if ((mask >> i) & 1) out.push_back({w[i].first, vals[k++]});
  return out;
}

/// Disjunction over orders of W of the invariance conjunctions; empty Y or Z
/// and X overlapping Y or Z are left out.
inline Formula prob_rec2(Domains w, const SchemaLimits& lim = {}) {
  std::sort(w.begin(), w.end());
  std::size_t n = w.size();
  if (n < 2 || n > 6) throw GuardError("ProbRec2 supports 2 to 6 variables");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Formula> disjuncts;
  std::size_t total = 0;
  unsigned full = (1u << n) - 1;
  do {
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;
    std::vector<Formula> conjuncts;
    for (unsigned y = 1; y <= full; ++y)
      for (unsigned z = 1; z <= full; ++z) {
        if (y & z) continue;
        bool before = true;
        for (std::size_t a = 0; a < n && before; ++a)
          for (std::size_t b = 0; b < n && before; ++b)
            if (((y >> a) & 1) && ((z >> b) & 1) && rank[a] > rank[b]) before = false;
        if (!before) continue;
        for (unsigned x = 0; x <= full; ++x) {
          if (x & (y | z)) continue;
          for (const auto& xv : value_tuples(w, x, lim.max_conjuncts))
            for (const auto& yv : value_tuples(w, y, lim.max_conjuncts))
              for (const auto& zv : value_tuples(w, z, lim.max_conjuncts)) {
                if (++total > lim.max_conjuncts) throw GuardError("ProbRec2 instance too large");
                Intervention xi = assign(atoms_of(w, x, xv));
                Prop yp = Prop::conj_atoms(atoms_of(w, y, yv));
                Intervention xz = xi.conjoin(assign(atoms_of(w, z, zv)));
                conjuncts.push_back(eq(P(Base::cond(xi, yp)), P(Base::cond(xz, yp))));
              }
        }
      }
    disjuncts.push_back(Formula::conj_all(conjuncts));
  } while (std::next_permutation(order.begin(), order.end()));
  return desugar(Formula::disj_all(disjuncts));
}

/// One conjunct per Y ⊆ W: Σ_{X ⊆ W∖Y} (-1)^|X| P([w on W∖(X∪Y)] w on X∪Y) ≥ 0.
inline Formula inc_exc(std::vector<Atom> w) {
  std::sort(w.begin(), w.end(), [](const Atom& a, const Atom& b) { return a.variable < b.variable; });
  std::size_t n = w.size();
  if (n == 0 || n > 8) throw GuardError("IncExc supports 1 to 8 variables");
  for (std::size_t i = 1; i < n; ++i)
    if (w[i].variable == w[i - 1].variable) throw InputError("IncExc assigns " + w[i].variable + " twice");
  unsigned full = (1u << n) - 1;
  auto part = [&](unsigned mask) {
    std::vector<Atom> out;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) out.push_back(w[i]);
    return out;
  };
  std::vector<Formula> conjuncts;
  for (unsigned y = 0; y <= full; ++y) {
    std::optional<Term> sum;
    for (unsigned x = 0; x <= full; ++x) {
      if (x & y) continue;
      unsigned shown = x | y;
      Term t = P(Base::cond(assign(part(full & ~shown)), Prop::conj_atoms(part(shown))));
      if (std::popcount(x) % 2) t = Term::neg(t);
      sum = sum ? Term::add(*sum, t) : t;
    }
    conjuncts.push_back(geq(*sum, zero()));
  }
  return desugar(Formula::conj_all(conjuncts));
}

/// The Poly and derived schemata over term metavariables t1, t2, t3.
inline Formula poly(const std::string& name, const std::vector<Term>& t) {
  auto need = [&](std::size_t k) {
    if (t.size() < k) throw InputError(name + " needs " + std::to_string(k) + " terms");
  };
  using F = Formula;
  using T = Term;
  F f = F::geq(one(), one());
  if (name == "OrdTot") need(2), f = F::disj(geq(t[0], t[1]), geq(t[1], t[0]));
  else if (name == "OrdTrans") need(3), f = imp(conj(geq(t[0], t[1]), geq(t[1], t[2])), geq(t[0], t[2]));
  else if (name == "NonDegen") f = F::negate(eq(zero(), one()));
  else if (name == "AddComm") need(2), f = eq(T::add(t[0], t[1]), T::add(t[1], t[0]));
  else if (name == "AddAssoc") need(3), f = eq(T::add(T::add(t[0], t[1]), t[2]), T::add(t[0], T::add(t[1], t[2])));
  else if (name == "Zero") need(1), f = eq(T::add(t[0], zero()), t[0]);
  else if (name == "AddOrd") need(3), f = imp(geq(t[0], t[1]), geq(T::add(t[0], t[2]), T::add(t[1], t[2])));
  else if (name == "MulOrdG")
    need(3), f = imp(conj(geq(t[0], t[1]), geq(t[2], zero())), geq(T::mul(t[0], t[2]), T::mul(t[1], t[2])));
  else if (name == "MulOrdL")
    need(3), f = imp(conj(geq(t[0], t[1]), F::leq(t[2], zero())), F::leq(T::mul(t[0], t[2]), T::mul(t[1], t[2])));
  else if (name == "MulComm") need(2), f = eq(T::mul(t[0], t[1]), T::mul(t[1], t[0]));
  else if (name == "MulAssoc") need(3), f = eq(T::mul(T::mul(t[0], t[1]), t[2]), T::mul(t[0], T::mul(t[1], t[2])));
  else if (name == "One") need(1), f = eq(T::mul(t[0], one()), t[0]);
  else if (name == "MulDist")
    need(3), f = eq(T::mul(t[0], T::add(t[1], t[2])), T::add(T::mul(t[0], t[1]), T::mul(t[0], t[2])));
  else if (name == "ZeroMul") need(1), f = eq(T::mul(t[0], zero()), zero());
  else if (name == "NoZeroDiv")
    need(2), f = imp(eq(T::mul(t[0], t[1]), zero()), F::disj(eq(t[0], zero()), eq(t[1], zero())));
  else if (name == "Neg") need(1), f = eq(T::add(t[0], T::neg(t[0])), zero());
  else if (name == "AddPos")
    need(2), f = imp(conj(geq(t[0], zero()), F::gt(t[1], zero())), F::gt(T::add(t[0], t[1]), zero()));
  else if (name == "MulPos")
    need(2), f = imp(conj(F::gt(t[0], zero()), F::gt(t[1], zero())), F::gt(T::mul(t[0], t[1]), zero()));
  else if (name == "NegAdd") need(2), f = eq(T::neg(T::add(t[0], t[1])), T::add(T::neg(t[0]), T::neg(t[1])));
  else if (name == "NegMul") need(2), f = eq(T::neg(T::mul(t[0], t[1])), T::mul(T::neg(t[0]), t[1]));
  else if (name == "NegNeg") need(1), f = eq(T::neg(T::neg(t[0])), t[0]);
  else if (name == "OrdSq") need(1), f = geq(T::mul(t[0], t[0]), zero());
  else throw InputError("unknown polynomial schema " + name);
  return desugar(f);
}

}  // namespace schema

/// Named parameters of a schema instance, as text.
using SchemaParams = std::map<std::string, std::string>;

namespace detail {

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& x : out) {
    auto b = x.find_first_not_of(" \t");
    x = b == std::string::npos ? "" : x.substr(b, x.find_last_not_of(" \t") - b + 1);
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

inline std::vector<Atom> parse_atoms(std::string s) {
  std::erase(s, '[');
  std::erase(s, ']');
  std::vector<Atom> out;
  for (const auto& part : split_list(s, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError("expected VAR=value in '" + part + "'");
    out.push_back({split_list(part.substr(0, eq), ',').at(0), split_list(part.substr(eq + 1), ',').at(0)});
  }
  return out;
}

inline std::string show_atoms(const Intervention& a) {
  std::string out;
  for (const auto& [var, val] : a.assignments()) out += (out.empty() ? "" : ", ") + var + "=" + val;
  return out;
}

inline const std::string& param(const SchemaParams& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw InputError("missing schema parameter '" + key + "'");
  return it->second;
}

// "X:0,1; Y:0,1,2" or "X,Y" (domains from the signature, else binary)
inline schema::Domains parse_domains(const std::string& s, const Signature* sig) {
  schema::Domains out;
  if (s.find(':') == std::string::npos) {
    for (const auto& v : split_list(s, ',')) {
      if (sig)
        out.push_back({v, sig->domains[sig->require(v)]});
      else
        out.push_back({v, {"0", "1"}});
    }
    return out;
  }
  for (const auto& part : split_list(s, ';')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw InputError("expected VAR:values in '" + part + "'");
    out.push_back({split_list(part.substr(0, colon), ',').at(0), split_list(part.substr(colon + 1), ',')});
  }
  return out;
}

}  // namespace detail

/// Builds the desugared instance of a schema from textual parameters:
/// e, z (base formulas); a (intervention "X=1, Y=0"); b, g (propositions);
/// var, values; W ("X:0,1; Y:0,1" or "X,Y"); w ("X=1, Y=1"); t1..t3 (terms);
/// steps ("X 1 0 1 | Z=0 ; Y 1 0 1", each `VAR x x' x* [| alpha]`).
inline Formula generate_schema(const std::string& name, const SchemaParams& p, const Signature* sig = nullptr,
                               const SchemaLimits& lim = {}) {
  using detail::param;
  auto base = [&](const char* k) { return parse_base(param(p, k), sig); };
  auto inter = [&](const char* k) {
    auto it = p.find(k);
    return it == p.end() ? Intervention{} : Intervention::from_atoms(detail::parse_atoms(it->second));
  };
  auto prop = [&](const char* k) {
    Base b = parse_base(param(p, k), sig);
    if (b.kind() != Base::Kind::Cond || !b.intervention().empty()) throw InputError(std::string(k) + " must be propositional");
    return b.consequent();
  };
  if (name == "NonNeg") return schema::nonneg(base("e"));
  if (name == "Add") return schema::add(base("e"), base("z"));
  if (name == "Add2") return schema::add2(inter("a"), prop("b"), prop("g"));
  if (name == "Dist") return schema::dist(base("e"), base("z"), sig);
  if (name == "Def") {
    // the listed values must be the whole domain: the signature's, else the default {0,1} plus mentions
    const auto& var = param(p, "var");
    std::vector<std::string> values;
    if (p.count("values"))
      values = detail::split_list(p.at("values"), ',');
    else if (sig)
      values = sig->domains[sig->require(var)];
    else
      values = {"0", "1"};
    std::set<std::string> listed(values.begin(), values.end());
    if (listed.size() != values.size()) throw InputError("Def lists a value twice");
    if (sig) {
      const auto& dom = sig->domains[sig->require(var)];
      if (listed != std::set<std::string>(dom.begin(), dom.end()))
        throw InputError("Def must list the whole domain of " + var);
    } else if (!listed.count("0") || !listed.count("1")) {
      throw InputError("Def without a signature must list 0 and 1");
    }
    return schema::def(inter("a"), var, values);
  }
  if (name == "ProbRec") {
    std::vector<ProbRecStep> steps;
    for (const auto& s : detail::split_list(param(p, "steps"), ';')) {
      auto bar = s.find('|');
      auto fields = detail::split_list(s.substr(0, bar), ' ');
      fields.erase(std::remove(fields.begin(), fields.end(), ""), fields.end());
      if (fields.size() != 4) throw InputError("ProbRec step needs VAR x x' x*: '" + s + "'");
      ProbRecStep st{{}, fields[0], fields[1], fields[2], fields[3]};
      if (bar != std::string::npos) st.alpha = Intervention::from_atoms(detail::parse_atoms(s.substr(bar + 1)));
      steps.push_back(st);
    }
    return schema::prob_rec(steps);
  }
  if (name == "ProbRec2") return schema::prob_rec2(detail::parse_domains(param(p, "W"), sig), lim);
  if (name == "IncExc") return schema::inc_exc(detail::parse_atoms(param(p, "w")));
  std::vector<Term> ts;
  for (const char* k : {"t1", "t2", "t3"})
    if (p.count(k)) ts.push_back(parse_term(p.at(k), sig));
  return schema::poly(name, ts);
}

struct AxiomMatch {
  std::string schema;
  SchemaParams params;
};

namespace detail {

// Views that see through desugaring.
inline std::optional<std::pair<Term, Term>> as_geq(const Formula& f) {
  if (f.kind() == Formula::Kind::Geq) return std::make_pair(f.left(), f.right());
  return std::nullopt;
}

inline std::optional<std::pair<Term, Term>> as_equiv(const Formula& f) {
  if (f.kind() == Formula::Kind::Equiv) return std::make_pair(f.left(), f.right());
  if (f.kind() == Formula::Kind::And) {
    auto a = as_geq(f.lhs()), b = as_geq(f.rhs());
    if (a && b) return a;
  }
  return std::nullopt;
}

inline std::optional<std::pair<Term, Term>> as_gt(const Formula& f) {
  if (f.kind() == Formula::Kind::Gt) return std::make_pair(f.left(), f.right());
  if (f.kind() == Formula::Kind::And && f.rhs().kind() == Formula::Kind::Not) return as_geq(f.lhs());
  return std::nullopt;
}

inline std::optional<std::pair<Formula, Formula>> as_implies(const Formula& f) {
  if (f.kind() == Formula::Kind::Implies) return std::make_pair(f.lhs(), f.rhs());
  if (f.kind() == Formula::Kind::Not && f.operand().kind() == Formula::Kind::And &&
      f.operand().rhs().kind() == Formula::Kind::Not)
    return std::make_pair(f.operand().lhs(), f.operand().rhs().operand());
  return std::nullopt;
}

inline std::optional<std::pair<Formula, Formula>> as_or(const Formula& f) {
  if (f.kind() == Formula::Kind::Or) return std::make_pair(f.lhs(), f.rhs());
  if (f.kind() == Formula::Kind::Not && f.operand().kind() == Formula::Kind::And &&
      f.operand().lhs().kind() == Formula::Kind::Not && f.operand().rhs().kind() == Formula::Kind::Not)
    return std::make_pair(f.operand().lhs().operand(), f.operand().rhs().operand());
  return std::nullopt;
}

inline std::optional<std::pair<Formula, Formula>> as_and(const Formula& f) {
  if (f.kind() == Formula::Kind::And) return std::make_pair(f.lhs(), f.rhs());
  return std::nullopt;
}

inline std::vector<Formula> and_leaves(const Formula& f) {
  if (f.kind() != Formula::Kind::And || as_equiv(f) || as_gt(f)) return {f};
  auto l = and_leaves(f.lhs()), r = and_leaves(f.rhs());
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

inline std::optional<Base> prob_event(const Term& t) {
  if (t.kind() == Term::Kind::Prob) return t.event();
  return std::nullopt;
}

// Factor pairs (a, b) whose product desugars to t; a literal 1 factor vanishes.
inline std::vector<std::pair<Term, Term>> splits(const Term& t) {
  std::vector<std::pair<Term, Term>> out;
  if (t.kind() == Term::Kind::Mul) out.push_back({t.lhs(), t.rhs()});
  out.push_back({t, Term::literal(1)});
  out.push_back({Term::literal(1), t});
  return out;
}

// Candidate term tuples for a Poly or derived schema.
inline std::vector<std::vector<Term>> poly_candidates(const std::string& name, const Formula& f) {
  using K = Term::Kind;
  std::vector<std::vector<Term>> out;
  auto bin = [](const Term& t, K k) { return t.kind() == k; };
  if (name == "NonDegen") return {{}};
  if (name == "OrdTot") {
    if (auto o = as_or(f))
      if (auto g = as_geq(o->first)) out.push_back({g->first, g->second});
  } else if (name == "OrdTrans") {
    if (auto i = as_implies(f))
      if (auto a = as_and(i->first))
        if (auto g1 = as_geq(a->first))
          if (auto g2 = as_geq(a->second)) out.push_back({g1->first, g1->second, g2->second});
  } else if (name == "AddOrd") {
    if (auto i = as_implies(f))
      if (auto g1 = as_geq(i->first))
        if (auto g2 = as_geq(i->second); g2 && bin(g2->first, K::Add))
          out.push_back({g1->first, g1->second, g2->first.rhs()});
  } else if (name == "MulOrdG" || name == "MulOrdL") {
    if (auto i = as_implies(f))
      if (auto a = as_and(i->first))
        if (auto g1 = as_geq(a->first))
          if (auto g2 = as_geq(a->second))
            out.push_back({g1->first, g1->second, name == "MulOrdG" ? g2->first : g2->second});
  } else if (name == "AddPos" || name == "MulPos") {
    if (auto i = as_implies(f))
      if (auto a = as_and(i->first)) {
        auto l = name == "AddPos" ? as_geq(a->first) : as_gt(a->first);
        auto r = as_gt(a->second);
        if (l && r) out.push_back({l->first, r->first});
      }
  } else if (name == "NoZeroDiv") {
    if (auto i = as_implies(f))
      if (auto e = as_equiv(i->first))
        for (const auto& [a, b] : splits(e->first)) out.push_back({a, b});
  } else if (name == "OrdSq") {
    if (auto g = as_geq(f))
      for (const auto& [a, b] : splits(g->first)) out.push_back({a});
  } else if (auto e = as_equiv(f)) {
    const Term& l = e->first;
    if (name == "AddComm") {
      if (bin(l, K::Add)) out.push_back({l.lhs(), l.rhs()});
    } else if (name == "MulComm") {
      for (const auto& [a, b] : splits(l)) out.push_back({a, b});
    } else if (name == "AddAssoc") {
      if (bin(l, K::Add) && bin(l.lhs(), K::Add)) out.push_back({l.lhs().lhs(), l.lhs().rhs(), l.rhs()});
    } else if (name == "MulAssoc") {
      for (const auto& [ab, c] : splits(l))
        for (const auto& [a, b] : splits(ab)) out.push_back({a, b, c});
    } else if (name == "Zero" || name == "Neg") {
      if (bin(l, K::Add)) out.push_back({l.lhs()});
    } else if (name == "One") {
      if (bin(l, K::Mul)) out.push_back({l.lhs()});
      out.push_back({e->second});
    } else if (name == "ZeroMul") {
      for (const auto& [a, b] : splits(l)) out.push_back({a});
    } else if (name == "MulDist") {
      for (const auto& [a, s] : splits(l))
        if (bin(s, K::Add)) out.push_back({a, s.lhs(), s.rhs()});
    } else if (name == "NegAdd") {
      if (bin(l, K::Neg) && bin(l.operand(), K::Add)) out.push_back({l.operand().lhs(), l.operand().rhs()});
    } else if (name == "NegMul") {
      if (bin(l, K::Neg))
        for (const auto& [a, b] : splits(l.operand())) out.push_back({a, b});
    } else if (name == "NegNeg") {
      if (bin(l, K::Neg) && bin(l.operand(), K::Neg)) out.push_back({l.operand().operand()});
      out.push_back({e->second});
    }
  }
  // desugaring turns a literal 1 into P(true); try both readings
  std::vector<std::vector<Term>> all;
  for (const auto& ts : out) {
    std::vector<std::size_t> units;
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (ts[k].kind() == K::Prob && ts[k].event().is_top()) units.push_back(k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << units.size()); ++mask) {
      auto v = ts;
      for (std::size_t b = 0; b < units.size(); ++b)
        if ((mask >> b) & 1) v[units[b]] = Term::literal(1);
      all.push_back(std::move(v));
    }
  }
  return all;
}

// Steps of a ProbRec event [α∧x]x* ∧ [α∧x']¬x*: (step without star, star variable, star value).
struct RecLink {
  ProbRecStep step;
  std::string next_var, next_star;
};

inline std::optional<RecLink> prob_rec_link(const Term& t) {
  auto e = prob_event(t);
  if (!e || e->kind() != Base::Kind::And) return std::nullopt;
  Base on = e->lhs(), off = e->rhs();
  if (on.kind() != Base::Kind::Cond || off.kind() != Base::Kind::Cond) return std::nullopt;
  if (on.consequent().kind() != Prop::Kind::Atom) return std::nullopt;
  const auto& a1 = on.intervention().assignments();
  const auto& a2 = off.intervention().assignments();
  if (a1.size() != a2.size()) return std::nullopt;
  RecLink link;
  Intervention::Map common;
  for (const auto& [var, val] : a1) {
    auto it = a2.find(var);
    if (it == a2.end()) return std::nullopt;
    if (it->second == val) {
      common[var] = val;
    } else {
      if (!link.step.var.empty()) return std::nullopt;
      link.step.var = var;
      link.step.value = val;
      link.step.alt = it->second;
    }
  }
  if (link.step.var.empty()) return std::nullopt;
  link.step.alpha = Intervention(common);
  link.next_var = on.consequent().atom().variable;
  link.next_star = on.consequent().atom().value;
  return link;
}

inline std::string show_steps(const std::vector<ProbRecStep>& steps) {
  std::string out;
  for (const auto& s : steps) {
    if (!out.empty()) out += " ; ";
    out += s.var + " " + s.value + " " + s.alt + " " + s.star;
    if (!s.alpha.empty()) out += " | " + show_atoms(s.alpha);
  }
  return out;
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : sep) + x;
  return out;
}

// Propositional skeleton over the comparison atoms of a desugared formula.
inline bool bool_tautology(const Formula& f, std::size_t max_atoms) {
  std::vector<Formula> atoms;
  auto collect = [&](auto&& self, const Formula& g) -> void {
    switch (g.kind()) {
      case Formula::Kind::Geq:
        if (std::find(atoms.begin(), atoms.end(), g) == atoms.end()) atoms.push_back(g);
        break;
      case Formula::Kind::Not: self(self, g.operand()); break;
      case Formula::Kind::And:
        self(self, g.lhs());
        self(self, g.rhs());
        break;
      default: throw InputError("tautology check needs a desugared formula");
    }
  };
  collect(collect, f);
  if (atoms.size() > max_atoms) throw GuardError("too many atoms for a truth-table check");
  for (std::size_t mask = 0; mask < (std::size_t{1} << atoms.size()); ++mask) {
    auto eval = [&](auto&& self, const Formula& g) -> bool {
      switch (g.kind()) {
        case Formula::Kind::Geq:
          return (mask >> (std::find(atoms.begin(), atoms.end(), g) - atoms.begin())) & 1;
        case Formula::Kind::Not: return !self(self, g.operand());
        case Formula::Kind::And: return self(self, g.lhs()) && self(self, g.rhs());
        default: return false;
      }
    };
    if (!eval(eval, f)) return false;
  }
  return true;
}

}  // namespace detail

/// All schemata that `f` instantiates, with the recovered parameters. Only
/// schemata in `only` are tried when it is non-empty.
inline std::vector<AxiomMatch> match_axiom(const Formula& f, const Signature* sig = nullptr,
                                           const std::vector<std::string>& only = {}, const SchemaLimits& lim = {},
                                           const DeltaLimits& dlim = {}) {
  using namespace detail;
  Formula target = desugar(f);
  std::vector<AxiomMatch> out;
  auto wanted = [&](const std::string& n) { return only.empty() || std::find(only.begin(), only.end(), n) != only.end(); };
  auto confirm = [&](const std::string& name, const SchemaParams& p) {
    try {
      if (generate_schema(name, p, sig, lim) == target) {
        out.push_back({name, p});
        return true;
      }
    } catch (const InputError&) {
    }
    return false;
  };

  if (wanted("Bool")) {
    try {
      if (bool_tautology(target, lim.max_bool_atoms)) out.push_back({"Bool", {}});
    } catch (const GuardError&) {
      if (!only.empty()) throw;  // asked for Bool specifically
    }
  }

  auto eqv = as_equiv(f);
  auto ge = as_geq(f);
  if (wanted("NonNeg") && ge)
    if (auto e = prob_event(ge->first)) confirm("NonNeg", {{"e", to_string(*e)}});

  if (eqv) {
    const Term& l = eqv->first;
    const Term& r = eqv->second;
    if (wanted("Dist"))
      if (auto e = prob_event(l))
        if (auto z = prob_event(r)) {
          auto check = base_valid(*e, *z, sig, dlim);
          if (check.holds && desugar(schema::eq(Term::prob(*e), Term::prob(*z))) == target)
            out.push_back({"Dist", {{"e", to_string(*e)}, {"z", to_string(*z)}}});
        }
    if ((wanted("Add") || wanted("Add2")) && l.kind() == Term::Kind::Add)
      if (auto e = prob_event(r))
        if (auto a = prob_event(l.lhs())) {
          if (wanted("Add")) {
            std::vector<Base> zs;
            if (a->kind() == Base::Kind::And) zs.push_back(a->rhs());
            if (a->kind() == Base::Kind::Cond && a->consequent().kind() == Prop::Kind::And)
              zs.push_back(Base::cond(a->intervention(), a->consequent().rhs()));
            for (const auto& z : zs)
              if (confirm("Add", {{"e", to_string(*e)}, {"z", to_string(z)}})) break;
          }
          if (wanted("Add2") && a->kind() == Base::Kind::Cond && a->consequent().kind() == Prop::Kind::And) {
            SchemaParams p{{"b", to_string(a->consequent().lhs())}, {"g", to_string(a->consequent().rhs())}};
            if (!a->intervention().empty()) p["a"] = show_atoms(a->intervention());
            confirm("Add2", p);
          }
        }
    if (wanted("Def"))
      if (auto e = prob_event(l); e && e->kind() == Base::Kind::Cond) {
        std::vector<std::string> values;
        std::set<std::string> vars;
        e->consequent().for_each_atom([&](const Atom& a) {
          vars.insert(a.variable);
          if (std::find(values.begin(), values.end(), a.value) == values.end()) values.push_back(a.value);
        });
        if (vars.size() == 1) {
          SchemaParams p{{"var", *vars.begin()}, {"values", join(values, ",")}};
          if (!e->intervention().empty()) p["a"] = show_atoms(e->intervention());
          confirm("Def", p);
        }
      }
  }

  if (wanted("ProbRec"))
    if (auto imp = as_implies(f))
      if (auto cons = as_equiv(imp->second)) {
        std::vector<ProbRecStep> steps;
        bool ok = true;
        std::vector<RecLink> links;
        for (const auto& leaf : and_leaves(imp->first)) {
          auto inner = leaf.kind() == Formula::Kind::Not ? as_equiv(leaf.operand()) : std::nullopt;
          auto link = inner ? prob_rec_link(inner->first) : std::nullopt;
          if (!link) {
            ok = false;
            break;
          }
          links.push_back(*link);
        }
        auto last = prob_rec_link(cons->first);
        if (ok && last) {
          links.push_back(*last);
          std::size_t n = links.size();
          for (std::size_t i = 0; i < n; ++i) {
            ProbRecStep s = links[i].step;
            s.star = links[(i + n - 1) % n].next_star;
            steps.push_back(s);
          }
          confirm("ProbRec", {{"steps", show_steps(steps)}});
        }
      }

  if (wanted("ProbRec2") || wanted("IncExc")) {
    Vocabulary voc = vocabulary(target);
    if (wanted("IncExc")) {
      std::vector<std::string> w;
      bool single = !voc.values.empty();
      for (const auto& [var, vals] : voc.values) {
        if (vals.size() != 1) single = false;
        else w.push_back(var + "=" + *vals.begin());
      }
      if (single) confirm("IncExc", {{"w", join(w, ", ")}});
    }
    if (wanted("ProbRec2") && voc.values.size() >= 2 && as_or(f)) {
      std::vector<std::string> parts;
      for (const auto& [var, vals] : voc.values) {
        std::vector<std::string> values(vals.begin(), vals.end());
        if (sig) values = sig->domains[sig->require(var)];
        parts.push_back(var + ":" + join(values, ","));
      }
      confirm("ProbRec2", {{"W", join(parts, "; ")}});
    }
  }

  auto try_poly = [&](const std::string& name) {
    if (!wanted(name)) return;
    for (const auto& ts : poly_candidates(name, f)) {
      SchemaParams p;
      for (std::size_t k = 0; k < ts.size(); ++k) p["t" + std::to_string(k + 1)] = to_string(ts[k]);
      try {
        if (schema::poly(name, ts) == target) {
          out.push_back({name, p});
          return;
        }
      } catch (const InputError&) {
      }
    }
  };
  for (const auto& n : poly_schemata()) try_poly(n);
  for (const auto& n : derived_schemata()) try_poly(n);
  return out;
}

}  // namespace causal
