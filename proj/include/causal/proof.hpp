#pragma once

// Hilbert-style proof checking over the axiom systems, plus the text format:
//
//   system: AX3
//   signature: X:0,1; Z:0,1
//   assume: P(X=1) >= 1/2
//   goal: P(X=1) >= 0
//   1. P(X=1) >= 1/2 ; assume 1
//   2. P(X=1) >= 0 ; polynorm
//     by 1 : 1
//
// Justifications: `assume k`, `axiom NAME`, `mp i j` (j proves line i -> this),
// `dist i : e <=> z`, `polynorm [i j ...]` with optional `by i : term` lines.

#include "causal/axioms.hpp"
#include "causal/poly.hpp"

#include <fstream>
#include <sstream>

namespace causal {

struct Multiplier {
  std::size_t line = 0;
  std::optional<Term> factor;  // empty means 1
};

struct Justification {
  enum class Kind { Assume, Axiom, MP, Dist, PolyNorm };
  Kind kind = Kind::Assume;
  std::size_t index = 0;        // assumption number, or the premise of MP / Dist
  std::size_t implication = 0;  // MP: the line proving premise -> this
  std::string schema;
  std::optional<Base> from, to;  // Dist replacement
  std::vector<Multiplier> premises;
};

struct ProofLine {
  std::size_t number = 0;
  Formula formula = Formula::geq(Term::one(), Term::one());
  Justification why;
  std::size_t source_line = 0;
};

struct Proof {
  std::optional<AxSystem> system;
  std::optional<Signature> signature;
  std::vector<Formula> assumptions;
  std::optional<Formula> goal;
  std::vector<ProofLine> lines;
};

struct ProofCheck {
  bool accepted = false;
  std::size_t line = 0;  // offending line number when rejected
  std::string reason;
};

namespace detail {

inline int system_level(AxSystem s) { return static_cast<int>(s); }

// polynomial of the first comparison of a desugared line, with its relation
struct Comparison {
  enum class Rel { Geq, Gt, Eq } rel;
  Poly poly;
};

inline std::optional<Comparison> comparison_of(const Formula& f) {
  Formula d = desugar(f);
  auto poly = [](const std::pair<Term, Term>& lr) { return normalize(lr.first) - normalize(lr.second); };
  if (auto e = as_equiv(d)) return Comparison{Comparison::Rel::Eq, poly(*e)};
  if (auto g = as_gt(d)) return Comparison{Comparison::Rel::Gt, poly(*g)};
  if (auto g = as_geq(d)) return Comparison{Comparison::Rel::Geq, poly(*g)};
  return std::nullopt;
}

// every monomial is a product of probabilities, so nonnegative coefficients suffice
inline bool nonneg_coefficients(const Poly& p) {
  return std::all_of(p.terms().begin(), p.terms().end(), [](const auto& mc) { return mc.second >= 0; });
}

inline std::string check_polynorm(const ProofLine& line, const std::map<std::size_t, Formula>& proved) {
  auto concl = comparison_of(line.formula);
  if (!concl) return "polynorm needs a comparison";
  Poly rest = concl->poly;
  bool strict = false;
  for (const auto& m : line.why.premises) {
    auto it = proved.find(m.line);
    if (it == proved.end()) return "polynorm cites line " + std::to_string(m.line) + ", which is not an earlier line";
    auto prem = comparison_of(it->second);
    if (!prem) return "line " + std::to_string(m.line) + " is not a comparison";
    Poly k = m.factor ? normalize(*m.factor) : Poly(1);
    if (prem->rel != Comparison::Rel::Eq) {
      if (concl->rel == Comparison::Rel::Eq) return "an equation cannot follow from inequality line " + std::to_string(m.line);
      if (!nonneg_coefficients(k)) return "multiplier of inequality line " + std::to_string(m.line) + " may be negative";
      if (prem->rel == Comparison::Rel::Gt && k.is_constant() && k.constant() > 0) strict = true;
    }
    rest -= k * prem->poly;
  }
  switch (concl->rel) {
    case Comparison::Rel::Eq:
      if (!rest.is_zero()) return "remainder " + to_string(rest) + " is not zero";
      break;
    case Comparison::Rel::Geq:
      if (!nonneg_coefficients(rest)) return "remainder " + to_string(rest) + " is not evidently nonnegative";
      break;
    case Comparison::Rel::Gt:
      if (!nonneg_coefficients(rest)) return "remainder " + to_string(rest) + " is not evidently nonnegative";
      if (!strict && rest.constant() <= 0) return "remainder " + to_string(rest) + " is not evidently positive";
      break;
  }
  return "";
}

inline Term substitute(const Term& t, const Base& from, const Base& to) {
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Prob: return t.event() == from ? Term::prob(to) : t;
    case K::Add: return Term::add(substitute(t.lhs(), from, to), substitute(t.rhs(), from, to));
    case K::Mul: return Term::mul(substitute(t.lhs(), from, to), substitute(t.rhs(), from, to));
    case K::Neg: return Term::neg(substitute(t.operand(), from, to));
    default: return t;
  }
}

inline Formula substitute(const Formula& f, const Base& from, const Base& to) {
  switch (f.kind()) {
    case Formula::Kind::Geq: return Formula::geq(substitute(f.left(), from, to), substitute(f.right(), from, to));
    case Formula::Kind::Not: return Formula::negate(substitute(f.operand(), from, to));
    case Formula::Kind::And: return Formula::conj(substitute(f.lhs(), from, to), substitute(f.rhs(), from, to));
    default: throw InputError("substitution needs a desugared formula");
  }
}

}  // namespace detail

/// Checks every line in order; `sys` overrides the proof's own system line.
inline ProofCheck check_proof(const Proof& proof, std::optional<AxSystem> sys = std::nullopt,
                              const SchemaLimits& lim = {}, const DeltaLimits& dlim = {}) {
  AxSystem system = sys.value_or(proof.system.value_or(AxSystem::AX3));
  const Signature* sig = proof.signature ? &*proof.signature : nullptr;
  int max_level = detail::system_level(system);
  std::map<std::size_t, Formula> proved;
  auto reject = [](std::size_t n, std::string why) { return ProofCheck{false, n, std::move(why)}; };

  for (std::size_t k = 0; k < proof.assumptions.size(); ++k)
    if (level(proof.assumptions[k]) > max_level)
      return reject(0, "assumption " + std::to_string(k + 1) + " is outside the language of " + system_name(system));
  if (proof.lines.empty()) return reject(0, "the proof has no lines");

  for (const auto& line : proof.lines) {
    std::size_t n = line.number;
    auto fail = [&](const std::string& why) { return reject(n, why); };
    if (proved.count(n)) return fail("line number " + std::to_string(n) + " is used twice");
    if (level(line.formula) > max_level) return fail("formula is outside the language of " + std::string(system_name(system)));
    if (sig) check_signature(line.formula, *sig);
    Formula target = desugar(line.formula);
    const auto& why = line.why;
    auto earlier = [&](std::size_t i) -> const Formula* {
      auto it = proved.find(i);
      return it == proved.end() ? nullptr : &it->second;
    };
    using J = Justification::Kind;
    switch (why.kind) {
      case J::Assume:
        if (why.index == 0 || why.index > proof.assumptions.size())
          return fail("there is no assumption " + std::to_string(why.index));
        if (desugar(proof.assumptions[why.index - 1]) != target)
          return fail("formula differs from assumption " + std::to_string(why.index));
        break;
      case J::Axiom:
        if (!admissible(why.schema, system)) return fail(why.schema + " is not a schema of " + system_name(system));
        if (match_axiom(line.formula, sig, {why.schema}, lim, dlim).empty())
          return fail("formula is not an instance of " + why.schema);
        break;
      case J::MP: {
        const Formula* a = earlier(why.index);
        const Formula* imp = earlier(why.implication);
        if (!a || !imp) return fail("mp cites a line that is not earlier");
        if (desugar(*imp) != desugar(Formula::implies(*a, line.formula)))
          return fail("line " + std::to_string(why.implication) + " is not line " + std::to_string(why.index) +
                      " -> this formula");
        break;
      }
      case J::Dist: {
        const Formula* a = earlier(why.index);
        if (!a) return fail("dist cites a line that is not earlier");
        auto check = base_valid(*why.from, *why.to, sig, dlim);
        if (!check.holds)
          return fail(to_string(*why.from) + " and " + to_string(*why.to) + " are not equivalent: " + check.describe());
        if (detail::substitute(desugar(*a), *why.from, *why.to) != target)
          return fail("formula is not line " + std::to_string(why.index) + " with the cited replacement");
        break;
      }
      case J::PolyNorm:
        if (auto err = detail::check_polynorm(line, proved); !err.empty()) return fail(err);
        break;
    }
    proved.emplace(n, line.formula);
  }
  if (proof.goal && desugar(*proof.goal) != desugar(proof.lines.back().formula))
    return reject(proof.lines.back().number, "the last line is not the stated goal");
  return {true, 0, ""};
}

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::size_t parse_index(const std::string& s, std::size_t at) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size() || v <= 0) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(at) + ": expected a positive line number, got '" + s + "'");
  }
}

inline Signature parse_signature_text(const std::string& text) {
  Signature sig;
  for (const auto& [var, values] : parse_domains(text, nullptr)) sig.add(var, values);
  return sig;
}

inline Justification parse_justification(const std::string& text, std::size_t at, const Signature* sig) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  Justification j;
  std::string rest;
  std::getline(in, rest);
  rest = trim(rest);
  std::vector<std::string> args;
  {
    std::istringstream a(rest);
    for (std::string w; a >> w;) args.push_back(w);
  }
  if (word == "assume") {
    if (args.size() != 1) throw InputError("line " + std::to_string(at) + ": assume takes one index");
    j.kind = Justification::Kind::Assume;
    j.index = parse_index(args[0], at);
  } else if (word == "axiom") {
    if (args.size() != 1) throw InputError("line " + std::to_string(at) + ": axiom takes one schema name");
    j.kind = Justification::Kind::Axiom;
    j.schema = args[0];
  } else if (word == "mp") {
    if (args.size() != 2) throw InputError("line " + std::to_string(at) + ": mp takes two line numbers");
    j.kind = Justification::Kind::MP;
    j.index = parse_index(args[0], at);
    j.implication = parse_index(args[1], at);
  } else if (word == "dist") {
    auto colon = rest.find(':');
    auto arrow = rest.find("<=>");
    if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
      throw InputError("line " + std::to_string(at) + ": expected dist i : e <=> z");
    j.kind = Justification::Kind::Dist;
    j.index = parse_index(trim(rest.substr(0, colon)), at);
    j.from = parse_base(trim(rest.substr(colon + 1, arrow - colon - 1)), sig);
    j.to = parse_base(trim(rest.substr(arrow + 3)), sig);
  } else if (word == "polynorm") {
    j.kind = Justification::Kind::PolyNorm;
    for (const auto& a : args) j.premises.push_back({parse_index(a, at), std::nullopt});
  } else {
    throw InputError("line " + std::to_string(at) + ": unknown justification '" + word + "'");
  }
  return j;
}

}  // namespace detail

inline Proof parse_proof(const std::string& text) {
  Proof proof;
  std::istringstream in(text);
  std::string raw;
  std::size_t at = 0;
  const Signature* sig = nullptr;
  while (std::getline(in, raw)) {
    ++at;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    auto header = [&](const char* key) -> std::optional<std::string> {
      std::string k = std::string(key) + ":";
      if (line.rfind(k, 0) != 0) return std::nullopt;
      return detail::trim(line.substr(k.size()));
    };
    auto where = [&](const Error& e) { return InputError("line " + std::to_string(at) + ": " + e.what()); };
    try {
      if (auto v = header("system")) {
        proof.system = parse_system(*v);
      } else if (auto v = header("signature")) {
        proof.signature = detail::parse_signature_text(*v);
        sig = &*proof.signature;
      } else if (auto v = header("assume")) {
        proof.assumptions.push_back(parse_formula(*v, sig));
      } else if (auto v = header("goal")) {
        proof.goal = parse_formula(*v, sig);
      } else if (line.rfind("by ", 0) == 0) {
        if (proof.lines.empty() || proof.lines.back().why.kind != Justification::Kind::PolyNorm)
          throw InputError("a 'by' line must follow a polynorm line");
        std::string body = line.substr(3);
        auto colon = body.find(':');
        Multiplier m;
        m.line = detail::parse_index(detail::trim(body.substr(0, colon)), at);
        if (colon != std::string::npos) m.factor = parse_term(detail::trim(body.substr(colon + 1)), sig);
        proof.lines.back().why.premises.push_back(m);
      } else {
        auto dot = line.find('.');
        auto semi = line.rfind(';');
        if (dot == std::string::npos || semi == std::string::npos || semi < dot)
          throw InputError("expected 'n. formula ; justification'");
        ProofLine pl;
        pl.number = detail::parse_index(detail::trim(line.substr(0, dot)), at);
        pl.formula = parse_formula(detail::trim(line.substr(dot + 1, semi - dot - 1)), sig);
        pl.why = detail::parse_justification(detail::trim(line.substr(semi + 1)), at, sig);
        pl.source_line = at;
        proof.lines.push_back(std::move(pl));
      }
    } catch (const GuardError&) {
      throw;
    } catch (const Error& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      throw where(e);
    }
  }
  return proof;
}

inline Proof load_proof(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_proof(ss.str());
}

}  // namespace causal
