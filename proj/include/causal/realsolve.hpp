#pragma once

// Backends for polynomial systems beyond the linear case:
//  - search_witness: numeric multi-start search, then fix the variables that
//    make the system nonlinear to nearby rationals and solve the rest exactly;
//  - refute_box: branch and bound over a box with McCormick relaxations, each
//    relaxation decided exactly, so UNSAT answers are sound within the box;
//  - SMT-LIB export/import and Positivstellensatz certificate checking.

#include "causal/linear.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <sstream>

namespace causal {

struct SearchOptions {
  std::uint64_t seed = 1;
  std::size_t starts = 12;
  std::size_t iterations = 400;
  std::size_t max_candidates = 400;
  std::size_t max_nodes = 400;
  /// Unknowns are known to lie in [0,1]; enables box refutation.
  bool unit_box = false;
};

namespace detail {

// Variables whose fixing leaves every monomial with at most one free variable.
inline std::vector<std::string> nonlinear_cover(const PolySystem& s) {
  std::vector<Monomial> mons;
  for (const auto& c : s.constraints)
    for (const auto& [m, _] : c.p.terms())
      if (m.degree() >= 2) mons.push_back(m);
  std::vector<std::string> cover;
  std::set<std::string> fixed;
  auto free_count = [&](const Monomial& m) {
    std::size_t n = 0;
    for (const auto& x : m.vars) n += !fixed.count(x);
    return n;
  };
  while (true) {
    std::map<std::string, std::size_t> score;
    for (const auto& m : mons)
      if (free_count(m) >= 2)
        for (const auto& x : std::set<std::string>(m.vars.begin(), m.vars.end()))
          if (!fixed.count(x)) ++score[x];
    if (score.empty()) return cover;
    auto best = std::max_element(score.begin(), score.end(), [](auto& a, auto& b) { return a.second < b.second; });
    cover.push_back(best->first);
    fixed.insert(best->first);
  }
}

// Continued-fraction convergents of x in [0,1], smallest denominators first.
inline std::vector<Rational> convergents(double x, std::size_t max_den = 1000) {
  std::vector<Rational> out;
  x = std::clamp(x, 0.0, 1.0);
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 20; ++i) {
    double a = std::floor(r);
    mpz_class ai = static_cast<long>(a);
    mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    Rational q(h2, k2);
    q.canonicalize();
    if (out.empty() || out.back() != q) out.push_back(q);
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    double frac = r - a;
    if (frac < 1e-12) break;
    r = 1 / frac;
  }
  return out;
}

// Penalty minimization in [0,1]^n by projected gradient descent.
class NumericSearch {
 public:
  explicit NumericSearch(const PolySystem& s) : s_(s), names_(s.unknowns.begin(), s.unknowns.end()) {
    for (const auto& c : s.constraints) {
      std::vector<Poly> grad;
      for (const auto& x : names_) grad.push_back(c.p.derivative(x));
      grads_.push_back(std::move(grad));
    }
  }

  const std::vector<std::string>& names() const { return names_; }

  std::map<std::string, double> run(std::mt19937_64& rng, std::size_t iterations) const {
    std::uniform_real_distribution<double> unit(0, 1);
    std::map<std::string, double> x;
    for (const auto& n : names_) x[n] = unit(rng);
    double f = penalty(x);
    double step = 0.5;
    for (std::size_t it = 0; it < iterations && f > 1e-20; ++it) {
      auto g = gradient(x);
      double norm = 0;
      for (double v : g) norm += v * v;
      if (norm < 1e-30) break;
      bool moved = false;
      for (int tries = 0; tries < 30; ++tries) {
        auto y = x;
        for (std::size_t k = 0; k < names_.size(); ++k) y[names_[k]] = std::clamp(x[names_[k]] - step * g[k], 0.0, 1.0);
        double fy = penalty(y);
        if (fy < f) {
          x = std::move(y);
          f = fy;
          step *= 2;
          moved = true;
          break;
        }
        step /= 4;
      }
      if (!moved) break;
    }
    return x;
  }

 private:
  static constexpr double margin = 1e-6;

  // residual r with penalty r^2; zero when satisfied
  double residual(const Constraint& c, double v) const {
    switch (c.rel) {
      case Rel::Eq: return v;
      case Rel::Geq: return std::min(0.0, v);
      case Rel::Gt: return std::min(0.0, v - margin);
      case Rel::Neq: return std::abs(v) < margin ? margin - std::abs(v) : 0.0;
    }
    return 0;
  }
  double penalty(const std::map<std::string, double>& x) const {
    double f = 0;
    for (const auto& c : s_.constraints) {
      double r = residual(c, c.p.eval_double(x));
      f += r * r;
    }
    return f;
  }
  std::vector<double> gradient(const std::map<std::string, double>& x) const {
    std::vector<double> g(names_.size(), 0);
    for (std::size_t i = 0; i < s_.constraints.size(); ++i) {
      const auto& c = s_.constraints[i];
      double v = c.p.eval_double(x);
      double r = residual(c, v);
      if (r == 0) continue;
      double sign = c.rel == Rel::Neq ? (v >= 0 ? -1.0 : 1.0) : 1.0;
      for (std::size_t k = 0; k < names_.size(); ++k) g[k] += 2 * r * sign * grads_[i][k].eval_double(x);
    }
    return g;
  }

  const PolySystem& s_;
  std::vector<std::string> names_;
  std::vector<std::vector<Poly>> grads_;
};

// Fix the given unknowns, solve the remaining linear system exactly, verify against the original.
inline std::optional<Witness> try_fixing(const PolySystem& s, const std::map<std::string, Rational>& fix) {
  std::map<std::string, Poly> sub;
  for (const auto& [x, v] : fix) sub[x] = v;
  PolySystem rest;
  for (const auto& x : s.unknowns)
    if (!fix.count(x)) rest.declare(x);
  for (const auto& c : s.constraints) rest.add(c.p.substitute(sub), c.rel);
  if (!rest.linear()) return std::nullopt;
  auto r = decide_linear(rest);
  if (r.verdict != Verdict::Sat) return std::nullopt;
  Witness w = r.witness;
  for (const auto& [x, v] : fix) w[x] = v;
  for (const auto& x : s.unknowns)
    if (!w.count(x)) w[x] = 0;
  if (!s.satisfied_by(w)) return std::nullopt;
  return w;
}

}  // namespace detail

/// Incomplete search; any SAT answer carries an exactly verified rational witness.
inline SolveResult search_witness(const PolySystem& s, const SearchOptions& opt = {}) {
  if (s.linear()) return decide_linear(s);
  auto cover = detail::nonlinear_cover(s);
  std::size_t tried = 0;
  auto attempt = [&](const std::map<std::string, Rational>& fix) -> std::optional<Witness> {
    ++tried;
    return detail::try_fixing(s, fix);
  };

  // small grid on the cover first
  const std::vector<Rational> grid = {0, 1, make_rational(1, 2), make_rational(1, 3), make_rational(2, 3),
                                      make_rational(1, 4), make_rational(3, 4)};
  std::size_t grid_size = 1;
  for (std::size_t k = 0; k < cover.size() && grid_size <= opt.max_candidates / 2; ++k) grid_size *= grid.size();
  if (grid_size <= opt.max_candidates / 2) {
    std::vector<std::size_t> idx(cover.size(), 0);
    for (std::size_t n = 0; n < grid_size; ++n) {
      std::map<std::string, Rational> fix;
      for (std::size_t k = 0; k < cover.size(); ++k) fix[cover[k]] = grid[idx[k]];
      if (auto w = attempt(fix)) return {Verdict::Sat, *w, "grid"};
      for (std::size_t k = 0; k < cover.size(); ++k) {
        if (++idx[k] < grid.size()) break;
        idx[k] = 0;
      }
    }
  }

  detail::NumericSearch num(s);
  std::mt19937_64 rng(opt.seed);
  for (std::size_t start = 0; start < opt.starts && tried < opt.max_candidates; ++start) {
    auto x = num.run(rng, opt.iterations);
    std::map<std::string, std::vector<Rational>> approx;
    std::size_t depth = 0;
    for (const auto& c : cover) {
      approx[c] = detail::convergents(x[c]);
      depth = std::max(depth, approx[c].size());
    }
    for (std::size_t level = 0; level < depth && tried < opt.max_candidates; ++level) {
      std::map<std::string, Rational> fix;
      for (const auto& c : cover) fix[c] = approx[c][std::min(level, approx[c].size() - 1)];
      if (auto w = attempt(fix)) return {Verdict::Sat, *w, "numeric start " + std::to_string(start)};
    }
  }
  return {Verdict::Unknown, {}, "no verified witness found"};
}

namespace detail {

struct Box {
  std::map<std::string, std::pair<Rational, Rational>> bounds;
};

// Linear relaxation of s over the box: each monomial of degree ≥ 2 becomes an
// auxiliary unknown tied to its factors by McCormick envelopes.
class Relaxation {
 public:
  Relaxation(const PolySystem& s, const Box& box) : box_(box) {
    for (const auto& [x, b] : box_.bounds) {
      lin_.add(Poly::var(x) - b.first, Rel::Geq);
      lin_.add(Poly(b.second) - Poly::var(x), Rel::Geq);
    }
    for (const auto& c : s.constraints) {
      Poly p;
      for (const auto& [m, coef] : c.p.terms()) p += m.degree() >= 2 ? coef * Poly::var(aux(m)) : Poly::monomial(m, coef);
      lin_.add(p, c.rel);
    }
  }

  const PolySystem& system() const { return lin_; }

 private:
  std::pair<Rational, Rational> range(const std::string& x) const {
    auto it = ranges_.find(x);
    if (it != ranges_.end()) return it->second;
    return box_.bounds.at(x);
  }

  std::string aux(const Monomial& m) {
    if (m.degree() == 1) return m.vars[0];
    std::string name = "#";
    for (const auto& x : m.vars) name += x + "*";
    if (ranges_.count(name)) return name;
    Monomial head = m;
    std::string b = head.vars.back();
    head.vars.pop_back();
    std::string a = aux(head);
    auto [al, au] = range(a);
    auto [bl, bu] = range(b);
    Poly w = Poly::var(name), pa = Poly::var(a), pb = Poly::var(b);
    auto plane = [&](const Rational& ca, const Rational& cb) {
      // ca*b + cb*a - ca*cb
      return Poly(ca) * pb + Poly(cb) * pa - Poly(Rational(ca * cb));
    };
    lin_.add(w - plane(al, bl), Rel::Geq);
    lin_.add(w - plane(au, bu), Rel::Geq);
    lin_.add(plane(au, bl) - w, Rel::Geq);
    lin_.add(plane(al, bu) - w, Rel::Geq);
    if (a == b) {
      Rational mid = (al + au) / 2;
      lin_.add(w - plane(mid, mid), Rel::Geq);
    }
    Rational c[] = {al * bl, al * bu, au * bl, au * bu};
    ranges_[name] = {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
    return name;
  }

  const Box& box_;
  PolySystem lin_;
  std::map<std::string, std::pair<Rational, Rational>> ranges_;
};

}  // namespace detail

/// Branch and bound over [0,1]^n. UNSAT means no point of the box satisfies the system.
inline SolveResult refute_box(const PolySystem& s, const SearchOptions& opt = {}) {
  std::set<std::string> nonlinear;
  for (const auto& c : s.constraints)
    for (const auto& [m, _] : c.p.terms())
      if (m.degree() >= 2) nonlinear.insert(m.vars.begin(), m.vars.end());
  auto cover = detail::nonlinear_cover(s);
  std::deque<detail::Box> todo;
  detail::Box root;
  for (const auto& x : s.unknowns) root.bounds[x] = {0, 1};
  todo.push_back(root);
  std::size_t nodes = 0;
  while (!todo.empty()) {
    if (++nodes > opt.max_nodes) return {Verdict::Unknown, {}, "branch and bound budget exhausted"};
    detail::Box box = std::move(todo.front());
    todo.pop_front();
    detail::Relaxation rel(s, box);
    auto r = decide_linear(rel.system());
    if (r.verdict == Verdict::Unsat) continue;
    // the relaxation point may already be a witness, or seed one
    Witness at;
    for (const auto& x : s.unknowns) at[x] = r.witness.count(x) ? r.witness.at(x) : Rational(0);
    if (s.satisfied_by(at)) return {Verdict::Sat, at, "relaxation point"};
    std::map<std::string, Rational> fix;
    for (const auto& c : cover) fix[c] = at[c];
    if (auto w = detail::try_fixing(s, fix)) return {Verdict::Sat, *w, "relaxation point, linear completion"};
    // split the widest nonlinear variable
    std::string pick;
    Rational width = -1;
    for (const auto& x : nonlinear) {
      Rational wd = box.bounds[x].second - box.bounds[x].first;
      if (wd > width) width = wd, pick = x;
    }
    if (pick.empty()) return {Verdict::Unknown, {}, "relaxation is exact but produced no witness"};
    Rational mid = (box.bounds[pick].first + box.bounds[pick].second) / 2;
    detail::Box lo = box, hi = box;
    lo.bounds[pick].second = mid;
    hi.bounds[pick].first = mid;
    todo.push_back(std::move(lo));
    todo.push_back(std::move(hi));
  }
  return {Verdict::Unsat, {}, "every box refuted (" + std::to_string(nodes) + " nodes)"};
}

/// Tiered decision: exact for linear systems, otherwise witness search, then box refutation when allowed.
inline SolveResult decide_system(const PolySystem& s, const SearchOptions& opt = {}) {
  if (s.linear()) return decide_linear(s);
  if (opt.unit_box) {
    // a cheap relaxation first: infeasible linearizations settle many systems immediately
    SearchOptions quick = opt;
    quick.max_nodes = 1;
    auto r = refute_box(s, quick);
    if (r.verdict != Verdict::Unknown) return r;
  }
  auto r = search_witness(s, opt);
  if (r.verdict == Verdict::Sat || !opt.unit_box) return r;
  return refute_box(s, opt);
}

// ---------------------------------------------------------------------------
// SMT-LIB 2 (QF_NRA)

namespace detail {

inline std::string strip_ws(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::string smt_number(const Rational& q) {
  auto show = [](const mpz_class& z) { return z < 0 ? "(- " + mpz_class(-z).get_str() + ")" : z.get_str(); };
  if (q.get_den() == 1) return show(q.get_num());
  return "(/ " + show(q.get_num()) + " " + q.get_den().get_str() + ")";
}

inline std::string smt_symbol(const std::string& name) {
  if (plain_symbol(name)) return name;
  if (name.find('|') == std::string::npos && name.find('\\') == std::string::npos) return "|" + name + "|";
  throw InputError("unknown name cannot be written as an SMT-LIB symbol: " + name);
}

inline std::string smt_poly(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::string> parts;
  for (const auto& [m, c] : p.terms()) {
    std::vector<std::string> f;
    if (c != 1 || m.vars.empty()) f.push_back(smt_number(c));
    for (const auto& x : m.vars) f.push_back(smt_symbol(x));
    if (f.size() == 1)
      parts.push_back(f[0]);
    else {
      std::string s = "(*";
      for (auto& x : f) s += " " + x;
      parts.push_back(s + ")");
    }
  }
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (auto& x : parts) s += " " + x;
  return s + ")";
}

}  // namespace detail

/// One declare-const per unknown, one assert per constraint, then check-sat.
/// Unknown names that are not plain identifiers are quoted with |...|.
inline std::string export_nra(const PolySystem& s) {
  std::string out = "(set-logic QF_NRA)\n";
  for (const auto& x : s.unknowns) out += "(declare-const " + detail::smt_symbol(x) + " Real)\n";
  for (const auto& c : s.constraints) {
    std::string p = detail::smt_poly(c.p);
    switch (c.rel) {
      case Rel::Eq: out += "(assert (= " + p + " 0))\n"; break;
      case Rel::Geq: out += "(assert (>= " + p + " 0))\n"; break;
      case Rel::Gt: out += "(assert (> " + p + " 0))\n"; break;
      case Rel::Neq: out += "(assert (not (= " + p + " 0)))\n"; break;
    }
  }
  return out + "(check-sat)\n(get-model)\n";
}

namespace detail {

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_atom = true;
};

inline std::vector<SExpr> read_sexprs(const std::string& text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      else if (text[i] == ';')
        while (i < text.size() && text[i] != '\n') ++i;
      else
        break;
    }
  };
  auto read = [&](auto&& self) -> SExpr {
    skip();
    if (i >= text.size()) throw InputError("SMT-LIB: unexpected end of input");
    SExpr e;
    if (text[i] == '(') {
      ++i;
      e.is_atom = false;
      while (true) {
        skip();
        if (i >= text.size()) throw InputError("SMT-LIB: missing ')'");
        if (text[i] == ')') {
          ++i;
          return e;
        }
        e.list.push_back(self(self));
      }
    }
    if (text[i] == ')') throw InputError("SMT-LIB: unexpected ')'");
    if (text[i] == '|') {
      auto close = text.find('|', i + 1);
      if (close == std::string::npos) throw InputError("SMT-LIB: unterminated |symbol|");
      e.atom = text.substr(i + 1, close - i - 1);
      i = close + 1;
      return e;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' && text[i] != ')') ++i;
    e.atom = text.substr(start, i - start);
    return e;
  };
  std::vector<SExpr> out;
  while (true) {
    skip();
    if (i >= text.size()) return out;
    out.push_back(read(read));
  }
}

inline Poly smt_to_poly(const SExpr& e) {
  if (e.is_atom) {
    if (!e.atom.empty() && (std::isdigit(static_cast<unsigned char>(e.atom[0])))) return parse_rational(e.atom);
    return Poly::var(e.atom);
  }
  if (e.list.empty() || !e.list[0].is_atom) throw InputError("SMT-LIB: malformed term");
  const auto& op = e.list[0].atom;
  std::vector<Poly> args;
  for (std::size_t k = 1; k < e.list.size(); ++k) args.push_back(smt_to_poly(e.list[k]));
  if (args.empty()) throw InputError("SMT-LIB: operator without arguments");
  if (op == "+") {
    Poly p;
    for (auto& a : args) p += a;
    return p;
  }
  if (op == "*") {
    Poly p = 1;
    for (auto& a : args) p *= a;
    return p;
  }
  if (op == "-") {
    if (args.size() == 1) return -args[0];
    Poly p = args[0];
    for (std::size_t k = 1; k < args.size(); ++k) p -= args[k];
    return p;
  }
  if (op == "/") {
    if (args.size() != 2 || !args[0].is_constant() || !args[1].is_constant() || args[1].constant() == 0)
      throw InputError("SMT-LIB: only constant division is supported");
    return Rational(args[0].constant() / args[1].constant());
  }
  throw InputError("SMT-LIB: unsupported operator " + op);
}

}  // namespace detail

/// Reads back the subset written by export_nra.
inline PolySystem import_nra(const std::string& text) {
  PolySystem s;
  for (const auto& e : detail::read_sexprs(text)) {
    if (e.is_atom || e.list.empty()) throw InputError("SMT-LIB: unexpected top-level form");
    const auto& head = e.list[0].atom;
    if (head == "declare-const" || head == "declare-fun") {
      s.declare(e.list.at(1).atom);
    } else if (head == "assert") {
      const detail::SExpr& body = e.list.at(1);
      bool negated = false;
      const detail::SExpr* cmp = &body;
      if (!body.is_atom && body.list.size() == 2 && body.list[0].atom == "not") {
        negated = true;
        cmp = &body.list[1];
      }
      if (cmp->is_atom || cmp->list.size() != 3) throw InputError("SMT-LIB: expected a binary comparison");
      const auto& op = cmp->list[0].atom;
      Poly l = detail::smt_to_poly(cmp->list[1]), r = detail::smt_to_poly(cmp->list[2]);
      Rel rel;
      Poly p;
      if (op == "=") rel = Rel::Eq, p = l - r;
      else if (op == ">=") rel = Rel::Geq, p = l - r;
      else if (op == ">") rel = Rel::Gt, p = l - r;
      else if (op == "<=") rel = Rel::Geq, p = r - l;
      else if (op == "<") rel = Rel::Gt, p = r - l;
      else throw InputError("SMT-LIB: unsupported comparison " + op);
      if (negated) {
        if (rel == Rel::Eq) rel = Rel::Neq;
        else if (rel == Rel::Geq) rel = Rel::Gt, p = -p;
        else rel = Rel::Geq, p = -p;
      }
      s.add(p, rel);
    } else if (head != "set-logic" && head != "check-sat" && head != "get-model" && head != "set-info" && head != "exit") {
      throw InputError("SMT-LIB: unsupported command " + head);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Positivstellensatz certificates: the system {f ≠ 0 : f ∈ F} ∪ {g ≥ 0 : g ∈ G} ∪ {h = 0 : h ∈ H}
// is infeasible when cone + ideal + (∏F)^(2n) expands to 0.

struct ConeTerm {
  Rational coeff;                  // must be ≥ 0
  std::vector<std::size_t> gens;   // product of G elements (indices)
  std::optional<Poly> square_of;   // times s² when present
};

struct PsatzCertificate {
  std::vector<Poly> F, G, H;
  std::vector<ConeTerm> cone;
  std::vector<Poly> ideal;  // one multiplier per element of H
  unsigned n = 1;
};

struct PsatzCheck {
  bool verified = false;
  Poly residue;  // the expansion; zero iff verified
};

inline Poly cone_value(const PsatzCertificate& c) {
  Poly g;
  for (const auto& t : c.cone) {
    if (t.coeff < 0) throw InputError("cone term with negative coefficient");
    Poly term = t.coeff;
    for (auto k : t.gens) {
      if (k >= c.G.size()) throw InputError("cone term refers to a missing generator g" + std::to_string(k));
      term *= c.G[k];
    }
    if (t.square_of) term *= *t.square_of * *t.square_of;
    g += term;
  }
  return g;
}

inline PsatzCheck verify_psatz(const PsatzCertificate& c) {
  if (c.ideal.size() != c.H.size()) throw InputError("ideal part needs one multiplier per equation");
  Poly h;
  for (std::size_t k = 0; k < c.H.size(); ++k) h += c.ideal[k] * c.H[k];
  Poly f = 1;
  for (const auto& x : c.F) f *= x;
  Poly total = cone_value(c) + h + f.pow(2 * c.n);
  return {total.is_zero(), total};
}

inline PolySystem psatz_system(const PsatzCertificate& c) {
  PolySystem s;
  for (const auto& f : c.F) s.add(f, Rel::Neq);
  for (const auto& g : c.G) s.add(g, Rel::Geq);
  for (const auto& h : c.H) s.add(h, Rel::Eq);
  return s;
}

/// Line format:  F: p | G: p | H: p | n: k | cone: coeff [; g=i,j] [; sq=p] | ideal: p
inline PsatzCertificate parse_psatz(const std::string& text) {
  PsatzCertificate c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto colon = line.find(':');
    std::string key = detail::strip_ws(line.substr(0, colon == std::string::npos ? line.size() : colon));
    if (key.empty()) continue;
    if (colon == std::string::npos) throw InputError("certificate line " + std::to_string(lineno) + ": expected 'key: value'");
    std::string val = line.substr(colon + 1);
    try {
      if (key == "F") c.F.push_back(parse_poly(val));
      else if (key == "G") c.G.push_back(parse_poly(val));
      else if (key == "H") c.H.push_back(parse_poly(val));
      else if (key == "ideal") c.ideal.push_back(parse_poly(val));
      else if (key == "n") c.n = static_cast<unsigned>(std::stoul(val));
      else if (key == "cone") {
        ConeTerm t;
        std::stringstream parts(val);
        std::string part;
        bool first = true;
        while (std::getline(parts, part, ';')) {
          auto eq = part.find('=');
          if (first) {
            t.coeff = parse_rational(detail::strip_ws(part));
            first = false;
          } else if (eq != std::string::npos && detail::strip_ws(part.substr(0, eq)) == "g") {
            std::stringstream idx(part.substr(eq + 1));
            std::string k;
            while (std::getline(idx, k, ','))
              if (k.find_first_not_of(" \t") != std::string::npos) t.gens.push_back(std::stoul(k));
          } else if (eq != std::string::npos && detail::strip_ws(part.substr(0, eq)) == "sq") {
            t.square_of = parse_poly(part.substr(eq + 1));
          } else {
            throw InputError("unrecognized cone field '" + part + "'");
          }
        }
        c.cone.push_back(std::move(t));
      } else {
        throw InputError("unknown key '" + key + "'");
      }
    } catch (const InputError& e) {
      throw InputError("certificate line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::logic_error&) {
      throw InputError("certificate line " + std::to_string(lineno) + ": bad number");
    }
  }
  return c;
}

}  // namespace causal
