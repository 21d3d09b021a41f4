#pragma once

// Polynomial constraint systems and the exact decision procedure for the
// linear ones: two-phase simplex over rationals with Bland's rule. Strict
// rows share a slack ε that is maximized; ≠ rows split into two strict rows.

#include "causal/poly.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causal {

enum class Rel { Eq, Geq, Gt, Neq };

inline const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Geq: return ">=";
    case Rel::Gt: return ">";
    case Rel::Neq: return "!=";
  }
  return "?";
}

/// p REL 0.
struct Constraint {
  Poly p;
  Rel rel;
  bool operator==(const Constraint&) const = default;
};

using Witness = std::map<std::string, Rational>;

inline bool holds(const Constraint& c, const Witness& w) {
  Rational v = c.p.eval(w);
  switch (c.rel) {
    case Rel::Eq: return v == 0;
    case Rel::Geq: return v >= 0;
    case Rel::Gt: return v > 0;
    case Rel::Neq: return v != 0;
  }
  return false;
}

struct PolySystem {
  std::vector<Constraint> constraints;
  std::set<std::string> unknowns;

  void add(Poly p, Rel rel) {
    for (const auto& x : p.unknowns()) unknowns.insert(x);
    constraints.push_back({std::move(p), rel});
  }
  void declare(const std::string& x) { unknowns.insert(x); }

  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& c : constraints) d = std::max(d, c.p.degree());
    return d;
  }
  bool linear() const { return degree() <= 1; }

  /// Exact check; unknowns missing from the witness count as errors.
  bool satisfied_by(const Witness& w) const {
    for (const auto& c : constraints)
      if (!holds(c, w)) return false;
    return true;
  }
};

inline std::string to_string(const PolySystem& s) {
  std::string out;
  for (const auto& c : s.constraints) out += to_string(c.p) + " " + rel_symbol(c.rel) + " 0\n";
  return out;
}

enum class Verdict { Sat, Unsat, Unknown };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  Witness witness;
  std::string note;
};

namespace detail {

// Dense tableau; column `cols` holds the right-hand side.
class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs, std::size_t cols)
      : cols_(cols), m_(rows.size()) {
    // make rhs nonnegative, then append one artificial per row
    a_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      a_[i].assign(cols_ + m_ + 1, 0);
      bool flip = rhs[i] < 0;
      for (std::size_t j = 0; j < cols_; ++j) a_[i][j] = flip ? -rows[i][j] : rows[i][j];
      a_[i][cols_ + i] = 1;
      a_[i].back() = flip ? -rhs[i] : rhs[i];
      basis_.push_back(cols_ + i);
    }
  }

  /// Phase 1; false when the rows are infeasible.
  bool feasible() {
    std::vector<Rational> cost(cols_ + m_, 0);
    for (std::size_t j = cols_; j < cols_ + m_; ++j) cost[j] = 1;
    optimize(cost, cols_ + m_);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= cols_ && a_[i].back() != 0) return false;
    // pivot remaining artificials out where possible
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < cols_) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        if (a_[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
    return true;
  }

  /// Minimizes cost·x over the original columns (after feasible()); false if unbounded.
  bool minimize(const std::vector<Rational>& cost) {
    std::vector<Rational> full(cols_ + m_, 0);
    for (std::size_t j = 0; j < cols_; ++j) full[j] = cost[j];
    return optimize(full, cols_);
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(cols_, 0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < cols_) x[basis_[i]] = a_[i].back();
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t c) {
    Rational inv = 1 / a_[r][c];
    for (auto& v : a_[r]) v *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || a_[i][c] == 0) continue;
      Rational f = a_[i][c];
      for (std::size_t j = 0; j < a_[i].size(); ++j)
        if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  // Bland's rule over columns < limit; artificial columns beyond limit never enter.
  bool optimize(const std::vector<Rational>& cost, std::size_t limit) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < limit && !enter; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        Rational reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i)
          if (a_[i][j] != 0) reduced -= cost[basis_[i]] * a_[i][j];
        if (reduced < 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (a_[i][*enter] <= 0) continue;
        Rational ratio = a_[i].back() / a_[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  }

  std::size_t cols_, m_;
  std::vector<std::vector<Rational>> a_;
  std::vector<std::size_t> basis_;
};

// One system without ≠ rows.
inline SolveResult decide_linear_core(const std::vector<Constraint>& cs, const std::set<std::string>& unknowns) {
  std::vector<std::string> names(unknowns.begin(), unknowns.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < names.size(); ++k) index[names[k]] = k;

  // rows of the form c*x >= 0 with c > 0 make x a nonnegative column instead
  std::vector<bool> nonneg(names.size(), false);
  std::vector<bool> skip(cs.size(), false);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& t = cs[i].p.terms();
    if (cs[i].rel == Rel::Geq && t.size() == 1 && t.begin()->first.degree() == 1 && t.begin()->second > 0) {
      nonneg[index.at(t.begin()->first.vars[0])] = true;
      skip[i] = true;
    }
  }
  // columns: x+ (or x), x- for free x, slack per inequality, then ε
  std::vector<std::size_t> plus(names.size()), minus(names.size(), SIZE_MAX);
  std::size_t cols = 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    plus[k] = cols++;
    if (!nonneg[k]) minus[k] = cols++;
  }
  bool strict = false;
  std::vector<std::size_t> slack(cs.size(), SIZE_MAX);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (skip[i]) continue;
    if (cs[i].rel != Rel::Eq) slack[i] = cols++;
    strict |= cs[i].rel == Rel::Gt;
  }
  std::size_t eps = strict ? cols++ : SIZE_MAX;

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (skip[i]) continue;
    std::vector<Rational> row(cols, 0);
    for (const auto& [m, c] : cs[i].p.terms()) {
      if (m.degree() == 0) continue;
      std::size_t k = index.at(m.vars[0]);
      row[plus[k]] += c;
      if (minus[k] != SIZE_MAX) row[minus[k]] -= c;
    }
    if (slack[i] != SIZE_MAX) row[slack[i]] = -1;
    if (cs[i].rel == Rel::Gt) row[eps] = -1;
    rows.push_back(std::move(row));
    rhs.push_back(-cs[i].p.constant());
  }
  std::size_t bound_slack = SIZE_MAX;
  if (strict) {
    // ε ≤ 1 keeps phase 2 bounded
    bound_slack = cols++;
    for (auto& r : rows) r.push_back(0);
    std::vector<Rational> row(cols, 0);
    row[eps] = 1;
    row[bound_slack] = 1;
    rows.push_back(std::move(row));
    rhs.push_back(1);
  }

  Simplex lp(rows, rhs, cols);
  if (!lp.feasible()) return {Verdict::Unsat, {}, "linear relaxation infeasible"};
  if (strict) {
    std::vector<Rational> cost(cols, 0);
    cost[eps] = -1;
    lp.minimize(cost);
  }
  auto x = lp.solution();
  if (strict && x[eps] <= 0) return {Verdict::Unsat, {}, "strict constraints cannot hold together"};
  Witness w;
  for (std::size_t k = 0; k < names.size(); ++k) w[names[k]] = x[plus[k]] - (minus[k] == SIZE_MAX ? Rational(0) : x[minus[k]]);
  return {Verdict::Sat, w, ""};
}

}  // namespace detail

/// Exact decision for systems of degree ≤ 1. SAT answers carry a verified rational witness.
inline SolveResult decide_linear(const PolySystem& s, std::size_t max_neq = 16) {
  if (!s.linear()) throw InputError("decide_linear needs a system of degree at most 1");
  std::vector<Constraint> base;
  std::vector<const Constraint*> neq;
  for (const auto& c : s.constraints) {
    if (c.p.is_constant()) {
      if (!holds(c, {})) return {Verdict::Unsat, {}, "constant constraint " + to_string(c.p) + " " + rel_symbol(c.rel) + " 0 fails"};
      continue;
    }
    if (c.rel == Rel::Neq)
      neq.push_back(&c);
    else
      base.push_back(c);
  }
  if (neq.size() > max_neq) throw GuardError("too many disequalities to branch on");
  for (std::size_t mask = 0; mask < (std::size_t{1} << neq.size()); ++mask) {
    auto cs = base;
    for (std::size_t k = 0; k < neq.size(); ++k) cs.push_back({(mask >> k) & 1 ? -neq[k]->p : neq[k]->p, Rel::Gt});
    auto r = detail::decide_linear_core(cs, s.unknowns);
    if (r.verdict == Verdict::Sat) {
      if (!s.satisfied_by(r.witness)) throw Error("internal: linear witness fails verification");
      return r;
    }
  }
  return {Verdict::Unsat, {}, "every branch is infeasible"};
}

}  // namespace causal
