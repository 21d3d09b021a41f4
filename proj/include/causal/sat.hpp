#pragma once

// Satisfiability and validity of probabilistic causal formulas. A formula is
// split into DNF clauses; each clause is decided over the atoms of Δ_≺ for
// every variable order ≺, grouped by which events of the clause they entail.

#include "causal/baselogic.hpp"
#include "causal/desugar.hpp"
#include "causal/realsolve.hpp"
#include "causal/scm.hpp"
#include "causal/semantics.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causal {

/// lhs ≥ rhs when positive, otherwise rhs > lhs.
struct Literal {
  Term lhs, rhs;
  bool positive = true;
};

using Clause = std::vector<Literal>;

/// Calls `fn` on each DNF clause of a desugared formula until it returns false.
/// Returns false when `max_clauses` was exceeded.
inline bool for_each_clause(const Formula& f, const std::function<bool(const Clause&)>& fn,
                            std::size_t max_clauses = 100000) {
  using K = Formula::Kind;
  std::size_t count = 0;
  bool stop = false, exceeded = false;
  Clause cur;
  // pending obligations: (formula, polarity)
  auto rec = [&](auto&& self, std::vector<std::pair<Formula, bool>> todo) -> void {
    while (!todo.empty() && !stop) {
      auto [g, pol] = todo.back();
      todo.pop_back();
      switch (g.kind()) {
        case K::Geq: cur.push_back({g.left(), g.right(), pol}); break;
        case K::Not: todo.emplace_back(g.operand(), !pol); break;
        case K::And:
          if (pol) {
            todo.emplace_back(g.rhs(), true);
            todo.emplace_back(g.lhs(), true);
            break;
          }
          for (const auto& side : {g.lhs(), g.rhs()}) {
            auto size = cur.size();
            auto branch = todo;
            branch.emplace_back(side, false);
            self(self, std::move(branch));
            cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(size), cur.end());
            if (stop) return;
          }
          return;
        default: throw InputError("formula must be desugared before DNF expansion");
      }
    }
    if (stop) return;
    if (++count > max_clauses) {
      stop = exceeded = true;
      return;
    }
    if (!fn(cur)) stop = true;
  };
  rec(rec, {{f, true}});
  return !exceeded;
}

/// The distinct events of a clause other than ⊤ and ⊥.
inline std::vector<Base> clause_events(const Clause& c) {
  std::vector<Base> out;
  auto add = [&](const Base& b) {
    if (b.is_top() || b.is_bottom()) return;
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  };
  for (const auto& l : c) {
    l.lhs.for_each_base(add);
    l.rhs.for_each_base(add);
  }
  return out;
}

inline std::string atom_unknown(std::size_t i) { return "d" + std::to_string(i); }

/// Constraints of a clause over the given atoms: unknown d_i is P(atoms[i]).
/// With an order, atoms outside Δ_≺ are rejected.
inline PolySystem build_system(const Clause& clause, const DeltaSpace& space, const std::vector<DeltaAtom>& atoms,
                               const VarOrder* order = nullptr) {
  PolySystem s;
  Poly total;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (order && !in_delta_order(space, atoms[i], *order))
      throw InputError("atom " + space.to_string(atoms[i]) + " is not recursive for the given order");
    s.add(Poly::var(atom_unknown(i)), Rel::Geq);
    total += Poly::var(atom_unknown(i));
  }
  s.add(total - 1, Rel::Eq);
  std::map<std::string, Poly> cache;
  auto leaf = [&](const Base& e) -> Poly {
    if (e.is_top()) return 1;
    if (e.is_bottom()) return 0;
    auto key = to_string(e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Poly p;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (space.holds(atoms[i], e)) p += Poly::var(atom_unknown(i));
    return cache[key] = p;
  };
  for (const auto& l : clause) {
    Poly d = normalize(l.lhs, leaf) - normalize(l.rhs, leaf);
    if (l.positive)
      s.add(d, Rel::Geq);
    else
      s.add(-d, Rel::Gt);
  }
  return s;
}

/// An SCM with one exogenous point per weighted atom; mechanisms read each
/// atom's conflict table along `order`.
inline Scm model_from_witness(const DeltaSpace& space, const VarOrder& order,
                              const std::vector<std::pair<DeltaAtom, Rational>>& support,
                              const Signature* sig = nullptr) {
  if (support.empty()) throw InputError("witness has no supported atom");
  Rational total = 0;
  for (const auto& [d, p] : support) {
    if (p <= 0) throw InputError("witness probabilities must be positive");
    if (!in_delta_order(space, d, order)) throw InputError("atom " + space.to_string(d) + " is not recursive for the order");
    total += p;
  }
  if (total != 1) throw InputError("witness probabilities sum to " + to_string(total));

  std::size_t n = space.var_count();
  Signature out;
  std::vector<std::optional<std::size_t>> reserved(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& name = space.variables()[v];
    std::vector<std::string> dom;
    if (sig) {
      dom = sig->domains[sig->require(name)];
    } else {
      std::set<std::string> d{"0", "1"};
      d.insert(space.values(v).begin(), space.values(v).end());
      dom.assign(d.begin(), d.end());
    }
    for (std::size_t k = 0; k < dom.size(); ++k)
      if (!std::binary_search(space.values(v).begin(), space.values(v).end(), dom[k])) {
        reserved[v] = k;
        break;
      }
    out.add(name, dom);
  }
  auto value_of_block = [&](std::size_t v, std::size_t b) -> std::size_t {
    if (!space.is_other(v, b)) return out.require_value(v, space.values(v)[b]);
    if (!reserved[v]) throw InputError("no spare value of " + space.variables()[v] + " for the other block");
    return *reserved[v];
  };
  auto block_of_value = [&](std::size_t v, std::size_t idx) -> std::size_t {
    const auto& val = out.domains[v][idx];
    const auto& vals = space.values(v);
    auto it = std::lower_bound(vals.begin(), vals.end(), val);
    if (it != vals.end() && *it == val) return static_cast<std::size_t>(it - vals.begin());
    return vals.size();
  };

  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t i = 0; i < n; ++i) parents[order[i]].assign(order.begin(), order.begin() + i);

  // tables[u][v]: parent block key -> block
  std::vector<std::vector<std::map<std::vector<std::size_t>, std::size_t>>> tables(support.size());
  std::vector<ExoPoint> exo;
  auto top = space.row_index(Intervention{});
  for (std::size_t u = 0; u < support.size(); ++u) {
    const auto& d = support[u].first;
    tables[u].resize(n);
    for (std::size_t r = 0; r < space.row_count(); ++r)
      for (std::size_t v = 0; v < n; ++v) {
        if (space.interventions()[r].contains(space.variables()[v])) continue;
        std::vector<std::size_t> key;
        for (auto p : parents[v]) key.push_back(d.blocks[r][p]);
        tables[u][v].emplace(std::move(key), d.blocks[r][v]);
      }
    exo.push_back({"u" + std::to_string(u), support[u].second});
  }

  return Scm::from_functions(out, exo, parents, [&](std::size_t v, const std::vector<std::size_t>& pv, std::size_t u) {
    std::vector<std::size_t> key;
    for (std::size_t j = 0; j < pv.size(); ++j) key.push_back(block_of_value(parents[v][j], pv[j]));
    auto it = tables[u][v].find(key);
    if (it != tables[u][v].end()) return value_of_block(v, it->second);
    if (top) return value_of_block(v, support[u].first.blocks[*top][v]);
    return reserved[v] ? *reserved[v] : std::size_t{0};
  });
}

struct SatConfig {
  const Signature* signature = nullptr;
  /// Reject formulas above this level when set.
  std::optional<int> level;
  DeltaLimits limits;
  SearchOptions search;
  std::size_t max_clauses = 4096;
  /// Called with each system built and the verdict the solver reached on it.
  std::function<void(const PolySystem&, Verdict)> on_system;
};

struct SatStats {
  std::size_t clauses = 0;
  std::size_t orders = 0;
  std::size_t systems = 0;
  std::size_t refuted = 0;
  std::size_t inconclusive = 0;
  std::size_t atoms = 0;
};

struct SatResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Scm> model;
  DeltaSpace space;
  VarOrder order;
  std::vector<std::pair<DeltaAtom, Rational>> support;
  /// |E| of the accepted clause; the support never exceeds events + 1.
  std::size_t events = 0;
  SatStats stats;
  std::string note;
};

namespace detail {

// A basic solution of the moment equations has at most |E|+1 nonzeros.
inline std::vector<Rational> reduce_support(const std::vector<std::vector<bool>>& classes, const std::vector<Rational>& q) {
  std::size_t k = classes.size(), m = classes.empty() ? 0 : classes[0].size();
  std::vector<Constraint> cs;
  std::set<std::string> names;
  Poly total;
  for (std::size_t i = 0; i < k; ++i) {
    names.insert(atom_unknown(i));
    cs.push_back({Poly::var(atom_unknown(i)), Rel::Geq});
    total += Poly::var(atom_unknown(i));
  }
  cs.push_back({total - 1, Rel::Eq});
  for (std::size_t e = 0; e < m; ++e) {
    Poly p;
    Rational v = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (classes[i][e]) {
        p += Poly::var(atom_unknown(i));
        v += q[i];
      }
    cs.push_back({p - v, Rel::Eq});
  }
  auto r = decide_linear_core(cs, names);
  if (r.verdict != Verdict::Sat) throw Error("internal: support reduction lost feasibility");
  std::vector<Rational> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = r.witness.at(atom_unknown(i));
  return out;
}

}  // namespace detail

/// Decides satisfiability in recursive SCMs. SAT answers carry a witness model
/// that has been model-checked against the input.
inline SatResult decide_sat(const Formula& phi, const SatConfig& cfg = {}) {
  if (cfg.level && level(phi) > *cfg.level)
    throw InputError("formula has level " + std::to_string(level(phi)) + ", above the requested " +
                     std::to_string(*cfg.level));
  if (cfg.signature) check_signature(phi, *cfg.signature);
  Formula f = desugar(phi);
  std::vector<Base> all;
  for (const auto& b : base_formulas(f))
    if (!b.is_top() && !b.is_bottom()) all.push_back(b);

  SatResult res;
  res.space = DeltaSpace::of(all, cfg.signature);
  const DeltaSpace& space = res.space;
  std::vector<VarOrder> orders;
  try {
    orders = all_orders(space.var_count(), cfg.limits);
  } catch (const GuardError& e) {
    res.note = e.what();
    return res;
  }
  SearchOptions sopt = cfg.search;
  sopt.unit_box = true;
  bool open = false;

  auto decide_clause = [&](const Clause& clause) -> bool {
    ++res.stats.clauses;
    auto events = clause_events(clause);
    std::set<std::vector<std::vector<bool>>> tried;
    bool clause_open = false;
    for (const auto& order : orders) {
      ++res.stats.orders;
      std::map<std::vector<bool>, DeltaAtom> classes;
      for_each_atom_in_order(space, order, [&](const DeltaAtom& d) {
        if (++res.stats.atoms > cfg.limits.max_atoms)
          throw GuardError("Δ enumeration exceeds " + std::to_string(cfg.limits.max_atoms) + " atoms");
        std::vector<bool> key;
        for (const auto& e : events) key.push_back(space.holds(d, e));
        classes.emplace(std::move(key), d);
        return true;
      });
      std::vector<std::vector<bool>> keys;
      std::vector<DeltaAtom> reps;
      for (const auto& [k, d] : classes) {
        keys.push_back(k);
        reps.push_back(d);
      }
      if (!tried.insert(keys).second) continue;
      ++res.stats.systems;
      auto system = build_system(clause, space, reps);
      auto r = decide_system(system, sopt);
      if (cfg.on_system) cfg.on_system(system, r.verdict);
      if (r.verdict == Verdict::Unsat) {
        ++res.stats.refuted;
        continue;
      }
      if (r.verdict == Verdict::Unknown) {
        ++res.stats.inconclusive;
        clause_open = true;
        continue;
      }
      std::vector<Rational> q(reps.size());
      for (std::size_t i = 0; i < reps.size(); ++i) q[i] = r.witness.at(atom_unknown(i));
      q = detail::reduce_support(keys, q);
      res.support.clear();
      for (std::size_t i = 0; i < reps.size(); ++i)
        if (q[i] > 0) res.support.emplace_back(reps[i], q[i]);
      res.events = events.size();
      if (res.support.size() > events.size() + 1) throw Error("internal: witness support exceeds |E|+1");
      res.order = order;
      res.model = model_from_witness(space, order, res.support, cfg.signature);
      if (!model_check(*res.model, phi)) throw Error("internal: witness model fails the formula");
      res.verdict = Verdict::Sat;
      return false;
    }
    open |= clause_open;
    return true;
  };

  try {
    if (!for_each_clause(f, decide_clause, cfg.max_clauses)) {
      res.note = "DNF expansion exceeds " + std::to_string(cfg.max_clauses) + " clauses";
      return res;
    }
  } catch (const GuardError& e) {
    res.verdict = Verdict::Unknown;
    res.note = e.what();
    return res;
  }
  if (res.verdict == Verdict::Sat) return res;
  res.verdict = open ? Verdict::Unknown : Verdict::Unsat;
  res.note = open ? "some branch was neither refuted nor solved" : "every branch refuted";
  return res;
}

enum class Validity { Valid, Invalid, Unknown };

inline const char* validity_name(Validity v) {
  switch (v) {
    case Validity::Valid: return "VALID";
    case Validity::Invalid: return "INVALID";
    case Validity::Unknown: return "UNKNOWN";
  }
  return "?";
}

struct ValidResult {
  Validity verdict = Validity::Unknown;
  /// Counter-model for INVALID.
  std::optional<Scm> model;
  SatResult negation;
};

inline ValidResult decide_valid(const Formula& phi, const SatConfig& cfg = {}) {
  ValidResult out;
  out.negation = decide_sat(Formula::negate(phi), cfg);
  switch (out.negation.verdict) {
    case Verdict::Sat:
      out.verdict = Validity::Invalid;
      out.model = out.negation.model;
      break;
    case Verdict::Unsat: out.verdict = Validity::Valid; break;
    case Verdict::Unknown: out.verdict = Validity::Unknown; break;
  }
  return out;
}

}  // namespace causal
