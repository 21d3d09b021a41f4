#pragma once

// Finite structural causal models: a signature, a finite rational-weighted
// exogenous space, and one mechanism table per endogenous variable over its
// declared parents and the exogenous point.

#include "causal/dag.hpp"
#include "causal/formula.hpp"
#include "causal/signature.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causal {

struct ExoPoint {
  std::string label;
  Rational weight;
};

/// f_V as a dense table: entry [row * exo_count + u] is a value index, where
/// `row` is the mixed-radix encoding of the parent values (first parent most significant).
struct Mechanism {
  std::vector<std::size_t> parents;
  std::vector<std::size_t> table;

  bool operator==(const Mechanism&) const = default;
};

/// A total endogenous instantiation, one value index per variable.
using Instantiation = std::vector<std::size_t>;

/// A partial assignment by index, for interventions on a loaded model.
using IndexAssignment = std::map<std::size_t, std::size_t>;

class Scm {
 public:
  Scm() = default;
  Scm(Signature sig, std::vector<ExoPoint> exo, std::vector<Mechanism> mechanisms)
      : sig_(std::move(sig)), exo_(std::move(exo)), mech_(std::move(mechanisms)) {
    validate();
  }

  /// Builds the tables by calling `f(var, parent_values, u)` for every cell.
  static Scm from_functions(Signature sig, std::vector<ExoPoint> exo,
                            const std::vector<std::vector<std::size_t>>& parents,
                            const std::function<std::size_t(std::size_t, const std::vector<std::size_t>&, std::size_t)>& f) {
    std::vector<Mechanism> mech(sig.size());
    for (std::size_t v = 0; v < sig.size(); ++v) {
      mech[v].parents = parents[v];
      std::size_t rows = 1;
      for (auto p : parents[v]) rows *= sig.domains[p].size();
      mech[v].table.resize(rows * exo.size());
      std::vector<std::size_t> pv(parents[v].size());
      for (std::size_t r = 0; r < rows; ++r) {
        decode_row(sig, parents[v], r, pv);
        for (std::size_t u = 0; u < exo.size(); ++u) mech[v].table[r * exo.size() + u] = f(v, pv, u);
      }
    }
    return Scm(std::move(sig), std::move(exo), std::move(mech));
  }

  const Signature& signature() const { return sig_; }
  const std::vector<ExoPoint>& exo() const { return exo_; }
  const std::vector<Mechanism>& mechanisms() const { return mech_; }
  const Mechanism& mechanism(std::size_t v) const { return mech_[v]; }
  std::size_t exo_count() const { return exo_.size(); }
  std::size_t var_count() const { return sig_.size(); }

  std::size_t rows(std::size_t v) const {
    std::size_t r = 1;
    for (auto p : mech_[v].parents) r *= sig_.domains[p].size();
    return r;
  }

  std::size_t lookup(std::size_t v, std::size_t row, std::size_t u) const {
    return mech_[v].table[row * exo_.size() + u];
  }

  std::size_t row_of(std::size_t v, const Instantiation& values) const {
    std::size_t row = 0;
    for (auto p : mech_[v].parents) row = row * sig_.domains[p].size() + values[p];
    return row;
  }

  static void decode_row(const Signature& sig, const std::vector<std::size_t>& parents, std::size_t row,
                         std::vector<std::size_t>& out) {
    out.resize(parents.size());
    for (std::size_t k = parents.size(); k-- > 0;) {
      std::size_t d = sig.domains[parents[k]].size();
      out[k] = row % d;
      row /= d;
    }
  }

  IndexAssignment resolve(const Intervention& alpha) const {
    IndexAssignment out;
    for (const auto& [var, val] : alpha.assignments()) {
      auto v = sig_.require(var);
      out[v] = sig_.require_value(v, val);
    }
    return out;
  }

  bool operator==(const Scm& o) const { return sig_ == o.sig_ && exo_same(o) && mech_ == o.mech_; }

 private:
  Signature sig_;
  std::vector<ExoPoint> exo_;
  std::vector<Mechanism> mech_;

  bool exo_same(const Scm& o) const {
    if (exo_.size() != o.exo_.size()) return false;
    for (std::size_t i = 0; i < exo_.size(); ++i)
      if (exo_[i].label != o.exo_[i].label || exo_[i].weight != o.exo_[i].weight) return false;
    return true;
  }

  void validate() const {
    if (exo_.empty()) throw InputError("exogenous space is empty");
    Rational total = 0;
    std::set<std::string> labels;
    for (const auto& p : exo_) {
      if (p.weight < 0) throw InputError("negative weight for exogenous point " + p.label);
      if (!labels.insert(p.label).second) throw InputError("duplicate exogenous label " + p.label);
      total += p.weight;
    }
    if (total != 1) throw InputError("exogenous weights sum to " + to_string(total) + ", not 1");
    if (mech_.size() != sig_.size()) throw InputError("one mechanism per variable is required");
    for (std::size_t v = 0; v < sig_.size(); ++v) {
      std::set<std::size_t> seen;
      for (auto p : mech_[v].parents) {
        if (p >= sig_.size()) throw InputError("parent index out of range for " + sig_.variables[v]);
        if (!seen.insert(p).second) throw InputError("repeated parent for " + sig_.variables[v]);
      }
      if (mech_[v].table.size() != rows(v) * exo_.size())
        throw InputError("mechanism table of " + sig_.variables[v] + " is not total");
      for (auto out : mech_[v].table)
        if (out >= sig_.domains[v].size()) throw InputError("mechanism output outside the domain of " + sig_.variables[v]);
    }
  }
};

// ---------------------------------------------------------------------------

/// i(M): intervened variables get constant mechanisms and no parents.
inline Scm apply_intervention(const Scm& m, const IndexAssignment& i) {
  if (i.empty()) return m;
  auto mech = m.mechanisms();
  for (const auto& [v, val] : i) {
    if (v >= m.var_count() || val >= m.signature().domains[v].size())
      throw InputError("intervention value outside the domain");
    mech[v].parents.clear();
    mech[v].table.assign(m.exo_count(), val);
  }
  return Scm(m.signature(), m.exo(), std::move(mech));
}

inline Scm apply_intervention(const Scm& m, const Intervention& alpha) { return apply_intervention(m, m.resolve(alpha)); }

namespace detail {

// Does f_v depend on its k-th declared parent at exogenous point u?
inline bool depends_at(const Scm& m, std::size_t v, std::size_t k, std::size_t u) {
  const auto& mech = m.mechanism(v);
  const auto& sig = m.signature();
  std::size_t rows = m.rows(v);
  // stride of parent k inside the mixed-radix row index
  std::size_t stride = 1;
  for (std::size_t j = mech.parents.size(); j-- > k + 1;) stride *= sig.domains[mech.parents[j]].size();
  std::size_t d = sig.domains[mech.parents[k]].size();
  for (std::size_t r = 0; r < rows; ++r) {
    if ((r / stride) % d != 0) continue;
    std::size_t base = m.lookup(v, r, u);
    for (std::size_t x = 1; x < d; ++x)
      if (m.lookup(v, r + x * stride, u) != base) return true;
  }
  return false;
}

inline std::optional<std::vector<std::size_t>> declared_order(const Scm& m) {
  Dag g(m.signature().variables);
  for (std::size_t v = 0; v < m.var_count(); ++v)
    for (auto p : m.mechanism(v).parents) g.add_edge(p, v);
  return g.topological_order();
}

}  // namespace detail

/// The unique solution at exogenous point u.
inline Instantiation solve(const Scm& m, std::size_t u, const std::vector<std::size_t>* order = nullptr) {
  std::optional<std::vector<std::size_t>> local;
  if (!order) {
    local = detail::declared_order(m);
    if (!local) {
      Dag g(m.signature().variables);
      for (std::size_t v = 0; v < m.var_count(); ++v)
        for (std::size_t k = 0; k < m.mechanism(v).parents.size(); ++k)
          if (detail::depends_at(m, v, k, u)) g.add_edge(m.mechanism(v).parents[k], v);
      local = g.topological_order();
      if (!local) throw Error("model is not recursive at exogenous point " + m.exo()[u].label);
    }
    order = &*local;
  }
  Instantiation vals(m.var_count(), 0);
  for (auto v : *order) vals[v] = m.lookup(v, m.row_of(v, vals), u);
  return vals;
}

/// A variable order valid at every exogenous point when the declared parents are acyclic.
inline std::optional<std::vector<std::size_t>> evaluation_order(const Scm& m) { return detail::declared_order(m); }

/// X ~> Y iff some positive-weight u and rows differing only at X give different f_Y (per-point reading).
inline Dag influence_graph(const Scm& m) {
  Dag g(m.signature().variables);
  for (std::size_t v = 0; v < m.var_count(); ++v) {
    const auto& mech = m.mechanism(v);
    for (std::size_t k = 0; k < mech.parents.size(); ++k) {
      if (mech.parents[k] == v) continue;
      for (std::size_t u = 0; u < m.exo_count(); ++u) {
        if (m.exo()[u].weight == 0) continue;
        if (detail::depends_at(m, v, k, u)) {
          g.add_edge(mech.parents[k], v);
          break;
        }
      }
    }
  }
  return g;
}

struct RecursiveCheck {
  bool recursive = false;
  std::vector<std::size_t> order;  // topological order when recursive
  std::vector<std::size_t> cycle;  // witness otherwise
};

inline RecursiveCheck check_recursive(const Scm& m) {
  Dag g = influence_graph(m);
  // A variable whose own value feeds back into f_V is a self-loop.
  for (std::size_t v = 0; v < m.var_count(); ++v) {
    const auto& mech = m.mechanism(v);
    for (std::size_t k = 0; k < mech.parents.size(); ++k)
      if (mech.parents[k] == v)
        for (std::size_t u = 0; u < m.exo_count(); ++u)
          if (m.exo()[u].weight > 0 && detail::depends_at(m, v, k, u)) return {false, {}, {v}};
  }
  if (auto order = g.topological_order()) return {true, *order, {}};
  return {false, {}, g.find_cycle()};
}

/// Pushforward distribution P_M(V) over instantiations with positive mass.
inline std::map<Instantiation, Rational> joint_distribution(const Scm& m) {
  std::map<Instantiation, Rational> dist;
  auto order = evaluation_order(m);
  for (std::size_t u = 0; u < m.exo_count(); ++u) {
    if (m.exo()[u].weight == 0) continue;
    dist[solve(m, u, order ? &*order : nullptr)] += m.exo()[u].weight;
  }
  return dist;
}

inline std::map<Instantiation, Rational> marginal(const std::map<Instantiation, Rational>& joint,
                                                  const std::vector<std::size_t>& vars) {
  std::map<Instantiation, Rational> out;
  for (const auto& [inst, p] : joint) {
    Instantiation key;
    key.reserve(vars.size());
    for (auto v : vars) key.push_back(inst[v]);
    out[key] += p;
  }
  return out;
}

struct MarkovViolation {
  std::size_t variable = 0;
  std::vector<std::size_t> parents;
  std::vector<std::size_t> nondescendants;
  Instantiation assignment;  // values of (variable, nondescendants..., parents...)
  Rational p_given_both;     // P(v | nd, pa)
  Rational p_given_parents;  // P(v | pa)
};

struct MarkovCheck {
  bool markov = true;
  std::optional<MarkovViolation> violation;
};

/// Exact check that every V is independent of its non-descendants given its parents in G_M.
inline MarkovCheck check_markov(const Scm& m) {
  Dag g = influence_graph(m);
  auto joint = joint_distribution(m);
  for (std::size_t v = 0; v < m.var_count(); ++v) {
    std::vector<std::size_t> pa(g.parents(v).begin(), g.parents(v).end());
    auto desc = g.descendants({v});
    std::vector<std::size_t> nd;
    for (std::size_t w = 0; w < m.var_count(); ++w)
      if (!desc.count(w) && !g.parents(v).count(w)) nd.push_back(w);
    if (nd.empty()) continue;

    std::vector<std::size_t> all{v};
    all.insert(all.end(), nd.begin(), nd.end());
    all.insert(all.end(), pa.begin(), pa.end());
    std::vector<std::size_t> v_pa{v};
    v_pa.insert(v_pa.end(), pa.begin(), pa.end());
    std::vector<std::size_t> nd_pa(nd);
    nd_pa.insert(nd_pa.end(), pa.begin(), pa.end());

    auto p_all = marginal(joint, all), p_vpa = marginal(joint, v_pa), p_ndpa = marginal(joint, nd_pa),
         p_pa = marginal(joint, pa);
    auto get = [](const std::map<Instantiation, Rational>& d, const Instantiation& k) {
      auto it = d.find(k);
      return it == d.end() ? Rational(0) : it->second;
    };
    // P(v,nd,pa) P(pa) == P(v,pa) P(nd,pa), enumerated over the support of the right side.
    for (const auto& [kvpa, pvpa] : p_vpa) {
      Instantiation pav(kvpa.begin() + 1, kvpa.end());
      for (const auto& [kndpa, pndpa] : p_ndpa) {
        if (!std::equal(pav.begin(), pav.end(), kndpa.end() - static_cast<long>(pa.size()))) continue;
        Instantiation key{kvpa[0]};
        key.insert(key.end(), kndpa.begin(), kndpa.end());
        Rational pp = get(p_pa, pav);
        Rational lhs = get(p_all, key) * pp, rhs = pvpa * pndpa;
        if (lhs != rhs) {
          MarkovViolation viol{v, pa, nd, key, get(p_all, key) / pndpa, pvpa / pp};
          return {false, viol};
        }
      }
    }
  }
  return {true, std::nullopt};
}

/// Probability of a predicate over solutions, summing positive-weight points.
template <class Pred>
Rational probability_where(const Scm& m, Pred&& pred) {
  Rational total = 0;
  auto order = evaluation_order(m);
  for (std::size_t u = 0; u < m.exo_count(); ++u) {
    if (m.exo()[u].weight == 0) continue;
    if (pred(solve(m, u, order ? &*order : nullptr))) total += m.exo()[u].weight;
  }
  return total;
}

}  // namespace causal
