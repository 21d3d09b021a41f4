#pragma once

// d-separation, graph surgery, do-calculus side conditions and instances,
// and random Markov models for a given graph.

#include "causal/dag.hpp"
#include "causal/desugar.hpp"
#include "causal/scm.hpp"

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace causal {

using NodeSet = std::set<std::size_t>;

/// Reachability over active trails (Bayes ball).
inline bool d_separated(const Dag& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
  for (auto n : x)
    if (y.count(n) || z.count(n)) throw InputError("d-separation sets must be disjoint");
  for (auto n : y)
    if (z.count(n)) throw InputError("d-separation sets must be disjoint");
  for (const NodeSet* s : {&x, &y, &z})
    for (auto n : *s)
      if (n >= g.size()) throw InputError("unknown node index");

  NodeSet anc = g.ancestors(z);
  // state: (node, arrived_from_child)
  std::set<std::pair<std::size_t, bool>> seen;
  std::vector<std::pair<std::size_t, bool>> todo;
  for (auto n : x) todo.push_back({n, true});
  while (!todo.empty()) {
    auto [n, up] = todo.back();
    todo.pop_back();
    if (!seen.insert({n, up}).second) continue;
    if (!z.count(n) && y.count(n)) return false;
    if (up) {
      if (z.count(n)) continue;
      for (auto p : g.parents(n)) todo.push_back({p, true});
      for (auto c : g.children(n)) todo.push_back({c, false});
    } else {
      if (!z.count(n))
        for (auto c : g.children(n)) todo.push_back({c, false});
      if (anc.count(n))
        for (auto p : g.parents(n)) todo.push_back({p, true});
    }
  }
  return true;
}

inline bool d_separated(const Dag& g, const std::vector<std::string>& x, const std::vector<std::string>& y,
                        const std::vector<std::string>& z) {
  return d_separated(g, g.indices(x), g.indices(y), g.indices(z));
}

/// G with edges into `overline` and out of `underline` removed.
inline Dag mutilate(const Dag& g, const NodeSet& overline, const NodeSet& underline) {
  Dag out(g.nodes());
  for (auto [a, b] : g.edges())
    if (!overline.count(b) && !underline.count(a)) out.add_edge(a, b);
  return out;
}

/// Z(W): the Z-nodes that are not ancestors of any W-node in G with edges into X removed.
inline NodeSet z_of_w(const Dag& g, const NodeSet& x, const NodeSet& z, const NodeSet& w) {
  NodeSet anc = mutilate(g, x, {}).ancestors(w);
  NodeSet out;
  for (auto n : z)
    if (!anc.count(n)) out.insert(n);
  return out;
}

inline NodeSet unite(const NodeSet& a, const NodeSet& b) {
  NodeSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

/// The d-separation side condition of do-calculus rule 1, 2 or 3: (Y ⊥ Z | X, W) in the mutilated graph.
inline bool docalc_premise(const Dag& g, int rule, const NodeSet& x, const NodeSet& y, const NodeSet& z, const NodeSet& w) {
  switch (rule) {
    case 1: return d_separated(mutilate(g, x, {}), y, z, unite(x, w));
    case 2: return d_separated(mutilate(g, x, z), y, z, unite(x, w));
    case 3: return d_separated(mutilate(g, unite(x, z_of_w(g, x, z, w)), {}), y, z, unite(x, w));
    default: throw InputError("do-calculus rule must be 1, 2 or 3");
  }
}

/// Domains for instance generation; variables missing from the map are binary.
using DomainMap = std::map<std::string, std::vector<std::string>>;

namespace detail {

inline Prop conj_sorted(const std::map<std::string, std::string>& vals, const std::vector<std::string>& vars) {
  std::vector<Atom> atoms;
  for (const auto& v : vars) atoms.push_back({v, vals.at(v)});
  std::sort(atoms.begin(), atoms.end());
  return Prop::conj_atoms(atoms);
}

inline Intervention assign(const std::map<std::string, std::string>& vals, const std::vector<std::string>& a,
                           const std::vector<std::string>& b = {}) {
  std::map<std::string, std::string> m;
  for (const auto& v : a) m[v] = vals.at(v);
  for (const auto& v : b) m[v] = vals.at(v);
  return Intervention(m);
}

// P([alpha] event | [alpha] given), or P([alpha] event) when nothing is conditioned on.
inline Term effect(const Intervention& alpha, const Prop& event, const std::vector<std::string>& given_vars,
                   const std::map<std::string, std::string>& vals) {
  if (given_vars.empty()) return Term::prob(Base::cond(alpha, event));
  return Term::cond_prob(Base::cond(alpha, event), Base::cond(alpha, conj_sorted(vals, given_vars)));
}

}  // namespace detail

struct DocalcQuery {
  std::vector<std::string> x, y, z, w;
};

/// Every value instantiation of the rule's schema, desugared. Refuses when the premise fails.
inline std::vector<Formula> docalc_instances(const Dag& g, int rule, const DocalcQuery& q, const DomainMap& domains = {},
                                             std::size_t max_instances = 100000) {
  if (!docalc_premise(g, rule, g.indices(q.x), g.indices(q.y), g.indices(q.z), g.indices(q.w)))
    throw InputError("premise of do-calculus rule " + std::to_string(rule) + " does not hold; no instances emitted");
  std::vector<std::string> vars;
  for (const auto* part : {&q.x, &q.y, &q.z, &q.w})
    for (const auto& v : *part)
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  std::vector<std::vector<std::string>> doms;
  std::size_t total = 1;
  for (const auto& v : vars) {
    auto it = domains.find(v);
    doms.push_back(it == domains.end() ? std::vector<std::string>{"0", "1"} : it->second);
    total *= doms.back().size();
    if (total > max_instances) throw GuardError("too many do-calculus instances");
  }
  std::vector<Formula> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    std::map<std::string, std::string> vals;
    for (std::size_t k = 0; k < vars.size(); ++k) vals[vars[k]] = doms[k][idx[k]];
    Prop yv = detail::conj_sorted(vals, q.y);
    std::vector<std::string> zw = q.z;
    zw.insert(zw.end(), q.w.begin(), q.w.end());
    Term lhs = Term::one(), rhs = Term::one();
    switch (rule) {
      case 1:
        lhs = detail::effect(detail::assign(vals, q.x), yv, zw, vals);
        rhs = detail::effect(detail::assign(vals, q.x), yv, q.w, vals);
        break;
      case 2:
        lhs = detail::effect(detail::assign(vals, q.x, q.z), yv, q.w, vals);
        rhs = detail::effect(detail::assign(vals, q.x), yv, zw, vals);
        break;
      case 3:
        lhs = detail::effect(detail::assign(vals, q.x, q.z), yv, q.w, vals);
        rhs = detail::effect(detail::assign(vals, q.x), yv, q.w, vals);
        break;
    }
    out.push_back(desugar(Formula::equiv(lhs, rhs)));
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (++idx[k] < doms[k].size()) break;
      idx[k] = 0;
    }
  }
  return out;
}

/// Exact conditional independence X ⊥ Y | Z in a joint distribution over instantiations.
inline bool independent(const std::map<Instantiation, Rational>& joint, const std::vector<std::size_t>& x,
                        const std::vector<std::size_t>& y, const std::vector<std::size_t>& z) {
  auto cat = [](std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  auto pxyz = marginal(joint, cat(cat(x, y), z)), pxz = marginal(joint, cat(x, z)), pyz = marginal(joint, cat(y, z)),
       pz = marginal(joint, z);
  auto get = [](const std::map<Instantiation, Rational>& d, const Instantiation& k) {
    auto it = d.find(k);
    return it == d.end() ? Rational(0) : it->second;
  };
  for (const auto& [kxz, a] : pxz)
    for (const auto& [kyz, b] : pyz) {
      Instantiation zx(kxz.begin() + static_cast<long>(x.size()), kxz.end());
      Instantiation zy(kyz.begin() + static_cast<long>(y.size()), kyz.end());
      if (zx != zy) continue;
      Instantiation key(kxz.begin(), kxz.begin() + static_cast<long>(x.size()));
      key.insert(key.end(), kyz.begin(), kyz.end());
      if (get(pxyz, key) * get(pz, zx) != a * b) return false;
    }
  return true;
}

struct RandomModelOptions {
  std::uint64_t seed = 0;
  std::size_t default_domain = 2;
  std::map<std::string, std::size_t> domain_sizes;
  unsigned max_denominator = 97;
};

/// A Markov model whose influence graph is exactly `g`: full-support rational CPT rows,
/// realized through one private exogenous factor per variable; the exogenous space is their product.
inline Scm random_markov_scm(const Dag& g, const RandomModelOptions& opt = {}) {
  auto order = g.topological_order();
  if (!order) throw InputError("graph has a directed cycle");
  std::mt19937_64 rng(opt.seed);
  Signature sig;
  for (const auto& n : g.nodes()) {
    auto it = opt.domain_sizes.find(n);
    std::size_t k = it == opt.domain_sizes.end() ? opt.default_domain : it->second;
    if (k == 0) throw InputError("empty domain for " + n);
    std::vector<std::string> dom;
    for (std::size_t i = 0; i < k; ++i) dom.push_back(std::to_string(i));
    sig.add(n, dom);
  }
  if (opt.max_denominator < 2) throw InputError("denominator bound must be at least 2");

  struct Factor {
    std::vector<Rational> weights;                // per interval
    std::vector<std::vector<std::size_t>> value;  // [row][interval]
  };
  std::vector<Factor> factors(g.size());
  std::vector<std::vector<std::size_t>> parents(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    parents[v].assign(g.parents(v).begin(), g.parents(v).end());
    std::size_t k = sig.domains[v].size();
    std::size_t rows = 1;
    for (auto p : parents[v]) rows *= sig.domains[p].size();
    unsigned dmax = std::max<unsigned>(opt.max_denominator, static_cast<unsigned>(k));

    std::vector<std::vector<Rational>> cpt;
    for (int attempt = 0;; ++attempt) {
      cpt.assign(rows, {});
      for (std::size_t r = 0; r < rows; ++r) {
        unsigned d = std::uniform_int_distribution<unsigned>(static_cast<unsigned>(k), dmax)(rng);
        // random composition of d into k positive parts
        std::vector<unsigned> cuts;
        std::vector<unsigned> pool;
        for (unsigned c = 1; c < d; ++c) pool.push_back(c);
        std::shuffle(pool.begin(), pool.end(), rng);
        cuts.assign(pool.begin(), pool.begin() + static_cast<long>(k - 1));
        std::sort(cuts.begin(), cuts.end());
        unsigned prev = 0;
        for (auto c : cuts) {
          cpt[r].push_back(make_rational(c - prev, d));
          prev = c;
        }
        cpt[r].push_back(make_rational(d - prev, d));
      }
      // rows that differ in exactly one parent must differ, so every edge is an influence
      bool distinct = true;
      std::vector<std::size_t> a, b;
      for (std::size_t r1 = 0; r1 < rows && distinct; ++r1)
        for (std::size_t r2 = r1 + 1; r2 < rows && distinct; ++r2) {
          Scm::decode_row(sig, parents[v], r1, a);
          Scm::decode_row(sig, parents[v], r2, b);
          std::size_t diff = 0;
          for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
          if (diff == 1 && cpt[r1] == cpt[r2]) distinct = false;
        }
      if (distinct || k == 1) break;
      if (attempt > 1000) throw Error("could not draw distinguishable CPT rows");
    }

    std::set<Rational> cut_points;
    for (const auto& row : cpt) {
      Rational acc = 0;
      for (std::size_t i = 0; i + 1 < row.size(); ++i) cut_points.insert(acc += row[i]);
    }
    cut_points.insert(1);
    Factor f;
    Rational lo = 0;
    std::vector<Rational> uppers(cut_points.begin(), cut_points.end());
    for (const auto& hi : uppers) {
      f.weights.push_back(hi - lo);
      lo = hi;
    }
    f.value.assign(rows, {});
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t bin = 0;
      Rational acc = cpt[r][0];
      for (const auto& hi : uppers) {
        while (hi > acc) acc += cpt[r][++bin];
        f.value[r].push_back(bin);
      }
    }
    factors[v] = std::move(f);
  }

  // product exogenous space, first variable most significant
  std::size_t total = 1;
  for (const auto& f : factors) {
    total *= f.weights.size();
    if (total > 2000000) throw GuardError("random model exogenous space too large");
  }
  std::vector<ExoPoint> exo(total);
  std::vector<std::vector<std::size_t>> coord(total, std::vector<std::size_t>(g.size()));
  for (std::size_t u = 0; u < total; ++u) {
    std::size_t rest = u;
    Rational w = 1;
    std::string label = "u";
    for (std::size_t v = g.size(); v-- > 0;) {
      coord[u][v] = rest % factors[v].weights.size();
      rest /= factors[v].weights.size();
    }
    for (std::size_t v = 0; v < g.size(); ++v) {
      w *= factors[v].weights[coord[u][v]];
      label += (v ? "_" : "") + std::to_string(coord[u][v]);
    }
    exo[u] = {label, w};
  }
  return Scm::from_functions(sig, std::move(exo), parents,
                             [&](std::size_t v, const std::vector<std::size_t>& pv, std::size_t u) {
                               std::size_t row = 0;
                               for (std::size_t i = 0; i < pv.size(); ++i) row = row * sig.domains[parents[v][i]].size() + pv[i];
                               return factors[v].value[row][coord[u][v]];
                             });
}

}  // namespace causal
