#pragma once

// Deterministic base-language reasoning over Δ atoms. An atom fixes, for every
// relevant intervention α and every mentioned variable V, one outcome block:
// either a mentioned value of V or "other" (none of the mentioned values).

#include "causal/formula.hpp"
#include "causal/parser.hpp"
#include "causal/signature.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace causal {

struct DeltaAtom {
  /// blocks[row][var]; a block equal to the number of mentioned values of var is "other".
  std::vector<std::vector<std::size_t>> blocks;
  auto operator<=>(const DeltaAtom&) const = default;
};

struct DeltaLimits {
  std::size_t max_atoms = 2000000;
  std::size_t max_orders = 40320;
};

class DeltaSpace {
 public:
  DeltaSpace() = default;

  /// Space for a set of base formulas. Without a signature every domain is {0,1} plus the mentioned values.
  static DeltaSpace of(const std::vector<Base>& bases, const Signature* sig = nullptr) {
    DeltaSpace s;
    Vocabulary voc;
    for (const auto& b : bases) {
      voc.add(b);
      for (const auto& a : interventions_of(b))
        if (std::find(s.rows_.begin(), s.rows_.end(), a) == s.rows_.end()) s.rows_.push_back(a);
    }
    std::sort(s.rows_.begin(), s.rows_.end());
    for (const auto& [var, vals] : voc.values) {
      s.vars_.push_back(var);
      s.values_.emplace_back(vals.begin(), vals.end());
      std::set<std::string> domain;
      if (sig) {
        auto vi = sig->require(var);
        for (const auto& v : vals) sig->require_value(vi, v);
        domain.insert(sig->domains[vi].begin(), sig->domains[vi].end());
      } else {
        domain = {"0", "1"};
        domain.insert(vals.begin(), vals.end());
      }
      s.other_.push_back(domain.size() > vals.size());
    }
    return s;
  }

  static DeltaSpace of(const Formula& phi, const Signature* sig = nullptr) { return of(base_formulas(phi), sig); }

  std::size_t var_count() const { return vars_.size(); }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& variables() const { return vars_; }
  const std::vector<Intervention>& interventions() const { return rows_; }
  const std::vector<std::string>& values(std::size_t v) const { return values_[v]; }
  bool has_other(std::size_t v) const { return other_[v]; }
  std::size_t block_count(std::size_t v) const { return values_[v].size() + (other_[v] ? 1 : 0); }
  bool is_other(std::size_t v, std::size_t b) const { return b == values_[v].size(); }

  std::optional<std::size_t> var_index(const std::string& name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
    if (it == vars_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
  }
  std::optional<std::size_t> row_index(const Intervention& a) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), a);
    if (it == rows_.end() || !(*it == a)) return std::nullopt;
    return static_cast<std::size_t>(it - rows_.begin());
  }
  std::size_t value_block(std::size_t v, const std::string& value) const {
    auto it = std::lower_bound(values_[v].begin(), values_[v].end(), value);
    if (it == values_[v].end() || *it != value) throw InputError("value " + value + " of " + vars_[v] + " not mentioned");
    return static_cast<std::size_t>(it - values_[v].begin());
  }

  /// |Δ| = (∏ |B(V)|)^rows, or nullopt when it exceeds `cap`.
  std::optional<std::size_t> atom_count(std::size_t cap = SIZE_MAX) const {
    std::size_t per_row = 1;
    for (std::size_t v = 0; v < var_count(); ++v) {
      if (per_row > cap / block_count(v)) return std::nullopt;
      per_row *= block_count(v);
    }
    std::size_t total = 1;
    for (std::size_t r = 0; r < row_count(); ++r) {
      if (total > cap / per_row) return std::nullopt;
      total *= per_row;
    }
    return total;
  }

  /// Lazy enumeration of Δ; stops when `fn` returns false.
  void for_each_atom(const std::function<bool(const DeltaAtom&)>& fn) const {
    DeltaAtom d;
    d.blocks.assign(row_count(), std::vector<std::size_t>(var_count(), 0));
    while (true) {
      if (!fn(d)) return;
      std::size_t r = row_count(), v = 0;
      bool carried = true;
      while (carried && r > 0) {
        --r;
        for (v = var_count(); v-- > 0;) {
          if (++d.blocks[r][v] < block_count(v)) {
            carried = false;
            break;
          }
          d.blocks[r][v] = 0;
        }
      }
      if (carried) return;
    }
  }

  /// Truth of a base formula under an atom; every leaf intervention must be a row.
  bool holds(const DeltaAtom& d, const Base& e) const {
    return e.eval([&](const Intervention& a) {
      auto r = row_index(a);
      if (!r) throw InputError("intervention " + causal::to_string(a) + " is not part of the Δ space");
      const auto& row = d.blocks[*r];
      return [this, &row](const std::string& var) -> const std::string& {
        auto v = var_index(var);
        if (!v) throw InputError("variable " + var + " is not part of the Δ space");
        return is_other(*v, row[*v]) ? other_marker() : values_[*v][row[*v]];
      };
    });
  }

  std::string block_name(std::size_t v, std::size_t b) const {
    if (!is_other(v, b)) return vars_[v] + "=" + values_[v][b];
    std::string s;
    for (const auto& val : values_[v]) s += (s.empty() ? "" : " & ") + vars_[v] + "!=" + val;
    return s.empty() ? "true" : s;
  }

  /// The atom as a base formula: ∧_α [α] ∧_V block.
  Base formula(const DeltaAtom& d) const {
    std::vector<Base> parts;
    for (std::size_t r = 0; r < row_count(); ++r) {
      std::vector<Prop> cells;
      for (std::size_t v = 0; v < var_count(); ++v) {
        if (!is_other(v, d.blocks[r][v])) {
          cells.push_back(Prop::atom(vars_[v], values_[v][d.blocks[r][v]]));
        } else {
          for (const auto& val : values_[v]) cells.push_back(Prop::negate(Prop::atom(vars_[v], val)));
        }
      }
      parts.push_back(Base::cond(rows_[r], Prop::conj_all(cells)));
    }
    return Base::conj_all(parts);
  }

  std::string to_string(const DeltaAtom& d) const {
    std::string s;
    for (std::size_t r = 0; r < row_count(); ++r) {
      if (r) s += " & ";
      s += "[" + causal::to_string(rows_[r]) + "](";
      for (std::size_t v = 0; v < var_count(); ++v) s += (v ? ", " : "") + block_name(v, d.blocks[r][v]);
      s += ")";
    }
    return s.empty() ? "true" : s;
  }

 private:
  static const std::string& other_marker() {
    static const std::string marker = "\x01other";
    return marker;
  }

  std::vector<std::string> vars_;
  std::vector<std::vector<std::string>> values_;
  std::vector<bool> other_;
  std::vector<Intervention> rows_;
};

using VarOrder = std::vector<std::size_t>;

/// Conflict-table test: is the atom satisfiable by a deterministic model recursive over `order`?
inline bool in_delta_order(const DeltaSpace& s, const DeltaAtom& d, const VarOrder& order) {
  for (std::size_t r = 0; r < s.row_count(); ++r)
    for (const auto& [var, val] : s.interventions()[r].assignments()) {
      auto v = *s.var_index(var);
      if (d.blocks[r][v] != s.value_block(v, val)) return false;
    }
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t col = order[i];
    std::map<std::vector<std::size_t>, std::size_t> cells;
    for (std::size_t r = 0; r < s.row_count(); ++r) {
      if (s.interventions()[r].contains(s.variables()[col])) continue;
      std::vector<std::size_t> key;
      for (std::size_t j = 0; j < i; ++j) key.push_back(d.blocks[r][order[j]]);
      auto [it, fresh] = cells.emplace(std::move(key), d.blocks[r][col]);
      if (!fresh && it->second != d.blocks[r][col]) return false;
    }
  }
  return true;
}

/// Enumerates Δ_≺ directly, filling the conflict table column by column with pruning.
inline void for_each_atom_in_order(const DeltaSpace& s, const VarOrder& order,
                                   const std::function<bool(const DeltaAtom&)>& fn) {
  std::size_t rows = s.row_count(), n = order.size();
  DeltaAtom d;
  d.blocks.assign(rows, std::vector<std::size_t>(s.var_count(), 0));
  std::vector<std::optional<std::size_t>> forced(rows * n);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < n; ++i) {
      const auto& var = s.variables()[order[i]];
      if (s.interventions()[r].contains(var)) forced[r * n + i] = s.value_block(order[i], *s.interventions()[r].value_of(var));
    }
  // per column: prefix key -> (block, multiplicity)
  std::vector<std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>>> table(n);
  bool stop = false;
  auto rec = [&](auto&& self, std::size_t i, std::size_t r) -> void {
    if (stop) return;
    if (i == n) {
      if (!fn(d)) stop = true;
      return;
    }
    if (r == rows) return self(self, i + 1, 0);
    std::size_t col = order[i];
    if (forced[r * n + i]) {
      d.blocks[r][col] = *forced[r * n + i];
      return self(self, i, r + 1);
    }
    std::vector<std::size_t> key;
    for (std::size_t j = 0; j < i; ++j) key.push_back(d.blocks[r][order[j]]);
    auto& cells = table[i];
    auto it = cells.find(key);
    if (it != cells.end()) {
      d.blocks[r][col] = it->second.first;
      ++it->second.second;
      self(self, i, r + 1);
      --it->second.second;
      return;
    }
    for (std::size_t b = 0; b < s.block_count(col) && !stop; ++b) {
      d.blocks[r][col] = b;
      auto pos = cells.emplace(key, std::make_pair(b, std::size_t{1})).first;
      self(self, i, r + 1);
      cells.erase(pos);
    }
  };
  rec(rec, 0, 0);
}

/// All total orders of the space's variables, lexicographic.
inline std::vector<VarOrder> all_orders(std::size_t n, const DeltaLimits& lim = {}) {
  std::size_t count = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    count *= k;
    if (count > lim.max_orders) throw GuardError("too many variable orders (" + std::to_string(n) + " variables)");
  }
  VarOrder o(n);
  std::iota(o.begin(), o.end(), 0);
  std::vector<VarOrder> out;
  do out.push_back(o);
  while (std::next_permutation(o.begin(), o.end()));
  return out;
}

/// The atoms of Δ_≺ that entail e (or of all of Δ when no order is given).
inline std::vector<DeltaAtom> expand_prob(const DeltaSpace& s, const Base& e, const VarOrder* order = nullptr,
                                          const DeltaLimits& lim = {}) {
  std::vector<DeltaAtom> out;
  std::size_t seen = 0;
  auto visit = [&](const DeltaAtom& d) {
    if (++seen > lim.max_atoms) throw GuardError("Δ enumeration exceeds " + std::to_string(lim.max_atoms) + " atoms");
    if (s.holds(d, e)) out.push_back(d);
    return true;
  };
  if (order)
    for_each_atom_in_order(s, *order, visit);
  else
    s.for_each_atom(visit);
  return out;
}

struct BaseCheck {
  bool holds = false;
  VarOrder order;  // witness order (names via space.variables())
  std::optional<DeltaAtom> atom;
  DeltaSpace space;

  std::string describe() const {
    if (!atom) return "";
    std::string o;
    for (auto v : order) o += (o.empty() ? "" : " < ") + space.variables()[v];
    return "order " + (o.empty() ? std::string("(none)") : o) + ", atom " + space.to_string(*atom);
  }
};

/// Satisfiability of a base formula in recursive models; the witness is an atom of some Δ_≺.
inline BaseCheck base_sat(const Base& e, const Signature* sig = nullptr, const DeltaLimits& lim = {}) {
  BaseCheck res;
  res.space = DeltaSpace::of({e}, sig);
  std::size_t seen = 0;
  for (const auto& order : all_orders(res.space.var_count(), lim)) {
    for_each_atom_in_order(res.space, order, [&](const DeltaAtom& d) {
      if (++seen > lim.max_atoms) throw GuardError("base satisfiability search exceeds the atom limit");
      if (!res.space.holds(d, e)) return true;
      res.holds = true;
      res.order = order;
      res.atom = d;
      return false;
    });
    if (res.holds) break;
  }
  return res;
}

/// Validity of e1 ↔ e2; on failure the witness atom separates them.
inline BaseCheck base_valid(const Base& e1, const Base& e2, const Signature* sig = nullptr, const DeltaLimits& lim = {}) {
  BaseCheck res;
  res.space = DeltaSpace::of({e1, e2}, sig);
  res.holds = true;
  std::size_t seen = 0;
  for (const auto& order : all_orders(res.space.var_count(), lim)) {
    for_each_atom_in_order(res.space, order, [&](const DeltaAtom& d) {
      if (++seen > lim.max_atoms) throw GuardError("base validity check exceeds the atom limit");
      if (res.space.holds(d, e1) == res.space.holds(d, e2)) return true;
      res.holds = false;
      res.order = order;
      res.atom = d;
      return false;
    });
    if (!res.holds) break;
  }
  return res;
}

/// Validity of a single base formula.
inline BaseCheck base_valid(const Base& e, const Signature* sig = nullptr, const DeltaLimits& lim = {}) {
  return base_valid(e, Base::top(), sig, lim);
}

}  // namespace causal
