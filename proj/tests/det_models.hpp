#pragma once

// Deterministic table models recursive over a fixed order, enumerated exhaustively,
// and the Δ-atom each one realizes. Used as the brute-force side of table checks.

#include "causal/baselogic.hpp"
#include "causal/scm.hpp"

#include <algorithm>
#include <vector>

namespace causal::det {

// A deterministic model over a signature: one function table per variable, recursive over `order`.
struct DetModel {
  const Signature* sig;
  VarOrder order;  // signature indices
  std::vector<std::vector<std::size_t>> table;  // table[k][row over earlier vars]

  Instantiation solve(const Intervention& a) const {
    Instantiation vals(sig->size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      std::size_t v = order[k];
      const auto& name = sig->variables[v];
      if (a.contains(name)) {
        vals[v] = sig->require_value(v, *a.value_of(name));
        continue;
      }
      std::size_t row = 0;
      for (std::size_t j = 0; j < k; ++j) row = row * sig->domains[order[j]].size() + vals[order[j]];
      vals[v] = table[k][row];
    }
    return vals;
  }

  Scm as_scm() const {
    std::vector<std::vector<std::size_t>> parents(sig->size());
    for (std::size_t k = 0; k < order.size(); ++k) parents[order[k]].assign(order.begin(), order.begin() + static_cast<long>(k));
    return Scm::from_functions(*sig, {{"u", 1}}, parents, [&](std::size_t v, const std::vector<std::size_t>& pv, std::size_t) {
      std::size_t k = static_cast<std::size_t>(std::find(order.begin(), order.end(), v) - order.begin());
      std::size_t row = 0;
      for (std::size_t j = 0; j < k; ++j) row = row * sig->domains[order[j]].size() + pv[j];
      return table[k][row];
    });
  }
};

// Every deterministic model recursive over `order` (signature indices).
inline std::vector<DetModel> all_models(const Signature& sig, const VarOrder& order) {
  std::vector<DetModel> out{{&sig, order, {}}};
  std::size_t rows = 1;
  for (auto v : order) {
    std::size_t d = sig.domains[v].size();
    std::vector<DetModel> next;
    for (const auto& m : out) {
      std::vector<std::size_t> t(rows, 0);
      while (true) {
        DetModel mm = m;
        mm.table.push_back(t);
        next.push_back(mm);
        std::size_t i = 0;
        while (i < rows && ++t[i] == d) t[i++] = 0;
        if (i == rows) break;
      }
    }
    out = std::move(next);
    rows *= d;
  }
  return out;
}

inline DeltaAtom realized(const DeltaSpace& s, const Signature& sig, const DetModel& m) {
  DeltaAtom d;
  for (const auto& a : s.interventions()) {
    Instantiation vals = m.solve(a);
    std::vector<std::size_t> row;
    for (std::size_t v = 0; v < s.var_count(); ++v) {
      const auto& val = sig.domains[sig.require(s.variables()[v])][vals[sig.require(s.variables()[v])]];
      auto it = std::find(s.values(v).begin(), s.values(v).end(), val);
      row.push_back(static_cast<std::size_t>(it - s.values(v).begin()));
    }
    d.blocks.push_back(row);
  }
  return d;
}

}  // namespace causal::det
