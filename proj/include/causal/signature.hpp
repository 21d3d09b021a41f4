#pragma once

#include "causal/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causal {

/// Endogenous variables in declaration order, each with a finite ordered domain.
struct Signature {
  std::vector<std::string> variables;
  std::vector<std::vector<std::string>> domains;

  std::size_t size() const { return variables.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) return std::nullopt;
    return static_cast<std::size_t>(it - variables.begin());
  }

  std::size_t require(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw InputError("unknown variable " + name);
    return *i;
  }

  std::optional<std::size_t> value_index(std::size_t var, const std::string& value) const {
    const auto& dom = domains[var];
    auto it = std::find(dom.begin(), dom.end(), value);
    if (it == dom.end()) return std::nullopt;
    return static_cast<std::size_t>(it - dom.begin());
  }

  std::size_t require_value(std::size_t var, const std::string& value) const {
    auto v = value_index(var, value);
    if (!v) throw InputError("value " + value + " outside the domain of " + variables[var]);
    return *v;
  }

  void add(std::string name, std::vector<std::string> domain) {
    if (index_of(name)) throw InputError("duplicate variable " + name);
    if (domain.empty()) throw InputError("empty domain for " + name);
    for (std::size_t i = 0; i < domain.size(); ++i)
      for (std::size_t j = i + 1; j < domain.size(); ++j)
        if (domain[i] == domain[j]) throw InputError("repeated value " + domain[i] + " in domain of " + name);
    variables.push_back(std::move(name));
    domains.push_back(std::move(domain));
  }

  static Signature binary(const std::vector<std::string>& names) {
    Signature s;
    for (const auto& n : names) s.add(n, {"0", "1"});
    return s;
  }

  bool operator==(const Signature&) const = default;
};

}  // namespace causal
