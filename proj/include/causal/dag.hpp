#pragma once

#include "causal/rational.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace causal {

/// Directed graph over named nodes. Acyclicity is checked on demand, not enforced.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::vector<std::string> nodes) {
    for (auto& n : nodes) add_node(std::move(n));
  }

  std::size_t add_node(std::string name) {
    if (auto i = index_of(name)) return *i;
    nodes_.push_back(std::move(name));
    parents_.emplace_back();
    children_.emplace_back();
    return nodes_.size() - 1;
  }

  void add_edge(std::size_t from, std::size_t to) {
    parents_[to].insert(from);
    children_[from].insert(to);
  }
  void add_edge(const std::string& from, const std::string& to) { add_edge(require(from), require(to)); }
  void remove_edge(std::size_t from, std::size_t to) {
    parents_[to].erase(from);
    children_[from].erase(to);
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(std::size_t i) const { return nodes_[i]; }
  const std::set<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
  const std::set<std::size_t>& children(std::size_t i) const { return children_[i]; }
  bool has_edge(std::size_t from, std::size_t to) const { return children_[from].count(to) != 0; }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
      for (auto b : children_[a]) out.emplace_back(a, b);
    return out;
  }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = std::find(nodes_.begin(), nodes_.end(), name);
    if (it == nodes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
  }
  std::size_t require(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw InputError("unknown node " + name);
    return *i;
  }

  /// Kahn's algorithm, smallest index first among ready nodes; nullopt on a cycle.
  std::optional<std::vector<std::size_t>> topological_order() const {
    std::vector<std::size_t> indeg(size());
    for (std::size_t i = 0; i < size(); ++i) indeg[i] = parents_[i].size();
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < size(); ++i)
      if (indeg[i] == 0) ready.insert(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      std::size_t n = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(n);
      for (auto c : children_[n])
        if (--indeg[c] == 0) ready.insert(c);
    }
    if (order.size() != size()) return std::nullopt;
    return order;
  }

  bool acyclic() const { return topological_order().has_value(); }

  /// Some directed cycle, as a node sequence, if one exists.
  std::vector<std::size_t> find_cycle() const {
    std::vector<int> color(size(), 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> found;
    auto dfs = [&](auto&& self, std::size_t n) -> bool {
      color[n] = 1;
      stack.push_back(n);
      for (auto c : children_[n]) {
        if (color[c] == 1) {
          auto it = std::find(stack.begin(), stack.end(), c);
          found.assign(it, stack.end());
          return true;
        }
        if (color[c] == 0 && self(self, c)) return true;
      }
      stack.pop_back();
      color[n] = 2;
      return false;
    };
    for (std::size_t i = 0; i < size(); ++i)
      if (color[i] == 0 && dfs(dfs, i)) return found;
    return {};
  }

  std::set<std::size_t> ancestors(const std::set<std::size_t>& of) const {
    std::set<std::size_t> seen(of.begin(), of.end());
    std::vector<std::size_t> todo(of.begin(), of.end());
    while (!todo.empty()) {
      auto n = todo.back();
      todo.pop_back();
      for (auto p : parents_[n])
        if (seen.insert(p).second) todo.push_back(p);
    }
    return seen;
  }

  std::set<std::size_t> descendants(const std::set<std::size_t>& of) const {
    std::set<std::size_t> seen(of.begin(), of.end());
    std::vector<std::size_t> todo(of.begin(), of.end());
    while (!todo.empty()) {
      auto n = todo.back();
      todo.pop_back();
      for (auto c : children_[n])
        if (seen.insert(c).second) todo.push_back(c);
    }
    return seen;
  }

  std::set<std::size_t> indices(const std::vector<std::string>& names) const {
    std::set<std::size_t> out;
    for (const auto& n : names) out.insert(require(n));
    return out;
  }

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.nodes_ == b.nodes_ && a.children_ == b.children_;
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::set<std::size_t>> parents_, children_;
};

}  // namespace causal
