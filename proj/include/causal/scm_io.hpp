#pragma once

// Text format:
//
//   variables
//     X: 0 1
//   exogenous
//     u0: 1/2
//     u1: 1/2
//   mechanisms
//     X:
//       u0 -> 0
//       u1 -> 1
//     Y: X
//       0, _ -> 0
//       1, _ -> 1
//
// A row lists one value per parent, then the exogenous label; `_` matches anything.
// Rows may overlap only when they agree. Every cell must be covered.

#include "causal/dag.hpp"
#include "causal/scm.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace causal {

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split_fields(const std::string& s, const char* seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::strchr(seps, c)) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

}  // namespace detail

inline Scm parse_scm(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  enum class Section { None, Variables, Exogenous, Mechanisms } section = Section::None;
  Signature sig;
  std::vector<ExoPoint> exo;
  struct Pending {
    std::vector<std::string> parents;
    std::vector<std::pair<std::vector<std::string>, std::string>> rows;
    int line = 0;
  };
  std::map<std::string, Pending> pending;
  std::string current;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { return InputError("line " + std::to_string(lineno) + ": " + msg); };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::strip_comment(raw);
    if (line.empty()) continue;
    if (line == "variables") {
      section = Section::Variables;
      continue;
    }
    if (line == "exogenous") {
      section = Section::Exogenous;
      continue;
    }
    if (line == "mechanisms") {
      section = Section::Mechanisms;
      continue;
    }
    switch (section) {
      case Section::None: throw fail("expected a section header");
      case Section::Variables: {
        auto colon = line.find(':');
        if (colon == std::string::npos) throw fail("expected 'name: values'");
        sig.add(detail::trim(line.substr(0, colon)), detail::split_fields(line.substr(colon + 1), " ,\t"));
        break;
      }
      case Section::Exogenous: {
        auto colon = line.find(':');
        if (colon == std::string::npos) throw fail("expected 'label: weight'");
        exo.push_back({detail::trim(line.substr(0, colon)), parse_rational(detail::trim(line.substr(colon + 1)))});
        break;
      }
      case Section::Mechanisms: {
        auto arrow = line.find("->");
        if (arrow == std::string::npos) {
          auto colon = line.find(':');
          if (colon == std::string::npos) throw fail("expected 'name: parents' or a table row");
          current = detail::trim(line.substr(0, colon));
          if (pending.count(current)) throw fail("second mechanism for " + current);
          pending[current] = {detail::split_fields(line.substr(colon + 1), " ,\t"), {}, lineno};
        } else {
          if (current.empty()) throw fail("table row before any mechanism header");
          auto fields = detail::split_fields(line.substr(0, arrow), ",");
          for (auto& f : fields) f = detail::trim(f);
          pending[current].rows.push_back({fields, detail::trim(line.substr(arrow + 2))});
        }
        break;
      }
    }
  }

  std::vector<Mechanism> mech(sig.size());
  std::vector<std::vector<std::size_t>> parents(sig.size());
  for (const auto& [name, p] : pending) {
    auto v = sig.require(name);
    for (const auto& pn : p.parents) parents[v].push_back(sig.require(pn));
  }
  for (std::size_t v = 0; v < sig.size(); ++v) {
    const auto& name = sig.variables[v];
    auto it = pending.find(name);
    if (it == pending.end()) throw InputError("no mechanism for " + name);
    const Pending& p = it->second;
    mech[v].parents = parents[v];
    std::size_t rows = 1;
    for (auto q : parents[v]) rows *= sig.domains[q].size();
    const std::size_t unset = static_cast<std::size_t>(-1);
    mech[v].table.assign(rows * exo.size(), unset);
    std::vector<std::size_t> pv;
    for (const auto& [fields, out] : p.rows) {
      if (fields.size() != parents[v].size() + 1)
        throw InputError("mechanism " + name + ": row needs " + std::to_string(parents[v].size() + 1) + " fields");
      std::size_t value = sig.require_value(v, out);
      std::vector<std::optional<std::size_t>> want(parents[v].size());
      for (std::size_t k = 0; k < parents[v].size(); ++k)
        if (fields[k] != "_") want[k] = sig.require_value(parents[v][k], fields[k]);
      std::optional<std::size_t> want_u;
      if (fields.back() != "_") {
        for (std::size_t u = 0; u < exo.size(); ++u)
          if (exo[u].label == fields.back()) want_u = u;
        if (!want_u) throw InputError("mechanism " + name + ": unknown exogenous label " + fields.back());
      }
      for (std::size_t r = 0; r < rows; ++r) {
        Scm::decode_row(sig, parents[v], r, pv);
        bool match = true;
        for (std::size_t k = 0; k < pv.size() && match; ++k)
          if (want[k] && *want[k] != pv[k]) match = false;
        if (!match) continue;
        for (std::size_t u = 0; u < exo.size(); ++u) {
          if (want_u && *want_u != u) continue;
          auto& cell = mech[v].table[r * exo.size() + u];
          if (cell != unset && cell != value) throw InputError("mechanism " + name + ": conflicting rows");
          cell = value;
        }
      }
    }
    for (auto cell : mech[v].table)
      if (cell == unset) throw InputError("mechanism " + name + ": table does not cover every input");
  }
  return Scm(std::move(sig), std::move(exo), std::move(mech));
}

inline std::string write_scm(const Scm& m) {
  const auto& sig = m.signature();
  std::ostringstream out;
  out << "variables\n";
  for (std::size_t v = 0; v < sig.size(); ++v) {
    out << "  " << sig.variables[v] << ":";
    for (const auto& val : sig.domains[v]) out << ' ' << val;
    out << '\n';
  }
  out << "exogenous\n";
  for (const auto& p : m.exo()) out << "  " << p.label << ": " << to_string(p.weight) << '\n';
  out << "mechanisms\n";
  std::vector<std::size_t> pv;
  for (std::size_t v = 0; v < sig.size(); ++v) {
    const auto& mech = m.mechanism(v);
    out << "  " << sig.variables[v] << ":";
    for (auto p : mech.parents) out << ' ' << sig.variables[p];
    out << '\n';
    for (std::size_t r = 0; r < m.rows(v); ++r) {
      Scm::decode_row(sig, mech.parents, r, pv);
      std::string prefix = "    ";
      for (std::size_t k = 0; k < pv.size(); ++k) prefix += sig.domains[mech.parents[k]][pv[k]] + ", ";
      bool constant = true;
      for (std::size_t u = 1; u < m.exo_count(); ++u)
        if (m.lookup(v, r, u) != m.lookup(v, r, 0)) constant = false;
      if (constant) {
        out << prefix << "_ -> " << sig.domains[v][m.lookup(v, r, 0)] << '\n';
      } else {
        for (std::size_t u = 0; u < m.exo_count(); ++u)
          out << prefix << m.exo()[u].label << " -> " << sig.domains[v][m.lookup(v, r, u)] << '\n';
      }
    }
  }
  return out.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Scm load_scm(const std::string& path) { return parse_scm(read_file(path)); }

/// One `A -> B` per line; a bare name declares an isolated node.
inline Dag parse_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  Dag g;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::strip_comment(raw);
    if (line.empty() || line == "digraph" || line == "{" || line == "}") continue;
    if (!line.empty() && line.back() == ';') line.pop_back();
    auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      auto name = detail::trim(line);
      if (name.find_first_of(" \t,") != std::string::npos)
        throw InputError("line " + std::to_string(lineno) + ": expected 'A -> B'");
      g.add_node(name);
      continue;
    }
    auto a = detail::trim(line.substr(0, arrow)), b = detail::trim(line.substr(arrow + 2));
    if (a.empty() || b.empty()) throw InputError("line " + std::to_string(lineno) + ": expected 'A -> B'");
    g.add_edge(g.add_node(a), g.add_node(b));
  }
  if (!g.acyclic()) throw InputError("graph has a directed cycle");
  return g;
}

inline std::string write_graph(const Dag& g) {
  std::ostringstream out;
  for (std::size_t i = 0; i < g.size(); ++i) out << g.name(i) << '\n';
  for (auto [a, b] : g.edges()) out << g.name(a) << " -> " << g.name(b) << '\n';
  return out.str();
}

inline Dag load_graph(const std::string& path) { return parse_graph(read_file(path)); }

}  // namespace causal
