#pragma once

// Random recursive models for regression sweeps: one global variable order,
// every earlier variable a potential parent, arbitrary tables per exogenous point.

#include "causal/scm_io.hpp"

#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace causal::zoo {

inline Signature random_signature(std::mt19937_64& rng, std::size_t max_vars = 3, std::size_t max_values = 3) {
  static const std::vector<std::string> names = {"X", "Y", "Z", "W"};
  std::size_t n = 1 + rng() % max_vars;
  Signature sig;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t k = 2 + rng() % (max_values - 1);
    std::vector<std::string> dom;
    for (std::size_t v = 0; v < k; ++v) dom.push_back(std::to_string(v));
    sig.add(names[i], dom);
  }
  return sig;
}

inline Scm random_recursive_scm(const Signature& sig, std::mt19937_64& rng, std::size_t max_points = 4) {
  std::size_t n = sig.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> parents(n);
  for (std::size_t i = 0; i < n; ++i) parents[order[i]].assign(order.begin(), order.begin() + static_cast<long>(i));

  std::size_t points = 1 + rng() % max_points;
  std::vector<long> w(points);
  long total = 0;
  for (auto& x : w) total += (x = 1 + static_cast<long>(rng() % 6));
  std::vector<ExoPoint> exo;
  for (std::size_t u = 0; u < points; ++u) {
    Rational q(w[u], total);
    q.canonicalize();
    exo.push_back({"u" + std::to_string(u), q});
  }
  return Scm::from_functions(sig, exo, parents, [&](std::size_t v, const std::vector<std::size_t>&, std::size_t) {
    return static_cast<std::size_t>(rng() % sig.domains[v].size());
  });
}

/// `count` random models plus the bundled fixture models.
inline std::vector<Scm> model_zoo(std::uint64_t seed, std::size_t count, const std::string& fixtures = "") {
  std::mt19937_64 rng(seed);
  std::vector<Scm> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_recursive_scm(random_signature(rng), rng));
  if (!fixtures.empty())
    for (const char* f : {"m1.scm", "m2.scm", "cf_m1.scm", "cf_m2.scm"}) out.push_back(load_scm(fixtures + "/" + f));
  return out;
}

}  // namespace causal::zoo
