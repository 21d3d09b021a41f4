#pragma once

// Random schema instances over a given signature, for round-trip and
// soundness sweeps.

#include "causal/axioms.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace causal::sampler {

struct Instance {
  std::string schema;
  Formula formula;
};

class SchemaSampler {
 public:
  SchemaSampler(const Signature& sig, std::uint64_t seed) : sig_(sig), rng_(seed) {}

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::size_t var() { return pick(sig_.size()); }
  std::string value(std::size_t v) { return sig_.domains[v][pick(sig_.domains[v].size())]; }
  Atom atom(std::size_t v) { return {sig_.variables[v], value(v)}; }
  Atom atom() { return atom(var()); }

  Intervention intervention(const std::vector<std::size_t>& avoid = {}) {
    std::vector<Atom> atoms;
    for (std::size_t v = 0; v < sig_.size(); ++v)
      if (std::find(avoid.begin(), avoid.end(), v) == avoid.end() && pick(3) == 0) atoms.push_back(atom(v));
    return Intervention::from_atoms(atoms);
  }

  Prop prop() {
    switch (pick(4)) {
      case 0: return Prop::negate(Prop::atom(atom()));
      case 1: return Prop::conj(Prop::atom(atom()), Prop::atom(atom()));
      default: return Prop::atom(atom());
    }
  }

  Base base() {
    Base b = Base::cond(intervention(), prop());
    if (pick(4) == 0) b = Base::conj(b, Base::cond(intervention(), prop()));
    if (pick(5) == 0) b = Base::negate(b);
    return b;
  }

  Term term() {
    switch (pick(6)) {
      case 0: return Term::add(Term::prob(base()), Term::prob(base()));
      case 1: return Term::mul(Term::prob(base()), Term::prob(base()));
      case 2: return Term::neg(Term::prob(base()));
      case 3: return Term::literal(static_cast<long>(pick(3)));  // fractions do not survive desugaring
      default: return Term::prob(base());
    }
  }

  // pairs of base formulas that are equivalent in recursive models
  std::pair<Base, Base> equivalent_pair() {
    Intervention a = intervention();
    Prop b = prop(), c = prop();
    switch (pick(4)) {
      case 0: return {Base::cond(a, Prop::conj(b, c)), Base::cond(a, Prop::conj(c, b))};
      case 1: {
        std::size_t v = var();
        if (a.contains(sig_.variables[v])) break;
        Intervention av = a.conjoin(Intervention::from_atoms(std::vector<Atom>{atom(v)}));
        return {Base::cond(av, Prop::atom(sig_.variables[v], *av.value_of(sig_.variables[v]))), Base::top()};
      }
      case 2: {
        std::size_t v = var(), w = var();
        if (v == w || a.contains(sig_.variables[v]) || a.contains(sig_.variables[w])) break;
        Atom x = atom(v), y = atom(w);
        Base lhs = Base::cond(a, Prop::conj(Prop::atom(x), Prop::atom(y)));
        Base rhs = Base::conj(Base::cond(a.conjoin(Intervention::from_atoms(std::vector<Atom>{x})), Prop::atom(y)),
                              Base::cond(a.conjoin(Intervention::from_atoms(std::vector<Atom>{y})), Prop::atom(x)));
        return {lhs, rhs};
      }
      default: break;
    }
    Base e = base();
    return {e, Base::negate(Base::negate(e))};
  }

  std::vector<ProbRecStep> prob_rec_steps() {
    std::size_t n = 2 + pick(sig_.size() >= 3 ? 2 : 1);
    std::vector<ProbRecStep> steps;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t v = var();
      if (i + 1 == n)
        while (sig_.variables[v] == steps.front().var && sig_.size() > 1) v = var();
      const auto& dom = sig_.domains[v];
      std::size_t k = pick(dom.size());
      steps.push_back({intervention({v}), sig_.variables[v], dom[k], dom[(k + 1) % dom.size()], value(v)});
    }
    return steps;
  }

  schema::Domains domains(std::size_t min_vars) {
    schema::Domains w;
    for (std::size_t v = 0; v < sig_.size(); ++v) w.push_back({sig_.variables[v], sig_.domains[v]});
    while (w.size() > min_vars && pick(2) == 0) w.erase(w.begin() + static_cast<long>(pick(w.size())));
    return w;
  }

  /// One instance of every schema applicable to the signature.
  std::vector<Instance> instances() {
    std::vector<Instance> out;
    out.push_back({"NonNeg", schema::nonneg(base())});
    out.push_back({"Add", schema::add(base(), base())});
    out.push_back({"Add2", schema::add2(intervention(), prop(), prop())});
    auto [e, z] = equivalent_pair();
    out.push_back({"Dist", schema::dist(e, z, &sig_)});
    std::size_t v = var();
    out.push_back({"Def", schema::def(intervention({v}), sig_.variables[v], sig_.domains[v])});
    if (sig_.size() >= 2) {
      out.push_back({"ProbRec", schema::prob_rec(prob_rec_steps())});
      out.push_back({"ProbRec2", schema::prob_rec2(domains(2))});
    }
    std::vector<Atom> w;
    for (const auto& [name, dom] : domains(1)) w.push_back({name, dom[pick(dom.size())]});
    out.push_back({"IncExc", schema::inc_exc(w)});
    std::vector<Term> ts = {term(), term(), term()};
    for (const auto& n : poly_schemata()) out.push_back({n, schema::poly(n, ts)});
    for (const auto& n : derived_schemata()) out.push_back({n, schema::poly(n, ts)});
    return out;
  }

 private:
  Signature sig_;
  std::mt19937_64 rng_;
};

}  // namespace causal::sampler
