#pragma once

// Bounded probabilistic simulation programs: straight-line code with forward
// jumps over a finite random bit tape. Programs compile from SCMs and tabulate
// back into them; distributions are exact over all 2^bits tapes.
//
// File format:
//   signature: X:0,1; Y:0,1
//   bits: 1
//   READBIT r1
//   IF r1 GOTO +2          (forward only; GOTO +n jumps unconditionally)
//   WRITE X <- r1
//   WRITE Y <- (X == 1 ? 0 : 1)

#include "causal/scm.hpp"
#include "causal/scm_io.hpp"

#include <gmpxx.h>

#include <memory>
#include <sstream>

namespace causal {

struct Operand {
  enum class Kind { Register, Variable, Literal } kind = Kind::Literal;
  std::size_t index = 0;  // register number or variable index
  std::string literal;
  bool operator==(const Operand&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// A leaf operand, or `(a == b ? yes : no)` (with `!=` when `negated`).
struct Expr {
  Operand leaf;
  bool conditional = false;
  Operand a, b;
  bool negated = false;
  ExprPtr yes, no;
};

struct Instr {
  enum class Kind { ReadBit, IfGoto, Goto, Write } kind = Kind::Goto;
  std::size_t reg = 0;
  std::size_t offset = 1;
  std::size_t var = 0;
  ExprPtr expr;
};

struct SimProgram {
  Signature signature;
  std::size_t bit_bound = 0;
  std::vector<Instr> code;
};

struct SimLimits {
  std::size_t max_bits = 20;
};

namespace detail {

inline std::string operand_text(const SimProgram& p, const Operand& o) {
  switch (o.kind) {
    case Operand::Kind::Register: return "r" + std::to_string(o.index);
    case Operand::Kind::Variable: return p.signature.variables[o.index];
    case Operand::Kind::Literal: return o.literal;
  }
  return "";
}

inline std::string expr_text(const SimProgram& p, const Expr& e) {
  if (!e.conditional) return operand_text(p, e.leaf);
  return "(" + operand_text(p, e.a) + (e.negated ? " != " : " == ") + operand_text(p, e.b) + " ? " +
         expr_text(p, *e.yes) + " : " + expr_text(p, *e.no) + ")";
}

inline ExprPtr leaf(Operand o) {
  auto e = std::make_shared<Expr>();
  e->leaf = std::move(o);
  return e;
}

inline ExprPtr literal_expr(const std::string& v) { return leaf({Operand::Kind::Literal, 0, v}); }

inline bool same_expr(const Expr& x, const Expr& y) {
  if (x.conditional != y.conditional) return false;
  if (!x.conditional) return x.leaf == y.leaf;
  return x.a == y.a && x.b == y.b && x.negated == y.negated && same_expr(*x.yes, *y.yes) && same_expr(*x.no, *y.no);
}

inline ExprPtr branch(Operand a, Operand b, ExprPtr yes, ExprPtr no) {
  if (same_expr(*yes, *no)) return yes;
  auto e = std::make_shared<Expr>();
  e->conditional = true;
  e->a = std::move(a);
  e->b = std::move(b);
  e->yes = std::move(yes);
  e->no = std::move(no);
  return e;
}

// Execution state of one run.
struct Machine {
  const SimProgram& p;
  std::vector<std::optional<std::size_t>> regs;
  std::vector<std::optional<std::string>> cells;
  // per variable: the expression written and the registers at that moment
  std::vector<std::pair<ExprPtr, std::vector<std::optional<std::size_t>>>> writes;

  explicit Machine(const SimProgram& prog) : p(prog), cells(prog.signature.size()), writes(prog.signature.size()) {}

  std::string value(const Operand& o, const std::vector<std::optional<std::size_t>>& r,
                    const std::function<std::string(std::size_t)>& read) const {
    switch (o.kind) {
      case Operand::Kind::Register:
        if (o.index >= r.size() || !r[o.index]) throw Error("register r" + std::to_string(o.index) + " read before it is set");
        return std::to_string(*r[o.index]);
      case Operand::Kind::Variable: return read(o.index);
      case Operand::Kind::Literal: return o.literal;
    }
    return "";
  }

  std::string eval(const Expr& e, const std::vector<std::optional<std::size_t>>& r,
                   const std::function<std::string(std::size_t)>& read) const {
    if (!e.conditional) return value(e.leaf, r, read);
    bool eq = value(e.a, r, read) == value(e.b, r, read);
    return eval(eq != e.negated ? *e.yes : *e.no, r, read);
  }

  Instantiation run(const std::vector<int>& bits) {
    const auto& sig = p.signature;
    auto read_cell = [&](std::size_t v) {
      if (!cells[v]) throw Error("variable " + sig.variables[v] + " is read before it is written");
      return *cells[v];
    };
    std::size_t used = 0, pc = 0;
    while (pc < p.code.size()) {
      const Instr& in = p.code[pc];
      switch (in.kind) {
        case Instr::Kind::ReadBit:
          if (used >= bits.size() || used >= p.bit_bound)
            throw Error("program reads more than " + std::to_string(p.bit_bound) + " bits");
          if (regs.size() <= in.reg) regs.resize(in.reg + 1);
          regs[in.reg] = static_cast<std::size_t>(bits[used++]);
          ++pc;
          break;
        case Instr::Kind::IfGoto: {
          if (in.reg >= regs.size() || !regs[in.reg])
            throw Error("register r" + std::to_string(in.reg) + " tested before it is set");
          pc += *regs[in.reg] ? in.offset : 1;
          break;
        }
        case Instr::Kind::Goto: pc += in.offset; break;
        case Instr::Kind::Write: {
          if (cells[in.var]) throw Error("variable " + sig.variables[in.var] + " is written twice");
          std::string v = eval(*in.expr, regs, read_cell);
          if (!sig.value_index(in.var, v))
            throw Error("value " + v + " written to " + sig.variables[in.var] + " is outside its domain");
          cells[in.var] = v;
          writes[in.var] = {in.expr, regs};
          ++pc;
          break;
        }
      }
    }
    Instantiation out(sig.size());
    for (std::size_t v = 0; v < sig.size(); ++v) {
      if (!cells[v]) throw Error("variable " + sig.variables[v] + " is never written");
      out[v] = *sig.value_index(v, *cells[v]);
    }
    return out;
  }
};

inline std::vector<int> tape(std::size_t n, std::size_t width) {
  std::vector<int> bits(width);
  for (std::size_t k = 0; k < width; ++k) bits[k] = static_cast<int>((n >> (width - 1 - k)) & 1);
  return bits;
}

inline void check_bits(const SimProgram& p, const SimLimits& lim) {
  if (p.bit_bound > lim.max_bits)
    throw GuardError("bit bound " + std::to_string(p.bit_bound) + " exceeds the cap of " + std::to_string(lim.max_bits));
}

}  // namespace detail

/// Runs the program on a tape of at least `bit_bound` bits (first bit read first).
inline Instantiation run(const SimProgram& p, const std::vector<int>& bits) {
  if (bits.size() < p.bit_bound) throw InputError("tape shorter than the bit bound");
  return detail::Machine(p).run(bits);
}

/// Checks the structural invariants on every tape: forward jumps, single writes,
/// no reads before writes, the bit bound.
inline void validate_program(const SimProgram& p, const SimLimits& lim = {}) {
  for (std::size_t pc = 0; pc < p.code.size(); ++pc) {
    const auto& in = p.code[pc];
    if ((in.kind == Instr::Kind::IfGoto || in.kind == Instr::Kind::Goto) &&
        (in.offset == 0 || pc + in.offset > p.code.size()))
      throw InputError("instruction " + std::to_string(pc + 1) + " jumps outside the program");
    if (in.kind == Instr::Kind::Write && in.var >= p.signature.size()) throw InputError("write to an unknown variable");
  }
  detail::check_bits(p, lim);
  std::size_t n = std::size_t{1} << p.bit_bound;
  for (std::size_t t = 0; t < n; ++t) {
    try {
      run(p, detail::tape(t, p.bit_bound));
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      std::string bits;
      for (int b : detail::tape(t, p.bit_bound)) bits += static_cast<char>('0' + b);
      throw InputError(std::string(e.what()) + " (tape " + (bits.empty() ? "empty" : bits) + ")");
    }
  }
}

/// Program intervention: writes of intervened variables become constants, so
/// every read of them yields the intervened value.
inline SimProgram intervene(const SimProgram& p, const Intervention& alpha) {
  SimProgram out = p;
  std::map<std::size_t, std::string> fixed;
  for (const auto& [var, val] : alpha.assignments()) {
    auto v = p.signature.require(var);
    p.signature.require_value(v, val);
    fixed[v] = val;
  }
  for (auto& in : out.code)
    if (in.kind == Instr::Kind::Write && fixed.count(in.var)) in.expr = detail::literal_expr(fixed[in.var]);
  return out;
}

using Distribution = std::map<Instantiation, Rational>;

/// Exact distribution of intervene(p, alpha) over all 2^bit_bound tapes.
inline Distribution distribution(const SimProgram& p, const Intervention& alpha = {}, const SimLimits& lim = {}) {
  detail::check_bits(p, lim);
  SimProgram q = intervene(p, alpha);
  std::size_t n = std::size_t{1} << p.bit_bound;
  Rational w(1, static_cast<long>(n));
  w.canonicalize();
  Distribution d;
  for (std::size_t t = 0; t < n; ++t) {
    try {
      d[run(q, detail::tape(t, p.bit_bound))] += w;
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      throw InputError(std::string("intervened program fails: ") + e.what());
    }
  }
  return d;
}

struct CompileOptions {
  std::optional<unsigned> approximate_bits;  // dyadic rounding of non-dyadic weights
};

struct CompiledProgram {
  SimProgram program;
  Rational total_variation = 0;  // between the exogenous distribution and its dyadic rounding
};

namespace detail {

inline bool dyadic(const Rational& q) { return mpz_popcount(q.get_den().get_mpz_t()) == 1; }

inline std::size_t log2_exact(const mpz_class& d) { return mpz_sizeinbase(d.get_mpz_t(), 2) - 1; }

// f_v at point u as a decision expression over its parents
inline ExprPtr table_expr(const Scm& m, std::size_t v, std::size_t u, std::size_t k, std::size_t row) {
  const auto& sig = m.signature();
  const auto& parents = m.mechanism(v).parents;
  if (k == parents.size()) return literal_expr(sig.domains[v][m.lookup(v, row, u)]);
  std::size_t par = parents[k];
  const auto& dom = sig.domains[par];
  ExprPtr acc = table_expr(m, v, u, k + 1, row * dom.size() + dom.size() - 1);
  for (std::size_t x = dom.size() - 1; x-- > 0;)
    acc = branch({Operand::Kind::Variable, par, ""}, {Operand::Kind::Literal, 0, dom[x]},
                 table_expr(m, v, u, k + 1, row * dom.size() + x), acc);
  return acc;
}

// decision over tape bits: tape value n in [lo, hi) selects point owner[n]
inline ExprPtr tape_expr(const std::vector<std::size_t>& owner, std::size_t depth, std::size_t lo, std::size_t hi,
                         const std::function<ExprPtr(std::size_t)>& at) {
  bool uniform = std::all_of(owner.begin() + static_cast<long>(lo), owner.begin() + static_cast<long>(hi),
                             [&](std::size_t u) { return u == owner[lo]; });
  if (uniform) return at(owner[lo]);
  std::size_t mid = lo + (hi - lo) / 2;
  return branch({Operand::Kind::Register, depth + 1, ""}, {Operand::Kind::Literal, 0, "1"},
                tape_expr(owner, depth + 1, mid, hi, at), tape_expr(owner, depth + 1, lo, mid, at));
}

}  // namespace detail

/// A program whose distribution under every intervention equals that of `m`.
inline CompiledProgram compile_scm(const Scm& m, const CompileOptions& opt = {}, const SimLimits& lim = {}) {
  CompiledProgram out;
  std::vector<Rational> w;
  for (const auto& p : m.exo()) w.push_back(p.weight);
  bool all_dyadic = std::all_of(w.begin(), w.end(), detail::dyadic);
  std::size_t bits = 0;
  if (all_dyadic) {
    for (const auto& q : w) bits = std::max(bits, detail::log2_exact(q.get_den()));
  } else {
    if (!opt.approximate_bits)
      throw InputError("exogenous weights are not dyadic; enable dyadic approximation to compile");
    bits = *opt.approximate_bits;
  }
  if (bits > lim.max_bits) throw GuardError("compiled program needs " + std::to_string(bits) + " random bits");

  // each point owns a run of consecutive tape values
  mpz_class total = mpz_class(1) << bits;
  std::vector<mpz_class> count(w.size());
  mpz_class used = 0;
  std::vector<std::pair<Rational, std::size_t>> frac;
  for (std::size_t u = 0; u < w.size(); ++u) {
    Rational scaled = w[u] * Rational(total);
    count[u] = scaled.get_num() / scaled.get_den();
    used += count[u];
    frac.push_back({scaled - Rational(count[u]), u});
  }
  std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total; ++k, ++used) count[frac[k % frac.size()].second] += 1;
  Rational tv = 0;
  for (std::size_t u = 0; u < w.size(); ++u) tv += abs(w[u] - Rational(count[u]) / Rational(total));
  out.total_variation = tv / 2;

  std::vector<std::size_t> owner;
  for (std::size_t u = 0; u < w.size(); ++u)
    for (mpz_class c = 0; c < count[u]; ++c) owner.push_back(u);

  SimProgram& p = out.program;
  p.signature = m.signature();
  p.bit_bound = bits;
  for (std::size_t k = 1; k <= bits; ++k) p.code.push_back({Instr::Kind::ReadBit, k, 1, 0, nullptr});

  if (auto order = evaluation_order(m)) {
    for (auto v : *order) {
      auto expr = detail::tape_expr(owner, 0, 0, owner.size(), [&](std::size_t u) { return detail::table_expr(m, v, u, 0, 0); });
      p.code.push_back({Instr::Kind::Write, 0, 1, v, expr});
    }
    return out;
  }

  // declared parents are cyclic: branch on the tape, then write in each point's own order
  std::vector<Instr> body;
  std::vector<std::size_t> exits;  // Goto instructions to patch to the end
  auto emit = [&](auto&& self, std::size_t depth, std::size_t lo, std::size_t hi) -> void {
    bool uniform = std::all_of(owner.begin() + static_cast<long>(lo), owner.begin() + static_cast<long>(hi),
                               [&](std::size_t u) { return u == owner[lo]; });
    if (uniform) {
      std::size_t u = owner[lo];
      Dag g(m.signature().variables);
      for (std::size_t v = 0; v < m.var_count(); ++v)
        for (std::size_t k = 0; k < m.mechanism(v).parents.size(); ++k)
          if (detail::depends_at(m, v, k, u)) g.add_edge(m.mechanism(v).parents[k], v);
      auto order = g.topological_order();
      if (!order) throw InputError("model is not recursive at exogenous point " + m.exo()[u].label);
      for (auto v : *order) body.push_back({Instr::Kind::Write, 0, 1, v, detail::table_expr(m, v, u, 0, 0)});
      exits.push_back(body.size());
      body.push_back({Instr::Kind::Goto, 0, 1, 0, nullptr});
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    std::size_t test = body.size();
    body.push_back({Instr::Kind::IfGoto, depth + 1, 1, 0, nullptr});
    self(self, depth + 1, lo, mid);
    body[test].offset = body.size() - test;
    self(self, depth + 1, mid, hi);
  };
  emit(emit, 0, 0, owner.size());
  for (auto at : exits) body[at].offset = body.size() - at;
  p.code.insert(p.code.end(), body.begin(), body.end());
  return out;
}

/// The SCM of a program: one exogenous point per tape, f_V read off the write of V
/// on that tape with its variable reads as parents.
inline Scm tabulate(const SimProgram& p, const SimLimits& lim = {}) {
  detail::check_bits(p, lim);
  const auto& sig = p.signature;
  std::size_t n = std::size_t{1} << p.bit_bound;
  std::vector<std::set<std::size_t>> reads(sig.size());
  auto collect = [&](auto&& self, std::size_t v, const Expr& e) -> void {
    auto add = [&](const Operand& o) {
      if (o.kind == Operand::Kind::Variable) reads[v].insert(o.index);
    };
    if (!e.conditional) return add(e.leaf);
    add(e.a);
    add(e.b);
    self(self, v, *e.yes);
    self(self, v, *e.no);
  };
  for (const auto& in : p.code)
    if (in.kind == Instr::Kind::Write) collect(collect, in.var, *in.expr);

  std::vector<detail::Machine> runs;
  for (std::size_t t = 0; t < n; ++t) {
    runs.emplace_back(p);
    runs.back().run(detail::tape(t, p.bit_bound));
  }
  Rational w(1, static_cast<long>(n));
  w.canonicalize();
  std::vector<ExoPoint> exo;
  for (std::size_t t = 0; t < n; ++t) {
    std::string label = "t";
    for (int b : detail::tape(t, p.bit_bound)) label += static_cast<char>('0' + b);
    exo.push_back({label, w});
  }
  std::vector<std::vector<std::size_t>> parents(sig.size());
  for (std::size_t v = 0; v < sig.size(); ++v) parents[v].assign(reads[v].begin(), reads[v].end());
  return Scm::from_functions(sig, exo, parents, [&](std::size_t v, const std::vector<std::size_t>& pv, std::size_t u) {
    const auto& [expr, regs] = runs[u].writes[v];
    auto read = [&](std::size_t x) {
      auto it = std::find(parents[v].begin(), parents[v].end(), x);
      return sig.domains[x][pv[static_cast<std::size_t>(it - parents[v].begin())]];
    };
    std::string val = runs[u].eval(*expr, regs, read);
    auto idx = sig.value_index(v, val);
    if (!idx) throw InputError("program writes " + val + " to " + sig.variables[v] + " under some intervention");
    return *idx;
  });
}

/// ⊤ and every single-variable intervention.
inline std::vector<Intervention> single_interventions(const Signature& sig) {
  std::vector<Intervention> out{Intervention{}};
  for (std::size_t v = 0; v < sig.size(); ++v)
    for (const auto& x : sig.domains[v]) out.push_back(Intervention(Intervention::Map{{sig.variables[v], x}}));
  return out;
}

/// Every partial assignment over the signature.
inline std::vector<Intervention> all_interventions(const Signature& sig, std::size_t cap = 100000) {
  std::vector<Intervention::Map> acc{{}};
  for (std::size_t v = 0; v < sig.size(); ++v) {
    std::vector<Intervention::Map> next = acc;
    for (const auto& m : acc)
      for (const auto& x : sig.domains[v]) {
        auto e = m;
        e[sig.variables[v]] = x;
        next.push_back(std::move(e));
        if (next.size() > cap) throw GuardError("too many interventions to enumerate");
      }
    acc = std::move(next);
  }
  std::vector<Intervention> out;
  for (auto& m : acc) out.emplace_back(std::move(m));
  return out;
}

struct EquivReport {
  bool equal = true;
  std::optional<Intervention> at;
  Instantiation instantiation;
  Rational program_prob = 0, model_prob = 0;
};

/// Exact per-intervention equality of P_{i(T)} and P_{i(M)}.
inline EquivReport equiv_check(const SimProgram& p, const Scm& m, const std::vector<Intervention>& interventions,
                               const SimLimits& lim = {}) {
  if (!(p.signature == m.signature())) throw InputError("program and model have different signatures");
  for (const auto& alpha : interventions) {
    Distribution dp = distribution(p, alpha, lim);
    Distribution dm = joint_distribution(apply_intervention(m, alpha));
    std::set<Instantiation> keys;
    for (const auto& [k, q] : dp) keys.insert(k);
    for (const auto& [k, q] : dm) keys.insert(k);
    for (const auto& k : keys) {
      Rational a = dp.count(k) ? dp.at(k) : Rational(0);
      Rational b = dm.count(k) ? dm.at(k) : Rational(0);
      if (a != b) return {false, alpha, k, a, b};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

class ExprReader {
 public:
  ExprReader(std::string_view s, const Signature& sig) : s_(s), sig_(sig) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected text");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw InputError("expression '" + std::string(s_) + "': " + what + " at column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  Operand operand() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.' ||
                                s_[pos_] == '-'))
      ++pos_;
    if (b == pos_) fail("expected an operand");
    std::string w(s_.substr(b, pos_ - b));
    if (auto v = sig_.index_of(w)) return {Operand::Kind::Variable, *v, ""};
    if (w.size() > 1 && w[0] == 'r' && std::all_of(w.begin() + 1, w.end(), ::isdigit))
      return {Operand::Kind::Register, std::stoul(w.substr(1)), ""};
    return {Operand::Kind::Literal, 0, w};
  }
  ExprPtr expr() {
    if (!eat("(")) return leaf(operand());
    auto e = std::make_shared<Expr>();
    e->conditional = true;
    e->a = operand();
    if (eat("=="))
      e->negated = false;
    else if (eat("!="))
      e->negated = true;
    else
      fail("expected == or !=");
    e->b = operand();
    if (!eat("?")) fail("expected ?");
    e->yes = expr();
    if (!eat(":")) fail("expected :");
    e->no = expr();
    if (!eat(")")) fail("expected )");
    return e;
  }

  std::string_view s_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

inline std::size_t parse_register(const std::string& w, std::size_t at) {
  if (w.size() < 2 || w[0] != 'r' || !std::all_of(w.begin() + 1, w.end(), ::isdigit))
    throw InputError("line " + std::to_string(at) + ": expected a register like r1, got '" + w + "'");
  return std::stoul(w.substr(1));
}

inline std::size_t parse_offset(const std::string& w, std::size_t at) {
  if (w.size() < 2 || w[0] != '+' || !std::all_of(w.begin() + 1, w.end(), ::isdigit))
    throw InputError("line " + std::to_string(at) + ": expected a forward offset like +2, got '" + w + "'");
  return std::stoul(w.substr(1));
}

}  // namespace detail

inline SimProgram parse_program(const std::string& text, const SimLimits& lim = {}) {
  SimProgram p;
  bool have_sig = false, have_bits = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t at = 0;
  while (std::getline(in, raw)) {
    ++at;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    std::string head;
    if (!(words >> head)) continue;
    std::string rest;
    std::getline(words, rest);
    auto where = [&](const std::string& what) { return InputError("line " + std::to_string(at) + ": " + what); };
    if (head == "signature:") {
      for (const auto& part : detail::split_fields(rest, ";")) {
        auto colon = part.find(':');
        if (colon == std::string::npos) throw where("expected VAR:values");
        auto values = detail::split_fields(part.substr(colon + 1), ", \t");
        if (values.empty()) throw where("empty domain");
        p.signature.add(detail::trim(part.substr(0, colon)), values);
      }
      have_sig = true;
    } else if (head == "bits:") {
      try {
        p.bit_bound = std::stoul(rest);
      } catch (const std::exception&) {
        throw where("bad bit bound");
      }
      have_bits = true;
    } else if (!have_sig) {
      throw where("the signature header must come before instructions");
    } else if (head == "READBIT") {
      std::string r;
      std::istringstream args(rest);
      args >> r;
      p.code.push_back({Instr::Kind::ReadBit, detail::parse_register(r, at), 1, 0, nullptr});
    } else if (head == "IF") {
      std::istringstream args(rest);
      std::string r, go, off;
      args >> r >> go >> off;
      if (go != "GOTO") throw where("expected IF rK GOTO +n");
      p.code.push_back({Instr::Kind::IfGoto, detail::parse_register(r, at), detail::parse_offset(off, at), 0, nullptr});
    } else if (head == "GOTO") {
      std::istringstream args(rest);
      std::string off;
      args >> off;
      p.code.push_back({Instr::Kind::Goto, 0, detail::parse_offset(off, at), 0, nullptr});
    } else if (head == "WRITE") {
      auto arrow = rest.find("<-");
      if (arrow == std::string::npos) throw where("expected WRITE X <- expr");
      std::string var = detail::trim(rest.substr(0, arrow));
      auto v = p.signature.index_of(var);
      if (!v) throw where("unknown variable " + var);
      p.code.push_back({Instr::Kind::Write, 0, 1, *v, detail::ExprReader(rest.substr(arrow + 2), p.signature).parse()});
    } else {
      throw where("unknown instruction " + head);
    }
  }
  if (!have_sig) throw InputError("program has no signature header");
  if (!have_bits) throw InputError("program has no bits header");
  validate_program(p, lim);
  return p;
}

inline std::string write_program(const SimProgram& p) {
  std::string out = "signature: ";
  for (std::size_t v = 0; v < p.signature.size(); ++v) {
    if (v) out += "; ";
    out += p.signature.variables[v] + ":";
    for (std::size_t x = 0; x < p.signature.domains[v].size(); ++x)
      out += (x ? "," : "") + p.signature.domains[v][x];
  }
  out += "\nbits: " + std::to_string(p.bit_bound) + "\n";
  for (const auto& in : p.code) {
    switch (in.kind) {
      case Instr::Kind::ReadBit: out += "READBIT r" + std::to_string(in.reg); break;
      case Instr::Kind::IfGoto: out += "IF r" + std::to_string(in.reg) + " GOTO +" + std::to_string(in.offset); break;
      case Instr::Kind::Goto: out += "GOTO +" + std::to_string(in.offset); break;
      case Instr::Kind::Write:
        out += "WRITE " + p.signature.variables[in.var] + " <- " + detail::expr_text(p, *in.expr);
        break;
    }
    out += "\n";
  }
  return out;
}

inline SimProgram load_program(const std::string& path, const SimLimits& lim = {}) {
  return parse_program(read_file(path), lim);
}

}  // namespace causal
