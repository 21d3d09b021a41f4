// causal: command-line front end. Results go to stdout as `key: value` lines,
// diagnostics to stderr. Exit codes: 0 affirmative/SAT, 1 negative/UNSAT,
// 2 UNKNOWN, 3 usage or input error.

#include "causal/causal.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace causal;

namespace {

constexpr int kYes = 0, kNo = 1, kUnknown = 2, kBadInput = 3;

void kv(const std::string& key, const std::string& value) { std::cout << key << ": " << value << "\n"; }

std::string show(const Rational& q) { return q.get_str(); }

std::vector<std::string> names(const std::string& s) { return detail::split_fields(s, ", \t"); }

Intervention parse_intervention(const std::string& s) { return Intervention::from_atoms(detail::parse_atoms(s)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string show_instantiation(const Signature& sig, const Instantiation& x) {
  std::string out;
  for (std::size_t v = 0; v < sig.size(); ++v) out += (v ? ", " : "") + sig.variables[v] + "=" + sig.domains[v][x[v]];
  return out;
}

struct Options {
  std::optional<int> level;
  std::size_t max_atoms = DeltaLimits{}.max_atoms;
  std::size_t max_orders = DeltaLimits{}.max_orders;
  std::size_t budget = SearchOptions{}.max_nodes;
  std::uint64_t seed = SearchOptions{}.seed;
  unsigned jobs = 1;
  std::string signature;
  std::optional<Signature> sig;

  SatConfig sat_config() const {
    SatConfig cfg;
    cfg.level = level;
    cfg.limits.max_atoms = max_atoms;
    cfg.limits.max_orders = max_orders;
    cfg.search.max_nodes = budget;
    cfg.search.seed = seed;
    if (sig) cfg.signature = &*sig;
    return cfg;
  }
};

Formula read_formula(const std::string& text, const Options& opt) {
  Formula f = parse_formula(text, opt.sig ? &*opt.sig : nullptr);
  if (opt.level && level(f) > *opt.level)
    throw InputError("formula has level " + std::to_string(level(f)) + ", above the requested " +
                     std::to_string(*opt.level));
  return f;
}

void report_stats(const SatResult& r) {
  kv("clauses", std::to_string(r.stats.clauses));
  kv("orders", std::to_string(r.stats.orders));
  kv("systems", std::to_string(r.stats.systems));
  kv("refuted", std::to_string(r.stats.refuted));
  kv("inconclusive", std::to_string(r.stats.inconclusive));
  if (!r.note.empty()) kv("note", r.note);
}

void report_model(const Scm& m, const Formula& f, const std::string& model_out) {
  Evaluator ev(m);
  for (const auto& b : base_formulas(desugar(f)))
    if (!b.is_top() && !b.is_bottom()) kv("P(" + to_string(b) + ")", show(ev.prob(b)));
  if (!model_out.empty()) {
    write_text(model_out, write_scm(m));
    kv("model", model_out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic causal reasoning toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--level", opt.level, "reject formulas above this level")->check(CLI::Range(1, 3));
  app.add_option("--max-atoms", opt.max_atoms, "cap on enumerated atoms");
  app.add_option("--max-orders", opt.max_orders, "cap on variable orders");
  app.add_option("--budget", opt.budget, "node budget of the real-arithmetic search");
  app.add_option("--seed", opt.seed, "seed of the numeric search");
  app.add_option("--jobs", opt.jobs, "worker threads (accepted; work runs on one thread)");
  app.add_option("--signature", opt.signature, "domains, e.g. \"X:0,1; Y:0,1,2\"");

  int code = kYes;
  std::function<void()> action;

  // parse
  std::string text;
  auto* parse = app.add_subcommand("parse", "print the canonical form, desugaring and level of a formula");
  parse->add_option("formula", text)->required();
  parse->callback([&] {
    action = [&] {
      Formula f = read_formula(text, opt);
      kv("formula", to_string(f));
      kv("desugared", to_string(desugar(f)));
      kv("level", std::to_string(level(f)));
    };
  });

  // check / prob
  std::string model_path;
  auto* check = app.add_subcommand("check", "model-check a formula");
  check->add_option("model", model_path)->required();
  check->add_option("formula", text)->required();
  check->callback([&] {
    action = [&] {
      Scm m = load_scm(model_path);
      Formula f = read_formula(text, opt);
      check_signature(f, m.signature());
      bool ok = model_check(m, f);
      kv("holds", ok ? "true" : "false");
      code = ok ? kYes : kNo;
    };
  });
  auto* prob_cmd = app.add_subcommand("prob", "evaluate a probability term");
  prob_cmd->add_option("model", model_path)->required();
  prob_cmd->add_option("term", text)->required();
  prob_cmd->callback([&] {
    action = [&] {
      Scm m = load_scm(model_path);
      Term t = parse_term(text, &m.signature());
      kv("term", to_string(t));
      kv("value", show(Evaluator(m).eval(t)));
    };
  });

  // sat / valid
  std::string export_path, model_out;
  auto* sat = app.add_subcommand("sat", "decide satisfiability");
  sat->add_option("formula", text)->required();
  sat->add_option("--export-nra", export_path, "write the undecided polynomial systems as SMT-LIB QF_NRA");
  sat->add_option("--model-out", model_out, "write the witness model");
  sat->callback([&] {
    action = [&] {
      Formula f = read_formula(text, opt);
      SatConfig cfg = opt.sat_config();
      std::vector<PolySystem> open, all;
      cfg.on_system = [&](const PolySystem& s, Verdict v) {
        if (all.empty()) all.push_back(s);
        if (v == Verdict::Unknown) open.push_back(s);
      };
      SatResult r = decide_sat(f, cfg);
      kv("verdict", verdict_name(r.verdict));
      report_stats(r);
      if (!export_path.empty()) {
        const auto& out = open.empty() ? all : open;
        for (std::size_t k = 0; k < out.size(); ++k) {
          std::string path = k == 0 ? export_path : export_path + "." + std::to_string(k + 1);
          write_text(path, export_nra(out[k]));
          kv("exported", path);
        }
      }
      if (r.verdict == Verdict::Sat) {
        kv("support", std::to_string(r.support.size()));
        kv("events", std::to_string(r.events));
        report_model(*r.model, f, model_out);
      }
      code = r.verdict == Verdict::Sat ? kYes : r.verdict == Verdict::Unsat ? kNo : kUnknown;
    };
  });
  auto* valid = app.add_subcommand("valid", "decide validity");
  valid->add_option("formula", text)->required();
  valid->add_option("--model-out", model_out, "write the counter-model");
  valid->callback([&] {
    action = [&] {
      Formula f = read_formula(text, opt);
      ValidResult r = decide_valid(f, opt.sat_config());
      kv("verdict", validity_name(r.verdict));
      report_stats(r.negation);
      if (r.model) report_model(*r.model, f, model_out);
      code = r.verdict == Validity::Valid ? kYes : r.verdict == Validity::Invalid ? kNo : kUnknown;
    };
  });

  // dsep / docalc
  std::string graph_path, xs, ys, zs, ws, over, under;
  auto* dsep = app.add_subcommand("dsep", "test d-separation of X and Y given Z");
  dsep->add_option("graph", graph_path)->required();
  dsep->add_option("x", xs)->required();
  dsep->add_option("y", ys)->required();
  dsep->add_option("z", zs)->required();
  dsep->add_option("--overline", over, "remove edges into these nodes first");
  dsep->add_option("--underline", under, "remove edges out of these nodes first");
  dsep->callback([&] {
    action = [&] {
      Dag g = load_graph(graph_path);
      Dag h = mutilate(g, g.indices(names(over)), g.indices(names(under)));
      bool sep = d_separated(h, names(xs), names(ys), names(zs));
      kv("dseparated", sep ? "true" : "false");
      code = sep ? kYes : kNo;
    };
  });
  int rule = 1;
  bool list_instances = false;
  std::string domains;
  auto* docalc = app.add_subcommand("docalc", "check a do-calculus premise and list its instances");
  docalc->add_option("graph", graph_path)->required();
  docalc->add_option("--rule", rule)->required()->check(CLI::Range(1, 3));
  docalc->add_option("--x", xs);
  docalc->add_option("--y", ys)->required();
  docalc->add_option("--z", zs);
  docalc->add_option("--w", ws);
  docalc->add_option("--domains", domains, "value lists, e.g. \"X:0,1; Z:0,1,2\" (default 0,1)");
  docalc->add_flag("--instances", list_instances, "print every instance");
  docalc->callback([&] {
    action = [&] {
      Dag g = load_graph(graph_path);
      DocalcQuery q{names(xs), names(ys), names(zs), names(ws)};
      bool holds = docalc_premise(g, rule, g.indices(q.x), g.indices(q.y), g.indices(q.z), g.indices(q.w));
      kv("premise", holds ? "holds" : "fails");
      code = holds ? kYes : kNo;
      if (!holds || !list_instances) return;
      DomainMap dm;
      if (!domains.empty())
        for (const auto& [var, values] : detail::parse_domains(domains, nullptr)) dm[var] = values;
      for (const auto& f : docalc_instances(g, rule, q, dm)) kv("instance", to_string(f));
    };
  });

  // prove
  std::string proof_path, system_name_arg;
  auto* prove = app.add_subcommand("prove", "check a proof file");
  prove->add_option("proof", proof_path)->required();
  prove->add_option("--system", system_name_arg, "AX1, AX2 or AX3 (default: the file's header, else AX3)");
  prove->callback([&] {
    action = [&] {
      Proof p = load_proof(proof_path);
      std::optional<AxSystem> sys;
      if (!system_name_arg.empty()) sys = parse_system(system_name_arg);
      ProofCheck r = check_proof(p, sys);
      kv("system", system_name(sys ? *sys : p.system.value_or(AxSystem::AX3)));
      kv("accepted", r.accepted ? "true" : "false");
      if (!r.accepted) {
        kv("line", std::to_string(r.line));
        kv("reason", r.reason);
      }
      code = r.accepted ? kYes : kNo;
    };
  });

  // sim
  std::string prog_path, bits, intervention;
  std::optional<unsigned> approx;
  bool every = false;
  auto* sim = app.add_subcommand("sim", "bounded simulation programs");
  sim->require_subcommand(1);
  auto* sim_run = sim->add_subcommand("run", "run a program on a bit string");
  sim_run->add_option("program", prog_path)->required();
  sim_run->add_option("bits", bits, "bits such as 0110");
  sim_run->add_option("--do", intervention, "intervention such as \"X=1, Y=0\"");
  sim_run->callback([&] {
    action = [&] {
      SimProgram p = intervene(load_program(prog_path), parse_intervention(intervention));
      std::vector<int> tape;
      for (char c : bits) {
        if (c != '0' && c != '1') throw InputError("bits must be 0 or 1");
        tape.push_back(c - '0');
      }
      if (tape.size() < p.bit_bound) throw InputError("program needs " + std::to_string(p.bit_bound) + " bits");
      Instantiation x = run(p, tape);
      for (std::size_t v = 0; v < x.size(); ++v) kv(p.signature.variables[v], p.signature.domains[v][x[v]]);
    };
  });
  auto* sim_dist = sim->add_subcommand("dist", "exact output distribution");
  sim_dist->add_option("program", prog_path)->required();
  sim_dist->add_option("--do", intervention, "intervention such as \"X=1, Y=0\"");
  sim_dist->callback([&] {
    action = [&] {
      SimProgram p = load_program(prog_path);
      for (const auto& [x, q] : distribution(p, parse_intervention(intervention)))
        kv(show_instantiation(p.signature, x), show(q));
    };
  });
  auto* sim_equiv = sim->add_subcommand("equiv", "compare a program with a model under interventions");
  sim_equiv->add_option("program", prog_path)->required();
  sim_equiv->add_option("model", model_path)->required();
  sim_equiv->add_flag("--all", every, "every partial intervention instead of single-variable ones");
  sim_equiv->callback([&] {
    action = [&] {
      SimProgram p = load_program(prog_path);
      Scm m = load_scm(model_path);
      auto ivs = every ? all_interventions(m.signature()) : single_interventions(m.signature());
      EquivReport r = equiv_check(p, m, ivs);
      kv("equivalent", r.equal ? "true" : "false");
      kv("interventions", std::to_string(ivs.size()));
      if (!r.equal) {
        kv("intervention", "[" + detail::show_atoms(*r.at) + "]");
        kv("instantiation", show_instantiation(m.signature(), r.instantiation));
        kv("program", show(r.program_prob));
        kv("model", show(r.model_prob));
      }
      code = r.equal ? kYes : kNo;
    };
  });
  std::string out_path;
  auto* sim_compile = sim->add_subcommand("compile", "compile a model into a program");
  sim_compile->add_option("model", model_path)->required();
  sim_compile->add_option("--approximate-bits", approx, "round non-dyadic weights to this many bits");
  sim_compile->add_option("-o,--output", out_path, "program file to write");
  sim_compile->callback([&] {
    action = [&] {
      CompiledProgram c = compile_scm(load_scm(model_path), {approx});
      std::string prog = write_program(c.program);
      kv("bits", std::to_string(c.program.bit_bound));
      kv("total_variation", show(c.total_variation));
      if (out_path.empty()) {
        std::cout << prog;
      } else {
        write_text(out_path, prog);
        kv("program", out_path);
      }
    };
  });

  // gen-axiom
  std::string schema_name;
  std::vector<std::string> params;
  auto* gen = app.add_subcommand("gen-axiom", "instantiate an axiom schema");
  gen->add_option("name", schema_name)->required();
  gen->add_option("params", params, "key=value pairs");
  gen->callback([&] {
    action = [&] {
      SchemaParams sp;
      for (const auto& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw InputError("parameter '" + p + "' is not key=value");
        sp[p.substr(0, eq)] = p.substr(eq + 1);
      }
      Formula f = generate_schema(schema_name, sp, opt.sig ? &*opt.sig : nullptr);
      kv("schema", schema_name);
      kv("formula", to_string(f));
      kv("level", std::to_string(level(f)));
    };
  });

  // psatz
  std::string cert_path;
  auto* psatz = app.add_subcommand("psatz", "verify a Positivstellensatz certificate");
  psatz->add_option("certificate", cert_path)->required();
  psatz->callback([&] {
    action = [&] {
      PsatzCheck r = verify_psatz(parse_psatz(read_file(cert_path)));
      kv("verified", r.verified ? "true" : "false");
      if (!r.verified) kv("residue", to_string(r.residue));
      code = r.verified ? kYes : kNo;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kBadInput;
  }
  try {
    if (!opt.signature.empty()) opt.sig = detail::parse_signature_text(opt.signature);
    action();
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    kv("verdict", "UNKNOWN");
    return kUnknown;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  std::cout.flush();
  return code;
}
