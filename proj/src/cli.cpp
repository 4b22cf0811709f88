#include "nqrw/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nqrw/algebra_io.hpp"
#include "nqrw/amalgam.hpp"
#include "nqrw/codescent.hpp"
#include "nqrw/confluence.hpp"
#include "nqrw/syntax.hpp"
#include "nqrw/trs_io.hpp"
#include "nqrw/variety.hpp"

namespace nqrw {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string digest_of(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c; in.get(c);) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::size_t reduct_cap() {
  const char* env = std::getenv("NQ_REDUCT_CAP");
  if (!env || !*env) return kDefaultReductCap;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) throw UsageError("NQ_REDUCT_CAP must be a positive integer");
  return static_cast<std::size_t>(v);
}

Json terms_json(std::span<const Term> ts) {
  Json a = Json::array();
  for (const Term& t : ts) a.push_back(to_string(t));
  return a;
}

Json pair_json(const CriticalPair& cp) {
  return Json{{"rule1", cp.rule1},
              {"rule2", cp.rule2},
              {"position", cp.position.to_string()},
              {"peak", to_string(cp.peak)},
              {"left", to_string(cp.left)},
              {"right", to_string(cp.right)},
              {"trivial", cp.trivial}};
}

Json trace_json(std::span<const TraceStep> trace) {
  Json a = Json::array();
  for (const TraceStep& s : trace) a.push_back(Json{{"rule", s.label}, {"position", s.position.to_string()}});
  return a;
}

std::string partition_string(const Partition& p, const FiniteAlgebra& alg) { return to_string(p, alg.carrier); }

void emit(std::ostream& out, Json report, int code) {
  report["exit_code"] = code;
  out << report.dump(2) << "\n";
}

struct Common {
  bool json = false;
  bool serial = false;
  Exec exec() const { return serial ? Exec::serial : Exec::parallel; }
};

// ---------------------------------------------------------------- gen-trs

struct GenOpts {
  std::string kind = "quasigroup";
  int n = 0;
  bool complete = false;
  Common common;
};

int gen_trs(const GenOpts& o, std::ostream& out) {
  VarietySpec spec{parse_variety_kind(o.kind), o.n, o.complete};
  Trs trs = generate_trs(spec);
  if (o.common.json) {
    Json rules = Json::array();
    for (const Rule& r : trs.rules())
      rules.push_back(Json{{"label", r.label()}, {"lhs", to_string(r.lhs())}, {"rhs", to_string(r.rhs())}});
    Json sig = Json::array();
    for (const auto& [name, arity] : trs.signature().symbols()) sig.push_back(Json{{"symbol", name}, {"arity", arity}});
    emit(out,
         Json{{"command", "gen-trs"},
              {"kind", o.kind},
              {"n", o.n},
              {"complete", o.complete},
              {"signature", sig},
              {"rules", rules}},
         exit_code::ok);
  } else {
    std::string comment =
        std::string(o.complete ? "complete" : "base") + " " + o.kind + " system, n=" + std::to_string(o.n);
    out << format_trs(trs, comment);
  }
  return exit_code::ok;
}

// ---------------------------------------------------------------- check

struct CheckOpts {
  std::string trs;
  bool confluence = false;
  bool conditions = false;
  bool pairs = false;
  Common common;
};

int check(CheckOpts o, std::ostream& out) {
  const std::string digest = digest_of(o.trs);
  Trs trs = load_trs(o.trs);
  if (!o.confluence && !o.conditions && !o.pairs) o.confluence = true;

  Json report{{"command", "check"}, {"inputs", Json{{"trs", o.trs}, {"digest", digest}}}};
  std::ostringstream text;
  text << "trs: " << o.trs << " (" << trs.rules().size() << (trs.rules().size() == 1 ? " rule)\n" : " rules)\n");
  int code = exit_code::ok;

  if (o.conditions) {
    ConditionsReport c = check_conditions(trs);
    Json rules = Json::array();
    text << "conditions:\n";
    for (const RuleConditions& r : c.rules) {
      rules.push_back(Json{{"label", r.label}, {"star", r.star()}, {"star3", r.var_closed}});
      text << "  " << r.label << ": (*) " << (r.star() ? "holds" : "fails");
      if (!r.occurrence) text << " [variable occurs more often on the right]";
      if (!r.size) text << " [lhs not larger than rhs]";
      text << ", (***) " << (r.var_closed ? "holds" : "fails") << "\n";
    }
    const char* star2 = c.star2 == Star2::holds ? "holds" : "undetermined";
    text << "(*) " << (c.star_holds() ? "holds" : "fails") << "; (**) " << star2 << " (" << c.constants
         << (c.constants == 1 ? " constant" : " constants") << "); (***) " << (c.star3_holds() ? "holds" : "fails")
         << "\n";
    report["conditions"] = Json{{"rules", rules},
                                {"star", c.star_holds()},
                                {"star2", star2},
                                {"constants", c.constants},
                                {"star3", c.star3_holds()}};
    if (!c.star_holds() || !c.star3_holds()) code = exit_code::fails;
  }

  if (o.confluence || o.pairs) {
    ConfluenceReport r = check_confluence(trs, {reduct_cap(), o.common.exec()});
    std::size_t trivial = 0, open = 0;
    for (std::size_t k = 0; k < r.pairs.size(); ++k) {
      trivial += r.pairs[k].trivial;
      if (!r.joins.empty() && !r.joins[k].joinable) ++open;
    }
    if (o.pairs) {
      Json pairs = Json::array();
      text << "critical pairs:\n";
      for (std::size_t k = 0; k < r.pairs.size(); ++k) {
        const CriticalPair& cp = r.pairs[k];
        Json pj = pair_json(cp);
        text << "  [" << k + 1 << "] " << cp.rule1 << " / " << cp.rule2 << " at " << cp.position.to_string() << ": "
             << to_string(cp.left) << " <- " << to_string(cp.peak) << " -> " << to_string(cp.right);
        if (!r.joins.empty()) {
          const JoinResult& j = r.joins[k];
          pj["joinable"] = j.joinable;
          if (j.witness) pj["witness"] = to_string(*j.witness);
          if (cp.trivial)
            text << "  (trivial)";
          else if (j.joinable)
            text << "  (joins at " << to_string(*j.witness) << ")";
          else
            text << "  (NOT joinable)";
        }
        text << "\n";
        pairs.push_back(std::move(pj));
      }
      report["critical_pairs"] = std::move(pairs);
    }
    text << "confluence: " << to_string(r.verdict);
    if (r.verdict != Verdict::termination_not_verified)
      text << " (" << r.pairs.size() << " critical pairs, " << trivial << " trivial, " << open << " not joinable)";
    text << "\n";
    report["verdict"] = to_string(r.verdict);
    report["pair_count"] = r.pairs.size();
    report["non_joinable"] = open;
    if (r.witness) {
      const CriticalPair& w = *r.witness;
      text << "witness: " << w.rule1 << " / " << w.rule2 << " at " << w.position.to_string() << "\n"
           << "  peak:  " << to_string(w.peak) << "\n"
           << "  left:  " << to_string(w.left) << "\n"
           << "  right: " << to_string(w.right) << "\n";
      report["witness"] = pair_json(w);
    }
    if (r.verdict == Verdict::termination_not_verified) {
      text << "condition (*) fails, so termination is not verified\n";
      code = exit_code::input;
    } else if (r.verdict == Verdict::not_confluent && code == exit_code::ok) {
      code = exit_code::fails;
    }
  }

  if (o.common.json)
    emit(out, std::move(report), code);
  else
    out << text.str();
  return code;
}

// ---------------------------------------------------------------- normalize

struct NormalizeOpts {
  std::string trs;
  std::string term;
  std::string strategy = "innermost";
  std::uint64_t seed = 0;
  std::size_t max_steps = 0;
  bool trace = false;
  Common common;
};

void print_trace(std::ostream& out, std::span<const Rule> rules, const Term& start,
                 std::span<const TraceStep> trace,
                 const std::function<Term(const Term&, const TraceStep&)>& step) {
  out << "   " << to_string(start) << "\n";
  Term t = start;
  for (const TraceStep& s : trace) {
    t = step ? step(t, s) : replay(rules, t, std::span(&s, 1));
    out << "-> " << to_string(t) << "   by " << s.label << " at " << s.position.to_string() << "\n";
  }
}

int normalize_cmd(const NormalizeOpts& o, std::ostream& out) {
  const std::string digest = digest_of(o.trs);
  Trs trs = load_trs(o.trs);
  Term t = parse_term(o.term, trs.signature());
  std::optional<std::size_t> bound;
  if (o.max_steps) bound = o.max_steps;
  Normalized nf = normalize(trs, t, parse_strategy(o.strategy, o.seed), bound);
  if (o.common.json) {
    Json report{{"command", "normalize"},
                {"inputs", Json{{"trs", o.trs}, {"digest", digest}, {"term", to_string(t)}}},
                {"strategy", o.strategy},
                {"normal_form", to_string(nf.term)},
                {"steps", nf.trace.size()}};
    if (o.trace) report["trace"] = trace_json(nf.trace);
    emit(out, std::move(report), exit_code::ok);
  } else {
    if (o.trace) print_trace(out, trs.rules(), t, nf.trace, {});
    out << "normal form: " << to_string(nf.term) << "\n";
  }
  return exit_code::ok;
}

// ---------------------------------------------------------------- complete

struct CompleteOpts {
  std::string trs;
  std::size_t max_rounds = 10;
  std::string output;
  Common common;
};

int complete_cmd(const CompleteOpts& o, std::ostream& out) {
  const std::string digest = digest_of(o.trs);
  Trs trs = load_trs(o.trs);
  CompletionResult r = complete(trs, o.max_rounds, {reduct_cap(), o.common.exec()});
  int code = exit_code::ok;
  switch (r.status) {
    case CompletionStatus::completed:
      break;
    case CompletionStatus::unorientable:
      code = exit_code::fails;
      break;
    case CompletionStatus::max_rounds_exceeded:
      code = exit_code::resource;
      break;
    case CompletionStatus::termination_not_verified:
      code = exit_code::input;
      break;
  }
  std::string completed = format_trs(r.trs, "completed from " + o.trs);
  if (!o.output.empty()) {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + o.output);
    f << completed;
  }

  if (o.common.json) {
    Json adopted = Json::array();
    for (const AdoptedRule& a : r.adopted)
      adopted.push_back(Json{{"label", a.rule.label()},
                             {"lhs", to_string(a.rule.lhs())},
                             {"rhs", to_string(a.rule.rhs())},
                             {"round", a.round},
                             {"source", pair_json(a.source)}});
    Json report{{"command", "complete"},
                {"inputs", Json{{"trs", o.trs}, {"digest", digest}}},
                {"status", to_string(r.status)},
                {"rounds", r.rounds},
                {"adopted", adopted},
                {"rule_count", r.trs.rules().size()},
                {"trs", completed}};
    if (r.failing) report["failing"] = pair_json(*r.failing);
    if (r.unorientable)
      report["unorientable"] = Json{to_string(r.unorientable->first), to_string(r.unorientable->second)};
    emit(out, std::move(report), code);
    return code;
  }
  for (const AdoptedRule& a : r.adopted)
    out << "round " << a.round << ": " << format_rule(a.rule) << "   from " << a.source.rule1 << " / "
        << a.source.rule2 << " at " << a.source.position.to_string() << "\n";
  out << "status: " << to_string(r.status) << " after " << r.rounds << (r.rounds == 1 ? " round" : " rounds") << ", "
      << r.trs.rules().size() << " rules\n";
  if (r.unorientable)
    out << "unorientable: " << to_string(r.unorientable->first) << " = " << to_string(r.unorientable->second) << "\n";
  if (r.status == CompletionStatus::completed && o.output.empty()) out << completed;
  return code;
}

// ---------------------------------------------------------------- amalgam

struct AmalgamOpts {
  std::string diagram;
  std::string normalize;
  std::string strategy = "innermost";
  std::uint64_t seed = 1;
  bool trace = false;
  bool check_unf = false;
  std::size_t depth = 5;
  std::size_t trials = 1000;
  bool strong = false;
  Common common;
};

std::string describe(const AmalgamDiagram& d) {
  std::string s = "diagram: " + to_string(d.kind) + "s, n=" + std::to_string(d.n) + "; base " + d.base.name + " (" +
                  std::to_string(d.base.order()) + ")";
  for (const FiniteAlgebra& a : d.factors) s += ", " + a.name + " (" + std::to_string(a.order()) + ")";
  return s + "\n";
}

int amalgam_cmd(const AmalgamOpts& o, std::ostream& out) {
  const int selected = !o.normalize.empty() + o.check_unf + o.strong;
  if (selected != 1)
    throw UsageError("choose exactly one of --normalize, --check-unf, --check-strong-amalgamation");
  const std::string digest = digest_of(o.diagram);
  AmalgamDiagram d = load_diagram(o.diagram);
  Json report{{"command", "amalgam"}, {"inputs", Json{{"diagram", o.diagram}, {"digest", digest}}}};
  Json elements = Json::array();
  for (const std::string& e : d.elements) elements.push_back(e);
  report["elements"] = elements;
  std::ostringstream text;
  text << describe(d);
  int code = exit_code::ok;

  if (!o.normalize.empty()) {
    Term t = parse_amalgam_term(d, o.normalize);
    Normalized nf = normalize_element(d, t, parse_strategy(o.strategy, o.seed));
    report["term"] = to_string(t);
    report["strategy"] = o.strategy;
    report["normal_form"] = to_string(nf.term);
    if (o.trace) {
      report["trace"] = trace_json(nf.trace);
      auto step = [&](const Term& cur, const TraceStep& s) {
        for (AmalgamStep& a : amalgam_steps(d, cur))
          if (a.label == s.label && a.position == s.position) return a.result;
        throw Error("trace step does not apply");
      };
      print_trace(text, {}, t, nf.trace, step);
    }
    text << "normal form: " << to_string(nf.term) << "\n";
  } else if (o.check_unf) {
    UnfOptions opts;
    opts.max_size = o.depth;
    opts.trials = o.trials;
    opts.seed = o.seed;
    opts.cap = reduct_cap();
    opts.exec = o.common.exec();
    UnfReport r = check_unique_normal_forms(d, opts);
    report["verdict"] = r.ok ? "ok" : "counterexample";
    report["exhaustive_terms"] = r.exhaustive_terms;
    report["random_terms"] = r.random_terms;
    text << "unique normal forms: " << (r.ok ? "ok" : "COUNTEREXAMPLE") << " (" << r.exhaustive_terms
         << " terms of size <= " << o.depth << ", " << r.random_terms << " random terms of depth <= "
         << opts.random_depth << ", seed " << o.seed << ")\n";
    if (r.counterexample) {
      const UnfCounterexample& c = *r.counterexample;
      report["counterexample"] =
          Json{{"term", to_string(c.term)}, {"reason", c.reason}, {"normal_forms", terms_json(c.normal_forms)}};
      text << "  term: " << to_string(c.term) << "\n  " << c.reason << ":";
      for (const Term& nf : c.normal_forms) text << " " << to_string(nf);
      text << "\n";
      code = exit_code::fails;
    }
  } else {
    StrongAmalgamationReport r = check_strong_amalgamation(d);
    report["verdict"] = r.ok ? "ok" : "counterexample";
    report["image1"] = terms_json(r.image1);
    report["image2"] = terms_json(r.image2);
    report["base_image"] = terms_json(r.base_image);
    report["intersection"] = terms_json(r.intersection);
    if (!r.ok) report["failure"] = r.failure;
    auto list = [](std::span<const Term> ts) {
      std::string s = "{";
      for (std::size_t k = 0; k < ts.size(); ++k) s += (k ? "," : "") + to_string(ts[k]);
      return s + "}";
    };
    text << "image of " << d.factors[0].name << ": " << list(r.image1) << "\n"
         << "image of " << d.factors[1].name << ": " << list(r.image2) << "\n"
         << "intersection: " << list(r.intersection) << "\n"
         << "image of base: " << list(r.base_image) << "\n"
         << "strong amalgamation: " << (r.ok ? "ok" : "FAILS: " + r.failure) << "\n";
    if (!r.ok) code = exit_code::fails;
  }

  if (o.common.json)
    emit(out, std::move(report), code);
  else
    out << text.str();
  return code;
}

// ---------------------------------------------------------------- codescent

struct CodescentOpts {
  std::string embedding;
  std::string scope = "full";
  Common common;
};

int codescent_cmd(const CodescentOpts& o, std::ostream& out) {
  const std::string digest = digest_of(o.embedding);
  Scope scope = parse_scope(o.scope);
  Embedding emb = load_embedding(o.embedding);
  CepReport r = check_cep(emb, scope, o.common.exec());
  const int code = r.verdict ? exit_code::ok : exit_code::fails;

  if (o.common.json) {
    Json witnesses = Json::array();
    for (const CepWitness& w : r.witnesses)
      witnesses.push_back(Json{{"congruence", partition_string(w.source, emb.source)},
                               {"generated", partition_string(w.generated, emb.target)},
                               {"restricted", partition_string(w.restricted, emb.source)},
                               {"extends", w.extends}});
    Json report{{"command", "codescent"},
                {"inputs", Json{{"embedding", o.embedding}, {"digest", digest}}},
                {"source", emb.source.name},
                {"target", emb.target.name},
                {"scope", to_string(scope)},
                {"cep", r.verdict},
                {"witnesses", witnesses}};
    if (scope == Scope::full) report["effective_codescent"] = r.verdict;
    if (r.failing) report["failing"] = *r.failing;
    emit(out, std::move(report), code);
    return code;
  }
  out << "embedding: " << emb.source.name << " (" << emb.source.order() << ") -> " << emb.target.name << " ("
      << emb.target.order() << "), scope " << to_string(scope) << "\n";
  for (const CepWitness& w : r.witnesses)
    out << "  " << partition_string(w.source, emb.source) << " generates "
        << partition_string(w.generated, emb.target) << ", restricts to "
        << partition_string(w.restricted, emb.source) << (w.extends ? "" : "   DOES NOT EXTEND") << "\n";
  out << "congruence extension property: " << (r.verdict ? "holds" : "fails") << "\n";
  if (scope == Scope::full) out << "effective codescent: " << (r.verdict ? "yes" : "no") << "\n";
  return code;
}

void add_common(CLI::App* cmd, Common& c, bool with_exec = true) {
  cmd->add_flag("--json", c.json, "Emit a JSON report");
  if (with_exec) cmd->add_flag("--serial", c.serial, "Use the serial reference kernels");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rewriting systems, amalgams and codescent for n-quasigroups and n-loops", "nqrw"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen-trs", "Emit the base or complete system of a variety");
  gen_cmd->add_option("--kind", gen.kind, "quasigroup or loop")->check(CLI::IsMember({"quasigroup", "loop"}));
  gen_cmd->add_option("--n", gen.n, "Arity of f")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--complete", gen.complete, "Include the derived rules");
  add_common(gen_cmd, gen.common, false);

  CheckOpts chk;
  auto* check_cmd = app.add_subcommand("check", "Decide confluence and report conditions (*), (**), (***)");
  check_cmd->add_option("--trs", chk.trs, "TRS file")->required();
  check_cmd->add_flag("--confluence", chk.confluence, "Decide confluence (default)");
  check_cmd->add_flag("--conditions", chk.conditions, "Report the rule conditions");
  check_cmd->add_flag("--critical-pairs", chk.pairs, "List every critical pair");
  add_common(check_cmd, chk.common);

  NormalizeOpts norm;
  auto* norm_cmd = app.add_subcommand("normalize", "Rewrite a term to normal form");
  norm_cmd->add_option("--trs", norm.trs, "TRS file")->required();
  norm_cmd->add_option("--term", norm.term, "Term to normalize")->required();
  norm_cmd->add_option("--strategy", norm.strategy, "innermost, outermost or random")
      ->check(CLI::IsMember({"innermost", "outermost", "random"}));
  norm_cmd->add_option("--seed", norm.seed, "Seed for the random strategy");
  norm_cmd->add_option("--max-steps", norm.max_steps, "Step bound (required when (*) fails)");
  norm_cmd->add_flag("--trace", norm.trace, "Print every step");
  add_common(norm_cmd, norm.common, false);

  CompleteOpts comp;
  auto* comp_cmd = app.add_subcommand("complete", "Orient non-joinable critical pairs until confluent");
  comp_cmd->add_option("--trs", comp.trs, "TRS file")->required();
  comp_cmd->add_option("--max-rounds", comp.max_rounds, "Round limit")->check(CLI::PositiveNumber);
  comp_cmd->add_option("--output", comp.output, "Write the completed TRS here");
  add_common(comp_cmd, comp.common);

  AmalgamOpts am;
  auto* am_cmd = app.add_subcommand("amalgam", "Normal forms in amalgamated free products");
  am_cmd->add_option("--diagram", am.diagram, "Diagram file (JSON)")->required();
  am_cmd->add_option("--normalize", am.normalize, "Term over the diagram's elements");
  am_cmd->add_option("--strategy", am.strategy, "innermost, outermost or random")
      ->check(CLI::IsMember({"innermost", "outermost", "random"}));
  am_cmd->add_flag("--trace", am.trace, "Print every step");
  am_cmd->add_flag("--check-unf", am.check_unf, "Check unique normal forms");
  am_cmd->add_option("--depth", am.depth, "Largest term size checked exhaustively")->check(CLI::PositiveNumber);
  am_cmd->add_option("--trials", am.trials, "Random terms to sample");
  am_cmd->add_option("--seed", am.seed, "Seed for random terms and strategies");
  am_cmd->add_flag("--check-strong-amalgamation", am.strong, "Check strong amalgamation (two factors)");
  add_common(am_cmd, am.common);

  CodescentOpts cd;
  auto* cd_cmd = app.add_subcommand("codescent", "Decide effective codescent of a monomorphism");
  cd_cmd->add_option("--embedding", cd.embedding, "Embedding file (JSON)")->required();
  cd_cmd->add_option("--scope", cd.scope, "f or full")->check(CLI::IsMember({"f", "full"}));
  add_common(cd_cmd, cd.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input;
  }

  try {
    if (gen_cmd->parsed()) return gen_trs(gen, out);
    if (check_cmd->parsed()) return check(chk, out);
    if (norm_cmd->parsed()) return normalize_cmd(norm, out);
    if (comp_cmd->parsed()) return complete_cmd(comp, out);
    if (am_cmd->parsed()) return amalgam_cmd(am, out);
    if (cd_cmd->parsed()) return codescent_cmd(cd, out);
  } catch (const CapExceeded& e) {
    err << "resource bound: " << e.what() << "\n";
    return exit_code::resource;
  } catch (const StepBoundExceeded& e) {
    err << "resource bound: " << e.what() << "\n";
    return exit_code::resource;
  } catch (const CarrierTooLarge& e) {
    err << "resource bound: " << e.what() << "\n";
    return exit_code::resource;
  } catch (const TerminationNotVerified& e) {
    err << "error: " << e.what() << " (pass --max-steps)\n";
    return exit_code::input;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input;
  }
  return exit_code::input;
}

}  // namespace nqrw
