// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nqrw/algebra_io.hpp"
#include "nqrw/amalgam.hpp"
#include "nqrw/codescent.hpp"
#include "nqrw/confluence.hpp"
#include "nqrw/syntax.hpp"
#include "nqrw/trs_io.hpp"
#include "nqrw/unify.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nqrw;
using support::fixture;

namespace {

// Wall-clock limits in seconds.
constexpr double kBaseQuasigroupLimit = 5;
constexpr double kCompleteQuasigroupLimit = 30;
constexpr double kCompleteQuasigroupN4Limit = 300;
constexpr double kLoopSystemsLimit = 30;
constexpr double kCompleteLoopLimit = 60;
constexpr double kOracleLimit = 120;
constexpr double kUnfLimit = 120;
constexpr double kSearchLimit = 600;
constexpr double kProp36Limit = 120;

// Oracle bound for criterion 7: peaks of size <= 6 over three variables.
constexpr std::size_t kOraclePeakSize = 6;
constexpr std::size_t kDiagnosticPeakSize = 9;
constexpr std::size_t kMutantsPerSystem = 10;
constexpr std::uint64_t kMutationSeed = 20240601;

// Unique normal forms: exhaustive size, random trials, depth and seed.
constexpr std::size_t kUnfSize = 5;
constexpr std::size_t kUnfTrials = 1000;
constexpr std::size_t kUnfDepth = 4;
constexpr std::uint64_t kUnfSeed = 1;

constexpr std::size_t kSearchOrder = 5;
constexpr std::size_t kProp36Order = 6;
constexpr std::size_t kOracleTargetOrder = 6;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", seconds);
  return buf;
}

Term parse(const std::string& text, int n, VarietyKind kind) { return parse_term(text, variety_signature(kind, n)); }

bool pair_variant(const CriticalPair& cp, const Term& a, const Term& b) {
  std::array<Term, 2> got{cp.left, cp.right}, want{a, b}, swapped{b, a};
  return variant_of(got, want) || variant_of(got, swapped);
}

ConfluenceReport timed_check(const Trs& trs, double& seconds) {
  auto t0 = Clock::now();
  ConfluenceReport r = check_confluence(trs);
  seconds = since(t0);
  return r;
}

std::string describe(const CriticalPair& cp) {
  return "(" + to_string(cp.left) + ", " + to_string(cp.right) + ") from " + cp.rule1 + " / " + cp.rule2 + " at " +
         cp.position.to_string();
}

Outcome criterion1() {
  Outcome o;
  for (int n = 1; n <= 4; ++n) {
    double s = 0;
    ConfluenceReport r = timed_check(generate_trs({VarietyKind::quasigroup, n, false}), s);
    const bool want = n == 1;
    o.require((r.verdict == Verdict::confluent) == want && s < kBaseQuasigroupLimit,
              "base quasigroup n=" + std::to_string(n) + ": " + to_string(r.verdict) + " in " + fmt(s));
    if (n == 2) {
      bool match = r.witness && pair_variant(*r.witness, parse("y1", 2, VarietyKind::quasigroup),
                                             parse("g1(y2,g2(y1,y2))", 2, VarietyKind::quasigroup));
      o.require(match, "n=2 witness " + (r.witness ? describe(*r.witness) : std::string("missing")) +
                           " is a variant of (y1, g1(y2,g2(y1,y2)))");
    }
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (int n = 2; n <= 4; ++n) {
    double s = 0;
    ConfluenceReport r = timed_check(generate_trs({VarietyKind::quasigroup, n, true}), s);
    const double limit = n == 4 ? kCompleteQuasigroupN4Limit : kCompleteQuasigroupLimit;
    o.require(r.verdict == Verdict::confluent && s < limit, "complete quasigroup n=" + std::to_string(n) + ": " +
                                                                to_string(r.verdict) + " in " + fmt(s) +
                                                                (n == 4 ? " (optional size)" : ""));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto t0 = Clock::now();
  for (int n = 1; n <= 3; ++n) {
    ConfluenceReport r = check_confluence(generate_trs({VarietyKind::loop, n, false}));
    o.require(r.verdict == Verdict::not_confluent, "base loop n=" + std::to_string(n) + ": " + to_string(r.verdict));
  }
  const std::vector<Family> crossed{Family::f_unit, Family::f_division, Family::division_f, Family::cross_lower,
                                    Family::cross_upper};
  ConfluenceReport a = check_confluence(make_trs(VarietyKind::loop, 2, crossed));
  bool shape_a = a.witness && pair_variant(*a.witness, parse("g1(x,e)", 2, VarietyKind::loop), Term::var("x"));
  o.require(a.verdict == Verdict::not_confluent && shape_a,
            "(2.2),(2.3),(2.4),(2.7),(2.8) n=2: " + to_string(a.verdict) + ", witness " +
                (a.witness ? describe(*a.witness) : std::string("missing")));

  std::vector<Family> with_division_unit = crossed;
  with_division_unit.push_back(Family::division_unit);
  ConfluenceReport b = check_confluence(make_trs(VarietyKind::loop, 2, with_division_unit));
  bool shape_b = b.witness && pair_variant(*b.witness, parse("e", 2, VarietyKind::loop),
                                           parse("g1(y,y)", 2, VarietyKind::loop));
  o.require(b.verdict == Verdict::not_confluent && shape_b,
            "previous system plus (2.9) n=2: " + to_string(b.verdict) + ", witness " +
                (b.witness ? describe(*b.witness) : std::string("missing")));
  double s = since(t0);
  o.require(s < kLoopSystemsLimit, "total " + fmt(s));
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    double s = 0;
    ConfluenceReport r = timed_check(generate_trs({VarietyKind::loop, n, true}), s);
    o.require(r.verdict == Verdict::confluent && s < kCompleteLoopLimit,
              "complete loop n=" + std::to_string(n) + ": " + to_string(r.verdict) + " in " + fmt(s));
  }
  return o;
}

// Each rule of `a` is a variant of exactly one rule of `b`, and the sizes agree.
bool same_rules_up_to_variant(const std::vector<Rule>& a, const std::vector<Rule>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Rule& r : a) {
    std::array<Term, 2> x{r.lhs(), r.rhs()};
    bool found = false;
    for (std::size_t k = 0; k < b.size() && !found; ++k) {
      std::array<Term, 2> y{b[k].lhs(), b[k].rhs()};
      if (!used[k] && variant_of(x, y)) used[k] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

Outcome criterion5() {
  Outcome o;
  for (VarietyKind kind : {VarietyKind::quasigroup, VarietyKind::loop}) {
    CompletionResult r = complete(generate_trs({kind, 2, false}), 10);
    Trs want = generate_trs({kind, 2, true});
    bool confluent = r.status == CompletionStatus::completed && check_confluence(r.trs).verdict == Verdict::confluent;
    o.require(confluent && same_rules_up_to_variant(r.trs.rules(), want.rules()),
              "completion of base " + to_string(kind) + " n=2: " + to_string(r.status) + " after " +
                  std::to_string(r.rounds) + " round(s), " + std::to_string(r.trs.rules().size()) + " rules, " +
                  "equal to the complete set up to renaming");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t failures = 0, rules = 0;
  for (int n = 1; n <= 4; ++n) {
    for (VarietyKind kind : {VarietyKind::quasigroup, VarietyKind::loop}) {
      ConditionsReport r = check_conditions(generate_trs({kind, n, true}));
      for (const RuleConditions& rc : r.rules) {
        ++rules;
        if (!rc.star() || !rc.var_closed) ++failures;
      }
      if (r.star2 != Star2::holds || r.constants > 1) ++failures;
    }
  }
  o.require(failures == 0, std::to_string(rules) + " rules over n=1..4, " + std::to_string(failures) + " failures");
  return o;
}

// Mutations of one rule; each returns nullopt when the result is not a rule.
std::vector<std::string> symbols_of(const Trs& trs) {
  std::vector<std::string> out;
  for (const auto& [name, arity] : trs.signature().symbols())
    if (arity > 0) out.push_back(name);
  return out;
}

Term relabel_at(const Term& t, const Position& p, const std::string& symbol) {
  const Term& s = subterm_at(t, p);
  return replace_at(t, p, Term::app(symbol, std::vector<Term>(s.args().begin(), s.args().end())));
}

Term swap_args_at(const Term& t, const Position& p) {
  const Term& s = subterm_at(t, p);
  std::vector<Term> args(s.args().begin(), s.args().end());
  std::swap(args[0], args[1]);
  return replace_at(t, p, Term::app(s.name(), std::move(args)));
}

struct Mutant {
  Trs trs;
  std::string how;
};

std::vector<Mutant> mutants(const Trs& base, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::vector<Rule>& rules = base.rules();
  const std::vector<std::string> symbols = symbols_of(base);
  const bool loop = base.signature().contains("e");
  std::vector<Mutant> out;
  std::set<std::string> seen;

  for (std::size_t attempt = 0; out.size() < count && attempt < 100000; ++attempt) {
    std::size_t k = pick(rules.size());
    const Rule& r = rules[k];
    std::vector<Position> inner;
    for (const Position& p : positions(r.lhs()))
      if (subterm_at(r.lhs(), p).is_app() && subterm_at(r.lhs(), p).arity() > 0) inner.push_back(p);
    std::vector<Rule> next = rules;
    std::string how;
    try {
      switch (pick(5)) {
        case 0:
          next.erase(next.begin() + static_cast<std::ptrdiff_t>(k));
          how = "drop " + r.label();
          break;
        case 1: {
          std::vector<Term> options;
          for (const std::string& v : variables(r.lhs())) options.push_back(Term::var(v));
          if (loop) options.push_back(Term::app("e"));
          for (const Position& p : positions(r.lhs()))
            if (!p.is_root() && subterm_at(r.lhs(), p).is_app()) options.push_back(subterm_at(r.lhs(), p));
          Term rhs = options[pick(options.size())];
          if (rhs == r.rhs()) continue;
          next[k] = Rule(r.lhs(), rhs, r.label());
          how = r.label() + " rhs := " + to_string(rhs);
          break;
        }
        case 2: {
          const Position& p = inner[pick(inner.size())];
          std::string sym = symbols[pick(symbols.size())];
          if (sym == subterm_at(r.lhs(), p).name()) continue;
          next[k] = Rule(relabel_at(r.lhs(), p, sym), r.rhs(), r.label());
          how = r.label() + " symbol at " + p.to_string() + " := " + sym;
          break;
        }
        case 3: {
          const Position& p = inner[pick(inner.size())];
          next[k] = Rule(swap_args_at(r.lhs(), p), r.rhs(), r.label());
          how = r.label() + " swap arguments at " + p.to_string();
          break;
        }
        default: {
          std::vector<Position> sub;
          for (const Position& p : positions(r.lhs()))
            if (!p.is_root()) sub.push_back(p);
          const Position& p = sub[pick(sub.size())];
          next[k] = Rule(replace_at(r.lhs(), p, Term::var("z")), r.rhs(), r.label());
          how = r.label() + " generalize " + p.to_string();
          break;
        }
      }
      Trs trs(base.signature(), std::move(next));
      if (!trs.size_decreasing() || trs.rules() == rules) continue;
      std::string key;
      for (const Rule& x : trs.rules()) key += format_rule(x) + ";";
      if (!seen.insert(key).second) continue;
      out.push_back({std::move(trs), how});
    } catch (const Error&) {
      continue;
    }
  }
  return out;
}

Outcome criterion7() {
  Outcome o;
  auto t0 = Clock::now();
  const std::vector<std::string> vars{"x", "y", "z"};
  std::vector<Mutant> systems;
  std::uint64_t seed = kMutationSeed;
  for (VarietyKind kind : {VarietyKind::quasigroup, VarietyKind::loop}) {
    Trs c = generate_trs({kind, 2, true});
    systems.push_back({c, "complete " + to_string(kind) + " n=2"});
    for (Mutant& m : mutants(c, kMutantsPerSystem, seed++)) {
      m.how = to_string(kind) + ": " + m.how;
      systems.push_back(std::move(m));
    }
  }
  std::size_t agree = 0, confluent = 0, deep_agree = 0;
  for (const Mutant& m : systems) {
    bool lib = check_confluence(m.trs).verdict == Verdict::confluent;
    oracle::LocalConfluence ref = oracle::local_confluence(m.trs, kOraclePeakSize, vars);
    oracle::LocalConfluence deep = oracle::local_confluence(m.trs, kDiagnosticPeakSize, {"x", "y"});
    confluent += lib;
    deep_agree += lib == deep.confluent;
    if (lib == ref.confluent) {
      ++agree;
      continue;
    }
    o.note("disagree on [" + m.how + "]: library " + (lib ? "confluent" : "not confluent") + ", oracle " +
           (ref.confluent ? "finds no failing peak" : "fails at " + to_string(*ref.peak)) + "; at size <= " +
           std::to_string(kDiagnosticPeakSize) + " " +
           (deep.confluent ? "no failing peak" : "fails at " + to_string(*deep.peak)));
  }
  double s = since(t0);
  o.require(systems.size() == 2 + 2 * kMutantsPerSystem,
            std::to_string(systems.size()) + " systems (2 complete, " + std::to_string(systems.size() - 2) +
                " mutants satisfying (*), " + std::to_string(confluent) + " confluent)");
  o.require(agree == systems.size(), std::to_string(agree) + "/" + std::to_string(systems.size()) +
                                         " verdicts agree with the oracle at peak size <= " +
                                         std::to_string(kOraclePeakSize));
  o.note("diagnostic, not part of the verdict: " + std::to_string(deep_agree) + "/" +
         std::to_string(systems.size()) + " agree with the oracle at peak size <= " +
         std::to_string(kDiagnosticPeakSize) + " over two variables");
  o.require(s < kOracleLimit, "total " + fmt(s));
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto t0 = Clock::now();
  for (const char* name :
       {"diagram_z3_z3_over_trivial.json", "diagram_z4_z4_over_z2.json", "diagram_q3_pair_over_point.json"}) {
    AmalgamDiagram d = load_diagram(fixture(name));
    UnfOptions opts;
    opts.max_size = kUnfSize;
    opts.trials = kUnfTrials;
    opts.random_depth = kUnfDepth;
    opts.seed = kUnfSeed;
    UnfReport r = check_unique_normal_forms(d, opts);
    std::string what = std::string(name) + ": " + std::to_string(r.exhaustive_terms) + " terms of size <= " +
                       std::to_string(kUnfSize) + ", " + std::to_string(r.random_terms) + " random terms";
    if (r.counterexample) what += "; counterexample " + to_string(r.counterexample->term) + " (" + r.counterexample->reason + ")";
    o.require(r.ok && r.random_terms == kUnfTrials, what);
  }
  double s = since(t0);
  o.require(s < kUnfLimit, "total " + fmt(s));
  return o;
}

std::string join(const std::vector<Term>& ts) {
  std::string out = "{";
  for (std::size_t k = 0; k < ts.size(); ++k) out += (k ? "," : "") + to_string(ts[k]);
  return out + "}";
}

Outcome criterion9() {
  Outcome o;
  for (const char* name : {"diagram_z3_z3_over_trivial.json", "diagram_z4_z4_over_z2.json",
                           "diagram_z4_z6_over_z2.json", "diagram_q3_pair_over_point.json",
                           "diagram_z3_identity.json"}) {
    AmalgamDiagram d = load_diagram(fixture(name));
    StrongAmalgamationReport r = check_strong_amalgamation(d);
    o.require(r.ok && r.intersection == r.base_image,
              std::string(name) + ": images meet in " + join(r.intersection) + ", base image " + join(r.base_image) +
                  (r.failure.empty() ? "" : "; " + r.failure));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  for (const char* name : {"z2_loop.json", "z3_loop.json", "z4_loop.json", "z6_loop.json", "q3_a.json", "q3_b.json",
                           "d4_loop.json", "trivial_loop.json"}) {
    FiniteAlgebra alg = load_algebra(fixture(name));
    o.require(is_effective_codescent(identity_embedding(alg)).effective, std::string("identity on ") + alg.name);
    if (alg.kind == VarietyKind::loop) {
      Embedding single = inclusion(alg, std::vector<Element>{*alg.identity}, "E");
      o.require(is_effective_codescent(single).effective, "{e} -> " + alg.name);
    }
  }
  o.require(is_effective_codescent(load_embedding(fixture("emb_trivial_in_z3.json"))).effective,
            "emb_trivial_in_z3.json effective");

  auto t0 = Clock::now();
  CepSearchResult search = search_cep_failure(kSearchOrder);
  double s = since(t0);
  std::string counts;
  for (std::size_t c : search.squares_per_order) counts += (counts.empty() ? "" : ",") + std::to_string(c);
  if (search.failing) {
    CodescentVerdict v = is_effective_codescent(*search.failing);
    o.require(!v.effective, "search found " + search.failing->source.name + " -> " + search.failing->target.name +
                                ", reported not effective");
  } else {
    o.note("search over binary quasigroups of order <= " + std::to_string(kSearchOrder) + " (" + counts +
           " tables, " + std::to_string(search.embeddings_examined) + " subquasigroup inclusions): none fails the CEP");
  }
  o.require(s < kSearchLimit, "search completed in " + fmt(s));

  CodescentVerdict d4 = is_effective_codescent(load_embedding(fixture("emb_v4_in_d4.json")));
  o.require(!d4.effective, "pinned fixture V4 -> D4 (order 8 loops) reported not effective");
  return o;
}

Outcome criterion11() {
  Outcome o;
  auto t0 = Clock::now();
  Prop36Report r = verify_prop_3_6(kProp36Order);
  double s = since(t0);
  o.require(r.ok && r.cycle_types == 29, std::to_string(r.cycle_types) + " cycle types of orders 1.." +
                                             std::to_string(kProp36Order) + ", " + std::to_string(r.f_congruences) +
                                             " f-congruences, all compatible with g1");
  o.require(s < kProp36Limit, "completed in " + fmt(s));
  return o;
}

Outcome criterion12() {
  Outcome o;
  std::vector<Embedding> embeddings;
  for (const char* name : {"emb_identity_z3.json", "emb_trivial_in_z3.json", "emb_z2_in_z4.json", "emb_z2_in_z6.json",
                           "emb_z3_in_z6.json", "emb_point_in_q3a.json"})
    embeddings.push_back(load_embedding(fixture(name)));
  for (const char* name : {"z2_loop.json", "z3_loop.json", "z4_loop.json", "z6_loop.json", "q3_a.json", "q3_b.json",
                           "point_quasigroup.json", "trivial_loop.json"}) {
    FiniteAlgebra alg = load_algebra(fixture(name));
    for (const auto& sub : subalgebras(alg)) embeddings.push_back(inclusion(alg, sub));
  }
  std::size_t agree = 0, total = 0, holds = 0;
  for (const Embedding& emb : embeddings) {
    if (emb.target.order() > kOracleTargetOrder) continue;
    for (Scope scope : {Scope::f_only, Scope::full}) {
      ++total;
      bool lib = check_cep(emb, scope).verdict;
      bool ref = oracle::cep(emb.source, emb.target, emb.map, scope == Scope::full);
      holds += lib;
      if (lib == ref) {
        ++agree;
      } else {
        o.note("disagree on " + emb.source.name + " -> " + emb.target.name + " (" + to_string(scope) + ")");
      }
    }
  }
  o.require(agree == total, std::to_string(agree) + "/" + std::to_string(total) +
                                " verdicts (embeddings x scopes) agree with full enumeration; " +
                                std::to_string(holds) + " have the CEP");
  return o;
}

}  // namespace

// --expect-red=K,... names criteria recorded as unattainable: the run succeeds
// when exactly those fail. Their lines still print FAIL.
std::set<std::size_t> expected_red(int argc, char** argv) {
  std::set<std::size_t> out;
  const std::string flag = "--expect-red=";
  for (int a = 1; a < argc; ++a) {
    std::string arg = argv[a];
    if (!arg.starts_with(flag)) {
      std::fprintf(stderr, "usage: nqrw_acceptance [--expect-red=K,...]\n");
      std::exit(2);
    }
    std::stringstream list(arg.substr(flag.size()));
    for (std::string item; std::getline(list, item, ',');) out.insert(std::stoul(item));
  }
  return out;
}

int main(int argc, char** argv) {
  const std::set<std::size_t> red = expected_red(argc, argv);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"base quasigroup systems", criterion1},
      {"complete quasigroup systems", criterion2},
      {"base and intermediate loop systems", criterion3},
      {"complete loop systems", criterion4},
      {"completion rediscovers the complete systems", criterion5},
      {"conditions (*), (**), (***)", criterion6},
      {"confluence agrees with the local-confluence oracle", criterion7},
      {"unique normal forms in amalgams", criterion8},
      {"strong amalgamation", criterion9},
      {"effective codescent", criterion10},
      {"f-congruences of finite 1-quasigroups", criterion11},
      {"least-extension CEP agrees with enumeration", criterion12},
  };
  int failed = 0;
  bool as_expected = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double s = since(t0);
    std::printf("[%s] %2zu  %s (%s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), fmt(s).c_str());
    for (const std::string& line : o.notes) std::printf("        %s\n", line.c_str());
    std::fflush(stdout);
    failed += !o.pass;
    as_expected = as_expected && o.pass != red.contains(k + 1);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  if (!red.empty()) std::printf("failures %s the expected set\n", as_expected ? "match" : "do not match");
  return (red.empty() ? failed == 0 : as_expected) ? 0 : 1;
}
