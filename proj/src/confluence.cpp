#include "nqrw/confluence.hpp"

#include <exception>

#include "nqrw/unify.hpp"

namespace nqrw {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::confluent:
      return "confluent";
    case Verdict::not_confluent:
      return "not-confluent";
    case Verdict::termination_not_verified:
      return "termination-not-verified";
  }
  return "?";
}

std::string to_string(CompletionStatus s) {
  switch (s) {
    case CompletionStatus::completed:
      return "completed";
    case CompletionStatus::unorientable:
      return "unorientable";
    case CompletionStatus::max_rounds_exceeded:
      return "max-rounds-exceeded";
    case CompletionStatus::termination_not_verified:
      return "termination-not-verified";
  }
  return "?";
}

std::vector<CriticalPair> critical_pairs(std::span<const Rule> rules) {
  std::vector<CriticalPair> out;
  for (std::size_t i1 = 0; i1 < rules.size(); ++i1) {
    const Rule& r1 = rules[i1];
    const Term first[] = {r1.lhs(), r1.rhs()};
    std::vector<Position> sites;
    for (Position& p : positions(r1.lhs()))
      if (!subterm_at(r1.lhs(), p).is_var()) sites.push_back(std::move(p));

    for (std::size_t i2 = 0; i2 < rules.size(); ++i2) {
      const Rule& r2 = rules[i2];
      const Term second[] = {r2.lhs(), r2.rhs()};
      Substitution rho = rename_apart(first, second);
      Term l2 = rho.apply(r2.lhs());
      Term rhs2 = rho.apply(r2.rhs());

      for (const Position& p : sites) {
        auto sigma = unify(subterm_at(r1.lhs(), p), l2);
        if (!sigma) continue;
        Term peak = sigma->apply(r1.lhs());
        Term left = sigma->apply(r1.rhs());
        Term right = replace_at(peak, p, sigma->apply(rhs2));

        const Term trio[] = {peak, left, right};
        Substitution canon = canonical_renaming(trio);
        CriticalPair cp{canon.apply(left), canon.apply(right), canon.apply(peak), r1.label(), r2.label(), i1, i2, p, {},
                        false};
        std::vector<std::string> vars;
        collect_variables_ordered(r1.lhs(), vars);
        collect_variables_ordered(l2, vars);
        for (const std::string& v : vars) cp.mgu.bind(v, canon.apply(sigma->apply(Term::var(v))));
        cp.trivial = cp.left == cp.right;
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

namespace {

JoinResult join_one(std::span<const Rule> rules, const CriticalPair& cp, std::size_t cap) {
  if (cp.trivial) return {true, cp.left};
  return joinable(rules, cp.left, cp.right, cap);
}

std::vector<JoinResult> join_pairs_serial(std::span<const Rule> rules, std::span<const CriticalPair> pairs,
                                          std::size_t cap) {
  std::vector<JoinResult> out;
  out.reserve(pairs.size());
  for (const CriticalPair& cp : pairs) out.push_back(join_one(rules, cp, cap));
  return out;
}

std::vector<JoinResult> join_pairs_omp(std::span<const Rule> rules, std::span<const CriticalPair> pairs,
                                       std::size_t cap) {
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
  std::vector<JoinResult> out(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = join_one(rules, pairs[i], cap);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

std::vector<JoinResult> join_pairs(std::span<const Rule> rules, std::span<const CriticalPair> pairs, std::size_t cap,
                                   Exec exec) {
  return exec == Exec::parallel ? join_pairs_omp(rules, pairs, cap) : join_pairs_serial(rules, pairs, cap);
}

ConfluenceReport check_confluence(const Trs& trs, const ConfluenceOptions& opts) {
  ConfluenceReport report;
  report.pairs = critical_pairs(trs);
  if (!trs.size_decreasing()) {
    report.verdict = Verdict::termination_not_verified;
    return report;
  }
  report.joins = join_pairs(trs.rules(), report.pairs, opts.cap, opts.exec);
  report.verdict = Verdict::confluent;
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    if (!report.joins[i].joinable) {
      report.verdict = Verdict::not_confluent;
      report.witness = report.pairs[i];
      break;
    }
  }
  return report;
}

bool ConditionsReport::star_holds() const {
  for (const RuleConditions& r : rules)
    if (!r.star()) return false;
  return true;
}

bool ConditionsReport::star3_holds() const {
  for (const RuleConditions& r : rules)
    if (!r.var_closed) return false;
  return true;
}

namespace {

bool var_closed(const Term& sub, const std::set<std::string>& all) {
  if (sub.is_var() || sub.arity() == 0) return true;
  if (variables(sub) != all) return false;
  for (const Term& a : sub.args())
    if (!var_closed(a, all)) return false;
  return true;
}

}  // namespace

ConditionsReport check_conditions(const Trs& trs) {
  ConditionsReport report;
  report.constants = trs.signature().constants().size();
  report.star2 = report.constants <= 1 ? Star2::holds : Star2::undetermined;
  for (const Rule& r : trs.rules()) {
    RuleConditions rc;
    rc.label = r.label();
    rc.occurrence = occurrence_condition(r);
    rc.size = size_condition(r);
    rc.var_closed = var_closed(r.lhs(), variables(r.lhs()));
    report.rules.push_back(std::move(rc));
  }
  return report;
}

namespace {

std::string fresh_label(const std::vector<Rule>& rules, std::size_t round, std::size_t& k) {
  for (;;) {
    std::string label = "c" + std::to_string(round) + "." + std::to_string(++k);
    bool taken = false;
    for (const Rule& r : rules) taken = taken || r.label() == label;
    if (!taken) return label;
  }
}

bool has_variant(const std::vector<Rule>& rules, const Term& lhs, const Term& rhs) {
  const Term cand[] = {lhs, rhs};
  for (const Rule& r : rules) {
    const Term have[] = {r.lhs(), r.rhs()};
    if (variant_of(cand, have)) return true;
  }
  return false;
}

}  // namespace

CompletionResult complete(const Trs& trs, std::size_t max_rounds, const ConfluenceOptions& opts) {
  CompletionResult result{CompletionStatus::completed, trs, 0, {}, {}, {}};
  if (!trs.size_decreasing()) {
    result.status = CompletionStatus::termination_not_verified;
    return result;
  }
  std::vector<Rule> rules = trs.rules();

  for (std::size_t round = 1;; ++round) {
    std::vector<CriticalPair> pairs = critical_pairs(rules);
    // Adding rules only enlarges reduct sets, so pairs joinable against the
    // round's starting rules stay joinable; only the rest need a re-check.
    std::vector<JoinResult> joins = join_pairs(rules, pairs, opts.cap, opts.exec);
    bool all_joinable = true;
    for (const JoinResult& j : joins) all_joinable = all_joinable && j.joinable;
    if (all_joinable) break;
    if (round > max_rounds) {
      result.status = CompletionStatus::max_rounds_exceeded;
      result.trs = Trs(trs.signature(), rules);
      return result;
    }

    std::size_t k = 0;
    bool adopted_any = false;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (joins[i].joinable) continue;
      const CriticalPair& cp = pairs[i];
      if (joinable(rules, cp.left, cp.right, opts.cap).joinable) continue;
      Term s = normalize_rules(rules, cp.left, Strategy::innermost()).term;
      Term t = normalize_rules(rules, cp.right, Strategy::innermost()).term;
      if (s == t) continue;
      if (s.size() < t.size()) std::swap(s, t);

      auto fail = [&] {
        result.status = CompletionStatus::unorientable;
        result.failing = cp;
        result.unorientable = std::make_pair(s, t);
        result.trs = Trs(trs.signature(), rules);
        return result;
      };
      if (s.size() == t.size() || s.is_var()) return fail();
      const Term sides[] = {s, t};
      Substitution canon = canonical_renaming(sides, "x");
      Term lhs = canon.apply(s);
      Term rhs = canon.apply(t);
      if (has_variant(rules, lhs, rhs)) continue;

      std::set<std::string> lv = variables(lhs);
      bool closed = true;
      for (const std::string& v : variables(rhs)) closed = closed && lv.contains(v);
      if (!closed) return fail();
      Rule rule(lhs, rhs, fresh_label(rules, round, k));
      if (!occurrence_condition(rule)) return fail();

      rules.push_back(rule);
      result.adopted.push_back({std::move(rule), cp, round});
      adopted_any = true;
    }
    if (adopted_any) result.rounds = round;
  }
  result.trs = Trs(trs.signature(), std::move(rules));
  return result;
}

}  // namespace nqrw
