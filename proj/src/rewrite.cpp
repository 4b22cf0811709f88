#include "nqrw/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_set>

#include "nqrw/syntax.hpp"
#include "nqrw/unify.hpp"

namespace nqrw {

Rule::Rule(Term lhs, Term rhs, std::string label) : lhs_(std::move(lhs)), rhs_(std::move(rhs)), label_(std::move(label)) {
  if (label_.empty()) throw Error("rule label must not be empty");
  if (lhs_.is_var()) throw Error("rule " + label_ + ": left-hand side is a variable");
  std::set<std::string> lv = variables(lhs_);
  for (const std::string& v : variables(rhs_))
    if (!lv.contains(v)) throw Error("rule " + label_ + ": variable '" + v + "' occurs only on the right");
}

bool occurrence_condition(const Rule& r) {
  for (const std::string& v : variables(r.rhs()))
    if (count_occurrences(r.rhs(), v) > count_occurrences(r.lhs(), v)) return false;
  return true;
}

bool size_condition(const Rule& r) { return r.lhs().size() > r.rhs().size(); }

Trs::Trs(Signature sig, std::vector<Rule> rules) : sig_(std::move(sig)), rules_(std::move(rules)) {
  std::set<std::string> labels;
  for (const Rule& r : rules_) {
    if (!labels.insert(r.label()).second) throw Error("duplicate rule label '" + r.label() + "'");
    if (contains_elem(r.lhs()) || contains_elem(r.rhs())) throw Error("rule " + r.label() + " contains element leaves");
    check_well_formed(r.lhs(), sig_);
    check_well_formed(r.rhs(), sig_);
    size_decreasing_ = size_decreasing_ && occurrence_condition(r) && size_condition(r);
  }
}

const Rule* Trs::find(std::string_view label) const {
  auto it = std::find_if(rules_.begin(), rules_.end(), [&](const Rule& r) { return r.label() == label; });
  return it == rules_.end() ? nullptr : &*it;
}

namespace {

// Head-symbol filter before the full match.
bool may_match(const Term& pattern, const Term& subject) {
  return pattern.kind() == subject.kind() && pattern.arity() == subject.arity() && pattern.name() == subject.name();
}

template <typename Visit>
void for_each_step(std::span<const Rule> rules, const Term& t, Position& at, Visit&& visit) {
  for (const Rule& r : rules) {
    if (!may_match(r.lhs(), t)) continue;
    if (auto sigma = match(r.lhs(), t)) visit(r, at, sigma->apply(r.rhs()));
  }
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    at.path.push_back(i + 1);
    for_each_step(rules, t.args()[i], at, visit);
    at.path.pop_back();
  }
}

struct Redex {
  const Rule* rule;
  Position position;
  Term contractum;
};

std::optional<Redex> redex_here(std::span<const Rule> rules, const Term& t, const Position& at) {
  for (const Rule& r : rules) {
    if (!may_match(r.lhs(), t)) continue;
    if (auto sigma = match(r.lhs(), t)) return Redex{&r, at, sigma->apply(r.rhs())};
  }
  return std::nullopt;
}

std::optional<Redex> innermost_redex(std::span<const Rule> rules, const Term& t, Position& at) {
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    at.path.push_back(i + 1);
    auto found = innermost_redex(rules, t.args()[i], at);
    at.path.pop_back();
    if (found) return found;
  }
  return redex_here(rules, t, at);
}

std::optional<Redex> outermost_redex(std::span<const Rule> rules, const Term& t, Position& at) {
  if (auto found = redex_here(rules, t, at)) return found;
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    at.path.push_back(i + 1);
    auto found = outermost_redex(rules, t.args()[i], at);
    at.path.pop_back();
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

std::vector<RewriteStep> rewrite_steps(std::span<const Rule> rules, const Term& t) {
  std::vector<RewriteStep> out;
  Position at;
  for_each_step(rules, t, at, [&](const Rule& r, const Position& p, Term contractum) {
    out.push_back({replace_at(t, p, contractum), r.label(), p});
  });
  return out;
}

std::vector<Term> successors(std::span<const Rule> rules, const Term& t) {
  std::vector<Term> out;
  Position at;
  for_each_step(rules, t, at,
                [&](const Rule&, const Position& p, Term contractum) { out.push_back(replace_at(t, p, contractum)); });
  return out;
}

bool is_irreducible(std::span<const Rule> rules, const Term& t) {
  Position at;
  return !outermost_redex(rules, t, at);
}

std::string to_string(const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::leftmost_innermost:
      return "innermost";
    case Strategy::Kind::leftmost_outermost:
      return "outermost";
    case Strategy::Kind::random:
      return "random(" + std::to_string(s.seed) + ")";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name, std::uint64_t seed) {
  if (name == "innermost" || name == "leftmost-innermost") return Strategy::innermost();
  if (name == "outermost" || name == "leftmost-outermost") return Strategy::outermost();
  if (name == "random") return Strategy::random(seed);
  throw Error("unknown strategy '" + std::string(name) + "'");
}

Normalized normalize_rules(std::span<const Rule> rules, const Term& t, Strategy strategy,
                           std::optional<std::size_t> max_steps) {
  Normalized out{t, {}};
  std::mt19937_64 rng(strategy.seed);
  for (;;) {
    std::optional<Redex> step;
    Position at;
    switch (strategy.kind) {
      case Strategy::Kind::leftmost_innermost:
        step = innermost_redex(rules, out.term, at);
        break;
      case Strategy::Kind::leftmost_outermost:
        step = outermost_redex(rules, out.term, at);
        break;
      case Strategy::Kind::random: {
        std::vector<Redex> all;
        for_each_step(rules, out.term, at,
                      [&](const Rule& r, const Position& p, Term c) { all.push_back({&r, p, std::move(c)}); });
        if (!all.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
          step = std::move(all[pick(rng)]);
        }
        break;
      }
    }
    if (!step) return out;
    if (max_steps && out.trace.size() >= *max_steps)
      throw StepBoundExceeded("step bound of " + std::to_string(*max_steps) + " exceeded");
    out.term = replace_at(out.term, step->position, step->contractum);
    out.trace.push_back({step->rule->label(), std::move(step->position)});
  }
}

Normalized normalize(const Trs& trs, const Term& t, Strategy strategy, std::optional<std::size_t> max_steps) {
  if (!trs.size_decreasing() && !max_steps)
    throw TerminationNotVerified("condition (*) fails and no step bound was given");
  return normalize_rules(trs.rules(), t, strategy, max_steps);
}

Term replay(std::span<const Rule> rules, const Term& t, std::span<const TraceStep> trace) {
  Term cur = t;
  for (const TraceStep& s : trace) {
    auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.label() == s.label; });
    if (it == rules.end()) throw Error("trace names unknown rule " + s.label);
    auto sigma = match(it->lhs(), subterm_at(cur, s.position));
    if (!sigma) throw Error("rule " + s.label + " does not apply at " + s.position.to_string());
    cur = replace_at(cur, s.position, sigma->apply(it->rhs()));
  }
  return cur;
}

namespace {

using TermSet = std::unordered_set<Term, TermHash>;

TermSet reduct_set(std::span<const Rule> rules, const Term& t, std::size_t cap) {
  TermSet seen{t};
  std::deque<Term> queue{t};
  while (!queue.empty()) {
    Term cur = std::move(queue.front());
    queue.pop_front();
    for (Term& next : successors(rules, cur)) {
      if (!seen.insert(next).second) continue;
      if (seen.size() > cap)
        throw CapExceeded("reduct graph of " + to_string(t) + " exceeds " + std::to_string(cap) + " nodes");
      queue.push_back(std::move(next));
    }
  }
  return seen;
}

}  // namespace

std::vector<Term> reducts(std::span<const Rule> rules, const Term& t, std::size_t cap) {
  TermSet set = reduct_set(rules, t, cap);
  std::vector<Term> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> reducts(const Trs& trs, const Term& t, std::size_t cap) { return reducts(trs.rules(), t, cap); }

JoinResult joinable(std::span<const Rule> rules, const Term& a, const Term& b, std::size_t cap) {
  TermSet ra = reduct_set(rules, a, cap);
  TermSet rb = reduct_set(rules, b, cap);
  std::optional<Term> best;
  for (const Term& x : rb)
    if (ra.contains(x) && (!best || x < *best)) best = x;
  return {best.has_value(), best};
}

JoinResult joinable(const Trs& trs, const Term& a, const Term& b, std::size_t cap) {
  return joinable(trs.rules(), a, b, cap);
}

}  // namespace nqrw
