#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nqrw/exec.hpp"
#include "nqrw/rewrite.hpp"

namespace nqrw {

/// Overlap of rule2 (renamed apart) into rule1's lhs at `position`.
///
/// peak rewrites to `left` by rule1 at the root and to `right` by rule2 at
/// `position`. Variables are canonically renamed v1, v2, ... in first-occurrence
/// order over (peak, left, right).
struct CriticalPair {
  Term left;
  Term right;
  Term peak;
  std::string rule1;
  std::string rule2;
  std::size_t rule1_index = 0;
  std::size_t rule2_index = 0;
  Position position;
  /// Domain: rule1's variables and rule2's renamed variables. Range in canonical names.
  Substitution mgu;
  /// left and right coincide syntactically (e.g. a root self-overlap).
  bool trivial = false;
};

/// All critical pairs, including overlaps of a rule with its own renamed copy,
/// ordered by (rule1, rule2, position).
std::vector<CriticalPair> critical_pairs(std::span<const Rule> rules);
inline std::vector<CriticalPair> critical_pairs(const Trs& trs) { return critical_pairs(trs.rules()); }

enum class Verdict { confluent, not_confluent, termination_not_verified };
std::string to_string(Verdict v);

struct ConfluenceOptions {
  std::size_t cap = kDefaultReductCap;
  Exec exec = Exec::parallel;
};

struct ConfluenceReport {
  Verdict verdict = Verdict::termination_not_verified;
  std::vector<CriticalPair> pairs;
  /// Parallel to `pairs`; empty when termination was not verified.
  std::vector<JoinResult> joins;
  /// First non-joinable pair in canonical order.
  std::optional<CriticalPair> witness;
};

/// Decides confluence of a terminating system by joinability of all critical
/// pairs. Termination is established by condition (*); without it the verdict
/// is termination_not_verified.
ConfluenceReport check_confluence(const Trs& trs, const ConfluenceOptions& opts = {});

/// Joinability of each pair; the data-parallel kernel behind check_confluence.
std::vector<JoinResult> join_pairs(std::span<const Rule> rules, std::span<const CriticalPair> pairs, std::size_t cap,
                                   Exec exec);

struct RuleConditions {
  std::string label;
  bool occurrence = true;  // (*) no variable occurs more often on the right
  bool size = true;        // (*) size(lhs) > size(rhs)
  bool var_closed = true;  // (***) every non-variable, non-constant lhs subterm has all lhs variables
  bool star() const { return occurrence && size; }
};

enum class Star2 { holds, undetermined };

struct ConditionsReport {
  std::vector<RuleConditions> rules;
  Star2 star2 = Star2::holds;
  std::size_t constants = 0;

  bool star_holds() const;
  bool star3_holds() const;
};

ConditionsReport check_conditions(const Trs& trs);

struct AdoptedRule {
  Rule rule;
  CriticalPair source;
  std::size_t round;
};

enum class CompletionStatus { completed, unorientable, max_rounds_exceeded, termination_not_verified };
std::string to_string(CompletionStatus s);

struct CompletionResult {
  CompletionStatus status = CompletionStatus::completed;
  Trs trs;
  /// Rounds that adopted at least one rule.
  std::size_t rounds = 0;
  std::vector<AdoptedRule> adopted;
  /// For unorientable: the offending pair after normalizing both sides.
  std::optional<CriticalPair> failing;
  std::optional<std::pair<Term, Term>> unorientable;
};

/// Orients non-joinable critical pairs (normalized, larger size to smaller)
/// into new rules until the system is confluent or max_rounds is reached.
CompletionResult complete(const Trs& trs, std::size_t max_rounds, const ConfluenceOptions& opts = {});

}  // namespace nqrw
