#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nqrw/term.hpp"

namespace nqrw {

/// Oriented identity lhs -> rhs.
///
/// Construction enforces that lhs is not a variable and Var(rhs) is a subset of
/// Var(lhs). Element leaves are tolerated here (amalgam rule instances); a Trs
/// rejects them.
class Rule {
 public:
  Rule(Term lhs, Term rhs, std::string label);

  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }
  const std::string& label() const { return label_; }

  bool operator==(const Rule&) const = default;

 private:
  Term lhs_;
  Term rhs_;
  std::string label_;
};

/// Term rewriting system: a signature and well-formed rules with unique labels.
class Trs {
 public:
  Trs(Signature sig, std::vector<Rule> rules);

  const Signature& signature() const { return sig_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* find(std::string_view label) const;

  /// Condition (*) holds for every rule: strict size decrease and no variable
  /// occurring more often on the right than on the left. Guarantees termination.
  bool size_decreasing() const { return size_decreasing_; }

 private:
  Signature sig_;
  std::vector<Rule> rules_;
  bool size_decreasing_ = true;
};

/// Condition (*) for a single rule.
bool occurrence_condition(const Rule& r);
bool size_condition(const Rule& r);

struct RewriteStep {
  Term result;
  std::string label;
  Position position;
};

/// Every one-step successor of t, positions in pre-order and rules in order.
std::vector<RewriteStep> rewrite_steps(std::span<const Rule> rules, const Term& t);
inline std::vector<RewriteStep> rewrite_steps(const Trs& trs, const Term& t) { return rewrite_steps(trs.rules(), t); }

/// Successor terms only (no provenance); the hot path of reduct exploration.
std::vector<Term> successors(std::span<const Rule> rules, const Term& t);

bool is_irreducible(std::span<const Rule> rules, const Term& t);

struct Strategy {
  enum class Kind { leftmost_innermost, leftmost_outermost, random };
  Kind kind = Kind::leftmost_innermost;
  std::uint64_t seed = 0;

  static Strategy innermost() { return {Kind::leftmost_innermost, 0}; }
  static Strategy outermost() { return {Kind::leftmost_outermost, 0}; }
  static Strategy random(std::uint64_t seed) { return {Kind::random, seed}; }
};

std::string to_string(const Strategy& s);
/// Accepts "innermost", "outermost", "random" (seed supplied separately).
Strategy parse_strategy(std::string_view name, std::uint64_t seed = 0);

struct TraceStep {
  std::string label;
  Position position;
};

struct Normalized {
  Term term;
  std::vector<TraceStep> trace;
};

/// Condition (*) fails and no step bound was supplied.
class TerminationNotVerified : public Error {
 public:
  using Error::Error;
};

class StepBoundExceeded : public Error {
 public:
  using Error::Error;
};

/// The reduct graph grew past its node cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultReductCap = 100'000;

/// Rewrites t until irreducible. Without a step bound the system must satisfy
/// condition (*), otherwise TerminationNotVerified is thrown.
Normalized normalize(const Trs& trs, const Term& t, Strategy strategy = Strategy::innermost(),
                     std::optional<std::size_t> max_steps = std::nullopt);

/// Same, over a bare rule list whose termination the caller vouches for.
Normalized normalize_rules(std::span<const Rule> rules, const Term& t, Strategy strategy,
                           std::optional<std::size_t> max_steps = std::nullopt);

/// Replays a trace from t; throws Error if a step does not apply.
Term replay(std::span<const Rule> rules, const Term& t, std::span<const TraceStep> trace);

/// {t' | t ->* t'}, including t, sorted by the term order.
std::vector<Term> reducts(std::span<const Rule> rules, const Term& t, std::size_t cap = kDefaultReductCap);
std::vector<Term> reducts(const Trs& trs, const Term& t, std::size_t cap = kDefaultReductCap);

struct JoinResult {
  bool joinable = false;
  /// Size-minimal common reduct, ties broken by the term order.
  std::optional<Term> witness;
};

JoinResult joinable(std::span<const Rule> rules, const Term& a, const Term& b, std::size_t cap = kDefaultReductCap);
JoinResult joinable(const Trs& trs, const Term& a, const Term& b, std::size_t cap = kDefaultReductCap);

}  // namespace nqrw
