#pragma once

#include <optional>
#include <span>

#include "nqrw/term.hpp"

namespace nqrw {

/// One-sided matching: a substitution sigma with sigma(pattern) == subject.
/// Variables of the subject are treated as constants.
std::optional<Substitution> match(const Term& pattern, const Term& subject);

/// Syntactic unification with occurs check (Robinson).
///
/// On success the result is an idempotent most general unifier whose domain is
/// contained in Var(s, t). No unifier (symbol clash, occurs-check failure) is
/// reported as nullopt. Element leaves behave as distinct constants.
std::optional<Substitution> unify(const Term& s, const Term& t);

/// Injective variable renaming of `second` away from the variables of `first`.
///
/// Only clashing variables are renamed; fresh names are v1, v2, ... skipping any
/// name already used on either side. Deterministic given the inputs.
Substitution rename_apart(std::span<const Term> first, std::span<const Term> second);

/// Renames the variables of the given terms to v1, v2, ... in left-to-right
/// first-occurrence order across the sequence. Used for canonical reports.
Substitution canonical_renaming(std::span<const Term> terms, std::string_view prefix = "v");

/// True when a and b are equal up to an injective variable renaming.
bool variant_of(std::span<const Term> a, std::span<const Term> b);

}  // namespace nqrw
