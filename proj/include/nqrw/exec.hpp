#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace nqrw {

/// Selects the OpenMP kernel or the serial reference implementation.
/// Both produce identical, deterministically ordered results.
enum class Exec { serial, parallel };

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

/// Smallest i < count with !ok(i). The parallel kernel evaluates every index
/// and rethrows the exception of the smallest throwing index, so both modes
/// agree whenever ok is pure.
std::optional<std::size_t> first_failure(std::size_t count, const std::function<bool(std::size_t)>& ok, Exec exec);

}  // namespace nqrw
