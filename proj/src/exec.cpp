#include "nqrw/exec.hpp"

#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nqrw {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::optional<std::size_t> first_failure(std::size_t count, const std::function<bool(std::size_t)>& ok, Exec exec) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i)
      if (!ok(i)) return i;
    return std::nullopt;
  }
  // 0 = ok, 1 = failed, 2 = threw
  std::vector<char> state(count, 0);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      state[i] = ok(static_cast<std::size_t>(i)) ? 0 : 1;
    } catch (...) {
      state[i] = 2;
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (state[i] == 2) std::rethrow_exception(errors[i]);
    if (state[i] == 1) return i;
  }
  return std::nullopt;
}

}  // namespace nqrw
