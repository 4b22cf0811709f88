#pragma once

#include <string>

#include "nqrw/algebra.hpp"
#include "nqrw/syntax.hpp"
#include "nqrw/variety.hpp"

#ifndef NQRW_FIXTURES
#error "NQRW_FIXTURES must point at tests/fixtures"
#endif

namespace support {

inline std::string fixture(const std::string& name) { return std::string(NQRW_FIXTURES) + "/" + name; }

/// Z_m with f = +, named "0".."m-1".
inline nqrw::FiniteAlgebra cyclic(const std::string& name, std::size_t m,
                                  nqrw::VarietyKind kind = nqrw::VarietyKind::loop, int n = 2) {
  std::vector<std::string> carrier;
  for (std::size_t a = 0; a < m; ++a) carrier.push_back(std::to_string(a));
  return nqrw::make_algebra(name, kind, n, carrier, [m](std::span<const nqrw::Element> a) {
    std::size_t s = 0;
    for (auto x : a) s += x;
    return static_cast<nqrw::Element>(s % m);
  });
}

/// Parses over f, g1..gn (and e for loops).
inline nqrw::Term term(const std::string& text, int n = 2, nqrw::VarietyKind kind = nqrw::VarietyKind::loop) {
  return nqrw::parse_term(text, nqrw::variety_signature(kind, n));
}

}  // namespace support
