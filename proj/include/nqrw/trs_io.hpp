#pragma once

#include <string>
#include <string_view>

#include "nqrw/rewrite.hpp"

namespace nqrw {

/// Reads the line-oriented TRS format:
///
///   # comment
///   sig f/2 g1/2 g2/2 e/0
///   rule LABEL: LHS -> RHS
///
/// The `sig` line is the first non-comment line and occurs once. LF or CRLF.
/// Throws ParseError with a line number.
Trs parse_trs(std::string_view text);
Trs load_trs(const std::string& path);

std::string format_rule(const Rule& r);
/// Emits the same format; `comment` lines (if any) are written first, prefixed by "# ".
std::string format_trs(const Trs& trs, std::string_view comment = {});

}  // namespace nqrw
