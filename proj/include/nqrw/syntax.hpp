#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "nqrw/term.hpp"

namespace nqrw {

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Maps an identifier that is not a signature symbol to a leaf term.
using LeafResolver = std::function<Term(std::string_view)>;

/// Parses `name`, `sym`, `sym(t1,...,tk)`. Whitespace-insensitive; `#` starts a
/// comment running to end of line. Identifiers not declared in the signature
/// become variables unless a resolver is given.
Term parse_term(std::string_view text, const Signature& sig, const LeafResolver& leaf = {});

bool is_identifier_char(char c);

std::string to_string(const Term& t);

}  // namespace nqrw
