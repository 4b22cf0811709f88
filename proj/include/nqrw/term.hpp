#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nqrw {

/// Thrown for malformed inputs and violated preconditions (caller bugs).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation symbols with arities. Arity-0 symbols are constants.
class Signature {
 public:
  Signature() = default;

  void add(const std::string& symbol, std::size_t arity);
  bool contains(std::string_view symbol) const;
  std::size_t arity(std::string_view symbol) const;

  /// Symbols in declaration order.
  const std::vector<std::pair<std::string, std::size_t>>& symbols() const { return order_; }
  std::vector<std::string> constants() const;

  bool operator==(const Signature&) const = default;

 private:
  std::map<std::string, std::size_t, std::less<>> arity_;
  std::vector<std::pair<std::string, std::size_t>> order_;
};

enum class TermKind : std::uint8_t { var, elem, app };

/// Immutable first-order term. Copies share structure.
///
/// A term is a variable, an algebra element (only inside amalgam terms), or an
/// application of a symbol to arguments. Structural hash and size are cached.
class Term {
 public:
  static Term var(std::string name);
  static Term elem(std::string name);
  static Term app(std::string symbol, std::vector<Term> args = {});

  TermKind kind() const { return node_->kind; }
  bool is_var() const { return kind() == TermKind::var; }
  bool is_elem() const { return kind() == TermKind::elem; }
  bool is_app() const { return kind() == TermKind::app; }

  /// Variable name, element name, or head symbol.
  const std::string& name() const { return node_->name; }
  std::span<const Term> args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }

  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  /// Total order: size, then kind, then name, then arguments left to right.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    std::string name;
    std::vector<Term> args;
    std::size_t size;
    std::size_t depth;
    std::size_t hash;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(TermKind kind, std::string name, std::vector<Term> args);

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// Path of 1-based child indices; empty is the root.
struct Position {
  std::vector<std::uint32_t> path;

  bool is_root() const { return path.empty(); }
  Position child(std::uint32_t index) const;
  std::string to_string() const;

  auto operator<=>(const Position&) const = default;
};

/// Thrown when a position does not address a node of the term.
class InvalidPosition : public Error {
 public:
  using Error::Error;
};

const Term& subterm_at(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, const Term& s);

/// All positions of t in pre-order (root first, children left to right).
std::vector<Position> positions(const Term& t);

std::set<std::string> variables(const Term& t);
void collect_variables(const Term& t, std::set<std::string>& out);
/// Variables in left-to-right first-occurrence order.
void collect_variables_ordered(const Term& t, std::vector<std::string>& out);
std::size_t count_occurrences(const Term& t, std::string_view var);
bool contains_elem(const Term& t);

/// Checks every application against the signature; throws Error on mismatch.
void check_well_formed(const Term& t, const Signature& sig);

/// Finite mapping from variable names to terms. Identity bindings are dropped.
class Substitution {
 public:
  Substitution() = default;

  void bind(const std::string& var, Term value);
  const Term* find(std::string_view var) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term, std::less<>>& bindings() const { return bindings_; }

  /// Homomorphic extension to terms; elements and unbound variables are fixed.
  Term apply(const Term& t) const;

  bool operator==(const Substitution&) const = default;

 private:
  std::map<std::string, Term, std::less<>> bindings_;
};

inline Term apply_substitution(const Substitution& sigma, const Term& t) { return sigma.apply(t); }

}  // namespace nqrw
