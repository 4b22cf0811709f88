#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nqrw/exec.hpp"
#include "nqrw/term.hpp"
#include "nqrw/variety.hpp"

namespace nqrw {

using Element = std::uint32_t;

/// Total n-ary operation on {0..m-1}, stored row-major (first argument most significant).
class OpTable {
 public:
  OpTable() = default;
  OpTable(std::size_t order, int arity);

  std::size_t order() const { return order_; }
  int arity() const { return arity_; }
  std::size_t tuples() const { return values_.size(); }

  Element operator()(std::span<const Element> args) const { return values_[index(args)]; }
  Element at(std::size_t flat) const { return values_[flat]; }
  void set(std::span<const Element> args, Element v) { values_[index(args)] = v; }
  void set_flat(std::size_t flat, Element v) { values_[flat] = v; }

  std::size_t index(std::span<const Element> args) const;
  /// Inverse of index(): the tuple stored at a flat offset.
  void decode(std::size_t flat, std::span<Element> args) const;
  /// Flat offset of the tuple obtained by setting slot (0-based) to v.
  std::size_t with_slot(std::size_t flat, int slot, Element v) const;

  bool operator==(const OpTable&) const = default;

 private:
  std::size_t order_ = 0;
  int arity_ = 0;
  std::vector<std::size_t> stride_;
  std::vector<Element> values_;
};

/// Which operations a congruence must respect: f alone, or f and every g_i.
enum class Scope { f_only, full };
std::string to_string(Scope s);
Scope parse_scope(std::string_view s);

/// Finite n-quasigroup or n-loop given by operation tables over named elements.
///
/// Operation 0 is f, operation i (1..n) is g_i. Tables index elements by their
/// position in `carrier`.
struct FiniteAlgebra {
  std::string name;
  int n = 1;
  VarietyKind kind = VarietyKind::quasigroup;
  std::vector<std::string> carrier;
  OpTable f;
  std::vector<OpTable> g;
  std::optional<Element> identity;

  std::size_t order() const { return carrier.size(); }
  const OpTable& op(std::size_t index) const { return index == 0 ? f : g[index - 1]; }
  std::size_t op_count(Scope scope) const { return scope == Scope::f_only ? 1 : 1 + g.size(); }
  Element element(std::string_view element_name) const;
};

/// f is not the operation of an n-quasigroup (some equation has zero or two solutions).
class NotAQuasigroup : public Error {
 public:
  using Error::Error;
};

/// g_i(a) = the unique b with f(a_1..a_{i-1}, b, a_{i+1}..a_n) = a_i.
std::vector<OpTable> derive_divisions(int n, std::size_t order, const OpTable& f);

struct Violation {
  std::string axiom;
  std::vector<Element> tuple;
  std::string detail;
};

/// First violated axiom: unique-solution, f-division, division-f, unit.
std::optional<Violation> validate(const FiniteAlgebra& alg);

/// Element e with f(e..e, x, e..e) = x in every slot, if any.
std::optional<Element> find_identity(const FiniteAlgebra& alg);

/// Builds a validated algebra from f, deriving g and (for loops, when not
/// given) the identity. Throws NotAQuasigroup or Error on violation.
FiniteAlgebra make_algebra(std::string name, VarietyKind kind, int n, std::vector<std::string> carrier, OpTable f,
                           std::optional<Element> identity = std::nullopt);
FiniteAlgebra make_algebra(std::string name, VarietyKind kind, int n, std::vector<std::string> carrier,
                           const std::function<Element(std::span<const Element>)>& f,
                           std::optional<Element> identity = std::nullopt);

/// Set partition in restricted-growth form: block[a] is the index of a's block,
/// blocks numbered by first occurrence.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::uint32_t> labels);

  static Partition identity(std::size_t order);
  static Partition full(std::size_t order);

  std::size_t order() const { return block_.size(); }
  std::uint32_t block(Element a) const { return block_[a]; }
  std::size_t block_count() const;
  bool related(Element a, Element b) const { return block_[a] == block_[b]; }
  std::vector<std::vector<Element>> blocks() const;
  const std::vector<std::uint32_t>& labels() const { return block_; }

  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<std::uint32_t> block_;
};

std::string to_string(const Partition& p, const std::vector<std::string>& names);

/// Every partition of {0..order-1} in lexicographic restricted-growth order.
std::vector<Partition> all_partitions(std::size_t order);

bool is_congruence(const FiniteAlgebra& alg, const Partition& p, Scope scope);

class CarrierTooLarge : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultCongruenceBound = 8;

/// All congruences for the scope, in restricted-growth order.
std::vector<Partition> enumerate_congruences(const FiniteAlgebra& alg, Scope scope, Exec exec = Exec::parallel,
                                             std::size_t bound = kDefaultCongruenceBound);

/// Least congruence containing the seed pairs (closure under equivalence and
/// one-slot compatibility, to fixpoint).
Partition generated_congruence(const FiniteAlgebra& alg, std::span<const std::pair<Element, Element>> seed, Scope scope);

/// Injective homomorphism source -> target.
struct Embedding {
  FiniteAlgebra source;
  FiniteAlgebra target;
  std::vector<Element> map;
};

class InvalidEmbedding : public Error {
 public:
  using Error::Error;
};

std::optional<Violation> validate_embedding(const Embedding& emb);
Embedding identity_embedding(const FiniteAlgebra& alg);

/// Pull-back of a congruence on the target along the embedding.
Partition restrict(const Partition& on_target, const Embedding& emb);

/// Subsets closed under f and every g_i (as sorted element lists), excluding the empty set.
std::vector<std::vector<Element>> subalgebras(const FiniteAlgebra& alg);
/// The subalgebra on `elements` (which must be closed) and its inclusion.
Embedding inclusion(const FiniteAlgebra& alg, std::span<const Element> elements, std::string name = {});

}  // namespace nqrw
