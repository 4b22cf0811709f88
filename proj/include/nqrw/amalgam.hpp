#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nqrw/algebra.hpp"
#include "nqrw/algebra_io.hpp"
#include "nqrw/rewrite.hpp"

namespace nqrw {

class KindMismatch : public Error {
 public:
  using Error::Error;
};
class UnknownElement : public Error {
 public:
  using Error::Error;
};

/// Factors A_1..A_k over a common base B, renamed so that A_i and A_j share
/// exactly the images of B. Base elements keep their names; an element private
/// to factor i gets the suffix "_i" (1-based).
struct AmalgamDiagram {
  VarietyKind kind = VarietyKind::quasigroup;
  int n = 1;
  FiniteAlgebra base;
  /// Factors with carriers already renamed to global names.
  std::vector<FiniteAlgebra> factors;
  /// Original carrier names of each factor, for `ALGEBRA.element` lookups.
  std::vector<std::vector<std::string>> original_names;
  /// base element -> factor element, per factor.
  std::vector<std::vector<Element>> embeddings;

  /// Global elements: base first, then the private elements factor by factor.
  std::vector<std::string> elements;
  /// Bit i set when the element lies in factor i.
  std::vector<std::uint64_t> membership;
  /// [factor][global] -> local element, or kNone.
  std::vector<std::vector<Element>> local;
  /// Complete confluent system of the variety; the constant e is already
  /// replaced by the element leaf of B's identity.
  std::vector<Rule> rules;
  /// f and g_1..g_n (no constant).
  Signature signature;
  std::optional<Element> identity;

  static constexpr Element kNone = UINT32_MAX;

  Element element_index(std::string_view global_name) const;
  bool has_element(std::string_view global_name) const { return index_.contains(std::string(global_name)); }
  /// 0 for f, i for g_i.
  std::size_t op_index(std::string_view symbol) const;

 private:
  friend AmalgamDiagram build_amalgam(FiniteAlgebra, std::vector<FiniteAlgebra>, std::vector<std::vector<Element>>);
  std::unordered_map<std::string, Element> index_;
};

/// Throws KindMismatch, InvalidEmbedding, or Error (name clashes, more than 64 factors).
AmalgamDiagram build_amalgam(FiniteAlgebra base, std::vector<FiniteAlgebra> factors,
                             std::vector<std::vector<Element>> embeddings);

/// {"base", "factors": [...], "embeddings": [{base-name: factor-name}, ...]};
/// algebras inline or as paths relative to `base_dir`.
AmalgamDiagram diagram_from_json(const Json& j, const std::filesystem::path& base_dir = {});
AmalgamDiagram load_diagram(const std::filesystem::path& path);

/// Leaves are `ALGEBRA.element` (factor or base name) or a global element name;
/// `e` denotes B's identity in loop diagrams. Throws UnknownElement or ParseError.
Term parse_amalgam_term(const AmalgamDiagram& d, std::string_view text);

/// Replaces the constant e by B's identity leaf and checks every leaf is known.
Term ingest(const AmalgamDiagram& d, const Term& t);

/// Bitmask of factors containing every leaf of t (0 when mixed).
std::uint64_t factor_mask(const AmalgamDiagram& d, const Term& t);
/// Value of a pure term in the given factor, as a global element.
Element evaluate_in(const AmalgamDiagram& d, std::size_t factor, const Term& t);

struct AmalgamStep {
  Term result;
  /// Rule label, or "collapse:<factor name>".
  std::string label;
  Position position;
};

/// Every one-step ⇝-successor, positions in pre-order, collapse before rules at each position.
std::vector<AmalgamStep> amalgam_steps(const AmalgamDiagram& d, const Term& t);

/// ⇝-irreducible form of t. Terminates: both kinds of step shrink the term.
Normalized normalize_element(const AmalgamDiagram& d, const Term& t, Strategy strategy = Strategy::innermost());

/// Normal form of symbol(args...).
Term apply_op(const AmalgamDiagram& d, std::string_view symbol, std::span<const Term> args);

/// All ⇝-irreducible terms reachable from t, sorted.
std::vector<Term> irreducible_reducts(const AmalgamDiagram& d, const Term& t, std::size_t cap = kDefaultReductCap);

/// Every term over the diagram's elements with size <= max_size, by size then term order.
std::vector<Term> term_universe(const AmalgamDiagram& d, std::size_t max_size);

/// Random term of depth <= max_depth (leaves have depth 0).
Term random_term(const AmalgamDiagram& d, std::size_t max_depth, std::uint64_t seed);

struct UnfCounterexample {
  Term term;
  std::string reason;
  std::vector<Term> normal_forms;
};

struct UnfReport {
  bool ok = true;
  std::size_t exhaustive_terms = 0;
  std::size_t random_terms = 0;
  std::optional<UnfCounterexample> counterexample;
};

struct UnfOptions {
  /// Exhaustive reduct-graph check for every term of size <= max_size.
  std::size_t max_size = 5;
  std::size_t trials = 1000;
  std::size_t random_depth = 4;
  std::uint64_t seed = 1;
  std::size_t cap = kDefaultReductCap;
  Exec exec = Exec::parallel;
};

UnfReport check_unique_normal_forms(const AmalgamDiagram& d, const UnfOptions& opts = {});

struct StrongAmalgamationReport {
  bool ok = true;
  std::vector<Term> image1, image2, base_image, intersection;
  std::string failure;
};

/// The diagram must have exactly two factors.
StrongAmalgamationReport check_strong_amalgamation(const AmalgamDiagram& d);
StrongAmalgamationReport check_strong_amalgamation(const FiniteAlgebra& base, const FiniteAlgebra& a1,
                                                   const FiniteAlgebra& a2, std::span<const Element> m1,
                                                   std::span<const Element> m2);

}  // namespace nqrw
