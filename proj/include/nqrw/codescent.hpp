#pragma once

#include <optional>
#include <vector>

#include "nqrw/algebra.hpp"

namespace nqrw {

struct CepWitness {
  Partition source;
  /// Least congruence on the target containing the image of `source`.
  Partition generated;
  /// `generated` pulled back to the source.
  Partition restricted;
  bool extends = false;
};

struct CepReport {
  Embedding embedding;
  Scope scope = Scope::full;
  bool verdict = true;
  /// One entry per congruence on the source, in restricted-growth order.
  std::vector<CepWitness> witnesses;
  /// Index into witnesses of the first congruence that does not extend.
  std::optional<std::size_t> failing;
};

/// Congruence extension property of a monomorphism, decided by least extensions:
/// R extends iff the congruence generated by its image restricts back to R.
/// Throws InvalidEmbedding, or CarrierTooLarge when the source exceeds `bound`.
CepReport check_cep(const Embedding& emb, Scope scope, Exec exec = Exec::parallel,
                    std::size_t bound = kDefaultCongruenceBound);

struct CodescentVerdict {
  bool effective = false;
  CepReport report;
};

/// For monomorphisms of n-quasigroups and n-loops, effective codescent is
/// exactly the CEP for congruences of the full signature.
CodescentVerdict is_effective_codescent(const Embedding& emb, Exec exec = Exec::parallel,
                                        std::size_t bound = kDefaultCongruenceBound);

/// Integer partitions of m, each in non-increasing order, in reverse lexicographic order.
std::vector<std::vector<std::size_t>> cycle_types(std::size_t m);
/// The 1-quasigroup on {0..m-1} whose f has the given cycle type (cycles laid out consecutively).
FiniteAlgebra permutation_algebra(std::span<const std::size_t> cycle_type);

struct Prop36Counterexample {
  std::vector<std::size_t> cycle_type;
  Partition congruence;
};

struct Prop36Report {
  bool ok = true;
  std::size_t cycle_types = 0;
  std::size_t f_congruences = 0;
  std::optional<Prop36Counterexample> counterexample;
};

/// Checks that every f-congruence of every finite 1-quasigroup of order <=
/// max_order is a congruence for f and g1 as well. max_order must be in 1..7.
Prop36Report verify_prop_3_6(std::size_t max_order, Exec exec = Exec::parallel);

/// All Latin squares of the given order, as binary operation tables, in
/// lexicographic order of their row-major entries.
std::vector<OpTable> latin_squares(std::size_t order);

struct CepSearchResult {
  std::size_t max_order = 0;
  std::vector<std::size_t> squares_per_order;
  std::size_t embeddings_examined = 0;
  /// Inclusion of a proper subquasigroup that fails the CEP, if one exists.
  std::optional<Embedding> failing;
};

/// Searches binary quasigroups of order <= max_order and all their proper
/// subquasigroups for an inclusion without the CEP in the given scope. Stops
/// at the first order that yields one.
CepSearchResult search_cep_failure(std::size_t max_order, Scope scope = Scope::full, Exec exec = Exec::parallel);

}  // namespace nqrw
