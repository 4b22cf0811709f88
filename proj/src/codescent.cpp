#include "nqrw/codescent.hpp"

#include <algorithm>
#include <numeric>

namespace nqrw {

namespace {

CepWitness extend(const Embedding& emb, const Partition& r, Scope scope) {
  std::vector<std::pair<Element, Element>> seed;
  for (const auto& block : r.blocks())
    for (std::size_t k = 1; k < block.size(); ++k) seed.emplace_back(emb.map[block[0]], emb.map[block[k]]);
  Partition generated = generated_congruence(emb.target, seed, scope);
  Partition restricted = restrict(generated, emb);
  bool extends = restricted == r;
  return {r, std::move(generated), std::move(restricted), extends};
}

}  // namespace

CepReport check_cep(const Embedding& emb, Scope scope, Exec exec, std::size_t bound) {
  if (auto v = validate_embedding(emb))
    throw InvalidEmbedding("not a monomorphism (" + v->axiom + (v->detail.empty() ? "" : ": " + v->detail) + ")");
  CepReport report{emb, scope, true, {}, std::nullopt};
  std::vector<Partition> source = enumerate_congruences(emb.source, scope, exec, bound);
  report.witnesses.resize(source.size());
  auto ok = [&](std::size_t k) {
    report.witnesses[k] = extend(emb, source[k], scope);
    return true;
  };
  first_failure(source.size(), ok, exec);
  for (std::size_t k = 0; k < source.size(); ++k) {
    if (!report.witnesses[k].extends) {
      report.verdict = false;
      report.failing = k;
      break;
    }
  }
  return report;
}

CodescentVerdict is_effective_codescent(const Embedding& emb, Exec exec, std::size_t bound) {
  CepReport report = check_cep(emb, Scope::full, exec, bound);
  bool effective = report.verdict;
  return {effective, std::move(report)};
}

std::vector<std::vector<std::size_t>> cycle_types(std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t left, std::size_t largest) {
    if (left == 0) {
      out.push_back(parts);
      return;
    }
    for (std::size_t p = std::min(left, largest); p >= 1; --p) {
      parts.push_back(p);
      rec(left - p, p);
      parts.pop_back();
    }
  };
  rec(m, m);
  return out;
}

FiniteAlgebra permutation_algebra(std::span<const std::size_t> cycle_type) {
  const std::size_t m = std::accumulate(cycle_type.begin(), cycle_type.end(), std::size_t{0});
  OpTable f(m, 1);
  Element start = 0;
  for (std::size_t len : cycle_type) {
    for (std::size_t k = 0; k < len; ++k) {
      Element a = start + static_cast<Element>(k);
      f.set_flat(a, start + static_cast<Element>((k + 1) % len));
    }
    start += static_cast<Element>(len);
  }
  std::vector<std::string> carrier;
  for (std::size_t a = 0; a < m; ++a) carrier.push_back(std::to_string(a));
  std::string name = "perm";
  for (std::size_t len : cycle_type) name += "_" + std::to_string(len);
  return make_algebra(std::move(name), VarietyKind::quasigroup, 1, std::move(carrier), std::move(f));
}

Prop36Report verify_prop_3_6(std::size_t max_order, Exec exec) {
  if (max_order < 1 || max_order > 7) throw Error("max_order must be between 1 and 7");
  std::vector<std::vector<std::size_t>> types;
  for (std::size_t m = 1; m <= max_order; ++m)
    for (auto& t : cycle_types(m)) types.push_back(std::move(t));

  std::vector<std::size_t> counts(types.size(), 0);
  std::vector<std::optional<Partition>> bad(types.size());
  auto ok = [&](std::size_t k) {
    FiniteAlgebra q = permutation_algebra(types[k]);
    // the outer loop is already parallel
    auto congruences = enumerate_congruences(q, Scope::f_only, Exec::serial, 7);
    counts[k] = congruences.size();
    for (const Partition& p : congruences) {
      if (!is_congruence(q, p, Scope::full)) {
        bad[k] = p;
        return false;
      }
    }
    return true;
  };
  auto failure = first_failure(types.size(), ok, exec);

  Prop36Report report;
  report.cycle_types = types.size();
  report.f_congruences = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (failure) {
    report.ok = false;
    report.counterexample = Prop36Counterexample{types[*failure], *bad[*failure]};
  }
  return report;
}

std::vector<OpTable> latin_squares(std::size_t order) {
  std::vector<OpTable> out;
  if (order == 0) return out;
  if (order > 16) throw CarrierTooLarge("latin square enumeration needs order <= 16");
  OpTable t(order, 2);
  std::vector<std::uint32_t> row_used(order, 0), col_used(order, 0);
  const std::size_t cells = order * order;
  std::function<void(std::size_t)> fill = [&](std::size_t cell) {
    if (cell == cells) {
      out.push_back(t);
      return;
    }
    std::size_t r = cell / order, c = cell % order;
    for (Element v = 0; v < order; ++v) {
      std::uint32_t bit = 1u << v;
      if ((row_used[r] & bit) || (col_used[c] & bit)) continue;
      row_used[r] |= bit;
      col_used[c] |= bit;
      t.set_flat(cell, v);
      fill(cell + 1);
      row_used[r] &= ~bit;
      col_used[c] &= ~bit;
    }
  };
  fill(0);
  return out;
}

CepSearchResult search_cep_failure(std::size_t max_order, Scope scope, Exec exec) {
  CepSearchResult result;
  result.max_order = max_order;
  for (std::size_t m = 1; m <= max_order; ++m) {
    std::vector<OpTable> squares = latin_squares(m);
    result.squares_per_order.push_back(squares.size());
    std::vector<std::string> carrier;
    for (std::size_t a = 0; a < m; ++a) carrier.push_back(std::to_string(a));

    std::vector<std::size_t> examined(squares.size(), 0);
    std::vector<std::optional<Embedding>> found(squares.size());
    auto ok = [&](std::size_t k) {
      FiniteAlgebra q = make_algebra("Q" + std::to_string(m) + "_" + std::to_string(k), VarietyKind::quasigroup, 2,
                                     carrier, squares[k]);
      for (const auto& sub : subalgebras(q)) {
        if (sub.size() == m) continue;
        Embedding emb = inclusion(q, sub, q.name + ".sub");
        ++examined[k];
        if (!check_cep(emb, scope, Exec::serial).verdict) {
          found[k] = std::move(emb);
          return false;
        }
      }
      return true;
    };
    auto failure = first_failure(squares.size(), ok, exec);
    std::size_t upto = failure ? *failure + 1 : squares.size();
    result.embeddings_examined += std::accumulate(examined.begin(), examined.begin() + upto, std::size_t{0});
    if (failure) {
      result.failing = std::move(found[*failure]);
      break;
    }
  }
  return result;
}

}  // namespace nqrw
