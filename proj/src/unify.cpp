#include "nqrw/unify.hpp"

#include <map>
#include <utility>

namespace nqrw {

namespace {

using Bindings = std::map<std::string, Term, std::less<>>;

bool match_rec(const Term& pattern, const Term& subject, Bindings& bound) {
  if (pattern.is_var()) {
    auto [it, inserted] = bound.try_emplace(pattern.name(), subject);
    return inserted || it->second == subject;
  }
  if (pattern.kind() != subject.kind() || pattern.name() != subject.name() || pattern.arity() != subject.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_rec(pattern.args()[i], subject.args()[i], bound)) return false;
  return true;
}

bool occurs(std::string_view var, const Term& t) {
  if (t.is_var()) return t.name() == var;
  for (const Term& a : t.args())
    if (occurs(var, a)) return true;
  return false;
}

// sigma := {var -> value} o sigma, extended with var -> value. Keeps sigma idempotent
// provided value is already sigma-normal and var does not occur in value.
void extend(Substitution& sigma, const std::string& var, const Term& value) {
  Substitution single;
  single.bind(var, value);
  Substitution next;
  for (const auto& [v, t] : sigma.bindings()) next.bind(v, single.apply(t));
  next.bind(var, value);
  sigma = std::move(next);
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Bindings bound;
  if (!match_rec(pattern, subject, bound)) return std::nullopt;
  Substitution sigma;
  for (auto& [v, t] : bound) sigma.bind(v, std::move(t));
  return sigma;
}

std::optional<Substitution> unify(const Term& s, const Term& t) {
  Substitution sigma;
  std::vector<std::pair<Term, Term>> work{{s, t}};
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = sigma.apply(a);
    b = sigma.apply(b);
    if (a == b) continue;
    if (!a.is_var() && b.is_var()) std::swap(a, b);
    if (a.is_var()) {
      if (occurs(a.name(), b)) return std::nullopt;
      extend(sigma, a.name(), b);
      continue;
    }
    if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return std::nullopt;
    // push in reverse so the leftmost argument pair is solved first
    for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return sigma;
}

Substitution rename_apart(std::span<const Term> first, std::span<const Term> second) {
  std::set<std::string> used_first;
  for (const Term& t : first) collect_variables(t, used_first);
  std::vector<std::string> second_vars;
  for (const Term& t : second) collect_variables_ordered(t, second_vars);

  std::set<std::string> taken = used_first;
  taken.insert(second_vars.begin(), second_vars.end());

  Substitution rho;
  std::size_t counter = 0;
  for (const std::string& v : second_vars) {
    if (!used_first.contains(v)) continue;
    std::string fresh;
    do {
      fresh = "v" + std::to_string(++counter);
    } while (taken.contains(fresh));
    taken.insert(fresh);
    rho.bind(v, Term::var(fresh));
  }
  return rho;
}

Substitution canonical_renaming(std::span<const Term> terms, std::string_view prefix) {
  std::vector<std::string> order;
  for (const Term& t : terms) collect_variables_ordered(t, order);
  Substitution rho;
  for (std::size_t i = 0; i < order.size(); ++i)
    rho.bind(order[i], Term::var(std::string(prefix) + std::to_string(i + 1)));
  return rho;
}

bool variant_of(std::span<const Term> a, std::span<const Term> b) {
  if (a.size() != b.size()) return false;
  Substitution ra = canonical_renaming(a);
  Substitution rb = canonical_renaming(b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(ra.apply(a[i]) == rb.apply(b[i]))) return false;
  return true;
}

}  // namespace nqrw
