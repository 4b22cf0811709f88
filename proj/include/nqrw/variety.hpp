#pragma once

#include <span>
#include <string>
#include <vector>

#include "nqrw/rewrite.hpp"

namespace nqrw {

enum class VarietyKind { quasigroup, loop };

std::string to_string(VarietyKind k);
VarietyKind parse_variety_kind(std::string_view s);

struct VarietySpec {
  VarietyKind kind = VarietyKind::quasigroup;
  int n = 1;
  bool complete = false;
};

/// Families of oriented identities presenting n-quasigroups and n-loops.
/// Rule labels carry the customary identity numbers, e.g. `2.7[i=1,j=3]`.
enum class Family {
  f_unit,             // 2.2   f(e..e, x, e..e) = x                     (loops)
  f_division,         // 2.3   f(x_1^{i-1}, g_i(x_1^n), x_{i+1}^n) = x_i
  division_f,         // 2.4   g_i(x_1^{i-1}, f(x_1^n), x_{i+1}^n) = x_i
  cross_lower,        // 2.7   i < j
  cross_upper,        // 2.8   i > j
  division_unit,      // 2.9   g_i(e..e, x, e..e) = x                   (loops)
  diagonal_lower,     // 2.10  i < j, = e                               (loops)
  diagonal_upper,     // 2.11  i > j, = e                               (loops)
};

std::string label_prefix(Family f);

/// Symbols f, g1..gn (all n-ary), plus the constant e for loops.
Signature variety_signature(VarietyKind kind, int n);

/// The rules of one family, in index order.
std::vector<Rule> family_rules(Family family, int n);

/// A system over the variety's signature made of the given families.
Trs make_trs(VarietyKind kind, int n, std::span<const Family> families);

/// Base: (f_division, division_f) plus f_unit for loops. Complete adds the
/// cross families, and for loops division_unit and the diagonal families.
std::vector<Family> families_for(const VarietySpec& spec);
Trs generate_trs(const VarietySpec& spec);

/// Index outside 1..n in an argument pattern.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Builds argument sequences from the x_i^j / e^m abbreviations.
///
///   ArgList(3).xs(1, 0).put(t).xs(2, 3).apply("f")   // f(t, x2, x3)
///
/// xs(i, j) is empty when i > j; es(0) is empty.
class ArgList {
 public:
  explicit ArgList(int n, std::string prefix = "x") : n_(n), prefix_(std::move(prefix)) {}

  ArgList& xs(int from, int to);
  ArgList& es(int count);
  ArgList& put(Term t);

  const std::vector<Term>& terms() const { return args_; }
  /// symbol(args...); the sequence must have exactly n entries.
  Term apply(const std::string& symbol) const;

 private:
  int n_;
  std::string prefix_;
  std::vector<Term> args_;
};

}  // namespace nqrw
