#include "nqrw/variety.hpp"

namespace nqrw {

std::string to_string(VarietyKind k) { return k == VarietyKind::quasigroup ? "quasigroup" : "loop"; }

VarietyKind parse_variety_kind(std::string_view s) {
  if (s == "quasigroup") return VarietyKind::quasigroup;
  if (s == "loop") return VarietyKind::loop;
  throw Error("unknown variety kind '" + std::string(s) + "'");
}

ArgList& ArgList::xs(int from, int to) {
  if (from > to) return *this;
  if (from < 1 || to > n_)
    throw IndexOutOfRange("x_" + std::to_string(from) + "^" + std::to_string(to) + " outside 1.." + std::to_string(n_));
  for (int k = from; k <= to; ++k) args_.push_back(Term::var(prefix_ + std::to_string(k)));
  return *this;
}

ArgList& ArgList::es(int count) {
  if (count < 0) throw IndexOutOfRange("negative repetition count " + std::to_string(count));
  for (int k = 0; k < count; ++k) args_.push_back(Term::app("e"));
  return *this;
}

ArgList& ArgList::put(Term t) {
  args_.push_back(std::move(t));
  return *this;
}

Term ArgList::apply(const std::string& symbol) const {
  if (static_cast<int>(args_.size()) != n_)
    throw IndexOutOfRange(symbol + " built with " + std::to_string(args_.size()) + " arguments, expected " +
                          std::to_string(n_));
  return Term::app(symbol, args_);
}

std::string label_prefix(Family f) {
  switch (f) {
    case Family::f_unit:
      return "2.2";
    case Family::f_division:
      return "2.3";
    case Family::division_f:
      return "2.4";
    case Family::cross_lower:
      return "2.7";
    case Family::cross_upper:
      return "2.8";
    case Family::division_unit:
      return "2.9";
    case Family::diagonal_lower:
      return "2.10";
    case Family::diagonal_upper:
      return "2.11";
  }
  return "?";
}

Signature variety_signature(VarietyKind kind, int n) {
  if (n < 1) throw Error("arity n must be at least 1");
  Signature sig;
  sig.add("f", static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) sig.add("g" + std::to_string(i), static_cast<std::size_t>(n));
  if (kind == VarietyKind::loop) sig.add("e", 0);
  return sig;
}

namespace {

std::string g(int i) { return "g" + std::to_string(i); }
Term x(int i) { return Term::var("x" + std::to_string(i)); }

std::string label(Family f, int i) { return label_prefix(f) + "[i=" + std::to_string(i) + "]"; }
std::string label(Family f, int i, int j) {
  return label_prefix(f) + "[i=" + std::to_string(i) + ",j=" + std::to_string(j) + "]";
}

}  // namespace

std::vector<Rule> family_rules(Family family, int n) {
  if (n < 1) throw Error("arity n must be at least 1");
  std::vector<Rule> out;
  const Term var = Term::var("x");
  const Term e = Term::app("e");
  auto all_x = [n] { return ArgList(n).xs(1, n); };

  for (int i = 1; i <= n; ++i) {
    switch (family) {
      case Family::f_unit:
        out.emplace_back(ArgList(n).es(i - 1).put(var).es(n - i).apply("f"), var, label(family, i));
        break;
      case Family::f_division:
        out.emplace_back(ArgList(n).xs(1, i - 1).put(all_x().apply(g(i))).xs(i + 1, n).apply("f"), x(i),
                         label(family, i));
        break;
      case Family::division_f:
        out.emplace_back(ArgList(n).xs(1, i - 1).put(all_x().apply("f")).xs(i + 1, n).apply(g(i)), x(i),
                         label(family, i));
        break;
      case Family::cross_lower:
        for (int j = i + 1; j <= n; ++j)
          out.emplace_back(
              ArgList(n).xs(1, i - 1).put(x(j)).xs(i + 1, j - 1).put(all_x().apply(g(j))).xs(j + 1, n).apply(g(i)),
              x(i), label(family, i, j));
        break;
      case Family::cross_upper:
        for (int j = 1; j < i; ++j)
          out.emplace_back(
              ArgList(n).xs(1, j - 1).put(all_x().apply(g(j))).xs(j + 1, i - 1).put(x(j)).xs(i + 1, n).apply(g(i)),
              x(i), label(family, i, j));
        break;
      case Family::division_unit:
        out.emplace_back(ArgList(n).es(i - 1).put(var).es(n - i).apply(g(i)), var, label(family, i));
        break;
      case Family::diagonal_lower:
        for (int j = i + 1; j <= n; ++j)
          out.emplace_back(ArgList(n).es(i - 1).put(var).es(j - i - 1).put(var).es(n - j).apply(g(i)), e,
                           label(family, i, j));
        break;
      case Family::diagonal_upper:
        for (int j = 1; j < i; ++j)
          out.emplace_back(ArgList(n).es(j - 1).put(var).es(i - j - 1).put(var).es(n - i).apply(g(i)), e,
                           label(family, i, j));
        break;
    }
  }
  return out;
}

Trs make_trs(VarietyKind kind, int n, std::span<const Family> families) {
  std::vector<Rule> rules;
  for (Family f : families)
    for (Rule& r : family_rules(f, n)) rules.push_back(std::move(r));
  return Trs(variety_signature(kind, n), std::move(rules));
}

std::vector<Family> families_for(const VarietySpec& spec) {
  const bool loop = spec.kind == VarietyKind::loop;
  std::vector<Family> out;
  if (loop) out.push_back(Family::f_unit);
  out.push_back(Family::f_division);
  out.push_back(Family::division_f);
  if (spec.complete) {
    out.push_back(Family::cross_lower);
    out.push_back(Family::cross_upper);
    if (loop) {
      out.push_back(Family::division_unit);
      out.push_back(Family::diagonal_lower);
      out.push_back(Family::diagonal_upper);
    }
  }
  return out;
}

Trs generate_trs(const VarietySpec& spec) {
  if (spec.n < 1) throw Error("arity n must be at least 1");
  return make_trs(spec.kind, spec.n, families_for(spec));
}

}  // namespace nqrw
