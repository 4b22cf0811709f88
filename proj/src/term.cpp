#include "nqrw/term.hpp"

#include <algorithm>
#include <functional>

namespace nqrw {

void Signature::add(const std::string& symbol, std::size_t arity) {
  if (symbol.empty()) throw Error("empty symbol name");
  if (!arity_.emplace(symbol, arity).second) throw Error("duplicate symbol '" + symbol + "'");
  order_.emplace_back(symbol, arity);
}

bool Signature::contains(std::string_view symbol) const { return arity_.find(symbol) != arity_.end(); }

std::size_t Signature::arity(std::string_view symbol) const {
  auto it = arity_.find(symbol);
  if (it == arity_.end()) throw Error("unknown symbol '" + std::string(symbol) + "'");
  return it->second;
}

std::vector<std::string> Signature::constants() const {
  std::vector<std::string> out;
  for (const auto& [name, arity] : order_)
    if (arity == 0) out.push_back(name);
  return out;
}

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::make(TermKind kind, std::string name, std::vector<Term> args) {
  std::size_t size = 1;
  std::size_t depth = 0;
  std::size_t h = mix(std::hash<std::string>{}(name), static_cast<std::size_t>(kind));
  for (const Term& a : args) {
    size += a.size();
    depth = std::max(depth, a.depth() + 1);
    h = mix(h, a.hash());
  }
  return Term(std::make_shared<const Node>(Node{kind, std::move(name), std::move(args), size, depth, h}));
}

Term Term::var(std::string name) { return make(TermKind::var, std::move(name), {}); }
Term Term::elem(std::string name) { return make(TermKind::elem, std::move(name), {}); }
Term Term::app(std::string symbol, std::vector<Term> args) {
  return make(TermKind::app, std::move(symbol), std::move(args));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind() || a.name() != b.name() ||
      a.arity() != b.arity())
    return false;
  return std::equal(a.args().begin(), a.args().end(), b.args().begin());
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Position Position::child(std::uint32_t index) const {
  Position p = *this;
  p.path.push_back(index);
  return p;
}

std::string Position::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(path[i]);
  }
  return s + ")";
}

const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::uint32_t idx : p.path) {
    if (idx == 0 || idx > cur->arity())
      throw InvalidPosition("position " + p.to_string() + " is not valid for the term");
    cur = &cur->args()[idx - 1];
  }
  return *cur;
}

namespace {

Term replace_rec(const Term& t, std::span<const std::uint32_t> path, const Term& s, const Position& full) {
  if (path.empty()) return s;
  std::uint32_t idx = path.front();
  if (idx == 0 || idx > t.arity())
    throw InvalidPosition("position " + full.to_string() + " is not valid for the term");
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[idx - 1] = replace_rec(args[idx - 1], path.subspan(1), s, full);
  return Term::app(t.name(), std::move(args));
}

void positions_rec(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  for (std::uint32_t i = 0; i < t.arity(); ++i) {
    cur.path.push_back(i + 1);
    positions_rec(t.args()[i], cur, out);
    cur.path.pop_back();
  }
}

}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& s) { return replace_rec(t, p.path, s, p); }

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  out.reserve(t.size());
  Position cur;
  positions_rec(t, cur, out);
  return out;
}

void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const Term& a : t.args()) collect_variables(a, out);
}

std::set<std::string> variables(const Term& t) {
  std::set<std::string> out;
  collect_variables(t, out);
  return out;
}

void collect_variables_ordered(const Term& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
    return;
  }
  for (const Term& a : t.args()) collect_variables_ordered(a, out);
}

std::size_t count_occurrences(const Term& t, std::string_view var) {
  if (t.is_var()) return t.name() == var ? 1 : 0;
  std::size_t n = 0;
  for (const Term& a : t.args()) n += count_occurrences(a, var);
  return n;
}

bool contains_elem(const Term& t) {
  if (t.is_elem()) return true;
  return std::any_of(t.args().begin(), t.args().end(), [](const Term& a) { return contains_elem(a); });
}

void check_well_formed(const Term& t, const Signature& sig) {
  if (t.is_var()) {
    if (sig.contains(t.name())) throw Error("variable '" + t.name() + "' clashes with a signature symbol");
    return;
  }
  if (t.is_elem()) return;
  if (!sig.contains(t.name())) throw Error("unknown symbol '" + t.name() + "'");
  if (sig.arity(t.name()) != t.arity())
    throw Error("symbol '" + t.name() + "' expects " + std::to_string(sig.arity(t.name())) + " arguments, got " +
                std::to_string(t.arity()));
  for (const Term& a : t.args()) check_well_formed(a, sig);
}

void Substitution::bind(const std::string& var, Term value) {
  if (value.is_var() && value.name() == var) {
    bindings_.erase(var);
    return;
  }
  bindings_.insert_or_assign(var, std::move(value));
}

const Term* Substitution::find(std::string_view var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (bindings_.empty()) return t;
  switch (t.kind()) {
    case TermKind::var: {
      const Term* v = find(t.name());
      return v ? *v : t;
    }
    case TermKind::elem:
      return t;
    case TermKind::app:
      break;
  }
  bool changed = false;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.name(), std::move(args)) : t;
}

}  // namespace nqrw
