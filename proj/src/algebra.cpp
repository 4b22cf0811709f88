#include "nqrw/algebra.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

namespace nqrw {

OpTable::OpTable(std::size_t order, int arity) : order_(order), arity_(arity), stride_(static_cast<std::size_t>(arity)) {
  if (arity < 0) throw Error("negative arity");
  std::size_t count = 1;
  for (int k = arity - 1; k >= 0; --k) {
    stride_[k] = count;
    count *= order;
  }
  values_.assign(count, 0);
}

std::size_t OpTable::index(std::span<const Element> args) const {
  std::size_t idx = 0;
  for (int k = 0; k < arity_; ++k) idx += args[k] * stride_[k];
  return idx;
}

void OpTable::decode(std::size_t flat, std::span<Element> args) const {
  for (int k = 0; k < arity_; ++k) {
    args[k] = static_cast<Element>(flat / stride_[k]);
    flat %= stride_[k];
  }
}

std::size_t OpTable::with_slot(std::size_t flat, int slot, Element v) const {
  std::size_t current = (flat / stride_[slot]) % order_;
  return flat - current * stride_[slot] + v * stride_[slot];
}

std::string to_string(Scope s) { return s == Scope::f_only ? "f" : "full"; }

Scope parse_scope(std::string_view s) {
  if (s == "f" || s == "f-only") return Scope::f_only;
  if (s == "full") return Scope::full;
  throw Error("unknown scope '" + std::string(s) + "'");
}

Element FiniteAlgebra::element(std::string_view element_name) const {
  auto it = std::find(carrier.begin(), carrier.end(), element_name);
  if (it == carrier.end()) throw Error("algebra " + name + " has no element '" + std::string(element_name) + "'");
  return static_cast<Element>(it - carrier.begin());
}

std::vector<OpTable> derive_divisions(int n, std::size_t order, const OpTable& f) {
  std::vector<OpTable> g(static_cast<std::size_t>(n), OpTable(order, n));
  std::vector<Element> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (std::size_t flat = 0; flat < f.tuples(); ++flat) {
      f.decode(flat, a);
      std::optional<Element> solution;
      for (Element b = 0; b < order; ++b) {
        if (f.at(f.with_slot(flat, i, b)) != a[i]) continue;
        if (solution) throw NotAQuasigroup("slot " + std::to_string(i + 1) + ": two solutions");
        solution = b;
      }
      if (!solution) throw NotAQuasigroup("slot " + std::to_string(i + 1) + ": no solution");
      g[i].set_flat(flat, *solution);
    }
  }
  return g;
}

std::optional<Element> find_identity(const FiniteAlgebra& alg) {
  std::vector<Element> a(static_cast<std::size_t>(alg.n));
  for (Element e = 0; e < alg.order(); ++e) {
    bool ok = true;
    for (int i = 0; i < alg.n && ok; ++i) {
      for (Element x = 0; x < alg.order() && ok; ++x) {
        std::fill(a.begin(), a.end(), e);
        a[i] = x;
        ok = alg.f(a) == x;
      }
    }
    if (ok) return e;
  }
  return std::nullopt;
}

std::optional<Violation> validate(const FiniteAlgebra& alg) {
  const std::size_t m = alg.order();
  const int n = alg.n;
  if (m == 0) return Violation{"carrier", {}, "empty carrier"};
  if (alg.f.order() != m || alg.f.arity() != n) return Violation{"carrier", {}, "f table has the wrong shape"};
  if (alg.g.size() != static_cast<std::size_t>(n)) return Violation{"carrier", {}, "expected n division tables"};
  for (const OpTable& t : alg.g)
    if (t.order() != m || t.arity() != n) return Violation{"carrier", {}, "division table has the wrong shape"};

  std::vector<Element> a(static_cast<std::size_t>(n));
  std::vector<char> seen(m);
  for (int i = 0; i < n; ++i) {
    for (std::size_t flat = 0; flat < alg.f.tuples(); ++flat) {
      alg.f.decode(flat, a);
      if (a[i] != 0) continue;  // one representative per line through slot i
      std::fill(seen.begin(), seen.end(), 0);
      for (Element b = 0; b < m; ++b) {
        Element v = alg.f.at(alg.f.with_slot(flat, i, b));
        if (v >= m) return Violation{"carrier", a, "value out of range"};
        if (seen[v]) {
          a[i] = b;
          return Violation{"unique-solution", a,
                           "slot " + std::to_string(i + 1) + " value " + alg.carrier[v] + " repeats"};
        }
        seen[v] = 1;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (std::size_t flat = 0; flat < alg.f.tuples(); ++flat) {
      alg.f.decode(flat, a);
      Element gi = alg.g[i].at(flat);
      if (alg.f.at(alg.f.with_slot(flat, i, gi)) != a[i])
        return Violation{"f-division", a, "slot " + std::to_string(i + 1)};
      Element fv = alg.f.at(flat);
      if (alg.g[i].at(alg.g[i].with_slot(flat, i, fv)) != a[i])
        return Violation{"division-f", a, "slot " + std::to_string(i + 1)};
    }
  }
  if (alg.kind == VarietyKind::loop) {
    if (!alg.identity) return Violation{"unit", {}, "no identity element"};
    Element e = *alg.identity;
    if (e >= m) return Violation{"unit", {}, "identity out of range"};
    for (int i = 0; i < n; ++i) {
      for (Element x = 0; x < m; ++x) {
        std::fill(a.begin(), a.end(), e);
        a[i] = x;
        if (alg.f(a) != x) return Violation{"unit", a, "slot " + std::to_string(i + 1)};
      }
    }
  }
  return std::nullopt;
}

FiniteAlgebra make_algebra(std::string name, VarietyKind kind, int n, std::vector<std::string> carrier, OpTable f,
                           std::optional<Element> identity) {
  if (n < 1) throw Error("arity n must be at least 1");
  FiniteAlgebra alg{std::move(name), n, kind, std::move(carrier), std::move(f), {}, identity};
  alg.g = derive_divisions(n, alg.order(), alg.f);
  if (kind == VarietyKind::loop && !alg.identity) {
    alg.identity = find_identity(alg);
    if (!alg.identity) throw Error("algebra " + alg.name + " has no identity element");
  }
  if (auto v = validate(alg)) throw Error("algebra " + alg.name + " violates " + v->axiom + ": " + v->detail);
  return alg;
}

FiniteAlgebra make_algebra(std::string name, VarietyKind kind, int n, std::vector<std::string> carrier,
                           const std::function<Element(std::span<const Element>)>& f,
                           std::optional<Element> identity) {
  OpTable table(carrier.size(), n);
  std::vector<Element> a(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < table.tuples(); ++flat) {
    table.decode(flat, a);
    table.set_flat(flat, f(a));
  }
  return make_algebra(std::move(name), kind, n, std::move(carrier), std::move(table), identity);
}

Partition::Partition(std::vector<std::uint32_t> labels) {
  std::vector<std::uint32_t> remap;
  block_.reserve(labels.size());
  for (std::uint32_t l : labels) {
    if (l >= remap.size()) remap.resize(l + 1, UINT32_MAX);
    if (remap[l] == UINT32_MAX) remap[l] = static_cast<std::uint32_t>(block_count());
    block_.push_back(remap[l]);
  }
}

Partition Partition::identity(std::size_t order) {
  std::vector<std::uint32_t> v(order);
  std::iota(v.begin(), v.end(), 0u);
  return Partition(std::move(v));
}

Partition Partition::full(std::size_t order) { return Partition(std::vector<std::uint32_t>(order, 0)); }

std::size_t Partition::block_count() const {
  return block_.empty() ? 0 : *std::max_element(block_.begin(), block_.end()) + 1;
}

std::vector<std::vector<Element>> Partition::blocks() const {
  std::vector<std::vector<Element>> out(block_count());
  for (Element a = 0; a < block_.size(); ++a) out[block_[a]].push_back(a);
  return out;
}

std::string to_string(const Partition& p, const std::vector<std::string>& names) {
  std::string s = "{";
  bool first_block = true;
  for (const auto& b : p.blocks()) {
    if (!first_block) s += ",";
    first_block = false;
    s += "{";
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k) s += ",";
      s += names[b[k]];
    }
    s += "}";
  }
  return s + "}";
}

std::vector<Partition> all_partitions(std::size_t order) {
  std::vector<Partition> out;
  if (order == 0) {
    out.emplace_back();
    return out;
  }
  // restricted growth strings: rgs[0] = 0, rgs[k] <= 1 + max(rgs[0..k-1])
  std::vector<std::uint32_t> rgs(order, 0), prefix_max(order, 0);
  for (;;) {
    out.emplace_back(rgs);
    std::size_t k = order - 1;
    while (k > 0 && rgs[k] > prefix_max[k - 1]) --k;
    if (k == 0) break;
    ++rgs[k];
    prefix_max[k] = std::max(prefix_max[k - 1], rgs[k]);
    for (std::size_t j = k + 1; j < order; ++j) {
      rgs[j] = 0;
      prefix_max[j] = prefix_max[k];
    }
  }
  return out;
}

bool is_congruence(const FiniteAlgebra& alg, const Partition& p, Scope scope) {
  // smallest member of each block serves as its representative
  std::vector<Element> rep(p.block_count(), UINT32_MAX);
  for (Element a = 0; a < p.order(); ++a)
    if (rep[p.block(a)] == UINT32_MAX) rep[p.block(a)] = a;

  std::vector<Element> args(static_cast<std::size_t>(alg.n));
  for (std::size_t o = 0; o < alg.op_count(scope); ++o) {
    const OpTable& t = alg.op(o);
    for (std::size_t flat = 0; flat < t.tuples(); ++flat) {
      t.decode(flat, args);
      const std::uint32_t here = p.block(t.at(flat));
      for (int k = 0; k < alg.n; ++k) {
        Element r = rep[p.block(args[k])];
        if (r == args[k]) continue;
        if (p.block(t.at(t.with_slot(flat, k, r))) != here) return false;
      }
    }
  }
  return true;
}

namespace {

std::vector<Partition> filter_serial(const FiniteAlgebra& alg, const std::vector<Partition>& all, Scope scope) {
  std::vector<Partition> out;
  for (const Partition& p : all)
    if (is_congruence(alg, p, scope)) out.push_back(p);
  return out;
}

std::vector<Partition> filter_omp(const FiniteAlgebra& alg, const std::vector<Partition>& all, Scope scope) {
  const auto n = static_cast<std::ptrdiff_t>(all.size());
  std::vector<char> keep(all.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) keep[i] = is_congruence(alg, all[i], scope) ? 1 : 0;
  std::vector<Partition> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) out.push_back(all[i]);
  return out;
}

}  // namespace

std::vector<Partition> enumerate_congruences(const FiniteAlgebra& alg, Scope scope, Exec exec, std::size_t bound) {
  if (alg.order() > bound)
    throw CarrierTooLarge("carrier of " + alg.name + " has " + std::to_string(alg.order()) + " elements (bound " +
                          std::to_string(bound) + ")");
  std::vector<Partition> all = all_partitions(alg.order());
  return exec == Exec::parallel ? filter_omp(alg, all, scope) : filter_serial(alg, all, scope);
}

namespace {

struct UnionFind {
  std::vector<Element> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  Element find(Element a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(Element a, Element b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

Partition generated_congruence(const FiniteAlgebra& alg, std::span<const std::pair<Element, Element>> seed,
                               Scope scope) {
  UnionFind uf(alg.order());
  for (auto [a, b] : seed) {
    if (a >= alg.order() || b >= alg.order()) throw Error("seed element out of range");
    uf.unite(a, b);
  }
  std::vector<Element> args(static_cast<std::size_t>(alg.n));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t o = 0; o < alg.op_count(scope); ++o) {
      const OpTable& t = alg.op(o);
      for (std::size_t flat = 0; flat < t.tuples(); ++flat) {
        t.decode(flat, args);
        for (int k = 0; k < alg.n; ++k) {
          Element r = uf.find(args[k]);
          if (r == args[k]) continue;
          changed = uf.unite(t.at(flat), t.at(t.with_slot(flat, k, r))) || changed;
        }
      }
    }
  }
  std::vector<std::uint32_t> labels(alg.order());
  for (Element a = 0; a < alg.order(); ++a) labels[a] = uf.find(a);
  return Partition(std::move(labels));
}

std::optional<Violation> validate_embedding(const Embedding& emb) {
  const FiniteAlgebra& s = emb.source;
  const FiniteAlgebra& t = emb.target;
  if (s.n != t.n) return Violation{"arity", {}, "source and target have different n"};
  if (s.kind != t.kind) return Violation{"kind", {}, "source and target are of different kinds"};
  if (emb.map.size() != s.order()) return Violation{"map", {}, "map is not total on the source"};
  std::vector<char> hit(t.order(), 0);
  for (Element a = 0; a < s.order(); ++a) {
    Element b = emb.map[a];
    if (b >= t.order()) return Violation{"map", {a}, "image out of range"};
    if (hit[b]) return Violation{"injective", {a}, s.carrier[a] + " collides with an earlier element"};
    hit[b] = 1;
  }
  std::vector<Element> args(static_cast<std::size_t>(s.n)), image(static_cast<std::size_t>(s.n));
  for (std::size_t o = 0; o < s.op_count(Scope::full); ++o) {
    const OpTable& so = s.op(o);
    const OpTable& to = t.op(o);
    for (std::size_t flat = 0; flat < so.tuples(); ++flat) {
      so.decode(flat, args);
      for (int k = 0; k < s.n; ++k) image[k] = emb.map[args[k]];
      if (emb.map[so.at(flat)] != to(image))
        return Violation{o == 0 ? "preserves-f" : "preserves-g" + std::to_string(o), args, ""};
    }
  }
  if (s.kind == VarietyKind::loop && s.identity && t.identity && emb.map[*s.identity] != *t.identity)
    return Violation{"preserves-e", {*s.identity}, ""};
  return std::nullopt;
}

Embedding identity_embedding(const FiniteAlgebra& alg) {
  std::vector<Element> map(alg.order());
  std::iota(map.begin(), map.end(), 0u);
  return {alg, alg, std::move(map)};
}

Partition restrict(const Partition& on_target, const Embedding& emb) {
  std::vector<std::uint32_t> labels;
  labels.reserve(emb.map.size());
  for (Element b : emb.map) labels.push_back(on_target.block(b));
  return Partition(std::move(labels));
}

namespace {

bool closed(const FiniteAlgebra& alg, std::span<const Element> subset, const std::vector<char>& member) {
  if (alg.kind == VarietyKind::loop && alg.identity && !member[*alg.identity]) return false;
  const std::size_t k = subset.size();
  std::vector<Element> args(static_cast<std::size_t>(alg.n));
  std::size_t count = 1;
  for (int i = 0; i < alg.n; ++i) count *= k;
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rest = c;
    for (int i = alg.n - 1; i >= 0; --i) {
      args[i] = subset[rest % k];
      rest /= k;
    }
    for (std::size_t o = 0; o < alg.op_count(Scope::full); ++o)
      if (!member[alg.op(o)(args)]) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<Element>> subalgebras(const FiniteAlgebra& alg) {
  const std::size_t m = alg.order();
  if (m > 20) throw CarrierTooLarge("subalgebra enumeration needs order <= 20");
  std::vector<std::vector<Element>> out;
  std::vector<char> member(m);
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<Element> subset;
    for (Element a = 0; a < m; ++a) {
      member[a] = (mask >> a) & 1u;
      if (member[a]) subset.push_back(a);
    }
    if (closed(alg, subset, member)) out.push_back(std::move(subset));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

Embedding inclusion(const FiniteAlgebra& alg, std::span<const Element> elements, std::string name) {
  std::vector<std::string> carrier;
  std::vector<Element> local(alg.order(), UINT32_MAX);
  for (Element a : elements) {
    local[a] = static_cast<Element>(carrier.size());
    carrier.push_back(alg.carrier[a]);
  }
  OpTable f(carrier.size(), alg.n);
  std::vector<Element> args(static_cast<std::size_t>(alg.n)), outer(static_cast<std::size_t>(alg.n));
  for (std::size_t flat = 0; flat < f.tuples(); ++flat) {
    f.decode(flat, args);
    for (int k = 0; k < alg.n; ++k) outer[k] = elements[args[k]];
    Element v = local[alg.f(outer)];
    if (v == UINT32_MAX) throw Error("subset is not closed under f");
    f.set_flat(flat, v);
  }
  std::optional<Element> id;
  if (alg.identity) {
    if (local[*alg.identity] == UINT32_MAX && alg.kind == VarietyKind::loop)
      throw Error("subset does not contain the identity");
    if (local[*alg.identity] != UINT32_MAX) id = local[*alg.identity];
  }
  if (name.empty()) name = alg.name + ".sub";
  FiniteAlgebra sub = make_algebra(std::move(name), alg.kind, alg.n, std::move(carrier), std::move(f),
                                   alg.kind == VarietyKind::loop ? id : std::nullopt);
  return {std::move(sub), alg, std::vector<Element>(elements.begin(), elements.end())};
}

}  // namespace nqrw
