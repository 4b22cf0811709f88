#include "nqrw/amalgam.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <random>
#include <unordered_set>

#include "nqrw/syntax.hpp"
#include "nqrw/unify.hpp"
#include "nqrw/variety.hpp"

namespace nqrw {

Element AmalgamDiagram::element_index(std::string_view global_name) const {
  auto it = index_.find(std::string(global_name));
  if (it == index_.end()) throw UnknownElement("unknown element '" + std::string(global_name) + "'");
  return it->second;
}

std::size_t AmalgamDiagram::op_index(std::string_view symbol) const {
  if (symbol == "f") return 0;
  if (symbol.size() > 1 && symbol[0] == 'g') {
    std::size_t i = 0;
    for (char c : symbol.substr(1)) {
      if (c < '0' || c > '9') throw Error("unknown operation '" + std::string(symbol) + "'");
      i = i * 10 + static_cast<std::size_t>(c - '0');
    }
    if (i >= 1 && i <= static_cast<std::size_t>(n)) return i;
  }
  throw Error("unknown operation '" + std::string(symbol) + "'");
}

namespace {

Term replace_constant(const Term& t, const std::string& constant, const Term& by) {
  if (t.is_app() && t.arity() == 0 && t.name() == constant) return by;
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(replace_constant(a, constant, by));
  return Term::app(t.name(), std::move(args));
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_identifier_char);
}

}  // namespace

AmalgamDiagram build_amalgam(FiniteAlgebra base, std::vector<FiniteAlgebra> factors,
                             std::vector<std::vector<Element>> embeddings) {
  if (factors.empty()) throw Error("an amalgam needs at least one factor");
  if (factors.size() > 64) throw Error("at most 64 factors are supported");
  if (embeddings.size() != factors.size()) throw Error("expected one embedding per factor");

  AmalgamDiagram d;
  d.kind = base.kind;
  d.n = base.n;
  const std::size_t k = factors.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (factors[i].kind != d.kind || factors[i].n != d.n)
      throw KindMismatch("factor " + factors[i].name + " is not an " + std::to_string(d.n) + "-ary " +
                         to_string(d.kind));
    Embedding emb{base, factors[i], embeddings[i]};
    if (auto v = validate_embedding(emb))
      throw InvalidEmbedding("embedding into " + factors[i].name + " violates " + v->axiom +
                             (v->detail.empty() ? "" : ": " + v->detail));
  }

  d.signature = variety_signature(VarietyKind::quasigroup, d.n);

  // factor names must be unique among themselves and distinct from the base
  std::vector<char> clash(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    clash[i] = factors[i].name == base.name;
    for (std::size_t j = 0; j < k; ++j) clash[i] |= j != i && factors[j].name == factors[i].name;
  }
  for (std::size_t i = 0; i < k; ++i)
    if (clash[i]) factors[i].name += "_" + std::to_string(i + 1);

  const std::uint64_t all = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  auto add = [&](const std::string& name, std::uint64_t mask) {
    if (!valid_name(name)) throw Error("element name '" + name + "' is not an identifier");
    if (!d.index_.emplace(name, static_cast<Element>(d.elements.size())).second)
      throw Error("element name '" + name + "' occurs twice after renaming");
    d.elements.push_back(name);
    d.membership.push_back(mask);
  };
  for (Element b = 0; b < base.order(); ++b) {
    const std::string& name = base.carrier[b];
    if (d.signature.contains(name) || (name == "e" && d.kind == VarietyKind::loop && base.identity != b))
      throw Error("element name '" + name + "' clashes with an operation symbol");
    add(name, all);
  }

  d.local.assign(k, std::vector<Element>(base.order(), AmalgamDiagram::kNone));
  for (std::size_t i = 0; i < k; ++i) {
    FiniteAlgebra& a = factors[i];
    d.original_names.push_back(a.carrier);
    std::vector<std::string> renamed(a.order());
    std::vector<char> is_image(a.order(), 0);
    for (Element b = 0; b < base.order(); ++b) {
      is_image[embeddings[i][b]] = 1;
      renamed[embeddings[i][b]] = base.carrier[b];
      d.local[i][b] = embeddings[i][b];
    }
    for (Element x = 0; x < a.order(); ++x) {
      if (is_image[x]) continue;
      renamed[x] = a.carrier[x] + "_" + std::to_string(i + 1);
      if (d.signature.contains(renamed[x])) throw Error("element name '" + renamed[x] + "' clashes with a symbol");
      add(renamed[x], std::uint64_t{1} << i);
      for (auto& row : d.local) row.push_back(AmalgamDiagram::kNone);
      d.local[i].back() = x;
    }
    a.carrier = std::move(renamed);
  }
  d.factors = std::move(factors);
  d.embeddings = std::move(embeddings);
  d.base = std::move(base);

  Trs complete = generate_trs({d.kind, d.n, true});
  if (d.kind == VarietyKind::loop) {
    d.identity = *d.base.identity;
    const Term e = Term::elem(d.base.carrier[*d.identity]);
    for (const Rule& r : complete.rules())
      d.rules.emplace_back(replace_constant(r.lhs(), "e", e), replace_constant(r.rhs(), "e", e), r.label());
  } else {
    d.rules = complete.rules();
  }
  return d;
}

AmalgamDiagram diagram_from_json(const Json& j, const std::filesystem::path& base_dir) {
  try {
    FiniteAlgebra base = algebra_ref_from_json(j.at("base"), base_dir);
    std::vector<FiniteAlgebra> factors;
    for (const Json& f : j.at("factors")) factors.push_back(algebra_ref_from_json(f, base_dir));
    const Json& maps = j.at("embeddings");
    if (!maps.is_array() || maps.size() != factors.size()) throw Error("expected one embedding map per factor");
    std::vector<std::vector<Element>> embeddings;
    for (std::size_t i = 0; i < factors.size(); ++i) embeddings.push_back(map_from_json(maps[i], base, factors[i]));
    return build_amalgam(std::move(base), std::move(factors), std::move(embeddings));
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed diagram: ") + e.what());
  }
}

AmalgamDiagram load_diagram(const std::filesystem::path& path) {
  return diagram_from_json(read_json_file(path), path.parent_path());
}

namespace {

std::optional<Element> qualified(const AmalgamDiagram& d, std::string_view text) {
  for (std::size_t dot = text.find('.'); dot != std::string_view::npos; dot = text.find('.', dot + 1)) {
    std::string_view alg = text.substr(0, dot);
    std::string_view elem = text.substr(dot + 1);
    if (alg == d.base.name) {
      auto it = std::find(d.base.carrier.begin(), d.base.carrier.end(), elem);
      if (it != d.base.carrier.end()) return static_cast<Element>(it - d.base.carrier.begin());
    }
    for (std::size_t i = 0; i < d.factors.size(); ++i) {
      if (alg != d.factors[i].name) continue;
      const auto& names = d.original_names[i];
      auto it = std::find(names.begin(), names.end(), elem);
      if (it != names.end()) return d.element_index(d.factors[i].carrier[it - names.begin()]);
    }
  }
  return std::nullopt;
}

}  // namespace

Term ingest(const AmalgamDiagram& d, const Term& t) {
  switch (t.kind()) {
    case TermKind::var:
      throw UnknownElement("'" + t.name() + "' is not an element of the diagram");
    case TermKind::elem:
      d.element_index(t.name());
      return t;
    case TermKind::app:
      break;
  }
  if (t.arity() == 0) {
    if (t.name() == "e" && d.identity) return Term::elem(d.elements[*d.identity]);
    throw UnknownElement("constant '" + t.name() + "' is not available here");
  }
  d.op_index(t.name());
  if (t.arity() != static_cast<std::size_t>(d.n)) throw Error("'" + t.name() + "' has the wrong arity");
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(ingest(d, a));
  return Term::app(t.name(), std::move(args));
}

Term parse_amalgam_term(const AmalgamDiagram& d, std::string_view text) {
  Signature sig = variety_signature(d.kind, d.n);
  Term t = parse_term(text, sig, [&](std::string_view name) {
    if (d.has_element(name)) return Term::elem(std::string(name));
    if (auto q = qualified(d, name)) return Term::elem(d.elements[*q]);
    throw UnknownElement("unknown element '" + std::string(name) + "'");
  });
  return ingest(d, t);
}

std::uint64_t factor_mask(const AmalgamDiagram& d, const Term& t) {
  if (t.is_elem()) return d.membership[d.element_index(t.name())];
  std::uint64_t mask = ~std::uint64_t{0};
  for (const Term& a : t.args()) {
    mask &= factor_mask(d, a);
    if (!mask) break;
  }
  return mask;
}

namespace {

Element eval_local(const AmalgamDiagram& d, std::size_t factor, const Term& t) {
  if (t.is_elem()) {
    Element l = d.local[factor][d.element_index(t.name())];
    if (l == AmalgamDiagram::kNone) throw Error("element " + t.name() + " is not in " + d.factors[factor].name);
    return l;
  }
  std::vector<Element> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(eval_local(d, factor, a));
  return d.factors[factor].op(d.op_index(t.name()))(args);
}

}  // namespace

Element evaluate_in(const AmalgamDiagram& d, std::size_t factor, const Term& t) {
  return d.element_index(d.factors[factor].carrier[eval_local(d, factor, t)]);
}

namespace {

/// Steps at the root of s: the collapse first (when s is a pure non-leaf), then rules in order.
void root_steps(const AmalgamDiagram& d, const Term& s, bool first_only,
                std::vector<std::pair<Term, std::string>>& out) {
  if (!s.is_app()) return;
  if (std::uint64_t mask = factor_mask(d, s)) {
    auto i = static_cast<std::size_t>(std::countr_zero(mask));
    out.emplace_back(Term::elem(d.elements[evaluate_in(d, i, s)]), "collapse:" + d.factors[i].name);
    if (first_only) return;
  }
  for (const Rule& r : d.rules) {
    if (auto sigma = match(r.lhs(), s)) {
      out.emplace_back(sigma->apply(r.rhs()), r.label());
      if (first_only) return;
    }
  }
}

void all_steps(const AmalgamDiagram& d, const Term& root, const Term& s, const Position& p,
               std::vector<AmalgamStep>& out) {
  std::vector<std::pair<Term, std::string>> here;
  root_steps(d, s, false, here);
  for (auto& [result, label] : here) out.push_back({replace_at(root, p, result), std::move(label), p});
  for (std::uint32_t i = 0; i < s.arity(); ++i) all_steps(d, root, s.args()[i], p.child(i + 1), out);
}

struct Found {
  Position position;
  Term replacement;
  std::string label;
};

std::optional<Found> find_redex(const AmalgamDiagram& d, const Term& s, const Position& p, bool innermost) {
  std::vector<std::pair<Term, std::string>> here;
  if (!innermost) {
    root_steps(d, s, true, here);
    if (!here.empty()) return Found{p, here[0].first, here[0].second};
  }
  for (std::uint32_t i = 0; i < s.arity(); ++i)
    if (auto f = find_redex(d, s.args()[i], p.child(i + 1), innermost)) return f;
  if (innermost) {
    root_steps(d, s, true, here);
    if (!here.empty()) return Found{p, here[0].first, here[0].second};
  }
  return std::nullopt;
}

}  // namespace

std::vector<AmalgamStep> amalgam_steps(const AmalgamDiagram& d, const Term& t) {
  std::vector<AmalgamStep> out;
  all_steps(d, t, t, Position{}, out);
  return out;
}

Normalized normalize_element(const AmalgamDiagram& d, const Term& input, Strategy strategy) {
  Term t = ingest(d, input);
  std::vector<TraceStep> trace;
  std::mt19937_64 rng(strategy.seed);
  for (;;) {
    if (strategy.kind == Strategy::Kind::random) {
      auto steps = amalgam_steps(d, t);
      if (steps.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
      AmalgamStep& s = steps[pick(rng)];
      trace.push_back({std::move(s.label), std::move(s.position)});
      t = std::move(s.result);
      continue;
    }
    auto found = find_redex(d, t, Position{}, strategy.kind == Strategy::Kind::leftmost_innermost);
    if (!found) break;
    t = replace_at(t, found->position, found->replacement);
    trace.push_back({std::move(found->label), std::move(found->position)});
  }
  return {std::move(t), std::move(trace)};
}

Term apply_op(const AmalgamDiagram& d, std::string_view symbol, std::span<const Term> args) {
  d.op_index(symbol);
  if (args.size() != static_cast<std::size_t>(d.n))
    throw Error(std::string(symbol) + " expects " + std::to_string(d.n) + " arguments");
  return normalize_element(d, Term::app(std::string(symbol), std::vector<Term>(args.begin(), args.end()))).term;
}

std::vector<Term> irreducible_reducts(const AmalgamDiagram& d, const Term& t, std::size_t cap) {
  std::unordered_set<Term, TermHash> seen{t};
  std::deque<Term> queue{t};
  std::vector<Term> out;
  while (!queue.empty()) {
    Term s = std::move(queue.front());
    queue.pop_front();
    auto steps = amalgam_steps(d, s);
    if (steps.empty()) out.push_back(s);
    for (AmalgamStep& step : steps) {
      if (!seen.insert(step.result).second) continue;
      if (seen.size() > cap) throw CapExceeded("reduct graph exceeds " + std::to_string(cap) + " terms");
      queue.push_back(std::move(step.result));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Term> term_universe(const AmalgamDiagram& d, std::size_t max_size) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  if (max_size == 0) return {};
  for (const std::string& e : d.elements) by_size[1].push_back(Term::elem(e));
  const auto n = static_cast<std::size_t>(d.n);
  std::vector<std::string> symbols;
  for (const auto& [name, arity] : d.signature.symbols()) symbols.push_back(name);

  for (std::size_t s = n + 1; s <= max_size; ++s) {
    // argument sizes a_1..a_n >= 1 summing to s - 1
    std::vector<std::size_t> sizes(n, 1);
    std::vector<Term> level;
    auto emit_products = [&] {
      std::vector<std::size_t> idx(n, 0);
      for (std::size_t k = 0; k < n; ++k)
        if (by_size[sizes[k]].empty()) return;
      for (;;) {
        std::vector<Term> args;
        for (std::size_t k = 0; k < n; ++k) args.push_back(by_size[sizes[k]][idx[k]]);
        for (const std::string& sym : symbols) level.push_back(Term::app(sym, args));
        std::size_t k = n;
        while (k > 0) {
          --k;
          if (++idx[k] < by_size[sizes[k]].size()) break;
          idx[k] = 0;
          if (k == 0) return;
        }
      }
    };
    std::function<void(std::size_t, std::size_t)> split = [&](std::size_t slot, std::size_t left) {
      if (slot + 1 == n) {
        sizes[slot] = left;
        emit_products();
        return;
      }
      for (std::size_t a = 1; a + (n - slot - 1) <= left; ++a) {
        sizes[slot] = a;
        split(slot + 1, left - a);
      }
    };
    split(0, s - 1);
    std::sort(level.begin(), level.end());
    by_size[s] = std::move(level);
  }
  std::vector<Term> out;
  for (auto& level : by_size)
    for (Term& t : level) out.push_back(std::move(t));
  return out;
}

namespace {

Term random_term_rec(const AmalgamDiagram& d, std::size_t depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> leaf(0, d.elements.size() - 1);
  if (depth == 0 || std::bernoulli_distribution(0.3)(rng)) return Term::elem(d.elements[leaf(rng)]);
  std::uniform_int_distribution<int> op(0, d.n);
  int o = op(rng);
  std::vector<Term> args;
  for (int k = 0; k < d.n; ++k) args.push_back(random_term_rec(d, depth - 1, rng));
  return Term::app(o == 0 ? "f" : "g" + std::to_string(o), std::move(args));
}

// splitmix64 finalizer: independent per-index seeds without a shared generator
std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Term> strategy_results(const AmalgamDiagram& d, const Term& t, std::uint64_t seed) {
  return {normalize_element(d, t, Strategy::innermost()).term, normalize_element(d, t, Strategy::outermost()).term,
          normalize_element(d, t, Strategy::random(seed)).term};
}

bool all_equal(const std::vector<Term>& v) {
  return std::all_of(v.begin(), v.end(), [&](const Term& t) { return t == v.front(); });
}

}  // namespace

Term random_term(const AmalgamDiagram& d, std::size_t max_depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_term_rec(d, max_depth, rng);
}

UnfReport check_unique_normal_forms(const AmalgamDiagram& d, const UnfOptions& opts) {
  UnfReport report;
  const std::vector<Term> universe = term_universe(d, opts.max_size);
  report.exhaustive_terms = universe.size();

  auto exhaustive_ok = [&](std::size_t k) {
    auto irr = irreducible_reducts(d, universe[k], opts.cap);
    if (irr.size() != 1) return false;
    auto results = strategy_results(d, universe[k], mix(opts.seed, k));
    return all_equal(results) && results.front() == irr.front();
  };
  if (auto bad = first_failure(universe.size(), exhaustive_ok, opts.exec)) {
    const Term& t = universe[*bad];
    auto irr = irreducible_reducts(d, t, opts.cap);
    report.ok = false;
    if (irr.size() != 1)
      report.counterexample = UnfCounterexample{t, "several irreducible reducts", std::move(irr)};
    else
      report.counterexample =
          UnfCounterexample{t, "strategies disagree", strategy_results(d, t, mix(opts.seed, *bad))};
    return report;
  }

  std::vector<Term> samples;
  samples.reserve(opts.trials);
  for (std::size_t k = 0; k < opts.trials; ++k) samples.push_back(random_term(d, opts.random_depth, mix(opts.seed, k)));
  report.random_terms = samples.size();
  auto random_ok = [&](std::size_t k) { return all_equal(strategy_results(d, samples[k], mix(~opts.seed, k))); };
  if (auto bad = first_failure(samples.size(), random_ok, opts.exec)) {
    report.ok = false;
    report.counterexample = UnfCounterexample{samples[*bad], "strategies disagree",
                                              strategy_results(d, samples[*bad], mix(~opts.seed, *bad))};
  }
  return report;
}

StrongAmalgamationReport check_strong_amalgamation(const AmalgamDiagram& d) {
  if (d.factors.size() != 2) throw Error("strong amalgamation is checked for two factors");
  StrongAmalgamationReport r;
  auto image = [&](std::size_t factor) {
    std::vector<Term> out;
    for (const std::string& name : d.factors[factor].carrier)
      out.push_back(normalize_element(d, Term::elem(name)).term);
    return out;
  };
  auto fail = [&](std::string why) {
    r.ok = false;
    if (r.failure.empty()) r.failure = std::move(why);
  };
  r.image1 = image(0);
  r.image2 = image(1);
  for (std::size_t i = 0; i < 2; ++i) {
    auto img = i == 0 ? r.image1 : r.image2;
    std::sort(img.begin(), img.end());
    if (std::adjacent_find(img.begin(), img.end()) != img.end())
      fail("factor " + d.factors[i].name + " is not embedded injectively");
  }
  for (Element b = 0; b < d.base.order(); ++b) {
    const Term& via1 = r.image1[d.embeddings[0][b]];
    const Term& via2 = r.image2[d.embeddings[1][b]];
    if (!(via1 == via2)) fail("square does not commute at " + d.base.carrier[b]);
    r.base_image.push_back(via1);
  }
  auto sorted = [](std::vector<Term> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  auto s1 = sorted(r.image1), s2 = sorted(r.image2);
  r.base_image = sorted(r.base_image);
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(r.intersection));
  if (r.intersection != r.base_image) fail("images intersect outside the base");
  return r;
}

StrongAmalgamationReport check_strong_amalgamation(const FiniteAlgebra& base, const FiniteAlgebra& a1,
                                                   const FiniteAlgebra& a2, std::span<const Element> m1,
                                                   std::span<const Element> m2) {
  return check_strong_amalgamation(build_amalgam(base, {a1, a2},
                                                 {std::vector<Element>(m1.begin(), m1.end()),
                                                  std::vector<Element>(m2.begin(), m2.end())}));
}

}  // namespace nqrw
