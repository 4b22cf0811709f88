#include "nqrw/algebra_io.hpp"

#include <algorithm>
#include <fstream>

namespace nqrw {

namespace {

Element lookup(const std::vector<std::string>& carrier, const Json& v, const std::string& where) {
  if (!v.is_string()) throw Error(where + ": expected an element name");
  const auto& s = v.get_ref<const std::string&>();
  auto it = std::find(carrier.begin(), carrier.end(), s);
  if (it == carrier.end()) throw Error(where + ": unknown element '" + s + "'");
  return static_cast<Element>(it - carrier.begin());
}

void read_table(const Json& j, const std::vector<std::string>& carrier, int depth, std::vector<Element>& prefix,
                OpTable& out, const std::string& where) {
  if (!j.is_array() || j.size() != carrier.size())
    throw Error(where + ": expected an array of " + std::to_string(carrier.size()) + " entries");
  for (std::size_t k = 0; k < j.size(); ++k) {
    prefix.push_back(static_cast<Element>(k));
    if (depth == 1)
      out.set(prefix, lookup(carrier, j[k], where));
    else
      read_table(j[k], carrier, depth - 1, prefix, out, where);
    prefix.pop_back();
  }
}

Json write_table(const OpTable& t, const std::vector<std::string>& carrier, std::vector<Element>& prefix) {
  Json arr = Json::array();
  for (Element a = 0; a < carrier.size(); ++a) {
    prefix.push_back(a);
    if (static_cast<int>(prefix.size()) == t.arity())
      arr.push_back(carrier[t(prefix)]);
    else
      arr.push_back(write_table(t, carrier, prefix));
    prefix.pop_back();
  }
  return arr;
}

}  // namespace

FiniteAlgebra algebra_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error("algebra must be a JSON object");
    std::string name = j.value("name", std::string("A"));
    int n = j.at("n").get<int>();
    if (n < 1) throw Error("n must be at least 1");
    VarietyKind kind = parse_variety_kind(j.value("kind", std::string("quasigroup")));
    auto carrier = j.at("carrier").get<std::vector<std::string>>();
    if (carrier.empty()) throw Error("empty carrier");
    for (std::size_t a = 0; a < carrier.size(); ++a)
      if (std::find(carrier.begin(), carrier.begin() + a, carrier[a]) != carrier.begin() + a)
        throw Error("duplicate element '" + carrier[a] + "'");

    OpTable f(carrier.size(), n);
    std::vector<Element> prefix;
    read_table(j.at("f"), carrier, n, prefix, f, "f");

    std::optional<Element> identity;
    if (j.contains("e")) identity = lookup(carrier, j["e"], "e");
    if (kind == VarietyKind::quasigroup) identity.reset();
    FiniteAlgebra alg = make_algebra(name, kind, n, carrier, std::move(f), identity);

    if (j.contains("g")) {
      const Json& g = j["g"];
      if (!g.is_array() || g.size() != static_cast<std::size_t>(n)) throw Error("g must hold n tables");
      for (int i = 0; i < n; ++i) {
        OpTable gi(carrier.size(), n);
        read_table(g[i], carrier, n, prefix, gi, "g" + std::to_string(i + 1));
        if (!(gi == alg.g[i])) throw Error("table g" + std::to_string(i + 1) + " disagrees with f");
      }
    }
    return alg;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed algebra: ") + e.what());
  }
}

Json algebra_to_json(const FiniteAlgebra& alg, bool with_divisions) {
  Json j;
  j["name"] = alg.name;
  j["n"] = alg.n;
  j["kind"] = to_string(alg.kind);
  j["carrier"] = alg.carrier;
  std::vector<Element> prefix;
  j["f"] = write_table(alg.f, alg.carrier, prefix);
  if (with_divisions) {
    Json g = Json::array();
    for (const OpTable& t : alg.g) g.push_back(write_table(t, alg.carrier, prefix));
    j["g"] = std::move(g);
  }
  if (alg.kind == VarietyKind::loop && alg.identity) j["e"] = alg.carrier[*alg.identity];
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

FiniteAlgebra load_algebra(const std::filesystem::path& path) { return algebra_from_json(read_json_file(path)); }

FiniteAlgebra algebra_ref_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (j.is_string()) return load_algebra(base_dir / j.get<std::string>());
  return algebra_from_json(j);
}

std::vector<Element> map_from_json(const Json& j, const FiniteAlgebra& source, const FiniteAlgebra& target) {
  if (!j.is_object()) throw Error("map must be an object from source to target element names");
  std::vector<Element> map(source.order(), UINT32_MAX);
  for (const auto& [from, to] : j.items()) {
    Element a = lookup(source.carrier, Json(from), "map key");
    map[a] = lookup(target.carrier, to, "map value");
  }
  for (Element a = 0; a < map.size(); ++a)
    if (map[a] == UINT32_MAX) throw Error("map has no image for '" + source.carrier[a] + "'");
  return map;
}

Embedding embedding_from_json(const Json& j, const std::filesystem::path& base_dir) {
  try {
    FiniteAlgebra source = algebra_ref_from_json(j.at("source"), base_dir);
    FiniteAlgebra target = algebra_ref_from_json(j.at("target"), base_dir);
    auto map = map_from_json(j.at("map"), source, target);
    return {std::move(source), std::move(target), std::move(map)};
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed embedding: ") + e.what());
  }
}

Json embedding_to_json(const Embedding& emb) {
  Json map = Json::object();
  for (Element a = 0; a < emb.map.size(); ++a) map[emb.source.carrier[a]] = emb.target.carrier[emb.map[a]];
  return Json{{"source", algebra_to_json(emb.source)}, {"target", algebra_to_json(emb.target)}, {"map", map}};
}

Embedding load_embedding(const std::filesystem::path& path) {
  return embedding_from_json(read_json_file(path), path.parent_path());
}

}  // namespace nqrw
