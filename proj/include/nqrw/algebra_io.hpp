#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "nqrw/algebra.hpp"

namespace nqrw {

using Json = nlohmann::ordered_json;

/// Algebra object: {"name", "n", "kind", "carrier", "f", ["g"], ["e"]}.
///
/// `f` is nested n deep and indexed in carrier order; entries are element
/// names. When `g` is present it must agree with the tables derived from `f`.
FiniteAlgebra algebra_from_json(const Json& j);
Json algebra_to_json(const FiniteAlgebra& alg, bool with_divisions = false);
FiniteAlgebra load_algebra(const std::filesystem::path& path);

/// Either an inline object or a path string, resolved against `base_dir`.
FiniteAlgebra algebra_ref_from_json(const Json& j, const std::filesystem::path& base_dir);

/// {"source", "target", "map": {source-name: target-name}}. The result is not
/// validated; call validate_embedding.
Embedding embedding_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json embedding_to_json(const Embedding& emb);
Embedding load_embedding(const std::filesystem::path& path);

std::vector<Element> map_from_json(const Json& j, const FiniteAlgebra& source, const FiniteAlgebra& target);

Json read_json_file(const std::filesystem::path& path);

}  // namespace nqrw
