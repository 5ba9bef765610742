#pragma once

#include <string>

#include <json.hpp>

#include "mw/congruence.hpp"

namespace mw {

using json = nlohmann::json;

json algebra_to_json(const Algebra& alg);
Algebra algebra_from_json(const json& j);

json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const json& j);

json congruence_to_json(const Congruence& c);
Congruence congruence_from_json(const json& j, std::size_t universe);

// Parses text, reporting syntax errors as ParseError with line and column.
json parse_json_text(const std::string& text);
json load_json_file(const std::string& path);
Algebra load_algebra_file(const std::string& path);

// FNV-1a over the canonical dump; used in manifests.
std::string algebra_hash(const Algebra& alg);

}  // namespace mw
