#pragma once

#include "evidence/characterization.hpp"
#include "evidence/evidence_space.hpp"
#include "evidence/model_checker.hpp"

#include <json.hpp>

#include <string>

namespace evidence {

using Json = nlohmann::ordered_json;

Json load_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

// Rationals travel as "p/q" or integer strings; bare JSON integers are accepted on input.
Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& r);

EvidenceSpace space_from_json(const Json& j);
Json space_to_json(const EvidenceSpace& s);

WeightTable table_from_json(const Json& j);
Json table_to_json(const WeightTable& t);

Distribution distribution_from_json(const Json& j, const std::vector<std::string>& support);
Json distribution_to_json(const Distribution& d);

// `base_dir` resolves a "space" given as a file path.
EvidentialWorld world_from_json(const Json& j, const std::string& base_dir = ".");
Json world_to_json(const EvidentialWorld& w);
EvidentialRun run_from_json(const Json& j, const std::string& base_dir = ".");
Json run_to_json(const EvidentialRun& r);

} // namespace evidence
