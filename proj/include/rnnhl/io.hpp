#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rnnhl/bifurcation.hpp"
#include "rnnhl/equilibria.hpp"
#include "rnnhl/model.hpp"
#include "rnnhl/netgen.hpp"
#include "rnnhl/stability.hpp"

namespace rnnhl {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSpecSchemaVersion = 1;

using json = nlohmann::json;

// NetworkSpec schema (version 1):
//   {schema_version, n, a[], edges[{i, j, b, c}], u[], metadata{...}}
json network_spec_to_json(const NetworkSpec& spec, const json& metadata = json::object());
NetworkSpec network_spec_from_json(const json& j);

json generated_network_to_json(const GeneratedNetwork& net);

json equilibrium_record_to_json(const EquilibriumRecord& rec);
json equilibria_to_json(const EquilibriaResult& result);
json transitions_to_json(const SweepResult& result);
json certificate_to_json(const ContractionCertificate& cert);

// FNV-1a 64-bit digest of the canonical (sorted-key) dump, as hex. Stable
// under key reordering because nlohmann::json objects iterate sorted.
std::string config_digest(const json& config);

json make_manifest(const std::string& command, const json& effective_config,
                   std::uint64_t seed, double wall_seconds,
                   const std::vector<std::string>& outputs);

void write_text_file(const std::string& path, const std::string& content);
json read_json_file(const std::string& path);

}  // namespace rnnhl
