#include "rnnhl/io.hpp"

#include <fstream>
#include <sstream>

namespace rnnhl {

json network_spec_to_json(const NetworkSpec& spec, const json& metadata) {
    json j;
    j["schema_version"] = kSpecSchemaVersion;
    j["n"] = spec.n;
    j["a"] = spec.a;
    j["edges"] = json::array();
    for (int e = 0; e < spec.n_edges(); ++e) {
        j["edges"].push_back({{"i", spec.edges[e].i},
                              {"j", spec.edges[e].j},
                              {"b", spec.b[e]},
                              {"c", spec.c[e]}});
    }
    j["u"] = spec.u.empty() ? std::vector<double>(spec.n, 0.0) : spec.u;
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
}

NetworkSpec network_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("spec must be a JSON object");
    if (j.contains("schema_version") && j["schema_version"].get<int>() != kSpecSchemaVersion)
        throw ConfigError("unsupported spec schema_version");
    NetworkSpec spec;
    try {
        spec.n = j.at("n").get<int>();
        spec.a = j.at("a").get<std::vector<double>>();
        for (const json& e : j.at("edges")) {
            spec.edges.push_back({e.at("i").get<int>(), e.at("j").get<int>()});
            spec.b.push_back(e.at("b").get<double>());
            spec.c.push_back(e.at("c").get<double>());
        }
        if (j.contains("u")) spec.u = j["u"].get<std::vector<double>>();
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("malformed spec: ") + ex.what());
    }
    spec.validate();
    return spec;
}

json generated_network_to_json(const GeneratedNetwork& net) {
    const TopologyConfig& cfg = net.config;
    json metadata;
    metadata["kind"] =
        cfg.kind == TopologyKind::random_mixed ? "random_mixed" : "interconnected";
    metadata["seed"] = cfg.seed;
    if (cfg.kind == TopologyKind::random_mixed) {
        metadata["n"] = cfg.n;
        metadata["density"] = cfg.density;
        metadata["bidirectional_fraction"] = cfg.bidirectional_fraction;
        metadata["self_loops"] = cfg.self_loops;
    } else {
        metadata["k"] = cfg.k;
    }
    metadata["ranges"] = {{"a", {cfg.ranges.a_lo, cfg.ranges.a_hi}},
                          {"b", {cfg.ranges.b_lo, cfg.ranges.b_hi}},
                          {"c", {cfg.ranges.c_lo, cfg.ranges.c_hi}},
                          {"c_dead", cfg.ranges.c_dead}};
    metadata["swept_edges"] = net.swept_edges;
    return network_spec_to_json(net.spec, metadata);
}

namespace {

json complex_to_json(const std::complex<double>& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

const char* symmetry_name(SymmetryTag tag) {
    switch (tag) {
        case SymmetryTag::on_plane_L: return "on_plane_L";
        case SymmetryTag::off_plane: return "off_plane";
        case SymmetryTag::none: return "none";
    }
    return "none";
}

}  // namespace

json equilibrium_record_to_json(const EquilibriumRecord& rec) {
    json j;
    j["point"] = std::vector<double>(rec.point.data(), rec.point.data() + rec.point.size());
    j["residual"] = rec.residual;
    j["eigenvalues"] = json::array();
    for (const auto& ev : rec.eigenvalues) j["eigenvalues"].push_back(complex_to_json(ev));
    j["stability"] = stability_name(rec.stability);
    j["symmetry_tag"] = symmetry_name(rec.symmetry_tag);
    j["basin_hits"] = rec.basin_hits;
    return j;
}

json equilibria_to_json(const EquilibriaResult& result) {
    json j;
    j["records"] = json::array();
    for (const EquilibriumRecord& rec : result.records)
        j["records"].push_back(equilibrium_record_to_json(rec));
    j["diagnostics"] = {{"starts", result.starts},
                        {"converged", result.converged},
                        {"abandoned_singular", result.abandoned_singular},
                        {"not_converged", result.not_converged},
                        {"dedup_tol", result.dedup_tol_used},
                        {"none_found", result.none_found}};
    return j;
}

json transitions_to_json(const SweepResult& result) {
    json j = json::array();
    for (const Transition& t : result.transitions) {
        j.push_back({{"c_lo", t.c_lo},
                     {"c_hi", t.c_hi},
                     {"count_before", t.count_before},
                     {"count_after", t.count_after}});
    }
    return j;
}

json certificate_to_json(const ContractionCertificate& cert) {
    return {{"unique_guaranteed", cert.unique_guaranteed},
            {"weight_row_bound", cert.weight_row_bound},
            {"phi_column_bound", cert.phi_column_bound}};
}

std::string config_digest(const json& config) {
    const std::string canonical = config.dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

json make_manifest(const std::string& command, const json& effective_config,
                   std::uint64_t seed, double wall_seconds,
                   const std::vector<std::string>& outputs) {
    json j;
    j["command"] = command;
    j["config_digest"] = config_digest(effective_config);
    j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    j["wall_time_s"] = wall_seconds;
    j["outputs"] = outputs;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw ConfigError("failed writing " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " + ex.what());
    }
    return j;
}

}  // namespace rnnhl
