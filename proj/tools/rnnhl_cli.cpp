#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rnnhl/bifurcation.hpp"
#include "rnnhl/integrate.hpp"
#include "rnnhl/io.hpp"
#include "rnnhl/presets.hpp"
#include "rnnhl/rng.hpp"
#include "rnnhl/stability.hpp"
#include "rnnhl/verify.hpp"

namespace {

using rnnhl::json;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

void apply_override(json& config, const std::string& entry) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
        throw rnnhl::ConfigError("--set expects key.path=value, got: " + entry);
    const std::string path = entry.substr(0, eq);
    const std::string value = entry.substr(eq + 1);

    json* node = &config;
    std::stringstream ss(path);
    std::string key, next;
    std::getline(ss, key, '.');
    while (std::getline(ss, next, '.')) {
        node = &(*node)[key];
        key = next;
    }
    json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
    (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
}

json load_config(const CommonOpts& opts) {
    json config = json::object();
    if (!opts.config_path.empty()) config = rnnhl::read_json_file(opts.config_path);
    for (const std::string& entry : opts.overrides) apply_override(config, entry);
    if (opts.seed) config["seed"] = *opts.seed;
    if (!config.contains("seed")) config["seed"] = 0;
    return config;
}

// Either the reduced 3-state system or a network spec, plus the edge set a
// sweep would vary.
struct SystemChoice {
    bool reduced3 = false;
    double c = 0.0;
    rnnhl::NetworkSpec spec;
    std::vector<int> swept_edges;
    std::vector<double> sweep_scales;
};

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw rnnhl::ConfigError(std::string("system.") + key + " must be a number");
    return j[key].get<double>();
}

rnnhl::ParameterRanges ranges_from(const json& j) {
    rnnhl::ParameterRanges r;
    if (!j.contains("ranges")) return r;
    const json& q = j["ranges"];
    if (q.contains("a")) { r.a_lo = q["a"][0]; r.a_hi = q["a"][1]; }
    if (q.contains("b")) { r.b_lo = q["b"][0]; r.b_hi = q["b"][1]; }
    if (q.contains("c")) { r.c_lo = q["c"][0]; r.c_hi = q["c"][1]; }
    if (q.contains("c_dead")) r.c_dead = q["c_dead"];
    return r;
}

SystemChoice build_system(const json& config) {
    if (!config.contains("system") || !config["system"].is_object())
        throw rnnhl::ConfigError("config requires a \"system\" object");
    const json& sys = config["system"];
    const std::string kind = sys.value("kind", "");
    const std::uint64_t seed = sys.value("seed", config.value("seed", std::uint64_t{0}));

    SystemChoice choice;
    if (kind == "reduced3") {
        choice.reduced3 = true;
        choice.c = require_number(sys, "c");
        return choice;
    }
    if (kind == "network") {
        if (sys.contains("spec_path"))
            choice.spec = rnnhl::network_spec_from_json(
                rnnhl::read_json_file(sys["spec_path"].get<std::string>()));
        else if (sys.contains("spec"))
            choice.spec = rnnhl::network_spec_from_json(sys["spec"]);
        else
            throw rnnhl::ConfigError("system.kind=network requires spec or spec_path");
        if (sys.contains("swept_edges"))
            choice.swept_edges = sys["swept_edges"].get<std::vector<int>>();
        return choice;
    }
    if (kind == "motif") {
        choice.spec = rnnhl::motif_bidirectional(
            require_number(sys, "a1"), require_number(sys, "a2"),
            require_number(sys, "b1"), require_number(sys, "b2"),
            require_number(sys, "c1"), require_number(sys, "c2"));
        choice.swept_edges = {0, 1};
        if (sys.contains("sweep_scales"))
            choice.sweep_scales = sys["sweep_scales"].get<std::vector<double>>();
        return choice;
    }
    if (kind == "single-synapse") {
        choice.spec = rnnhl::motif_single_synapse(
            require_number(sys, "a1"), require_number(sys, "a2"),
            require_number(sys, "b1"), require_number(sys, "c1"));
        choice.swept_edges = {0};
        return choice;
    }
    if (kind == "random-mixed" || kind == "interconnected") {
        rnnhl::TopologyConfig tc;
        tc.kind = kind == "random-mixed" ? rnnhl::TopologyKind::random_mixed
                                         : rnnhl::TopologyKind::interconnected;
        tc.n = sys.value("n", 12);
        tc.k = sys.value("k", 3);
        tc.density = sys.value("density", 0.25);
        tc.bidirectional_fraction = sys.value("bidirectional_fraction", 0.5);
        tc.self_loops = sys.value("self_loops", false);
        tc.ranges = ranges_from(sys);
        tc.seed = seed;
        const rnnhl::GeneratedNetwork net = rnnhl::build_network(tc);
        choice.spec = net.spec;
        choice.swept_edges = net.swept_edges;
        return choice;
    }
    throw rnnhl::ConfigError("unknown system.kind: \"" + kind + "\"");
}

rnnhl::IntegrationConfig integration_from(const json& config) {
    rnnhl::IntegrationConfig cfg;
    if (!config.contains("integrate")) return cfg;
    const json& j = config["integrate"];
    if (j.contains("method")) {
        const std::string m = j["method"].get<std::string>();
        if (m == "rk4-fixed") cfg.method = rnnhl::Method::rk4_fixed;
        else if (m == "rk45-adaptive") cfg.method = rnnhl::Method::rk45_adaptive;
        else throw rnnhl::ConfigError("integrate.method must be rk4-fixed or rk45-adaptive");
    }
    cfg.dt = j.value("dt", cfg.dt);
    cfg.t_max = j.value("t_max", cfg.t_max);
    cfg.abs_tol = j.value("abs_tol", cfg.abs_tol);
    cfg.rel_tol = j.value("rel_tol", cfg.rel_tol);
    cfg.record_every = j.value("record_every", cfg.record_every);
    cfg.convergence_eps = j.value("convergence_eps", cfg.convergence_eps);
    cfg.burn_in = j.value("burn_in", cfg.burn_in);
    cfg.validate();
    return cfg;
}

rnnhl::NewtonConfig newton_from(const json& config, std::uint64_t seed) {
    rnnhl::NewtonConfig cfg;
    cfg.seed = seed;
    if (!config.contains("newton")) return cfg;
    const json& j = config["newton"];
    cfg.n_starts = j.value("n_starts", cfg.n_starts);
    if (j.contains("strategy")) {
        const std::string s = j["strategy"].get<std::string>();
        if (s == "grid") cfg.strategy = rnnhl::StartStrategy::grid;
        else if (s == "uniform-random") cfg.strategy = rnnhl::StartStrategy::uniform_random;
        else if (s == "low-discrepancy") cfg.strategy = rnnhl::StartStrategy::low_discrepancy;
        else throw rnnhl::ConfigError("newton.strategy must be grid, uniform-random or low-discrepancy");
    }
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.newton_tol = j.value("newton_tol", cfg.newton_tol);
    cfg.dedup_tol = j.value("dedup_tol", cfg.dedup_tol);
    cfg.max_backtracks = j.value("max_backtracks", cfg.max_backtracks);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return cfg;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

void write_manifest(const CommonOpts& opts, const std::string& command,
                    const json& config, double wall_seconds,
                    std::vector<std::string> outputs) {
    const std::string path = out_path(opts, "manifest.json");
    outputs.push_back("manifest.json");
    const json manifest = rnnhl::make_manifest(
        command, config, config.value("seed", std::uint64_t{0}), wall_seconds, outputs);
    rnnhl::write_text_file(path, manifest.dump(2) + "\n");
}

int cmd_simulate(const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const json config = load_config(opts);
    const SystemChoice choice = build_system(config);
    const rnnhl::IntegrationConfig cfg = integration_from(config);
    const std::uint64_t seed = config.value("seed", std::uint64_t{0});

    const rnnhl::SystemView sys = choice.reduced3 ? rnnhl::make_reduced3_system(choice.c)
                                                  : rnnhl::make_system(choice.spec);
    rnnhl::Vec s0(sys.dim);
    if (config.contains("initial_state") && config["initial_state"].is_array()) {
        const auto vals = config["initial_state"].get<std::vector<double>>();
        if (static_cast<int>(vals.size()) != sys.dim)
            throw rnnhl::ConfigError("initial_state must have length " +
                                     std::to_string(sys.dim));
        for (int i = 0; i < sys.dim; ++i) s0[i] = vals[i];
    } else {
        rnnhl::Rng rng(seed);
        for (int i = 0; i < sys.dim; ++i)
            s0[i] = rng.uniform(-sys.bounds[i], sys.bounds[i]);
    }

    const rnnhl::Trajectory traj = rnnhl::integrate(sys, s0, cfg);
    std::ofstream csv(out_path(opts, "trajectory.csv"));
    rnnhl::write_trajectory_csv(csv, traj,
                                choice.reduced3 ? rnnhl::reduced3_column_names()
                                                : rnnhl::state_column_names(choice.spec));
    csv.close();

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, "simulate", config, wall, {"trajectory.csv"});
    const char* reason = traj.terminal_reason == rnnhl::TerminalReason::converged
                             ? "converged"
                             : traj.terminal_reason == rnnhl::TerminalReason::horizon
                                   ? "horizon"
                                   : "diverged";
    std::cout << "terminal_reason=" << reason << " t=" << traj.terminal_time << "\n";
    return traj.terminal_reason == rnnhl::TerminalReason::diverged ? 1 : 0;
}

int cmd_equilibria(const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const json config = load_config(opts);
    const SystemChoice choice = build_system(config);
    const std::uint64_t seed = config.value("seed", std::uint64_t{0});
    const rnnhl::NewtonConfig newton = newton_from(config, seed);

    rnnhl::EquilibriaResult result;
    if (choice.reduced3) {
        result = rnnhl::find_reduced3_equilibria(choice.c, newton, opts.jobs);
    } else {
        result = rnnhl::find_equilibria(choice.spec, newton, opts.jobs);
    }

    json out = rnnhl::equilibria_to_json(result);
    if (!choice.reduced3 && rnnhl::is_bidirectional_motif(choice.spec))
        out["certificate"] =
            rnnhl::certificate_to_json(rnnhl::contraction_certificate(choice.spec));
    rnnhl::write_text_file(out_path(opts, "equilibria.json"), out.dump(2) + "\n");

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, "equilibria", config, wall, {"equilibria.json"});
    std::cout << result.records.size() << " equilibria\n";
    return result.none_found ? 1 : 0;
}

int cmd_sweep(const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const json config = load_config(opts);
    const SystemChoice choice = build_system(config);
    const std::uint64_t seed = config.value("seed", std::uint64_t{0});
    if (!config.contains("sweep") || !config["sweep"].is_object())
        throw rnnhl::ConfigError("config requires a \"sweep\" object");
    const json& sj = config["sweep"];

    rnnhl::SweepSpec spec;
    spec.reduced3 = choice.reduced3;
    spec.base = choice.spec;
    spec.swept_edges =
        sj.contains("edges") ? sj["edges"].get<std::vector<int>>() : choice.swept_edges;
    spec.sweep_scales = sj.contains("scales") ? sj["scales"].get<std::vector<double>>()
                                              : choice.sweep_scales;
    if (sj.contains("c_values")) {
        spec.c_values = sj["c_values"].get<std::vector<double>>();
    } else {
        if (!sj.contains("c_from") || !sj.contains("c_to"))
            throw rnnhl::ConfigError("sweep requires c_values or c_from/c_to");
        spec.c_values = rnnhl::linspace(sj["c_from"].get<double>(),
                                        sj["c_to"].get<double>(), sj.value("points", 128));
    }
    spec.newton = newton_from(config, seed);
    spec.warm_start = sj.value("warm_start", true);
    spec.jobs = opts.jobs;

    const rnnhl::SweepResult result = rnnhl::sweep(spec);

    int projection = 0;
    std::string projection_name = "x_1";
    if (sj.contains("projection")) {
        if (sj["projection"].is_number_integer()) {
            projection = sj["projection"].get<int>();
            projection_name = "coord_" + std::to_string(projection);
        } else {
            projection_name = sj["projection"].get<std::string>();
            if (projection_name.rfind("x_", 0) == 0)
                projection = std::stoi(projection_name.substr(2)) - 1;
            else
                throw rnnhl::ConfigError("sweep.projection must be an index or \"x_i\"");
        }
    }

    std::ofstream csv(out_path(opts, "diagram.csv"));
    rnnhl::export_diagram_csv(csv, result, projection, projection_name);
    csv.close();

    json transitions = rnnhl::transitions_to_json(result);
    const double refine_tol = sj.value("refine_tol", 0.0);
    if (refine_tol > 0.0) {
        for (std::size_t k = 0; k < result.transitions.size(); ++k)
            transitions[k]["refined_c"] =
                rnnhl::refine_transition(spec, result, static_cast<int>(k), refine_tol);
    }
    json tr_out;
    tr_out["transitions"] = transitions;
    tr_out["counts"] = result.counts();
    tr_out["warnings"] = result.warnings;
    rnnhl::write_text_file(out_path(opts, "transitions.json"), tr_out.dump(2) + "\n");

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opts, "sweep", config, wall, {"diagram.csv", "transitions.json"});
    std::cout << result.transitions.size() << " transitions, " << result.n_branches
              << " branches\n";
    return 0;
}

int cmd_critical_c() {
    std::cout.precision(17);
    std::cout << "c0 = " << rnnhl::critical_c0() << "\n";
    std::cout << "xhat0 = " << rnnhl::critical_xhat0() << "\n";
    return 0;
}

int cmd_verify(const CommonOpts& opts, const std::string& suite) {
    const rnnhl::VerifyReport report = rnnhl::run_verify(suite, opts.jobs);
    json out = json::array();
    for (const rnnhl::CriterionResult& res : report.results) {
        std::cout << (res.pass ? "[PASS] " : "[FAIL] ") << res.name;
        std::printf(" (%.2fs)", res.seconds);
        if (!res.detail.empty()) std::cout << ": " << res.detail;
        std::cout << "\n";
        out.push_back({{"name", res.name},
                       {"pass", res.pass},
                       {"detail", res.detail},
                       {"seconds", res.seconds}});
    }
    json doc;
    doc["criteria"] = out;
    doc["all_pass"] = report.all_pass;
    doc["tool_version"] = rnnhl::kToolVersion;
    rnnhl::write_text_file(out_path(opts, "verify_report.json"), doc.dump(2) + "\n");
    return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attractor-landscape toolkit for recurrent networks with "
                 "Hebbian/anti-Hebbian plasticity"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string suite = "all";

    const auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opts.config_path, "JSON config path");
        if (needs_config) c->required();
        sub->add_option("--seed", [&opts](const std::vector<std::string>& v) {
            opts.seed = std::stoull(v.back());
            return true;
        }, "override config seed");
        sub->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--set", opts.overrides, "override a dotted config path, key=value");
    };

    auto* simulate = app.add_subcommand("simulate", "integrate a trajectory");
    add_common(simulate, true);
    auto* equilibria = app.add_subcommand("equilibria", "find and classify all equilibria");
    add_common(equilibria, true);
    auto* sweep = app.add_subcommand("sweep", "sweep learning rates and track branches");
    add_common(sweep, true);
    app.add_subcommand("critical-c", "print the pitchfork critical value");
    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    add_common(verify, false);
    verify->add_option("--suite", suite, "suite name or \"all\"");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return cmd_simulate(opts);
        if (equilibria->parsed()) return cmd_equilibria(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (verify->parsed()) return cmd_verify(opts, suite);
        return cmd_critical_c();
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const rnnhl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
