#pragma once

#include <cstdint>
#include <vector>

#include "rnnhl/bifurcation.hpp"
#include "rnnhl/netgen.hpp"

namespace rnnhl {

inline std::vector<double> linspace(double from, double to, int points) {
    std::vector<double> out;
    out.reserve(points);
    for (int k = 0; k < points; ++k)
        out.push_back(from + (to - from) * k / (points - 1));
    return out;
}

// Reduced-system sweep across the symmetry-breaking transition.
inline SweepSpec reduced3_sweep(double c_from = -150.0, double c_to = -3.0,
                                int points = 128, std::uint64_t seed = 0) {
    SweepSpec spec;
    spec.reduced3 = true;
    spec.c_values = linspace(c_from, c_to, points);
    spec.newton.seed = seed;
    return spec;
}

// Symmetric motif (a = b = 1, c1 = c2 = c): the weight equations coincide,
// so the diagram matches the reduced system's fork.
inline SweepSpec motif_symmetric_sweep(double c_from = -150.0, double c_to = -3.0,
                                       int points = 128, std::uint64_t seed = 0) {
    SweepSpec spec;
    spec.base = motif_bidirectional(1.0, 1.0, 1.0, 1.0, -1.0, -1.0);
    spec.swept_edges = {0, 1};
    spec.c_values = linspace(c_from, c_to, points);
    spec.newton.seed = seed;
    return spec;
}

// Asymmetric-decay motif. These decay products satisfy b2 a1 = b1 a2, which
// keeps the equilibrium equations swap-symmetric under a joint sweep, so the
// preset detunes c2 = 1.05 c1 to actually break the symmetry and unfold the
// fork (persistent branch plus a disconnected pair born at a fold).
inline SweepSpec motif_fig2b_sweep(double c_from = -30.0, double c_to = -3.0,
                                   int points = 128, std::uint64_t seed = 0) {
    SweepSpec spec;
    spec.base = motif_bidirectional(0.2, 0.4, 0.25, 0.5, -1.0, -1.05);
    spec.swept_edges = {0, 1};
    spec.sweep_scales = {1.0, 1.05};
    spec.c_values = linspace(c_from, c_to, points);
    spec.newton.seed = seed;
    return spec;
}

// Moderate-network presets: the swept set is the generator's (bidirectional
// edges, or the two gateway cross edges); all swept c values move together.
inline SweepSpec network_sweep(const GeneratedNetwork& net, double c_from,
                               double c_to, int points, std::uint64_t seed) {
    SweepSpec spec;
    spec.base = net.spec;
    spec.swept_edges = net.swept_edges;
    spec.c_values = linspace(c_from, c_to, points);
    spec.newton.seed = seed;
    return spec;
}

inline GeneratedNetwork preset_random12(std::uint64_t seed) {
    TopologyConfig cfg;
    cfg.kind = TopologyKind::random_mixed;
    cfg.n = 12;
    cfg.density = 0.25;
    cfg.bidirectional_fraction = 0.5;
    cfg.seed = seed;
    return build_random_mixed(cfg);
}

inline GeneratedNetwork preset_interconnected(int k, std::uint64_t seed) {
    TopologyConfig cfg;
    cfg.kind = TopologyKind::interconnected;
    cfg.k = k;
    cfg.seed = seed;
    return build_interconnected(cfg);
}

// Sweep ranges for the moderate-network experiments.
inline SweepSpec preset_random12_sweep(std::uint64_t seed) {
    return network_sweep(preset_random12(seed), -300.0, -10.0, 25, seed);
}

inline SweepSpec preset_interconnected_sweep(int k, std::uint64_t seed) {
    return network_sweep(preset_interconnected(k, seed), -400.0, -10.0, 30, seed);
}

}  // namespace rnnhl
