#pragma once

#include <cstdint>
#include <vector>

#include "rnnhl/model.hpp"

namespace rnnhl {

enum class TopologyKind { random_mixed, interconnected };

// Sampling intervals for generated parameters. Learning rates are drawn
// from [c_lo, c_hi] excluding (-c_dead, c_dead).
struct ParameterRanges {
    double a_lo = 0.5, a_hi = 1.5;
    double b_lo = 0.5, b_hi = 1.5;
    double c_lo = -2.0, c_hi = 2.0;
    double c_dead = 0.1;
};

struct TopologyConfig {
    TopologyKind kind = TopologyKind::interconnected;
    int n = 12;                        // random_mixed node count
    int k = 3;                         // interconnected subnetwork size
    double density = 0.25;             // probability per unordered pair
    double bidirectional_fraction = 0.5;
    ParameterRanges ranges;
    bool self_loops = false;           // random_mixed only; default off
    std::uint64_t seed = 0;

    void validate() const;
};

struct GeneratedNetwork {
    NetworkSpec spec;
    std::vector<int> swept_edges; // indices into spec.edges
    TopologyConfig config;
};

// Random mixed uni/bidirectional topology. Each unordered pair connects
// with probability `density`; a connected pair becomes bidirectional with
// probability `bidirectional_fraction`, otherwise a fair coin picks the
// direction. The bidirectional edges form the swept set; throws when that
// set would be empty.
GeneratedNetwork build_random_mixed(const TopologyConfig& cfg);

// Two complete directed subnetworks of k nodes joined by one cross edge in
// each direction between gateway neurons (node 0 of each subnetwork). The
// two cross edges form the swept set.
GeneratedNetwork build_interconnected(const TopologyConfig& cfg);

GeneratedNetwork build_network(const TopologyConfig& cfg);

}  // namespace rnnhl
