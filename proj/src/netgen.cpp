#include "rnnhl/netgen.hpp"

#include "rnnhl/rng.hpp"

namespace rnnhl {

void TopologyConfig::validate() const {
    if (kind == TopologyKind::random_mixed) {
        if (n < 2) throw ConfigError("n must be >= 2");
        if (!(density > 0.0) || density > 1.0)
            throw ConfigError("density must be in (0, 1]");
        if (bidirectional_fraction < 0.0 || bidirectional_fraction > 1.0)
            throw ConfigError("bidirectional_fraction must be in [0, 1]");
    } else {
        if (k < 2) throw ConfigError("k must be >= 2");
    }
    if (!(ranges.a_lo > 0.0) || !(ranges.a_hi >= ranges.a_lo))
        throw ConfigError("a range must satisfy 0 < a_lo <= a_hi");
    if (!(ranges.b_lo > 0.0) || !(ranges.b_hi >= ranges.b_lo))
        throw ConfigError("b range must satisfy 0 < b_lo <= b_hi");
    if (!(ranges.c_lo < ranges.c_hi))
        throw ConfigError("c range must satisfy c_lo < c_hi");
    if (!(ranges.c_dead > 0.0))
        throw ConfigError("c_dead must be > 0");
    if (ranges.c_hi <= -ranges.c_dead || ranges.c_lo >= ranges.c_dead) {
        // dead band outside the range entirely: fine
    } else if (-ranges.c_dead <= ranges.c_lo && ranges.c_hi <= ranges.c_dead) {
        throw ConfigError("c range lies entirely inside the dead band");
    }
}

namespace {

void sample_edge_parameters(NetworkSpec& spec, const ParameterRanges& r, Rng& rng) {
    spec.b.reserve(spec.edges.size());
    spec.c.reserve(spec.edges.size());
    for (std::size_t e = 0; e < spec.edges.size(); ++e) {
        spec.b.push_back(rng.uniform(r.b_lo, r.b_hi));
        spec.c.push_back(rng.uniform_nonzero(r.c_lo, r.c_hi, r.c_dead));
    }
}

}  // namespace

GeneratedNetwork build_random_mixed(const TopologyConfig& cfg) {
    if (cfg.kind != TopologyKind::random_mixed)
        throw ConfigError("kind must be random_mixed");
    cfg.validate();

    Rng rng(cfg.seed);
    GeneratedNetwork net;
    net.config = cfg;
    NetworkSpec& spec = net.spec;
    spec.n = cfg.n;
    spec.a.reserve(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
        spec.a.push_back(rng.uniform(cfg.ranges.a_lo, cfg.ranges.a_hi));

    for (int i = 0; i < cfg.n; ++i) {
        for (int j = i + 1; j < cfg.n; ++j) {
            if (!rng.bernoulli(cfg.density)) continue;
            if (rng.bernoulli(cfg.bidirectional_fraction)) {
                net.swept_edges.push_back(spec.n_edges());
                spec.edges.push_back({i, j});
                net.swept_edges.push_back(spec.n_edges());
                spec.edges.push_back({j, i});
            } else if (rng.bernoulli(0.5)) {
                spec.edges.push_back({i, j});
            } else {
                spec.edges.push_back({j, i});
            }
        }
    }
    if (cfg.self_loops)
        for (int i = 0; i < cfg.n; ++i)
            if (rng.bernoulli(cfg.density)) spec.edges.push_back({i, i});

    sample_edge_parameters(spec, cfg.ranges, rng);
    spec.validate();
    if (net.swept_edges.empty())
        throw ConfigError("nothing to sweep: the sampled graph has no bidirectional edge");
    return net;
}

GeneratedNetwork build_interconnected(const TopologyConfig& cfg) {
    if (cfg.kind != TopologyKind::interconnected)
        throw ConfigError("kind must be interconnected");
    cfg.validate();

    Rng rng(cfg.seed);
    GeneratedNetwork net;
    net.config = cfg;
    NetworkSpec& spec = net.spec;
    const int k = cfg.k;
    spec.n = 2 * k;
    spec.a.reserve(spec.n);
    for (int i = 0; i < spec.n; ++i)
        spec.a.push_back(rng.uniform(cfg.ranges.a_lo, cfg.ranges.a_hi));

    const auto add_complete = [&spec](int first, int count) {
        for (int i = first; i < first + count; ++i)
            for (int j = first; j < first + count; ++j)
                if (i != j) spec.edges.push_back({i, j});
    };
    add_complete(0, k);
    add_complete(k, k);

    // gateway neurons: node 0 of each subnetwork
    const int gw_a = 0, gw_b = k;
    net.swept_edges.push_back(spec.n_edges());
    spec.edges.push_back({gw_b, gw_a}); // synapse from A's gateway into B's
    net.swept_edges.push_back(spec.n_edges());
    spec.edges.push_back({gw_a, gw_b});

    sample_edge_parameters(spec, cfg.ranges, rng);
    spec.validate();
    return net;
}

GeneratedNetwork build_network(const TopologyConfig& cfg) {
    return cfg.kind == TopologyKind::random_mixed ? build_random_mixed(cfg)
                                                  : build_interconnected(cfg);
}

}  // namespace rnnhl
