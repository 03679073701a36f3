#include "rnnhl/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace rnnhl {

void SweepSpec::validate() const {
    if (c_values.size() < 2) throw ConfigError("c_values must have length >= 2");
    const bool ascending = c_values.front() < c_values.back();
    for (std::size_t k = 0; k + 1 < c_values.size(); ++k) {
        const bool ok = ascending ? c_values[k] < c_values[k + 1]
                                  : c_values[k] > c_values[k + 1];
        if (!ok) throw ConfigError("c_values must be strictly monotone");
    }
    newton.validate();
    if (reduced3) {
        for (double c : c_values)
            if (c == 0.0) throw ConfigError("c_values must not contain 0");
        return;
    }
    base.validate();
    if (!base.autonomous()) throw ConfigError("sweep requires u = 0");
    if (swept_edges.empty()) throw ConfigError("swept_edges must be nonempty");
    for (int e : swept_edges)
        if (e < 0 || e >= base.n_edges())
            throw ConfigError("swept_edges contains an invalid edge index");
    if (!sweep_scales.empty() && sweep_scales.size() != swept_edges.size())
        throw ConfigError("sweep_scales must match swept_edges in length");
    for (double s : sweep_scales)
        if (s == 0.0) throw ConfigError("sweep_scales must be nonzero");
    for (double c : c_values)
        if (c == 0.0) throw ConfigError("c_values must not contain 0");
}

namespace {

SystemView system_at(const SweepSpec& spec, double c) {
    if (spec.reduced3) return make_reduced3_system(c);
    NetworkSpec s = spec.base;
    for (std::size_t k = 0; k < spec.swept_edges.size(); ++k) {
        const double scale = spec.sweep_scales.empty() ? 1.0 : spec.sweep_scales[k];
        s.c[spec.swept_edges[k]] = scale * c;
    }
    return make_system(s);
}

double point_distance(const Vec& p, const Vec& q) {
    return (p - q).lpNorm<Eigen::Infinity>();
}

// Nearest-neighbor injective matching from new records to previous branch
// carriers, rejecting links longer than the threshold.
std::vector<int> link_branches(const std::vector<EquilibriumRecord>& prev,
                               const std::vector<int>& prev_ids,
                               const std::vector<EquilibriumRecord>& next,
                               int& n_branches) {
    double threshold = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < prev.size(); ++i)
        for (std::size_t j = i + 1; j < prev.size(); ++j)
            threshold = std::min(threshold,
                                 0.5 * point_distance(prev[i].point, prev[j].point));

    struct Candidate {
        double dist;
        int next_idx;
        int prev_idx;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < next.size(); ++i)
        for (std::size_t j = 0; j < prev.size(); ++j) {
            const double d = point_distance(next[i].point, prev[j].point);
            if (d < threshold)
                candidates.push_back({d, static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.dist != b.dist) return a.dist < b.dist;
                  if (a.next_idx != b.next_idx) return a.next_idx < b.next_idx;
                  return a.prev_idx < b.prev_idx;
              });

    std::vector<int> ids(next.size(), -1);
    std::vector<bool> prev_taken(prev.size(), false);
    for (const Candidate& cand : candidates) {
        if (ids[cand.next_idx] != -1 || prev_taken[cand.prev_idx]) continue;
        ids[cand.next_idx] = prev_ids[cand.prev_idx];
        prev_taken[cand.prev_idx] = true;
    }
    for (int& id : ids)
        if (id == -1) id = n_branches++;
    return ids;
}

}  // namespace

std::vector<int> SweepResult::counts() const {
    std::vector<int> out;
    out.reserve(points.size());
    for (const SweepPoint& p : points) out.push_back(static_cast<int>(p.records.size()));
    return out;
}

SweepResult sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.points.reserve(spec.c_values.size());

    std::vector<Vec> warm;
    for (double c : spec.c_values) {
        const SystemView sys = system_at(spec, c);
        const EquilibriaResult eq = find_equilibria(
            sys, spec.newton, spec.warm_start ? warm : std::vector<Vec>{}, spec.jobs);
        if (eq.none_found)
            result.warnings.push_back("no equilibrium found at c = " + std::to_string(c) +
                                      " (anomaly)");
        SweepPoint point;
        point.c = c;
        point.records = eq.records;
        result.points.push_back(std::move(point));

        warm.clear();
        if (spec.warm_start)
            for (const EquilibriumRecord& rec : result.points.back().records)
                warm.push_back(rec.point);
    }

    result.branch_ids.resize(result.points.size());
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        if (k == 0) {
            for (std::size_t r = 0; r < result.points[0].records.size(); ++r)
                result.branch_ids[0].push_back(result.n_branches++);
            continue;
        }
        result.branch_ids[k] =
            link_branches(result.points[k - 1].records, result.branch_ids[k - 1],
                          result.points[k].records, result.n_branches);
    }

    for (std::size_t k = 0; k + 1 < result.points.size(); ++k) {
        const int before = static_cast<int>(result.points[k].records.size());
        const int after = static_cast<int>(result.points[k + 1].records.size());
        if (before == after) continue;
        Transition t;
        t.c_lo = std::min(result.points[k].c, result.points[k + 1].c);
        t.c_hi = std::max(result.points[k].c, result.points[k + 1].c);
        t.count_before = before;
        t.count_after = after;
        result.transitions.push_back(t);
        if (std::abs(after - before) > 2)
            result.warnings.push_back(
                "count changed by more than 2 across [" + std::to_string(t.c_lo) + ", " +
                std::to_string(t.c_hi) + "]; refine the grid in this interval");
    }
    return result;
}

double refine_transition(const SweepSpec& spec, const SweepResult& result,
                         int transition_index, double tol) {
    if (transition_index < 0 ||
        transition_index >= static_cast<int>(result.transitions.size()))
        throw ConfigError("transition_index out of range");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");

    const Transition& t = result.transitions[transition_index];
    // grid order endpoints
    double c_a = t.c_lo, c_b = t.c_hi;
    int count_a, count_b;
    {
        const SweepSpec probe = spec;
        auto count_at = [&](double c) {
            const EquilibriaResult eq =
                find_equilibria(system_at(probe, c), probe.newton, {}, probe.jobs);
            return static_cast<int>(eq.records.size());
        };
        count_a = count_at(c_a);
        count_b = count_at(c_b);
        if (count_a == count_b)
            throw NumericalError("no count change across the bracket after re-solve");
        while (c_b - c_a > tol) {
            const double mid = 0.5 * (c_a + c_b);
            const int count_mid = count_at(mid);
            if (count_mid == count_a) {
                c_a = mid;
            } else if (count_mid == count_b) {
                c_b = mid;
            } else {
                throw NumericalError(
                    "count at midpoint matches neither bracket end; more than one "
                    "transition inside [" +
                    std::to_string(t.c_lo) + ", " + std::to_string(t.c_hi) +
                    "] - use a finer initial grid");
            }
        }
    }
    return 0.5 * (c_a + c_b);
}

std::string stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "unknown";
}

void export_diagram_csv(std::ostream& os, const SweepResult& result,
                        int projection_coordinate, const std::string& projection_name) {
    os << "c,branch_id," << projection_name << ",stability\n";
    os.precision(17);
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        const SweepPoint& p = result.points[k];
        for (std::size_t r = 0; r < p.records.size(); ++r) {
            os << p.c << "," << result.branch_ids[k][r] << ","
               << p.records[r].point[projection_coordinate] << ","
               << stability_name(p.records[r].stability) << "\n";
        }
    }
}

}  // namespace rnnhl
