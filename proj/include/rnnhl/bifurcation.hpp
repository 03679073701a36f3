#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rnnhl/equilibria.hpp"
#include "rnnhl/model.hpp"

namespace rnnhl {

// Sweep of the learning-rate parameter(s). Either the single c of the
// reduced system, or a subset of a network's edges whose c values are set
// to scale_k * c at each grid value (scales default to 1, i.e. a joint
// uniform sweep).
struct SweepSpec {
    bool reduced3 = false;
    NetworkSpec base;
    std::vector<int> swept_edges;
    std::vector<double> sweep_scales;
    std::vector<double> c_values; // monotone, length >= 2
    NewtonConfig newton;
    bool warm_start = true;
    int jobs = 1;

    void validate() const;
};

struct SweepPoint {
    double c = 0.0;
    std::vector<EquilibriumRecord> records;
};

struct Transition {
    double c_lo = 0.0;
    double c_hi = 0.0;
    int count_before = 0; // grid order
    int count_after = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<std::vector<int>> branch_ids; // [grid index][record index]
    int n_branches = 0;
    std::vector<Transition> transitions;
    std::vector<std::string> warnings;

    std::vector<int> counts() const;
};

// Solves the equilibrium set at every grid value (warm-started from the
// previous point), links branches by nearest neighbor with threshold half
// the minimum inter-equilibrium distance, and reports count changes.
SweepResult sweep(const SweepSpec& spec);

// Bisects a detected count-change interval with a full equilibrium re-solve
// per midpoint until the bracket is narrower than tol; returns the
// midpoint. Throws NumericalError when the midpoint count matches neither
// end (more than one transition inside the bracket).
double refine_transition(const SweepSpec& spec, const SweepResult& result,
                         int transition_index, double tol);

// CSV rows (c, branch_id, projected coordinate, stability) with one row per
// (grid value, equilibrium).
void export_diagram_csv(std::ostream& os, const SweepResult& result,
                        int projection_coordinate = 0,
                        const std::string& projection_name = "x_1");

std::string stability_name(Stability s);

}  // namespace rnnhl
