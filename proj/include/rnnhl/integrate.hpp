#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rnnhl/model.hpp"

namespace rnnhl {

enum class Method { rk4_fixed, rk45_adaptive };

struct IntegrationConfig {
    Method method = Method::rk45_adaptive;
    double dt = 1e-2;      // fixed step, or initial step for the adaptive scheme
    double t_max = 500.0;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int record_every = 10; // sampling stride over accepted steps
    double convergence_eps = 1e-8; // inf-norm of the field declares convergence
    double burn_in = 10.0;         // time before convergence tests begin

    void validate() const;
};

enum class TerminalReason { converged, horizon, diverged };

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    TerminalReason terminal_reason = TerminalReason::horizon;
    double terminal_time = 0.0;
    Vec terminal_state;
};

Trajectory integrate(const SystemView& sys, const Vec& s0, const IntegrationConfig& cfg);
Trajectory integrate(const NetworkSpec& spec, const Vec& s0, const IntegrationConfig& cfg);

// Samples points on and inside the invariant box, integrates each, and
// reports the worst outward excursion. Passes when the excursion stays
// within the integration-tolerance allowance 1e-6 * box scale.
struct InvarianceReport {
    int samples = 0;
    int violations = 0;
    double max_excursion = 0.0;
    double allowance = 0.0;
    bool pass = false;
};

InvarianceReport check_forward_invariance(const NetworkSpec& spec, int n_samples,
                                          const IntegrationConfig& cfg,
                                          std::uint64_t seed, int jobs = 1);

// V(t) = (x1 - x2)^2 / 2 along a reduced-system trajectory; flags whether
// the series is non-increasing (1e-10 slack) once past burn_in.
struct LyapunovSeries {
    std::vector<double> times;
    std::vector<double> values;
    bool non_increasing_after_burn_in = false;
    double max_increase = 0.0;
    Trajectory trajectory;
};

LyapunovSeries lyapunov_monitor(double c, const ReducedState3& s0,
                                const IntegrationConfig& cfg);

// CSV export: header "t,x_1..x_n,w_<i>_<j>.." (1-based node ids), one row
// per sample in full double precision.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& state_columns);
std::vector<std::string> state_column_names(const NetworkSpec& spec);
std::vector<std::string> reduced3_column_names();

}  // namespace rnnhl
