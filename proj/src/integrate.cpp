#include "rnnhl/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rnnhl/equilibria.hpp"
#include "rnnhl/parallel.hpp"
#include "rnnhl/rng.hpp"

namespace rnnhl {

void IntegrationConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!(t_max > 0.0)) throw ConfigError("t_max must be > 0");
    if (!(abs_tol > 0.0)) throw ConfigError("abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be > 0");
    if (record_every < 1) throw ConfigError("record_every must be >= 1");
    if (!(convergence_eps > 0.0)) throw ConfigError("convergence_eps must be > 0");
    if (burn_in < 0.0) throw ConfigError("burn_in must be >= 0");
}

namespace {

struct StepMonitor {
    const SystemView& sys;
    const IntegrationConfig& cfg;
    Trajectory& traj;
    Vec diverge_limit;
    long accepted = 0;

    StepMonitor(const SystemView& s, const IntegrationConfig& c, Trajectory& t)
        : sys(s), cfg(c), traj(t) {
        diverge_limit = Vec(s.dim);
        for (int i = 0; i < s.dim; ++i)
            diverge_limit[i] = 1e6 * (1.0 + s.bounds[i]);
    }

    void record(double t, const Vec& y) {
        traj.times.push_back(t);
        traj.states.push_back(y);
    }

    // Returns true when integration should stop at this accepted step.
    bool on_accepted(double t, const Vec& y) {
        ++accepted;
        bool stop = false;
        if (!y.allFinite()) {
            traj.terminal_reason = TerminalReason::diverged;
            stop = true;
        } else {
            for (int i = 0; i < y.size() && !stop; ++i)
                if (std::abs(y[i]) > diverge_limit[i]) {
                    traj.terminal_reason = TerminalReason::diverged;
                    stop = true;
                }
        }
        if (!stop && t >= cfg.burn_in &&
            sys.field(y).lpNorm<Eigen::Infinity>() < cfg.convergence_eps) {
            traj.terminal_reason = TerminalReason::converged;
            stop = true;
        }
        if (stop || accepted % cfg.record_every == 0) record(t, y);
        if (stop) {
            traj.terminal_time = t;
            traj.terminal_state = y;
        }
        return stop;
    }

    void finish_horizon(double t, const Vec& y) {
        if (traj.times.empty() || traj.times.back() != t) record(t, y);
        traj.terminal_reason = TerminalReason::horizon;
        traj.terminal_time = t;
        traj.terminal_state = y;
    }
};

void run_rk4(const SystemView& sys, Vec y, const IntegrationConfig& cfg,
             StepMonitor& mon) {
    double t = 0.0;
    mon.record(t, y);
    while (t < cfg.t_max) {
        const double h = std::min(cfg.dt, cfg.t_max - t);
        const Vec k1 = sys.field(y);
        const Vec k2 = sys.field(y + 0.5 * h * k1);
        const Vec k3 = sys.field(y + 0.5 * h * k2);
        const Vec k4 = sys.field(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        if (mon.on_accepted(t, y)) return;
    }
    mon.finish_horizon(t, y);
}

// Dormand-Prince 5(4) with FSAL.
void run_rk45(const SystemView& sys, Vec y, const IntegrationConfig& cfg,
              StepMonitor& mon) {
    static const double a21 = 1.0 / 5.0;
    static const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                        a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
    static const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static const double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
    static const double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
    static const double e4 = 125.0 / 192.0 - 393.0 / 640.0;
    static const double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
    static const double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
    static const double e7 = -1.0 / 40.0;

    double t = 0.0;
    double h = std::min(cfg.dt, cfg.t_max);
    const double h_min = 1e-14 * cfg.t_max;
    mon.record(t, y);
    Vec k1 = sys.field(y);
    while (t < cfg.t_max) {
        h = std::min(h, cfg.t_max - t);
        const Vec k2 = sys.field(y + h * (a21 * k1));
        const Vec k3 = sys.field(y + h * (a31 * k1 + a32 * k2));
        const Vec k4 = sys.field(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = sys.field(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 =
            sys.field(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = sys.field(y5);
        const Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err_norm = 0.0;
        for (int i = 0; i < y.size(); ++i) {
            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double q = err[i] / scale;
            err_norm += q * q;
        }
        err_norm = std::sqrt(err_norm / y.size());

        if (!std::isfinite(err_norm)) {
            mon.traj.terminal_reason = TerminalReason::diverged;
            mon.record(t, y);
            mon.traj.terminal_time = t;
            mon.traj.terminal_state = y;
            return;
        }

        if (err_norm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // FSAL
            if (mon.on_accepted(t, y)) return;
        }
        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        h *= factor;
        if (h < h_min) {
            mon.traj.terminal_reason = TerminalReason::diverged;
            mon.record(t, y);
            mon.traj.terminal_time = t;
            mon.traj.terminal_state = y;
            return;
        }
    }
    mon.finish_horizon(t, y);
}

}  // namespace

Trajectory integrate(const SystemView& sys, const Vec& s0, const IntegrationConfig& cfg) {
    cfg.validate();
    if (s0.size() != sys.dim)
        throw ConfigError("initial state has dimension " + std::to_string(s0.size()) +
                          " but the system requires " + std::to_string(sys.dim));
    if (!s0.allFinite()) throw ConfigError("initial state must be finite");

    Trajectory traj;
    traj.terminal_state = s0;
    StepMonitor mon(sys, cfg, traj);
    if (cfg.method == Method::rk4_fixed)
        run_rk4(sys, s0, cfg, mon);
    else
        run_rk45(sys, s0, cfg, mon);
    return traj;
}

Trajectory integrate(const NetworkSpec& spec, const Vec& s0, const IntegrationConfig& cfg) {
    return integrate(make_system(spec), s0, cfg);
}

InvarianceReport check_forward_invariance(const NetworkSpec& spec, int n_samples,
                                          const IntegrationConfig& cfg,
                                          std::uint64_t seed, int jobs) {
    if (!spec.autonomous())
        throw ConfigError("forward-invariance check requires u = 0");
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    const SystemView sys = make_system(spec);
    const InvariantBox box = invariant_box(spec);
    const double box_scale = std::max(box.x_bound, box.w_bound);

    IntegrationConfig run_cfg = cfg;
    run_cfg.record_every = 1; // excursion is measured on every accepted step

    // Half the samples start on a face of the box, half strictly inside.
    std::vector<Vec> starts(n_samples);
    Rng rng(seed);
    for (int k = 0; k < n_samples; ++k) {
        Vec s(sys.dim);
        for (int i = 0; i < sys.dim; ++i)
            s[i] = rng.uniform(-sys.bounds[i], sys.bounds[i]);
        if (k % 2 == 0) {
            const int face = static_cast<int>(rng.below(sys.dim));
            s[face] = rng.bernoulli(0.5) ? sys.bounds[face] : -sys.bounds[face];
        }
        starts[k] = s;
    }

    InvarianceReport report;
    report.samples = n_samples;
    report.allowance = 1e-6 * box_scale;

    std::vector<double> excursions(n_samples, 0.0);
    parallel_for(n_samples, jobs, [&](int k) {
        const Trajectory traj = integrate(sys, starts[k], run_cfg);
        double worst = 0.0;
        for (const Vec& y : traj.states)
            for (int i = 0; i < y.size(); ++i)
                worst = std::max(worst, std::abs(y[i]) - sys.bounds[i]);
        excursions[k] = worst;
    });
    for (double e : excursions) {
        report.max_excursion = std::max(report.max_excursion, e);
        if (e > report.allowance) ++report.violations;
    }
    report.pass = report.violations == 0;
    return report;
}

LyapunovSeries lyapunov_monitor(double c, const ReducedState3& s0,
                                const IntegrationConfig& cfg) {
    IntegrationConfig run_cfg = cfg;
    run_cfg.record_every = 1;
    Vec start(3);
    start << s0.x1, s0.x2, s0.w;

    LyapunovSeries series;
    series.trajectory = integrate(make_reduced3_system(c), start, run_cfg);
    series.times = series.trajectory.times;
    series.values.reserve(series.times.size());
    for (const Vec& y : series.trajectory.states) {
        const double d = y[0] - y[1];
        series.values.push_back(0.5 * d * d);
    }

    constexpr double kSlack = 1e-10;
    series.max_increase = 0.0;
    for (std::size_t k = 0; k + 1 < series.values.size(); ++k) {
        if (series.times[k] < cfg.burn_in) continue;
        series.max_increase =
            std::max(series.max_increase, series.values[k + 1] - series.values[k]);
    }
    series.non_increasing_after_burn_in = series.max_increase <= kSlack;
    return series;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& state_columns) {
    os << "t";
    for (const std::string& name : state_columns) os << "," << name;
    os << "\n";
    os.precision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        os << traj.times[k];
        for (int i = 0; i < traj.states[k].size(); ++i) os << "," << traj.states[k][i];
        os << "\n";
    }
}

std::vector<std::string> state_column_names(const NetworkSpec& spec) {
    std::vector<std::string> names;
    names.reserve(spec.dim());
    for (int k = 0; k < spec.n; ++k) names.push_back("x_" + std::to_string(k + 1));
    for (const Edge& e : spec.edges)
        names.push_back("w_" + std::to_string(e.i + 1) + "_" + std::to_string(e.j + 1));
    return names;
}

std::vector<std::string> reduced3_column_names() { return {"x_1", "x_2", "w"}; }

}  // namespace rnnhl
