#include "rnnhl/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <sstream>

#include "rnnhl/integrate.hpp"
#include "rnnhl/parallel.hpp"
#include "rnnhl/presets.hpp"
#include "rnnhl/rng.hpp"
#include "rnnhl/stability.hpp"

namespace rnnhl {

namespace {

constexpr double kPaperC0 = -123.7215;

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& msg) {
        if (!ok) {
            pass = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << msg;
        }
    }
    void note(const std::string& msg) {
        if (detail.tellp() > 0) detail << "; ";
        detail << msg;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// 1. critical value from the Lambert-W closed form
void check_critical_c(Check& chk, int) {
    const double c0 = critical_c0();
    chk.require(std::abs(c0 - kPaperC0) < 5e-4,
                "c0 = " + fmt(c0) + " differs from " + fmt(kPaperC0));
    chk.note("c0 = " + fmt(c0));
}

// 2. reduced-system sweep count signature and transition location
void check_pitchfork(Check& chk, int jobs) {
    const double c0 = critical_c0();
    SweepSpec spec = reduced3_sweep(-150.0, -3.0, 128, 1);
    spec.jobs = jobs;
    const SweepResult result = sweep(spec);
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        const double c = result.points[k].c;
        const int count = static_cast<int>(result.points[k].records.size());
        if (c < c0 - 0.5)
            chk.require(count == 3, "count " + std::to_string(count) + " at c = " + fmt(c));
        if (c > c0 + 0.5)
            chk.require(count == 1, "count " + std::to_string(count) + " at c = " + fmt(c));
    }
    chk.require(result.transitions.size() == 1,
                "expected one transition, found " +
                    std::to_string(result.transitions.size()));
    if (result.transitions.size() == 1) {
        const double c_star = refine_transition(spec, result, 0, 1e-4);
        chk.require(std::abs(c_star - c0) < 1e-3,
                    "refined transition " + fmt(c_star) + " vs c0 = " + fmt(c0));
        chk.note("transition at " + fmt(c_star));
    }
}

// 3. stability exchange across the fork
void check_stability_exchange(Check& chk, int jobs) {
    NewtonConfig cfg;
    cfg.seed = 1;
    const EquilibriaResult low = find_reduced3_equilibria(-150.0, cfg, jobs);
    chk.require(low.records.size() == 3,
                "c=-150: expected 3 equilibria, got " + std::to_string(low.records.size()));
    if (low.records.size() == 3) {
        chk.require(low.records[0].stability == Stability::stable, "c=-150: low branch not stable");
        chk.require(low.records[1].stability == Stability::unstable,
                    "c=-150: middle branch not unstable");
        chk.require(low.records[2].stability == Stability::stable, "c=-150: high branch not stable");
        chk.require(low.records[1].symmetry_tag == SymmetryTag::on_plane_L,
                    "c=-150: unstable equilibrium is off the plane");
        chk.require(low.records[0].symmetry_tag == SymmetryTag::off_plane &&
                        low.records[2].symmetry_tag == SymmetryTag::off_plane,
                    "c=-150: stable pair not off-plane");
    }
    const EquilibriaResult high = find_reduced3_equilibria(-3.0, cfg, jobs);
    chk.require(high.records.size() == 1,
                "c=-3: expected 1 equilibrium, got " + std::to_string(high.records.size()));
    if (!high.records.empty())
        chk.require(high.records[0].stability == Stability::stable,
                    "c=-3: equilibrium not stable");
}

// 4. closed-form eigenvalues against the dense solver
void check_closed_form_eigenvalues(Check& chk, int) {
    for (int k = 0; k < 50; ++k) {
        const double c = -200.0 + 250.0 * k / 49.0;
        if (c == 0.0) continue;
        const Reduced3Eigenvalues cf = reduced3_eigenvalues_closed_form(c);
        const double xh = symmetric_diagonal_root(c);
        const ReducedState3 eq{xh, xh, c * sigmoid(xh) * sigmoid(xh)};
        auto dense = eigen_dense(reduced3_jacobian(c, eq));

        std::vector<std::complex<double>> closed{{cf.lambda1, 0.0}, cf.lambda2, cf.lambda3};
        std::sort(closed.begin(), closed.end(), [](const auto& p, const auto& q) {
            if (p.real() != q.real()) return p.real() < q.real();
            return p.imag() < q.imag();
        });
        for (int i = 0; i < 3; ++i) {
            const double err = std::abs(closed[i] - dense[i]);
            chk.require(err < 1e-9, "eigenvalue mismatch " + fmt(err) + " at c = " + fmt(c));
        }
    }
}

// 5. single-synapse motif: always exponentially stable
void check_single_synapse(Check& chk, int jobs) {
    const int n = 500;
    std::vector<std::array<double, 4>> draws(n);
    Rng rng(5);
    for (auto& d : draws) {
        d[0] = rng.uniform(0.1, 10.0);
        d[1] = rng.uniform(0.1, 10.0);
        d[2] = rng.uniform(0.1, 10.0);
        d[3] = rng.uniform_nonzero(-100.0, 100.0, 1e-9);
    }
    std::vector<char> ok(n, 0);
    std::vector<std::string> msgs(n);
    parallel_for(n, jobs, [&](int k) {
        const auto& d = draws[k];
        const SingleSynapseStability s = single_synapse_stability(d[0], d[1], d[2], d[3]);
        const bool good = s.report.determinant < 0.0 && s.report.leading_real < 0.0;
        ok[k] = good ? 1 : 0;
        if (!good)
            msgs[k] = "draw " + std::to_string(k) + ": det = " + fmt(s.report.determinant) +
                      ", leading = " + fmt(s.report.leading_real);
    });
    for (int k = 0; k < n; ++k) chk.require(ok[k] != 0, msgs[k]);
}

// 6. contraction certificate soundness under multi-start Newton
void check_contraction_uniqueness(Check& chk, int jobs) {
    Rng rng(6);
    int accepted = 0;
    while (accepted < 50) {
        const double a1 = rng.uniform(1.05, 4.0);
        const double a2 = rng.uniform(1.05, 4.0);
        const double b1 = rng.uniform(0.5, 3.0);
        const double b2 = rng.uniform(0.5, 3.0);
        const double c1 = rng.uniform_nonzero(-2.0, 2.0, 0.05);
        const double c2 = rng.uniform_nonzero(-2.0, 2.0, 0.05);
        const NetworkSpec motif = motif_bidirectional(a1, a2, b1, b2, c1, c2);
        if (!contraction_certificate(motif).unique_guaranteed) continue;
        ++accepted;

        NewtonConfig cfg;
        cfg.n_starts = 512;
        cfg.seed = accepted;
        const EquilibriaResult eq = find_equilibria(motif, cfg, jobs);
        chk.require(eq.records.size() == 1,
                    "certified spec #" + std::to_string(accepted) + " produced " +
                        std::to_string(eq.records.size()) + " equilibria");
    }
}

// 7. convergence to the on-plane equilibrium at c = -15 with a monotone
//    Lyapunov monitor
void check_global_stability(Check& chk, int jobs) {
    const double c = -15.0;
    const double xh = symmetric_diagonal_root(c);
    Vec target(3);
    target << xh, xh, c * sigmoid(xh) * sigmoid(xh);

    const int n = 100;
    std::vector<ReducedState3> starts(n);
    Rng rng(7);
    for (auto& s : starts) {
        s.x1 = rng.uniform(-15.0, 15.0);
        s.x2 = rng.uniform(-15.0, 15.0);
        s.w = rng.uniform(-15.0, 15.0);
    }
    IntegrationConfig cfg; // defaults: rk45, t_max 500, burn_in 10
    std::vector<char> ok(n, 0);
    std::vector<std::string> msgs(n);
    parallel_for(n, jobs, [&](int k) {
        const LyapunovSeries series = lyapunov_monitor(c, starts[k], cfg);
        const double dist =
            (series.trajectory.terminal_state - target).lpNorm<Eigen::Infinity>();
        std::string msg;
        if (dist >= 1e-6)
            msg = "start " + std::to_string(k) + " ended " + fmt(dist) + " from the target";
        if (!series.non_increasing_after_burn_in)
            msg += std::string(msg.empty() ? "" : "; ") + "start " + std::to_string(k) +
                   ": V increased by " + fmt(series.max_increase);
        ok[k] = msg.empty() ? 1 : 0;
        msgs[k] = msg;
    });
    for (int k = 0; k < n; ++k) chk.require(ok[k] != 0, msgs[k]);
}

// 8. root structure of f and its agreement with Newton counts
void check_f_roots(Check& chk, int jobs) {
    chk.require(count_f_roots(-100.0).size() == 1, "c=-100: expected 1 root");
    chk.require(count_f_roots(-150.0).size() == 3, "c=-150: expected 3 roots");
    NewtonConfig cfg;
    cfg.seed = 8;
    for (int k = 0; k < 20; ++k) {
        const double c = -200.0 + 197.0 * k / 19.0; // [-200, -3]
        const std::size_t roots = count_f_roots(c).size();
        const std::size_t eqs = find_reduced3_equilibria(c, cfg, jobs).records.size();
        chk.require(roots == eqs, "c = " + fmt(c) + ": " + std::to_string(roots) +
                                      " roots vs " + std::to_string(eqs) + " equilibria");
    }
}

// 9. two-equilibria window of the detuned asymmetric motif. The equilibria
//    of the motif coincide with the zeros of a continuous function that
//    diverges to -inf and +inf at the ends of its admissible interval, so
//    their number is odd away from fold points; an open window with
//    exactly 2 cannot exist, and this criterion is expected to fail. It is
//    kept faithful to the stated acceptance contract rather than weakened.
void check_imperfect_pitchfork(Check& chk, int jobs) {
    std::vector<std::vector<double>> windows;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SweepSpec spec = motif_fig2b_sweep(-30.0, -3.0, 128, seed);
        spec.jobs = jobs;
        const SweepResult result = sweep(spec);
        std::vector<double> window;
        for (const SweepPoint& p : result.points)
            if (p.records.size() == 2) window.push_back(p.c);
        windows.push_back(window);
    }
    chk.require(!windows[0].empty(), "no grid value with exactly 2 equilibria");
    for (std::size_t s = 1; s < windows.size(); ++s)
        chk.require(windows[s] == windows[0],
                    "2-equilibria window differs between seeds 1 and " +
                        std::to_string(s + 1));
}

// 10. moderate-network trend: interconnection learning drives multiplicity
void check_network_trend(Check& chk, int jobs) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SweepSpec spec = preset_interconnected_sweep(3, seed);
        spec.jobs = jobs;
        const std::vector<int> counts = sweep(spec).counts();
        // grid runs from the most negative c to the least negative
        chk.require(counts.back() == 1, "3+3 seed " + std::to_string(seed) +
                                            ": count at least-negative c is " +
                                            std::to_string(counts.back()));
        chk.require(counts.front() == 3, "3+3 seed " + std::to_string(seed) +
                                             ": count at most-negative c is " +
                                             std::to_string(counts.front()));
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SweepSpec spec = preset_interconnected_sweep(5, seed);
        spec.jobs = jobs;
        const std::vector<int> counts = sweep(spec).counts();
        chk.require(counts.front() > counts.back(),
                    "5+5 seed " + std::to_string(seed) + ": " +
                        std::to_string(counts.front()) + " vs " +
                        std::to_string(counts.back()));
    }
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SweepSpec spec = preset_random12_sweep(seed);
        spec.jobs = jobs;
        const std::vector<int> counts = sweep(spec).counts();
        chk.require(counts.front() > counts.back(),
                    "random-12 seed " + std::to_string(seed) + ": " +
                        std::to_string(counts.front()) + " vs " +
                        std::to_string(counts.back()));
    }
}

// 11. numerical hygiene: activation sanity, Jacobians vs finite
//     differences, RK4 order, forward invariance
void check_hygiene(Check& chk, int jobs, const VerifyHooks& hooks) {
    const auto phi = hooks.sigmoid_fn ? hooks.sigmoid_fn
                                      : std::function<double(double)>(
                                            [](double z) { return sigmoid(z); });
    chk.require(phi(0.0) == 0.5, "phi(0) != 1/2");
    chk.require(phi(40.0) > 1.0 - 1e-17 && phi(40.0) <= 1.0, "phi(40) not saturated");
    const double h = 1e-6;
    const double fd = (phi(1.0 + h) - phi(1.0 - h)) / (2.0 * h);
    chk.require(std::abs(fd - phi(1.0) * (1.0 - phi(1.0))) < 1e-9,
                "phi'(1) differs from the difference quotient");
    for (double z : {-3.0, -0.5, 0.25, 2.0})
        chk.require(std::abs(phi(z) + phi(-z) - 1.0) < 1e-15,
                    "phi(z) + phi(-z) != 1 at z = " + fmt(z));

    // analytic Jacobians vs central differences on random specs and states
    Rng rng(11);
    int checked = 0;
    while (checked < 100) {
        TopologyConfig tc;
        tc.kind = TopologyKind::random_mixed;
        tc.n = 2 + static_cast<int>(rng.below(4));
        tc.density = 0.8;
        tc.bidirectional_fraction = 0.5;
        tc.seed = rng.next_u64();
        GeneratedNetwork net;
        try {
            net = build_random_mixed(tc);
        } catch (const ConfigError&) {
            continue; // sampled graph had nothing bidirectional; redraw
        }
        ++checked;
        const NetworkSpec& spec = net.spec;
        Vec s(spec.dim());
        for (int i = 0; i < spec.dim(); ++i) s[i] = rng.uniform(-3.0, 3.0);
        const Mat J = jacobian(spec, s);
        double worst = 0.0;
        for (int col = 0; col < spec.dim(); ++col) {
            const double hcol = 1e-6 * std::max(1.0, std::abs(s[col]));
            Vec sp = s, sm = s;
            sp[col] += hcol;
            sm[col] -= hcol;
            const Vec diff = (vector_field(spec, sp) - vector_field(spec, sm)) / (2.0 * hcol);
            for (int row = 0; row < spec.dim(); ++row) {
                const double rel = std::abs(J(row, col) - diff[row]) /
                                   std::max({1.0, std::abs(J(row, col)), std::abs(diff[row])});
                worst = std::max(worst, rel);
            }
        }
        chk.require(worst < 1e-5, "Jacobian mismatch " + fmt(worst) + " on sample " +
                                      std::to_string(checked));
    }

    // RK4 order: halving dt shrinks the endpoint error ~16x
    {
        const SystemView sys = make_reduced3_system(-3.0);
        Vec s0(3);
        s0 << 1.3, -0.7, 0.4;
        IntegrationConfig cfg;
        cfg.method = Method::rk4_fixed;
        cfg.t_max = 1.0;
        cfg.convergence_eps = 1e-300;
        cfg.burn_in = 1e9;
        cfg.record_every = 1000000;
        const auto endpoint = [&](double dt) {
            IntegrationConfig c2 = cfg;
            c2.dt = dt;
            return integrate(sys, s0, c2).terminal_state;
        };
        const Vec ref = endpoint(1e-4);
        const double e1 = (endpoint(0.02) - ref).lpNorm<Eigen::Infinity>();
        const double e2 = (endpoint(0.01) - ref).lpNorm<Eigen::Infinity>();
        const double ratio = e1 / e2;
        chk.require(ratio > 12.0 && ratio < 20.0, "RK4 error ratio " + fmt(ratio));
    }

    // invariant box holds along trajectories
    {
        const NetworkSpec motif = motif_bidirectional(1, 1, 1, 1, -3, -3);
        IntegrationConfig cfg;
        cfg.t_max = 60.0;
        const InvarianceReport report = check_forward_invariance(motif, 200, cfg, 11, jobs);
        chk.require(report.violations == 0,
                    std::to_string(report.violations) + " invariance violations, worst " +
                        fmt(report.max_excursion));
    }
}

using CheckFn = std::function<void(Check&, int, const VerifyHooks&)>;

struct Criterion {
    std::string name;
    CheckFn fn;
    double budget_seconds = 0.0; // 0 = no runtime requirement
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> table = {
        {"critical-c", [](Check& c, int j, const VerifyHooks&) { check_critical_c(c, j); },
         1.0},
        {"pitchfork", [](Check& c, int j, const VerifyHooks&) { check_pitchfork(c, j); },
         60.0},
        {"stability-exchange",
         [](Check& c, int j, const VerifyHooks&) { check_stability_exchange(c, j); }},
        {"closed-form-eigenvalues",
         [](Check& c, int j, const VerifyHooks&) { check_closed_form_eigenvalues(c, j); }},
        {"single-synapse-stability",
         [](Check& c, int j, const VerifyHooks&) { check_single_synapse(c, j); }, 10.0},
        {"contraction-uniqueness",
         [](Check& c, int j, const VerifyHooks&) { check_contraction_uniqueness(c, j); }},
        {"global-stability",
         [](Check& c, int j, const VerifyHooks&) { check_global_stability(c, j); }},
        {"f-root-structure", [](Check& c, int j, const VerifyHooks&) { check_f_roots(c, j); }},
        {"imperfect-pitchfork",
         [](Check& c, int j, const VerifyHooks&) { check_imperfect_pitchfork(c, j); }},
        {"network-trend",
         [](Check& c, int j, const VerifyHooks&) { check_network_trend(c, j); }, 600.0},
        {"numerical-hygiene",
         [](Check& c, int j, const VerifyHooks& h) { check_hygiene(c, j, h); }},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Criterion& crit : criteria()) out.push_back(crit.name);
        return out;
    }();
    return names;
}

VerifyReport run_verify(const std::string& selector, int jobs, const VerifyHooks& hooks) {
    std::vector<const Criterion*> selected;
    for (const Criterion& crit : criteria())
        if (selector == "all" || selector == crit.name) selected.push_back(&crit);
    if (selected.empty()) throw ConfigError("unknown verify suite: " + selector);

    VerifyReport report;
    report.all_pass = true;
    for (const Criterion* crit : selected) {
        Check chk;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            crit->fn(chk, jobs, hooks);
        } catch (const std::exception& ex) {
            chk.require(false, std::string("exception: ") + ex.what());
        }
        const auto t1 = std::chrono::steady_clock::now();
        CriterionResult res;
        res.name = crit->name;
        res.seconds = std::chrono::duration<double>(t1 - t0).count();
        if (crit->budget_seconds > 0.0)
            chk.require(res.seconds < crit->budget_seconds,
                        "took " + fmt(res.seconds) + " s, budget " +
                            fmt(crit->budget_seconds) + " s");
        res.pass = chk.pass;
        res.detail = chk.detail.str();
        report.all_pass = report.all_pass && res.pass;
        report.results.push_back(std::move(res));
    }
    return report;
}

}  // namespace rnnhl
