#include "rnnhl/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

#include "rnnhl/parallel.hpp"
#include "rnnhl/rng.hpp"
#include "rnnhl/stability.hpp"

namespace rnnhl {

InvariantBox invariant_box(const NetworkSpec& spec) {
    spec.validate();
    if (!spec.autonomous())
        throw ConfigError("invariant box requires u = 0");
    if (spec.n_edges() == 0)
        throw ConfigError("invariant box requires at least one edge");

    double cmax = 0.0, bmin = spec.b[0], amin = spec.a[0];
    for (double v : spec.c) cmax = std::max(cmax, std::abs(v));
    for (double v : spec.b) bmin = std::min(bmin, v);
    for (double v : spec.a) amin = std::min(amin, v);

    InvariantBox box;
    box.w_bound = cmax / bmin;
    box.x_bound = box.w_bound / amin;
    return box;
}

Eigen::Vector4d fixed_point_map_F(const NetworkSpec& motif, const Eigen::Vector4d& X) {
    if (!is_bidirectional_motif(motif))
        throw ConfigError("fixed-point map requires the bidirectional motif");
    const double p1 = sigmoid(X[0]);
    const double p2 = sigmoid(X[1]);
    Eigen::Vector4d out;
    out[0] = X[3] * p2 / motif.a[0];
    out[1] = X[2] * p1 / motif.a[1];
    out[2] = motif.c[0] * p1 * p2 / motif.b[0];
    out[3] = motif.c[1] * p1 * p2 / motif.b[1];
    return out;
}

double lambert_w0(double y) {
    static const double kBranch = -std::exp(-1.0);
    if (!(y >= kBranch)) {
        if (y > kBranch - 1e-15) y = kBranch; // absorb rounding at the branch point
        else throw NumericalError("Lambert W0 undefined for y < -1/e");
    }
    if (y == 0.0) return 0.0;

    double w;
    if (y < -0.3235) {
        w = -1.0 + std::sqrt(2.0 * (1.0 + std::exp(1.0) * y));
    } else if (y < 1.0) {
        w = y * (1.0 + y * (-1.0 + y * (1.5 - 8.0 / 3.0 * y)));
    } else {
        const double l1 = std::log(y);
        const double l2 = std::log(l1 > 1.0 ? l1 : 1.0 + l1);
        w = l1 - l2 + (l1 > 1.0 ? l2 / l1 : 0.0);
    }

    const double tol = 1e-14 * std::max(1.0, std::abs(y));
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - y;
        if (std::abs(f) <= tol) return w;
        const double fp = ew * (w + 1.0);
        // Halley step
        const double denom = fp - (w + 2.0) * f / (2.0 * w + 2.0);
        const double step = (denom != 0.0) ? f / denom : f / fp;
        double next = w - step;
        if (next < -1.0) next = -1.0 + 0.5 * (w + 1.0); // stay on the principal branch
        if (next == w) break;
        w = next;
    }
    if (std::abs(w * std::exp(w) - y) > 10.0 * tol)
        throw NumericalError("Lambert W0 iteration failed at y = " + std::to_string(y));
    return w;
}

double critical_xhat0() { return -lambert_w0(std::exp(-1.0)) - 1.0; }

double critical_c0() {
    const double xh0 = critical_xhat0();
    const double s = 1.0 + std::exp(-xh0);
    return xh0 * s * s * s;
}

double symmetric_diagonal_root(double c) {
    if (c == 0.0) return 0.0;
    const auto g = [c](double x) {
        const double p = sigmoid(x);
        return x - c * p * p * p;
    };
    double lo = std::min(0.0, c);
    double hi = std::max(0.0, c);
    double glo = g(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(c)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (glo * gm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 6; ++it) {
        const double p = sigmoid(x);
        const double dg = 1.0 - 3.0 * c * p * p * p * (1.0 - p);
        if (dg == 0.0) break;
        const double step = g(x) / dg;
        x -= step;
        if (std::abs(step) <= 1e-17 * (1.0 + std::abs(x))) break;
    }
    return x;
}

double beta_c(double c) {
    if (c == 0.0) throw ConfigError("beta undefined for c = 0");
    const auto h = [](double xi) { return xi * (1.0 + std::exp(-xi)); };
    // h is strictly increasing on all of R; h(c) >= c for c > 0 and
    // h(c) <= 2c for c < 0, so [min(0,c), max(0,c)] brackets the root.
    double lo = std::min(0.0, c);
    double hi = std::max(0.0, c);
    double flo = h(lo) - c;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(c)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = h(mid) - c;
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    double xi = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double e = std::exp(-xi);
        const double dh = 1.0 + e * (1.0 - xi);
        if (dh == 0.0) break;
        xi -= (h(xi) - c) / dh;
    }
    return xi;
}

double f_xi(double c, double xi) {
    if (c == 0.0) throw ConfigError("f undefined for c = 0");
    const double alpha = xi * (1.0 + std::exp(-xi)) / c;
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw NumericalError("xi = " + std::to_string(xi) +
                             " is outside the admissible interval for c = " +
                             std::to_string(c));
    const double sa = std::sqrt(alpha);
    if (!(sa < 1.0))
        throw NumericalError("sqrt(alpha) >= 1 at xi = " + std::to_string(xi));
    const double p = sigmoid(xi);
    return std::log(sa / (1.0 - sa)) - c * sa * p * p;
}

std::vector<double> count_f_roots(double c, int grid_points) {
    if (c == 0.0) throw ConfigError("f undefined for c = 0");
    if (grid_points < 1000) throw ConfigError("grid_points must be >= 1000");

    const double beta = beta_c(c);
    const double lo_raw = c > 0.0 ? 0.0 : beta;
    const double hi_raw = c > 0.0 ? beta : 0.0;
    const double inset = 1e-9 * (hi_raw - lo_raw);
    const double lo = lo_raw + inset;
    const double hi = hi_raw - inset;

    std::vector<double> roots;
    double prev_x = lo;
    double prev_f = f_xi(c, lo);
    for (int k = 1; k < grid_points; ++k) {
        const double x = lo + (hi - lo) * k / (grid_points - 1);
        const double f = f_xi(c, x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if (prev_f * f < 0.0) {
            double a = prev_x, b = x, fa = prev_f;
            while (b - a > 1e-13) {
                const double mid = 0.5 * (a + b);
                const double fm = f_xi(c, mid);
                if (fm == 0.0) { a = b = mid; break; }
                if (fa * fm < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

void NewtonConfig::validate() const {
    if (n_starts < 0) throw ConfigError("n_starts must be >= 0");
    if (max_iters <= 0) throw ConfigError("max_iters must be > 0");
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be > 0");
    if (dedup_tol != 0.0 && !(dedup_tol > newton_tol))
        throw ConfigError("dedup_tol must exceed newton_tol");
    if (max_backtracks <= 0) throw ConfigError("max_backtracks must be > 0");
}

namespace {

// Additive-recurrence low-discrepancy sequence (generalized golden ratio):
// the k-th point in [0,1)^d is frac(0.5 + (k+1) * g^{-(i+1)}) where g solves
// g^{d+1} = g + 1.
class KroneckerSequence {
public:
    explicit KroneckerSequence(int dim) : alphas_(dim) {
        double g = 1.5;
        for (int it = 0; it < 64; ++it) {
            const double p = std::pow(g, dim + 1) - g - 1.0;
            const double dp = (dim + 1) * std::pow(g, dim) - 1.0;
            g -= p / dp;
        }
        double ai = 1.0;
        for (int i = 0; i < dim; ++i) {
            ai /= g;
            alphas_[i] = ai;
        }
    }

    void point(int k, Vec& out) const {
        for (std::size_t i = 0; i < alphas_.size(); ++i) {
            const double v = 0.5 + (k + 1.0) * alphas_[i];
            out[static_cast<int>(i)] = v - std::floor(v);
        }
    }

private:
    std::vector<double> alphas_;
};

// Fresh starts are spread over geometrically shrinking copies of the
// (inflated) invariant box. Equilibria of strongly anti-Hebbian systems sit
// orders of magnitude below the box bound, and starts sampled only at box
// scale all funnel into the same saturated Newton path, so every scale level
// gets its share of points.
constexpr double kStartScaleLevels[] = {1.0, 0.25, 0.0625, 0.015625, 0.00390625};

std::vector<Vec> make_starts(const SystemView& sys, const NewtonConfig& cfg,
                             const std::vector<Vec>& warm_starts, int n_fresh) {
    const int d = sys.dim;
    const Vec sample_bounds = 1.2 * sys.bounds;
    std::vector<Vec> starts;
    starts.reserve(warm_starts.size() + n_fresh + (d <= 8 ? (1 << d) : 0) + 1);

    for (const Vec& w : warm_starts) {
        if (w.size() == d && w.allFinite()) starts.push_back(w);
    }
    starts.push_back(Vec::Zero(d));
    if (d <= 8) {
        for (int mask = 0; mask < (1 << d); ++mask) {
            Vec corner(d);
            for (int i = 0; i < d; ++i)
                corner[i] = (mask >> i & 1) ? sys.bounds[i] : -sys.bounds[i];
            starts.push_back(corner);
        }
    }

    constexpr int n_levels = static_cast<int>(std::size(kStartScaleLevels));
    const int per_level = std::max(1, n_fresh / n_levels);
    Rng rng(cfg.seed);
    for (int level = 0; level < n_levels; ++level) {
        const Vec level_bounds = kStartScaleLevels[level] * sample_bounds;
        const int count =
            level == n_levels - 1 ? n_fresh - per_level * (n_levels - 1) : per_level;
        switch (cfg.strategy) {
            case StartStrategy::low_discrepancy: {
                KroneckerSequence seq(d);
                Vec unit(d);
                for (int k = 0; k < count; ++k) {
                    seq.point(k, unit);
                    Vec s(d);
                    for (int i = 0; i < d; ++i)
                        s[i] = (2.0 * unit[i] - 1.0) * level_bounds[i];
                    starts.push_back(s);
                }
                break;
            }
            case StartStrategy::uniform_random: {
                for (int k = 0; k < count; ++k) {
                    Vec s(d);
                    for (int i = 0; i < d; ++i)
                        s[i] = rng.uniform(-level_bounds[i], level_bounds[i]);
                    starts.push_back(s);
                }
                break;
            }
            case StartStrategy::grid: {
                int per_axis = 1;
                while (std::pow(per_axis + 1, d) <= count && per_axis < 64) ++per_axis;
                int emitted = 0;
                std::vector<int> idx(d, 0);
                while (emitted < count) {
                    Vec s(d);
                    for (int i = 0; i < d; ++i) {
                        const double frac = per_axis == 1
                                                ? 0.5
                                                : static_cast<double>(idx[i]) / (per_axis - 1);
                        s[i] = (2.0 * frac - 1.0) * level_bounds[i];
                    }
                    starts.push_back(s);
                    ++emitted;
                    int axis = 0;
                    while (axis < d && ++idx[axis] == per_axis) idx[axis++] = 0;
                    if (axis == d) break;
                }
                break;
            }
        }
    }
    return starts;
}

enum class NewtonOutcome { converged, singular, stalled };

struct NewtonRun {
    NewtonOutcome outcome = NewtonOutcome::stalled;
    Vec root;
    double residual = 0.0;
};

NewtonRun newton_from(const SystemView& sys, const NewtonConfig& cfg, Vec s) {
    NewtonRun run;
    const double runaway = 1e8 * (1.0 + sys.bounds.maxCoeff());

    Vec f = sys.field(s);
    double r = f.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < cfg.max_iters; ++it) {
        if (!std::isfinite(r) || s.lpNorm<Eigen::Infinity>() > runaway) return run;
        if (r < cfg.newton_tol) {
            run.outcome = NewtonOutcome::converged;
            run.root = s;
            run.residual = r;
            return run;
        }
        Eigen::FullPivLU<Mat> lu(sys.jacobian(s));
        if (!lu.isInvertible()) {
            run.outcome = NewtonOutcome::singular;
            return run;
        }
        const Vec dir = lu.solve(-f);

        double step = 1.0;
        bool improved = false;
        Vec s_next;
        Vec f_next;
        double r_next = 0.0;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
            s_next = s + step * dir;
            f_next = sys.field(s_next);
            r_next = f_next.lpNorm<Eigen::Infinity>();
            if (std::isfinite(r_next) && r_next < r) {
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) return run; // stalled
        s = std::move(s_next);
        f = std::move(f_next);
        r = r_next;
    }
    if (r < cfg.newton_tol) {
        run.outcome = NewtonOutcome::converged;
        run.root = s;
        run.residual = r;
    }
    return run;
}

bool lex_less(const Vec& p, const Vec& q) {
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] != q[i]) return p[i] < q[i];
    }
    return false;
}

}  // namespace

EquilibriaResult find_equilibria(const SystemView& sys, const NewtonConfig& cfg,
                                 const std::vector<Vec>& warm_starts, int jobs) {
    cfg.validate();
    const int n_fresh = cfg.n_starts > 0 ? cfg.n_starts : std::max(64, 8 * sys.dim);
    const std::vector<Vec> starts = make_starts(sys, cfg, warm_starts, n_fresh);

    EquilibriaResult result;
    result.starts = static_cast<int>(starts.size());
    const double box_scale = sys.bounds.maxCoeff();
    result.dedup_tol_used =
        cfg.dedup_tol > 0.0 ? cfg.dedup_tol : 1e-6 * (1.0 + box_scale);

    std::vector<NewtonRun> runs(starts.size());
    parallel_for(static_cast<int>(starts.size()), jobs,
                 [&](int k) { runs[k] = newton_from(sys, cfg, starts[k]); });

    std::vector<const NewtonRun*> converged;
    for (const NewtonRun& run : runs) {
        switch (run.outcome) {
            case NewtonOutcome::converged:
                ++result.converged;
                converged.push_back(&run);
                break;
            case NewtonOutcome::singular: ++result.abandoned_singular; break;
            case NewtonOutcome::stalled: ++result.not_converged; break;
        }
    }
    std::sort(converged.begin(), converged.end(),
              [](const NewtonRun* p, const NewtonRun* q) {
                  return lex_less(p->root, q->root);
              });

    for (const NewtonRun* run : converged) {
        bool merged = false;
        for (EquilibriumRecord& rec : result.records) {
            if ((run->root - rec.point).lpNorm<Eigen::Infinity>() <= result.dedup_tol_used) {
                ++rec.basin_hits;
                if (run->residual < rec.residual) {
                    rec.point = run->root;
                    rec.residual = run->residual;
                }
                merged = true;
                break;
            }
        }
        if (!merged) {
            EquilibriumRecord rec;
            rec.point = run->root;
            rec.residual = run->residual;
            rec.basin_hits = 1;
            result.records.push_back(std::move(rec));
        }
    }

    for (EquilibriumRecord& rec : result.records) {
        rec.eigenvalues = eigen_dense(sys.jacobian(rec.point));
        rec.stability = classify_spectrum(rec.eigenvalues);
        rec.symmetry_tag =
            sys.classify_symmetry ? sys.classify_symmetry(rec.point) : SymmetryTag::none;
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const EquilibriumRecord& p, const EquilibriumRecord& q) {
                  return lex_less(p.point, q.point);
              });
    result.none_found = result.records.empty();
    return result;
}

EquilibriaResult find_equilibria(const NetworkSpec& spec, const NewtonConfig& cfg,
                                 int jobs) {
    if (!spec.autonomous())
        throw ConfigError("equilibrium search requires u = 0");
    return find_equilibria(make_system(spec), cfg, {}, jobs);
}

EquilibriaResult find_reduced3_equilibria(double c, const NewtonConfig& cfg, int jobs) {
    return find_equilibria(make_reduced3_system(c), cfg, {}, jobs);
}

}  // namespace rnnhl
