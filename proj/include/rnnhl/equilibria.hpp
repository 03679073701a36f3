#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rnnhl/model.hpp"

namespace rnnhl {

// Compact box containing every positive limit set of the autonomous system:
// |x_i| <= x_bound, |w_ij| <= w_bound with
//   w_bound = max|c| / min b,  x_bound = w_bound / min a.
struct InvariantBox {
    double x_bound = 0.0;
    double w_bound = 0.0;
};

InvariantBox invariant_box(const NetworkSpec& spec); // requires u = 0

// Fixed-point map of the bidirectional motif; equilibria of the motif are
// exactly its fixed points, and it maps the invariant box into itself.
// X = (x1, x2, w1, w2).
Eigen::Vector4d fixed_point_map_F(const NetworkSpec& motif, const Eigen::Vector4d& X);

// Principal branch of the Lambert W function (w e^w = y, w >= -1) for
// y >= -1/e. Halley iteration from a piecewise initial guess.
double lambert_w0(double y);

// Learning rate at which the on-plane equilibrium of the reduced system
// loses stability: c0 = xh0 (1 + e^{-xh0})^3 with xh0 = -W0(1/e) - 1,
// approximately -123.7215.
double critical_c0();
double critical_xhat0();

// Unique root of x = c phi(x)^3 (the on-plane equilibrium coordinate).
double symmetric_diagonal_root(double c);

// Root of xi (1 + e^{-xi}) = c; the admissible-interval endpoint for the
// root function below. c must be nonzero.
double beta_c(double c);

// f(xi) = ln(sqrt(alpha)/(1 - sqrt(alpha))) - c sqrt(alpha) phi(xi)^2 with
// alpha = xi (1 + e^{-xi}) / c, on (0, beta_c) for c > 0 and (beta_c, 0)
// for c < 0. Its zeros enumerate the motif equilibria in the symmetric
// case (A = 1). Throws NumericalError outside the admissible interval.
double f_xi(double c, double xi);

// Dense scan of f over the admissible interval (endpoints inset by 1e-9
// of its length), bisection-refined sign changes. Sorted ascending.
std::vector<double> count_f_roots(double c, int grid_points = 4096);

enum class Stability { stable, unstable, marginal };

struct EquilibriumRecord {
    Vec point;
    double residual = 0.0;
    std::vector<std::complex<double>> eigenvalues;
    Stability stability = Stability::marginal;
    SymmetryTag symmetry_tag = SymmetryTag::none;
    int basin_hits = 0;
};

enum class StartStrategy { grid, uniform_random, low_discrepancy };

struct NewtonConfig {
    int n_starts = 0;               // 0 = max(64, 8 * dimension)
    StartStrategy strategy = StartStrategy::low_discrepancy;
    int max_iters = 100;
    double newton_tol = 1e-11;      // residual inf-norm
    double dedup_tol = 0.0;         // 0 = 1e-6 * (1 + box scale)
    int max_backtracks = 30;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EquilibriaResult {
    std::vector<EquilibriumRecord> records; // sorted by x1 then lexicographic
    int starts = 0;
    int converged = 0;
    int abandoned_singular = 0;
    int not_converged = 0;
    bool none_found = false; // anomaly: multi-start produced no root
    double dedup_tol_used = 0.0;
};

// Multi-start damped Newton over 1.2x the invariant box. Starts combine the
// configured strategy with the box corners (dimension <= 8) and the center;
// warm_starts are prepended. Each accepted root carries eigenvalues,
// stability class and (where defined) a plane-L tag.
EquilibriaResult find_equilibria(const SystemView& sys, const NewtonConfig& cfg,
                                 const std::vector<Vec>& warm_starts = {},
                                 int jobs = 1);
EquilibriaResult find_equilibria(const NetworkSpec& spec, const NewtonConfig& cfg,
                                 int jobs = 1);
EquilibriaResult find_reduced3_equilibria(double c, const NewtonConfig& cfg,
                                          int jobs = 1);

}  // namespace rnnhl
