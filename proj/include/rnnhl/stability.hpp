#pragma once

#include <complex>
#include <vector>

#include "rnnhl/equilibria.hpp"
#include "rnnhl/model.hpp"

namespace rnnhl {

// Eigenvalues within this band of the imaginary axis classify as marginal,
// so classification cannot flip-flop from rounding right at a bifurcation.
inline constexpr double kMarginalBand = 1e-8;

// All eigenvalues of a dense real matrix (real Schur reduction). Conjugate
// pairs are returned with bitwise-negated imaginary parts; values are
// sorted by real part, then imaginary part.
std::vector<std::complex<double>> eigen_dense(const Mat& M);

struct StabilityReport {
    std::vector<std::complex<double>> eigenvalues;
    Stability classification = Stability::marginal;
    double leading_real = 0.0;
    double determinant = 0.0;
};

StabilityReport classify_matrix(const Mat& J);
Stability classify_spectrum(const std::vector<std::complex<double>>& eigenvalues);

// Closed-form spectrum of the reduced system's Jacobian at the on-plane
// equilibrium: l1 = c ph^4 - c ph^3 - 1 and the quadratic pair
// l23 = (c ph^3 - c ph^4 - 2)/2 +- sqrt((c ph^3 - c ph^4)(c ph^3 - c ph^4 + 8))/2.
struct Reduced3Eigenvalues {
    double lambda1 = 0.0;
    std::complex<double> lambda2;
    std::complex<double> lambda3;
};

Reduced3Eigenvalues reduced3_eigenvalues_closed_form(double c);

// Equilibrium and spectrum of the single-synapse motif. The equilibrium
// (0, x2, 2 a2 x2) with 4 a2 b1 x2 = c1 phi(x2) is exponentially stable for
// every admissible parameter choice; det < 0 certifies it cannot change
// stability along parameter paths.
struct SingleSynapseStability {
    double x2 = 0.0;
    double w1 = 0.0;
    StabilityReport report;
};

SingleSynapseStability single_synapse_stability(double a1, double a2, double b1,
                                                double c1);

// Uniqueness certificate for the bidirectional motif: the fixed-point map
// is a 1-norm contraction on the invariant box when a1, a2 > 1 and
// max{w_max/a1, w_max/a2} + |c1|/b1 + |c2|/b2 < 4.
struct ContractionCertificate {
    bool unique_guaranteed = false;
    double weight_row_bound = 0.0; // max{w_max/a1, w_max/a2} + |c1|/b1 + |c2|/b2
    double phi_column_bound = 0.0; // max{1/a1, 1/a2}
};

ContractionCertificate contraction_certificate(const NetworkSpec& motif);

// Empirical critical learning rate: bisects the sign change of the leading
// closed-form eigenvalue on [c_lo, c_hi]. Throws NumericalError when the
// grid shows no sign change.
double stability_transition_scan(double c_lo, double c_hi, int n);

}  // namespace rnnhl
