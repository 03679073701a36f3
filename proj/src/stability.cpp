#include "rnnhl/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace rnnhl {

std::vector<std::complex<double>> eigen_dense(const Mat& M) {
    if (M.rows() != M.cols())
        throw ConfigError("eigen_dense requires a square matrix");
    if (!M.allFinite())
        throw ConfigError("eigen_dense requires finite entries");

    Eigen::EigenSolver<Mat> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigensolver failed to converge on a " +
                             std::to_string(M.rows()) + "x" + std::to_string(M.cols()) +
                             " matrix with norm " + std::to_string(M.norm()));

    std::vector<std::complex<double>> vals(M.rows());
    for (int k = 0; k < M.rows(); ++k) vals[k] = solver.eigenvalues()[k];
    std::sort(vals.begin(), vals.end(), [](const auto& p, const auto& q) {
        if (p.real() != q.real()) return p.real() < q.real();
        return p.imag() < q.imag();
    });
    // conjugate pairs from the same Schur block: force bitwise-negated
    // imaginary parts
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
        if (vals[k].real() == vals[k + 1].real() && vals[k].imag() < 0.0 &&
            vals[k + 1].imag() > 0.0) {
            vals[k + 1] = {vals[k].real(), -vals[k].imag()};
        }
    }
    return vals;
}

Stability classify_spectrum(const std::vector<std::complex<double>>& eigenvalues) {
    double leading = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues) leading = std::max(leading, ev.real());
    if (std::abs(leading) < kMarginalBand) return Stability::marginal;
    return leading < 0.0 ? Stability::stable : Stability::unstable;
}

StabilityReport classify_matrix(const Mat& J) {
    StabilityReport report;
    report.eigenvalues = eigen_dense(J);
    report.classification = classify_spectrum(report.eigenvalues);
    report.leading_real = -std::numeric_limits<double>::infinity();
    for (const auto& ev : report.eigenvalues)
        report.leading_real = std::max(report.leading_real, ev.real());
    report.determinant = J.partialPivLu().determinant();
    return report;
}

Reduced3Eigenvalues reduced3_eigenvalues_closed_form(double c) {
    const double xh = symmetric_diagonal_root(c);
    const double ph = sigmoid(xh);
    const double ph3 = ph * ph * ph;
    const double t = c * ph3 - c * ph3 * ph; // c ph^3 - c ph^4

    Reduced3Eigenvalues out;
    out.lambda1 = -t - 1.0; // = c ph^4 - c ph^3 - 1
    const double radicand = t * (t + 8.0);
    if (radicand >= 0.0) {
        const double root = std::sqrt(radicand);
        out.lambda2 = {(t - 2.0 + root) / 2.0, 0.0};
        out.lambda3 = {(t - 2.0 - root) / 2.0, 0.0};
    } else {
        const double im = std::sqrt(-radicand) / 2.0;
        out.lambda2 = {(t - 2.0) / 2.0, im};
        out.lambda3 = {(t - 2.0) / 2.0, -im};
    }
    return out;
}

SingleSynapseStability single_synapse_stability(double a1, double a2, double b1,
                                                double c1) {
    if (!(a1 > 0.0)) throw ConfigError("a1 must be > 0");
    if (!(a2 > 0.0)) throw ConfigError("a2 must be > 0");
    if (!(b1 > 0.0)) throw ConfigError("b1 must be > 0");
    if (c1 == 0.0) throw ConfigError("c1 must be nonzero");

    // 4 a2 b1 x = c1 phi(x): bracket between 0 and c1/(4 a2 b1)
    const double k = 4.0 * a2 * b1;
    const auto g = [&](double x) { return k * x - c1 * sigmoid(x); };
    double lo = std::min(0.0, c1 / k);
    double hi = std::max(0.0, c1 / k);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(lo) * g(mid) <= 0.0) hi = mid; else lo = mid;
    }
    double x2 = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double dg = k - c1 * sigmoid_prime(x2);
        if (dg != 0.0) x2 -= g(x2) / dg;
    }

    SingleSynapseStability out;
    out.x2 = x2;
    out.w1 = 2.0 * a2 * x2;
    const NetworkSpec motif = motif_single_synapse(a1, a2, b1, c1);
    Vec state(3);
    state << 0.0, x2, out.w1;
    out.report = classify_matrix(jacobian(motif, state));
    return out;
}

ContractionCertificate contraction_certificate(const NetworkSpec& motif) {
    if (!is_bidirectional_motif(motif))
        throw ConfigError("contraction certificate requires the bidirectional motif");
    const double a1 = motif.a[0], a2 = motif.a[1];
    const double b1 = motif.b[0], b2 = motif.b[1];
    const double c1 = motif.c[0], c2 = motif.c[1];
    const double wmax = std::max(std::abs(c1), std::abs(c2)) / std::min(b1, b2);

    ContractionCertificate cert;
    cert.weight_row_bound =
        std::max(wmax / a1, wmax / a2) + std::abs(c1) / b1 + std::abs(c2) / b2;
    cert.phi_column_bound = std::max(1.0 / a1, 1.0 / a2);
    cert.unique_guaranteed = a1 > 1.0 && a2 > 1.0 && cert.weight_row_bound < 4.0;
    return cert;
}

double stability_transition_scan(double c_lo, double c_hi, int n) {
    if (!(c_lo < c_hi)) throw ConfigError("require c_lo < c_hi");
    if (n < 2) throw ConfigError("grid must have at least 2 points");

    const auto lambda1 = [](double c) {
        return reduced3_eigenvalues_closed_form(c).lambda1;
    };
    double prev_c = c_lo;
    double prev_v = lambda1(c_lo);
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (int k = 1; k < n; ++k) {
        const double c = c_lo + (c_hi - c_lo) * k / (n - 1);
        const double v = lambda1(c);
        if (prev_v == 0.0) return prev_c;
        if (prev_v * v < 0.0) {
            lo = prev_c;
            hi = c;
            found = true;
            break;
        }
        prev_c = c;
        prev_v = v;
    }
    if (!found)
        throw NumericalError("no sign change of the leading eigenvalue in [" +
                             std::to_string(c_lo) + ", " + std::to_string(c_hi) + "]");

    double flo = lambda1(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = lambda1(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace rnnhl
