#include <doctest.h>

#include <cmath>
#include <complex>

#include "rnnhl/equilibria.hpp"
#include "rnnhl/rng.hpp"
#include "rnnhl/stability.hpp"

using namespace rnnhl;

TEST_CASE("eigen_dense on a diagonal matrix") {
    Mat M = Mat::Zero(3, 3);
    M(0, 0) = -1;
    M(1, 1) = -2;
    M(2, 2) = -3;
    const auto vals = eigen_dense(M);
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == std::complex<double>(-3, 0));
    CHECK(vals[1] == std::complex<double>(-2, 0));
    CHECK(vals[2] == std::complex<double>(-1, 0));
}

TEST_CASE("eigen_dense on a random 50x50 matrix: trace, determinant, rank drop") {
    Rng rng(30);
    Mat M(50, 50);
    for (int r = 0; r < 50; ++r)
        for (int c = 0; c < 50; ++c) M(r, c) = rng.uniform(-1.0, 1.0);
    const auto vals = eigen_dense(M);
    REQUIRE(vals.size() == 50);

    std::complex<double> sum = 0.0, prod = 1.0;
    for (const auto& v : vals) {
        sum += v;
        prod *= v;
    }
    CHECK(std::abs(sum.real() - M.trace()) < 1e-8 * std::max(1.0, std::abs(M.trace())));
    CHECK(std::abs(sum.imag()) < 1e-10);
    const double det = M.partialPivLu().determinant();
    CHECK(std::abs(prod.real() - det) < 1e-6 * std::max(1.0, std::abs(det)));

    // each eigenvalue drops M - lambda I to numerical singularity
    const double scale = M.norm();
    for (const auto& v : vals) {
        Eigen::MatrixXcd shifted = M.cast<std::complex<double>>();
        shifted.diagonal().array() -= v;
        const double smin = shifted.jacobiSvd().singularValues().tail<1>()(0);
        CHECK(smin < 1e-6 * scale);
    }

    // conjugate pairing is bitwise
    for (std::size_t k = 0; k + 1 < vals.size(); ++k)
        if (vals[k].real() == vals[k + 1].real() && vals[k].imag() != 0.0)
            CHECK(vals[k].imag() == -vals[k + 1].imag());
}

TEST_CASE("eigen_dense input validation") {
    CHECK_THROWS_AS(eigen_dense(Mat::Zero(2, 3)), ConfigError);
    Mat bad = Mat::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigen_dense(bad), ConfigError);
}

TEST_CASE("closed-form reduced spectrum matches the dense solver") {
    for (int k = 0; k < 50; ++k) {
        const double c = -200.0 + 250.0 * k / 49.0;
        if (c == 0.0) continue;
        const Reduced3Eigenvalues cf = reduced3_eigenvalues_closed_form(c);
        const double xh = symmetric_diagonal_root(c);
        const auto dense =
            eigen_dense(reduced3_jacobian(c, {xh, xh, c * sigmoid(xh) * sigmoid(xh)}));
        std::vector<std::complex<double>> closed{{cf.lambda1, 0.0}, cf.lambda2, cf.lambda3};
        std::sort(closed.begin(), closed.end(), [](const auto& p, const auto& q) {
            if (p.real() != q.real()) return p.real() < q.real();
            return p.imag() < q.imag();
        });
        for (int i = 0; i < 3; ++i) CHECK(std::abs(closed[i] - dense[i]) < 1e-9);
    }
}

TEST_CASE("closed-form spectrum: known values and limits") {
    const Reduced3Eigenvalues at1 = reduced3_eigenvalues_closed_form(1.0);
    CHECK(at1.lambda1 == doctest::Approx(-1.0722096207724628).epsilon(1e-10));
    CHECK(at1.lambda2.real() < 0.0);
    CHECK(at1.lambda3.real() < 0.0);

    // lambda1 tends to -1 (from below) as c grows large
    const double l1_large = reduced3_eigenvalues_closed_form(1e6).lambda1;
    CHECK(l1_large == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(l1_large <= -1.0 + 1e-12);

    // the quadratic pair stays in the left half-plane across the sweep
    for (int k = 0; k <= 300; ++k) {
        const double c = -200.0 + 300.0 * k / 300.0;
        if (c == 0.0) continue;
        const Reduced3Eigenvalues ev = reduced3_eigenvalues_closed_form(c);
        CHECK(ev.lambda2.real() < 0.0);
        CHECK(ev.lambda3.real() < 0.0);
    }
}

TEST_CASE("lambda1 is strictly decreasing in xhat for anti-Hebbian c") {
    double prev_l1 = reduced3_eigenvalues_closed_form(-1.0).lambda1;
    double prev_x = symmetric_diagonal_root(-1.0);
    for (int k = 1; k <= 60; ++k) {
        const double c = -1.0 - 199.0 * k / 60.0;
        const double x = symmetric_diagonal_root(c);
        const double l1 = reduced3_eigenvalues_closed_form(c).lambda1;
        CHECK(x < prev_x);
        CHECK(l1 > prev_l1); // xhat decreases, lambda1 increases
        prev_x = x;
        prev_l1 = l1;
    }
}

TEST_CASE("single-synapse stability report") {
    const SingleSynapseStability s = single_synapse_stability(1, 1, 1, 1);
    CHECK(s.x2 == doctest::Approx(0.13332019185995974).epsilon(1e-10));
    CHECK(s.report.classification == Stability::stable);
    CHECK(s.report.determinant < 0.0);
    CHECK(s.report.leading_real < 0.0);

    // -a1 is always in the spectrum
    bool found = false;
    for (const auto& ev : s.report.eigenvalues)
        if (std::abs(ev - std::complex<double>(-1.0, 0.0)) < 1e-12) found = true;
    CHECK(found);

    Rng rng(31);
    for (int k = 0; k < 100; ++k) {
        const double a1 = rng.uniform(0.1, 10.0);
        const double a2 = rng.uniform(0.1, 10.0);
        const double b1 = rng.uniform(0.1, 10.0);
        const double c1 = rng.uniform_nonzero(-100.0, 100.0, 1e-6);
        const SingleSynapseStability r = single_synapse_stability(a1, a2, b1, c1);
        CHECK(r.report.determinant < 0.0);
        CHECK(r.report.leading_real < 0.0);
        // det formula: -a1 a2 b1 [1 - x2 (1 - phi(x2))]
        const double expected = -a1 * a2 * b1 * (1.0 - r.x2 * (1.0 - sigmoid(r.x2)));
        CHECK(r.report.determinant == doctest::Approx(expected).epsilon(1e-8));
        bool has_ma1 = false;
        for (const auto& ev : r.report.eigenvalues)
            if (std::abs(ev - std::complex<double>(-a1, 0.0)) < 1e-9 * std::max(1.0, a1))
                has_ma1 = true;
        CHECK(has_ma1);
    }
    CHECK_THROWS_AS(single_synapse_stability(0, 1, 1, 1), ConfigError);
    CHECK_THROWS_AS(single_synapse_stability(1, 1, 1, 0), ConfigError);
}

TEST_CASE("contraction certificate arithmetic") {
    const ContractionCertificate pass =
        contraction_certificate(motif_bidirectional(2, 2, 1, 1, 1, 1));
    CHECK(pass.unique_guaranteed);
    CHECK(pass.weight_row_bound == doctest::Approx(2.5).epsilon(1e-15));

    // a = 1 can never certify
    Rng rng(32);
    for (int k = 0; k < 20; ++k) {
        const ContractionCertificate cert = contraction_certificate(motif_bidirectional(
            1.0, 1.0, rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0),
            rng.uniform_nonzero(-3, 3, 0.01), rng.uniform_nonzero(-3, 3, 0.01)));
        CHECK(!cert.unique_guaranteed);
    }
    CHECK_THROWS_AS(contraction_certificate(motif_single_synapse(1, 1, 1, 1)),
                    ConfigError);
}

TEST_CASE("stability transition scan brackets the critical value") {
    const double c0 = critical_c0();
    const double found = stability_transition_scan(-130.0, -120.0, 64);
    CHECK(std::abs(found - c0) < 1e-6);

    // signs flip across the transition
    const Reduced3Eigenvalues above = reduced3_eigenvalues_closed_form(c0 + 1.0);
    CHECK(above.lambda1 < 0.0);
    CHECK(above.lambda2.real() < 0.0);
    const Reduced3Eigenvalues below = reduced3_eigenvalues_closed_form(c0 - 1.0);
    CHECK(below.lambda1 > 0.0);
    CHECK(below.lambda2.real() < 0.0);
    CHECK(below.lambda3.real() < 0.0);

    CHECK_THROWS_AS(stability_transition_scan(-50.0, -10.0, 32), NumericalError);
    CHECK_THROWS_AS(stability_transition_scan(-10.0, -50.0, 32), ConfigError);
}

TEST_CASE("pitchfork exchange of stability across fixed c values") {
    NewtonConfig cfg;
    cfg.seed = 33;
    for (double c : {-150.0, -130.0}) {
        const EquilibriaResult eq = find_reduced3_equilibria(c, cfg);
        REQUIRE(eq.records.size() == 3);
        CHECK(eq.records[0].stability == Stability::stable);
        CHECK(eq.records[1].stability == Stability::unstable);
        CHECK(eq.records[2].stability == Stability::stable);
    }
    for (double c : {-120.0, -50.0, -3.0, 1.0}) {
        const EquilibriaResult eq = find_reduced3_equilibria(c, cfg);
        REQUIRE(eq.records.size() == 1);
        CHECK(eq.records[0].stability == Stability::stable);
    }
}

TEST_CASE("marginal classification near the spectral band") {
    CHECK(classify_spectrum({{-1e-9, 0.0}, {-2.0, 0.0}}) == Stability::marginal);
    CHECK(classify_spectrum({{-1.0, 0.0}, {-2.0, 0.0}}) == Stability::stable);
    CHECK(classify_spectrum({{1e-3, 0.0}, {-2.0, 0.0}}) == Stability::unstable);
    CHECK(classify_spectrum({{5.0, 0.0}, {1e-12, 0.0}}) == Stability::unstable);
}
