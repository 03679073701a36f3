#include <doctest.h>

#include <cmath>

#include "rnnhl/equilibria.hpp"
#include "rnnhl/rng.hpp"
#include "rnnhl/stability.hpp"
#include "oracles.hpp"

using namespace rnnhl;

TEST_CASE("invariant box from decay and learning bounds") {
    const InvariantBox box = invariant_box(motif_bidirectional(1, 1, 0.5, 1, 2, -3));
    CHECK(box.w_bound == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(box.x_bound == doctest::Approx(6.0).epsilon(1e-15));

    for (double c : {-7.0, 1.0, 42.0}) {
        const InvariantBox chi1 = invariant_box(motif_bidirectional(1, 1, 1, 1, c, c));
        CHECK(chi1.w_bound == std::abs(c));
        CHECK(chi1.x_bound == std::abs(c));
    }

    const InvariantBox unit = invariant_box(motif_bidirectional(1, 1, 1, 1, 1, -1));
    CHECK(unit.x_bound == 1.0);
    CHECK(unit.w_bound == 1.0);

    NetworkSpec driven = motif_bidirectional(1, 1, 1, 1, 1, 1);
    driven.u = {0.5, 0.0};
    CHECK_THROWS_AS(invariant_box(driven), ConfigError);
}

TEST_CASE("fixed-point map maps the box into itself and fixes equilibria") {
    const NetworkSpec motif = motif_bidirectional(0.8, 1.3, 0.6, 1.1, 2.5, -1.7);
    const InvariantBox box = invariant_box(motif);
    Rng rng(10);
    for (int k = 0; k < 1000; ++k) {
        Eigen::Vector4d X;
        X << rng.uniform(-box.x_bound, box.x_bound),
             rng.uniform(-box.x_bound, box.x_bound),
             rng.uniform(-box.w_bound, box.w_bound),
             rng.uniform(-box.w_bound, box.w_bound);
        const Eigen::Vector4d Y = fixed_point_map_F(motif, X);
        CHECK(std::abs(Y[0]) <= box.x_bound);
        CHECK(std::abs(Y[1]) <= box.x_bound);
        CHECK(std::abs(Y[2]) <= box.w_bound);
        CHECK(std::abs(Y[3]) <= box.w_bound);
    }

    NewtonConfig cfg;
    cfg.seed = 10;
    const EquilibriaResult eq = find_equilibria(motif, cfg);
    REQUIRE(!eq.records.empty());
    for (const EquilibriumRecord& rec : eq.records) {
        const Eigen::Vector4d X = rec.point;
        CHECK((fixed_point_map_F(motif, X) - X).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("under the contraction certificate, iterating F converges to one point") {
    const NetworkSpec motif = motif_bidirectional(2, 2, 1, 1, 1, 1);
    REQUIRE(contraction_certificate(motif).unique_guaranteed);
    Rng rng(11);
    Eigen::Vector4d limit = Eigen::Vector4d::Zero();
    for (int start = 0; start < 10; ++start) {
        Eigen::Vector4d X;
        for (int i = 0; i < 4; ++i) X[i] = rng.uniform(-0.5, 0.5);
        for (int it = 0; it < 300; ++it) X = fixed_point_map_F(motif, X);
        if (start == 0) limit = X;
        CHECK((X - limit).lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("lambert_w0 against bisection and identities") {
    CHECK(lambert_w0(0.0) == 0.0);
    CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    const double w_oracle = oracles::bisect(
        [](double w) { return w * std::exp(w) - std::exp(-1.0); }, 0.0, 1.0);
    CHECK(lambert_w0(std::exp(-1.0)) == doctest::Approx(w_oracle).epsilon(1e-12));
    CHECK(lambert_w0(std::exp(-1.0)) ==
          doctest::Approx(0.2784645427610738).epsilon(1e-12));

    Rng rng(12);
    for (int k = 0; k < 500; ++k) {
        const double y = rng.uniform(-std::exp(-1.0), 50.0);
        const double w = lambert_w0(y);
        CHECK(w >= -1.0);
        CHECK(std::abs(w * std::exp(w) - y) < 1e-13 * std::max(1.0, std::abs(y)));
    }
    CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK_THROWS_AS(lambert_w0(-0.5), NumericalError);
}

TEST_CASE("critical value from the Lambert-W closed form") {
    const double c0 = critical_c0();
    CHECK(c0 == doctest::Approx(-123.7215).epsilon(5e-6));

    const double xh0 = critical_xhat0();
    CHECK(xh0 == doctest::Approx(-1.2784645427610738).epsilon(1e-12));
    // x (phi(x) - 1) = 1 pins the stability crossing
    CHECK(xh0 * (sigmoid(xh0) - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // leading closed-form eigenvalue vanishes there
    CHECK(std::abs(reduced3_eigenvalues_closed_form(c0).lambda1) < 1e-10);
}

TEST_CASE("symmetric diagonal root") {
    CHECK(symmetric_diagonal_root(0.0) == 0.0);
    const double xh1 = symmetric_diagonal_root(1.0);
    CHECK(xh1 == doctest::Approx(0.15666637911889428).epsilon(1e-11));

    CHECK(symmetric_diagonal_root(critical_c0()) ==
          doctest::Approx(critical_xhat0()).epsilon(1e-9));

    Rng rng(13);
    for (int k = 0; k < 200; ++k) {
        const double c = rng.uniform_nonzero(-300.0, 300.0, 1e-3);
        const double x = symmetric_diagonal_root(c);
        const double p = sigmoid(x);
        CHECK(std::abs(x - c * p * p * p) < 1e-12 * std::max(1.0, std::abs(c)));
        CHECK(x * c > 0.0); // sign matches c
    }
}

TEST_CASE("beta_c solves xi (1 + e^-xi) = c") {
    const double b2 = beta_c(2.0);
    const double b2_oracle =
        oracles::bisect([](double x) { return x * (1.0 + std::exp(-x)) - 2.0; }, 0.0, 2.0);
    CHECK(b2 == doctest::Approx(b2_oracle).epsilon(1e-12));
    CHECK(b2 == doctest::Approx(1.6878939988284737).epsilon(1e-10));

    const double bm2 = beta_c(-2.0);
    const double bm2_oracle = oracles::bisect(
        [](double x) { return x * (1.0 + std::exp(-x)) + 2.0; }, -2.0, 0.0);
    CHECK(bm2 == doctest::Approx(bm2_oracle).epsilon(1e-12));
    CHECK(bm2 == doctest::Approx(-0.6748316143423994).epsilon(1e-10));

    Rng rng(14);
    for (int k = 0; k < 100; ++k) {
        const double c = rng.uniform_nonzero(-50.0, 50.0, 1e-2);
        const double b = beta_c(c);
        CHECK(std::abs(b * (1.0 + std::exp(-b)) - c) < 1e-12);
        CHECK(b * c > 0.0);
    }
    CHECK_THROWS_AS(beta_c(0.0), ConfigError);
}

TEST_CASE("f diverges at the interval ends and rejects outside points") {
    const double beta = beta_c(2.0);
    CHECK(f_xi(2.0, 1e-6) < -6.0);
    CHECK(f_xi(2.0, 1e-9) < -10.0);
    CHECK(f_xi(2.0, beta - 1e-6) > 10.0);
    CHECK_THROWS_AS(f_xi(2.0, -0.5), NumericalError);
    CHECK_THROWS_AS(f_xi(2.0, beta + 0.1), NumericalError);
    CHECK_THROWS_AS(f_xi(-2.0, 0.5), NumericalError);
    CHECK_THROWS_AS(f_xi(0.0, 0.5), ConfigError);
}

TEST_CASE("f root counts across the critical value") {
    CHECK(count_f_roots(2.0).size() == 1);
    CHECK(count_f_roots(-100.0).size() == 1);
    CHECK(count_f_roots(-150.0).size() == 3);
    CHECK(count_f_roots(-123.2215).size() == 1);
    CHECK(count_f_roots(-124.2215).size() == 3);
    CHECK_THROWS_AS(count_f_roots(-2.0, 10), ConfigError);

    // each root is a genuine zero
    for (double root : count_f_roots(-150.0))
        CHECK(std::abs(f_xi(-150.0, root)) < 1e-8);
}

TEST_CASE("reduced-system equilibrium counts match the root function") {
    NewtonConfig cfg;
    cfg.seed = 15;
    CHECK(find_reduced3_equilibria(-3.0, cfg).records.size() == 1);
    CHECK(find_reduced3_equilibria(-150.0, cfg).records.size() == 3);

    const EquilibriaResult at1 = find_reduced3_equilibria(1.0, cfg);
    REQUIRE(at1.records.size() == 1);
    CHECK(at1.records[0].point[0] == doctest::Approx(0.15666637911889428).epsilon(1e-9));
    CHECK(at1.records[0].point[1] == doctest::Approx(0.15666637911889428).epsilon(1e-9));
}

TEST_CASE("single-synapse motif has the unique equilibrium (0, x2, 2 a2 x2)") {
    NewtonConfig cfg;
    cfg.seed = 16;
    const NetworkSpec motif = motif_single_synapse(1, 1, 1, 1);
    const EquilibriaResult eq = find_equilibria(motif, cfg);
    REQUIRE(eq.records.size() == 1);
    const Vec& p = eq.records[0].point;
    CHECK(std::abs(p[0]) < 1e-11);
    CHECK(p[1] == doctest::Approx(0.13332019185995974).epsilon(1e-9));
    CHECK(p[2] == doctest::Approx(2 * 0.13332019185995974).epsilon(1e-9));
}

TEST_CASE("reduced equilibria: S-invariance, conjugate spectra, plane tags") {
    NewtonConfig cfg;
    cfg.seed = 17;
    const EquilibriaResult eq = find_reduced3_equilibria(-150.0, cfg);
    REQUIRE(eq.records.size() == 3);

    CHECK(eq.records[0].symmetry_tag == SymmetryTag::off_plane);
    CHECK(eq.records[1].symmetry_tag == SymmetryTag::on_plane_L);
    CHECK(eq.records[2].symmetry_tag == SymmetryTag::off_plane);

    // swapped image of each equilibrium is an equilibrium
    for (const EquilibriumRecord& rec : eq.records) {
        const ReducedState3 swapped =
            apply_symmetry_S({rec.point[0], rec.point[1], rec.point[2]});
        const ReducedState3 d = reduced3_field(-150.0, swapped);
        CHECK(std::max({std::abs(d.x1), std::abs(d.x2), std::abs(d.w)}) < 1e-10);
    }

    // conjugate pair: identical spectra
    REQUIRE(eq.records[0].eigenvalues.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(eq.records[0].eigenvalues[i] - eq.records[2].eigenvalues[i]) <
              1e-8);
    }

    // everything lies in chi_1 with slack
    for (const EquilibriumRecord& rec : eq.records)
        CHECK(rec.point.lpNorm<Eigen::Infinity>() <= 150.0 + 1e-8);
}

TEST_CASE("motif equilibria exist for random parameters and sit inside the box") {
    Rng rng(18);
    for (int trial = 0; trial < 50; ++trial) {
        const NetworkSpec motif = motif_bidirectional(
            rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0),
            rng.uniform(0.2, 3.0), rng.uniform_nonzero(-5.0, 5.0, 0.05),
            rng.uniform_nonzero(-5.0, 5.0, 0.05));
        NewtonConfig cfg;
        cfg.seed = trial;
        const EquilibriaResult eq = find_equilibria(motif, cfg);
        CHECK(!eq.records.empty());
        const InvariantBox box = invariant_box(motif);
        for (const EquilibriumRecord& rec : eq.records) {
            CHECK(std::abs(rec.point[0]) <= box.x_bound + 1e-8);
            CHECK(std::abs(rec.point[1]) <= box.x_bound + 1e-8);
            CHECK(std::abs(rec.point[2]) <= box.w_bound + 1e-8);
            CHECK(std::abs(rec.point[3]) <= box.w_bound + 1e-8);
            CHECK(rec.residual < cfg.newton_tol);
            CHECK(rec.eigenvalues.size() == 4);
        }
    }
}

TEST_CASE("mixed-sign learning rates confine equilibria to one quadrant") {
    NewtonConfig cfg;
    cfg.seed = 19;
    const NetworkSpec motif = motif_bidirectional(1, 1, 1, 1, 2.0, -2.0);
    const EquilibriaResult eq = find_equilibria(motif, cfg);
    REQUIRE(!eq.records.empty());
    for (const EquilibriumRecord& rec : eq.records) {
        CHECK(rec.point[0] < 0.0); // x1 follows c2 < 0
        CHECK(rec.point[1] > 0.0); // x2 follows c1 > 0
        CHECK(rec.point[2] > 0.0); // w1 follows c1 > 0
        CHECK(rec.point[3] < 0.0); // w2 follows c2 < 0
    }

    const NetworkSpec both_pos = motif_bidirectional(1, 1, 1, 1, 2.0, 2.0);
    for (const EquilibriumRecord& rec : find_equilibria(both_pos, cfg).records)
        CHECK(rec.point.minCoeff() > 0.0);
    const NetworkSpec both_neg = motif_bidirectional(1, 1, 1, 1, -2.0, -2.0);
    for (const EquilibriumRecord& rec : find_equilibria(both_neg, cfg).records)
        CHECK(rec.point.maxCoeff() < 0.0);
}

TEST_CASE("equilibrium search requires an autonomous system") {
    NetworkSpec driven = motif_bidirectional(1, 1, 1, 1, 1, 1);
    driven.u = {0.1, 0.0};
    NewtonConfig cfg;
    CHECK_THROWS_AS(find_equilibria(driven, cfg), ConfigError);
}

TEST_CASE("newton config validation") {
    NewtonConfig cfg;
    cfg.newton_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = NewtonConfig{};
    cfg.dedup_tol = 1e-12; // below newton_tol
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = NewtonConfig{};
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("start strategies and parallel solve agree on the root set") {
    for (auto strategy : {StartStrategy::low_discrepancy, StartStrategy::uniform_random,
                          StartStrategy::grid}) {
        NewtonConfig cfg;
        cfg.strategy = strategy;
        cfg.seed = 20;
        const EquilibriaResult eq = find_reduced3_equilibria(-150.0, cfg);
        CHECK(eq.records.size() == 3);
    }
    NewtonConfig cfg;
    cfg.seed = 20;
    const EquilibriaResult serial = find_reduced3_equilibria(-150.0, cfg, 1);
    const EquilibriaResult parallel = find_reduced3_equilibria(-150.0, cfg, 4);
    REQUIRE(serial.records.size() == parallel.records.size());
    for (std::size_t k = 0; k < serial.records.size(); ++k) {
        CHECK(serial.records[k].point == parallel.records[k].point);
        CHECK(serial.records[k].basin_hits == parallel.records[k].basin_hits);
    }
}

TEST_CASE("lemma-2 style uniqueness on certified specs") {
    Rng rng(21);
    int accepted = 0;
    while (accepted < 20) {
        const NetworkSpec motif = motif_bidirectional(
            rng.uniform(1.05, 4.0), rng.uniform(1.05, 4.0), rng.uniform(0.5, 3.0),
            rng.uniform(0.5, 3.0), rng.uniform_nonzero(-2.0, 2.0, 0.05),
            rng.uniform_nonzero(-2.0, 2.0, 0.05));
        if (!contraction_certificate(motif).unique_guaranteed) continue;
        ++accepted;
        NewtonConfig cfg;
        cfg.seed = 100 + accepted;
        CHECK(find_equilibria(motif, cfg).records.size() == 1);
    }
}
