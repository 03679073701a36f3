#include "rnnhl/model.hpp"

#include <algorithm>
#include <cmath>

namespace rnnhl {

int NetworkSpec::find_edge(int i, int j) const {
    for (int k = 0; k < n_edges(); ++k)
        if (edges[k].i == i && edges[k].j == j) return k;
    return -1;
}

bool NetworkSpec::autonomous() const {
    return std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; });
}

void NetworkSpec::validate() const {
    if (n < 1) throw ConfigError("n must be >= 1");
    if (static_cast<int>(a.size()) != n)
        throw ConfigError("a must have length n=" + std::to_string(n));
    for (int k = 0; k < n; ++k) {
        if (!(a[k] > 0.0) || !std::isfinite(a[k]))
            throw ConfigError("a[" + std::to_string(k) + "] must be > 0");
    }
    const int m = n_edges();
    if (b.size() != edges.size())
        throw ConfigError("b must have one entry per edge");
    if (c.size() != edges.size())
        throw ConfigError("c must have one entry per edge");
    for (int k = 0; k < m; ++k) {
        const Edge& e = edges[k];
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
            throw ConfigError("edges[" + std::to_string(k) + "] references a node outside [0, n)");
        if (!(b[k] > 0.0) || !std::isfinite(b[k]))
            throw ConfigError("b[" + std::to_string(k) + "] must be > 0");
        if (c[k] == 0.0 || !std::isfinite(c[k]))
            throw ConfigError("c[" + std::to_string(k) + "] must be nonzero");
        for (int l = k + 1; l < m; ++l)
            if (edges[l] == e)
                throw ConfigError("edges[" + std::to_string(l) + "] duplicates edges[" +
                                  std::to_string(k) + "]");
    }
    if (!u.empty() && static_cast<int>(u.size()) != n)
        throw ConfigError("u must be empty or have length n=" + std::to_string(n));
    for (std::size_t k = 0; k < u.size(); ++k)
        if (!std::isfinite(u[k]))
            throw ConfigError("u[" + std::to_string(k) + "] must be finite");
}

namespace {

void check_dim(const NetworkSpec& spec, const Vec& s) {
    if (s.size() != spec.dim())
        throw ConfigError("state has dimension " + std::to_string(s.size()) +
                          " but spec requires n + |edges| = " + std::to_string(spec.dim()));
}

}  // namespace

Vec vector_field(const NetworkSpec& spec, const Vec& s) {
    check_dim(spec, s);
    const int n = spec.n;
    const int m = spec.n_edges();
    Vec phis(n);
    for (int k = 0; k < n; ++k) phis[k] = sigmoid(s[k]);

    Vec ds(spec.dim());
    for (int k = 0; k < n; ++k) ds[k] = -spec.a[k] * s[k] + spec.input(k);
    for (int e = 0; e < m; ++e) {
        const auto [i, j] = spec.edges[e];
        const double w = s[spec.weight_slot(e)];
        ds[i] += w * phis[j];
        ds[spec.weight_slot(e)] = -spec.b[e] * w + spec.c[e] * (phis[i] * phis[j]);
    }
    return ds;
}

Mat jacobian(const NetworkSpec& spec, const Vec& s) {
    check_dim(spec, s);
    const int n = spec.n;
    const int m = spec.n_edges();
    Vec phis(n), dphis(n);
    for (int k = 0; k < n; ++k) {
        phis[k] = sigmoid(s[k]);
        dphis[k] = sigmoid_prime(s[k]);
    }

    Mat J = Mat::Zero(spec.dim(), spec.dim());
    for (int k = 0; k < n; ++k) J(k, k) = -spec.a[k];
    for (int e = 0; e < m; ++e) {
        const auto [i, j] = spec.edges[e];
        const int we = spec.weight_slot(e);
        const double w = s[we];
        J(i, j) += w * dphis[j];
        J(i, we) = phis[j];
        // w_ij' = -b w + c phi(x_i) phi(x_j); the two chain terms add when i == j
        J(we, i) += spec.c[e] * dphis[i] * phis[j];
        J(we, j) += spec.c[e] * phis[i] * dphis[j];
        J(we, we) = -spec.b[e];
    }
    return J;
}

NetworkSpec motif_bidirectional(double a1, double a2, double b1, double b2,
                                double c1, double c2) {
    NetworkSpec spec;
    spec.n = 2;
    spec.a = {a1, a2};
    // state [x1, x2, w1, w2]: w1 drives x2 (edge 1<-0), w2 drives x1 (edge 0<-1)
    spec.edges = {{1, 0}, {0, 1}};
    spec.b = {b1, b2};
    spec.c = {c1, c2};
    spec.validate();
    return spec;
}

NetworkSpec motif_single_synapse(double a1, double a2, double b1, double c1) {
    NetworkSpec spec;
    spec.n = 2;
    spec.a = {a1, a2};
    spec.edges = {{1, 0}};
    spec.b = {b1};
    spec.c = {c1};
    spec.validate();
    return spec;
}

bool is_bidirectional_motif(const NetworkSpec& spec) {
    return spec.n == 2 && spec.n_edges() == 2 &&
           spec.edges[0] == Edge{1, 0} && spec.edges[1] == Edge{0, 1};
}

ReducedState3 reduced3_field(double c, const ReducedState3& s) {
    const double p1 = sigmoid(s.x1);
    const double p2 = sigmoid(s.x2);
    return {-s.x1 + s.w * p2, -s.x2 + s.w * p1, -s.w + c * (p1 * p2)};
}

Mat reduced3_jacobian(double c, const ReducedState3& s) {
    const double p1 = sigmoid(s.x1);
    const double p2 = sigmoid(s.x2);
    const double d1 = sigmoid_prime(s.x1);
    const double d2 = sigmoid_prime(s.x2);
    Mat J(3, 3);
    J << -1.0, s.w * d2, p2,
         s.w * d1, -1.0, p1,
         c * d1 * p2, c * p1 * d2, -1.0;
    return J;
}

std::pair<double, double> reduced_planar_field(double c, double x1, double w) {
    const double p = sigmoid(x1);
    return {-x1 + w * p, -w + c * p * p};
}

Mat reduced_planar_jacobian(double c, double x1, double w) {
    const double p = sigmoid(x1);
    const double d = sigmoid_prime(x1);
    Mat J(2, 2);
    J << -1.0 + w * d, p,
         2.0 * c * p * d, -1.0;
    return J;
}

namespace {

Vec system_bounds(const NetworkSpec& spec) {
    Vec bounds = Vec::Zero(spec.dim());
    if (spec.n_edges() == 0) {
        // no synapses: x_i decays to u_i / a_i
        for (int k = 0; k < spec.n; ++k)
            bounds[k] = std::abs(spec.input(k)) / spec.a[k];
        return bounds;
    }
    double cmax = 0.0, bmin = spec.b[0], amin = spec.a[0], umax = 0.0;
    for (double v : spec.c) cmax = std::max(cmax, std::abs(v));
    for (double v : spec.b) bmin = std::min(bmin, v);
    for (double v : spec.a) amin = std::min(amin, v);
    for (double v : spec.u) umax = std::max(umax, std::abs(v));
    const double wmax = cmax / bmin;
    const double xmax = (wmax + umax) / amin;
    for (int k = 0; k < spec.n; ++k) bounds[k] = xmax;
    for (int e = 0; e < spec.n_edges(); ++e) bounds[spec.weight_slot(e)] = wmax;
    return bounds;
}

}  // namespace

SystemView make_system(const NetworkSpec& spec) {
    spec.validate();
    SystemView sys;
    sys.dim = spec.dim();
    sys.bounds = system_bounds(spec);

    NetworkSpec owned = spec;
    sys.field = [owned](const Vec& s) { return vector_field(owned, s); };
    sys.jacobian = [owned](const Vec& s) { return rnnhl::jacobian(owned, s); };

    // Tag equilibria relative to the plane L only when the motif carries the
    // parametric symmetry (b2 a1 = b1 a2, c1 = c2), so the tag is meaningful.
    if (is_bidirectional_motif(spec)) {
        const double A1 = spec.b[1] * spec.a[0];
        const double A2 = spec.b[0] * spec.a[1];
        const bool symmetric = std::abs(A1 - A2) <= 1e-12 * (std::abs(A1) + std::abs(A2)) &&
                               spec.c[0] == spec.c[1];
        if (symmetric) {
            const double tol = 1e-6 * (1.0 + sys.bounds.maxCoeff());
            sys.classify_symmetry = [tol](const Vec& s) {
                const bool on = std::abs(s[0] - s[1]) <= tol && std::abs(s[2] - s[3]) <= tol;
                return on ? SymmetryTag::on_plane_L : SymmetryTag::off_plane;
            };
        }
    }
    return sys;
}

SystemView make_reduced3_system(double c) {
    SystemView sys;
    sys.dim = 3;
    const double bound = std::abs(c);
    sys.bounds = Vec::Constant(3, bound);
    sys.field = [c](const Vec& s) {
        const ReducedState3 d = reduced3_field(c, {s[0], s[1], s[2]});
        Vec out(3);
        out << d.x1, d.x2, d.w;
        return out;
    };
    sys.jacobian = [c](const Vec& s) {
        return reduced3_jacobian(c, {s[0], s[1], s[2]});
    };
    const double tol = 1e-6 * (1.0 + bound);
    sys.classify_symmetry = [tol](const Vec& s) {
        return std::abs(s[0] - s[1]) <= tol ? SymmetryTag::on_plane_L
                                            : SymmetryTag::off_plane;
    };
    return sys;
}

}  // namespace rnnhl
