#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rnnhl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Configuration/validation failure; message names the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical routine failed to converge or left its domain.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Logistic sigmoid, evaluated branch-split so large |z| neither overflows
// nor loses the tail.
inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// phi'(z) = phi(z)(1 - phi(z)), in (0, 1/4], maximum at z = 0. Evaluated as
// phi(z) phi(-z) so the saturated tail keeps its magnitude instead of
// rounding to zero.
inline double sigmoid_prime(double z) {
    return sigmoid(z) * sigmoid(-z);
}

// Directed synapse: weight w enters node i's rate equation multiplied by
// phi(x_j).
struct Edge {
    int i = 0;
    int j = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Full parameterization of a coupled neuron/synapse system:
//   x_i' = -a_i x_i + sum_edges(i,j) w_ij phi(x_j) + u_i
//   w_ij' = -b_ij w_ij + c_ij phi(x_i) phi(x_j)
// Weights are stored sparse-by-edge-list; only realized synapses carry
// state. The flat state layout is [x_0..x_{n-1}, w_(edge order)].
struct NetworkSpec {
    int n = 0;
    std::vector<double> a;   // per node, > 0
    std::vector<Edge> edges; // no duplicates
    std::vector<double> b;   // per edge, > 0
    std::vector<double> c;   // per edge, != 0
    std::vector<double> u;   // per node; empty means all zero

    int dim() const { return n + static_cast<int>(edges.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int weight_slot(int edge_index) const { return n + edge_index; }
    int find_edge(int i, int j) const; // -1 if absent
    bool autonomous() const;
    double input(int node) const { return u.empty() ? 0.0 : u[node]; }

    void validate() const; // throws ConfigError
};

Vec vector_field(const NetworkSpec& spec, const Vec& s);
Mat jacobian(const NetworkSpec& spec, const Vec& s);

// Minimal two-neuron models.
NetworkSpec motif_bidirectional(double a1, double a2, double b1, double b2,
                                double c1, double c2);
NetworkSpec motif_single_synapse(double a1, double a2, double b1, double c1);

// True iff the spec is the two-node bidirectional motif (any parameters,
// zero inputs). Edge order is normalized so that w1 = w_{21}, w2 = w_{12}.
bool is_bidirectional_motif(const NetworkSpec& spec);

// Reduced 3-state system obtained from the symmetric motif (a=b=1,
// c1=c2=c) after the two weight equations collapse onto w1=w2:
//   x1' = -x1 + w phi(x2), x2' = -x2 + w phi(x1), w' = -w + c phi(x1)phi(x2)
struct ReducedState3 {
    double x1 = 0.0;
    double x2 = 0.0;
    double w = 0.0;
};

ReducedState3 reduced3_field(double c, const ReducedState3& s);
Mat reduced3_jacobian(double c, const ReducedState3& s);

// Coordinate swap S(x1,x2,w) = (x2,x1,w); the reduced field commutes with
// it, and its fixed points form the plane L = {x1 = x2}.
inline ReducedState3 apply_symmetry_S(const ReducedState3& s) {
    return {s.x2, s.x1, s.w};
}

// On-plane dynamics in (x1, w):
//   x1' = -x1 + w phi(x1), w' = -w + c phi(x1)^2
std::pair<double, double> reduced_planar_field(double c, double x1, double w);
Mat reduced_planar_jacobian(double c, double x1, double w);

// Combined decay product of the parametrically symmetric motif
// (b2*a1 = b1*a2 = A, c1 = c2 = c). The root-counting machinery fixes
// A = 1; the field is stored for presets that satisfy the symmetry with
// other values.
struct SymmetricParams {
    double A = 1.0;
    double c = 0.0;
};

// Generic dense view of a dynamical system, used by the integrator, the
// equilibrium solver and the sweep driver for both network specs and the
// reduced model. bounds holds the per-coordinate invariant-box bound.
enum class SymmetryTag { none, on_plane_L, off_plane };

struct SystemView {
    int dim = 0;
    Vec bounds;
    std::function<Vec(const Vec&)> field;
    std::function<Mat(const Vec&)> jacobian;
    std::function<SymmetryTag(const Vec&)> classify_symmetry; // may be null
};

SystemView make_system(const NetworkSpec& spec);
SystemView make_reduced3_system(double c);

}  // namespace rnnhl
