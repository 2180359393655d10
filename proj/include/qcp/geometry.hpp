#pragma once

#include <array>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qcp/delta_complex.hpp"

namespace qcp {

enum class Background {
    Euclidean,
    Hyperbolic,
};

// Per-vertex circle radii together with the background the triangles are
// realized in. All radii must be positive.
struct PackingMetric {
    std::vector<double> radii;
    Background background = Background::Euclidean;
};

// Throws Error{Domain} unless phi has one entry per edge, each in [0, pi).
void validate_angle_data(const DeltaComplex& c, const std::vector<double>& phi);
void validate_metric(const DeltaComplex& c, const PackingMetric& m);

// Distance between the centers of two circles of radii ra, rb meeting at
// exterior angle phi, by the cosine law of the background. Symmetric in
// (ra, rb); positive for phi < pi.
double edge_length(double ra, double rb, double phi, Background bg);

// A triangle realization failure: side `side` (0/1/2) beats the other two
// sides' sum by `margin` (margin > 0 means genuinely degenerate).
struct Degeneracy {
    int side = -1;
    double margin = 0.0;
};

struct TriangleAngles {
    std::array<double, 3> theta{}; // theta[i] opposite side i
};

using AnglesOrDegenerate = std::variant<TriangleAngles, Degeneracy>;

// Interior angles of the triangle with side lengths (l0, l1, l2), theta[i]
// opposite l_i. Returns Degeneracy when the triangle inequality fails
// beyond roundoff tolerance; arguments grazing the boundary within 1e-12
// are clamped. Euclidean angles sum to pi up to roundoff; hyperbolic ones
// to less than pi.
AnglesOrDegenerate triangle_angles(double l0, double l1, double l2, Background bg);

// cos(phi_1) + cos(phi_2) cos(phi_3) >= 0 together with its cyclic
// permutations; guarantees non-degeneracy for every positive radii triple.
bool condition_S(double phi_i, double phi_j, double phi_k);

struct ConditionReport {
    bool ok = true;
    std::vector<int> failing_triangles;
};

ConditionReport condition_S_all(const DeltaComplex& c, const std::vector<double>& phi);

// The weaker existence condition: angle sum <= pi, or all three strict
// pairwise inequalities phi_a + phi_b < pi + phi_c.
bool condition_W(double phi_i, double phi_j, double phi_k);

// Degeneracy polynomial of the Euclidean three-circle configuration; its
// sign matches the triangle inequality for the induced edge lengths.
double euclidean_E(double ri, double rj, double rk, double phi_i, double phi_j, double phi_k);

// For a W-violating triple (the two large angles exceed pi plus the small
// one, and the small angle's cosine is not +-1), returns radii aligned with
// the input slots: t at the two large-angle slots, 1 at the small-angle
// slot, where t is the vertex of the degeneracy parabola. euclidean_E at
// the result is <= 0. Throws Error{Domain} if the precondition fails.
std::array<double, 3> degenerate_witness(double phi_i, double phi_j, double phi_k);

// Lengths of all edges under the metric, indexed by edge id.
std::vector<double> edge_lengths_all(const DeltaComplex& c, const std::vector<double>& phi,
                                     const PackingMetric& m);

struct DegenerateTriangle {
    int triangle = -1;
    std::array<double, 3> lengths{};
    Degeneracy info;
};

using CurvatureOrDegenerate = std::variant<std::vector<double>, DegenerateTriangle>;

// K_v = 2 pi - sum of theta_i over all (triangle, slot) pairs with
// v_i(triangle) = v; slots count with multiplicity. Degenerate triangles
// are reported as a value, not thrown.
CurvatureOrDegenerate curvature_map(const DeltaComplex& c, const std::vector<double>& phi,
                                    const PackingMetric& m);

// Same, but converts a degenerate triangle into Error{Domain}.
std::vector<double> curvature_map_or_throw(const DeltaComplex& c, const std::vector<double>& phi,
                                           const PackingMetric& m);

// Per-triangle angles for reporting; entry t is the angle triple of
// triangle t (throws on degenerate configurations).
std::vector<std::array<double, 3>> all_triangle_angles(const DeltaComplex& c,
                                                       const std::vector<double>& phi,
                                                       const PackingMetric& m);

// Jacobian dK_a / du_b in the conformal coordinates u = log r (Euclidean)
// and u = log tanh(r/2) (hyperbolic), assembled analytically per triangle
// through the edge lengths. Throws Error{Domain} on degenerate input.
Eigen::MatrixXd curvature_jacobian_u(const DeltaComplex& c, const std::vector<double>& phi,
                                     const PackingMetric& m);

} // namespace qcp
