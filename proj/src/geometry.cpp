#include "qcp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qcp {

namespace {

constexpr double kPi = std::numbers::pi;

// acosh(1 + t) for t >= 0 without cancellation near t = 0.
double acosh1p(double t) {
    if (t < 0) {
        t = 0;
    }
    return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

// log(sinh x) for x > 0, safe against overflow for large x and accurate for
// tiny x.
double log_sinh(double x) {
    if (x > 20.0) {
        return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
    }
    return std::log(std::sinh(x));
}

double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

} // namespace

void validate_angle_data(const DeltaComplex& c, const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != c.num_edges()) {
        throw Error(ErrorKind::Domain, "angle data size does not match edge count");
    }
    for (int e = 0; e < c.num_edges(); ++e) {
        if (!(phi[e] >= 0.0 && phi[e] < kPi)) {
            std::ostringstream os;
            os << "phi(" << e << ") = " << phi[e] << " outside [0, pi)";
            throw Error(ErrorKind::Domain, os.str());
        }
    }
}

void validate_metric(const DeltaComplex& c, const PackingMetric& m) {
    if (static_cast<int>(m.radii.size()) != c.num_vertices()) {
        throw Error(ErrorKind::Domain, "metric size does not match vertex count");
    }
    for (int v = 0; v < c.num_vertices(); ++v) {
        if (!(m.radii[v] > 0.0) || !std::isfinite(m.radii[v])) {
            std::ostringstream os;
            os << "radius of vertex " << v << " must be positive and finite";
            throw Error(ErrorKind::Domain, os.str());
        }
    }
}

double edge_length(double ra, double rb, double phi, Background bg) {
    if (bg == Background::Euclidean) {
        return std::sqrt(ra * ra + rb * rb + 2.0 * ra * rb * std::cos(phi));
    }
    // cosh(l) - 1 = 2 sinh^2(ra/2) + 2 sinh^2(rb/2)
    //             + 4 sinh^2(ra/2) sinh^2(rb/2) + sinh(ra) sinh(rb) cos(phi),
    // which keeps full precision when both radii are small.
    const double sa = std::sinh(0.5 * ra);
    const double sb = std::sinh(0.5 * rb);
    const double t = 2.0 * sa * sa + 2.0 * sb * sb + 4.0 * sa * sa * sb * sb +
                     std::sinh(ra) * std::sinh(rb) * std::cos(phi);
    return acosh1p(t);
}

AnglesOrDegenerate triangle_angles(double l0, double l1, double l2, Background bg) {
    const std::array<double, 3> l{l0, l1, l2};
    for (double v : l) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            return Degeneracy{-1, 0.0};
        }
    }
    const double s = 0.5 * (l0 + l1 + l2);
    const double tol = 1e-12 * (1.0 + s);
    std::array<double, 3> margin{};
    for (int i = 0; i < 3; ++i) {
        margin[i] = s - l[i]; // (sum of the other two - l_i) / 2
        if (margin[i] < -tol) {
            return Degeneracy{i, -2.0 * margin[i]};
        }
        margin[i] = std::max(margin[i], 0.0);
    }

    TriangleAngles out;
    if (bg == Background::Euclidean) {
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3;
            const int k = (i + 2) % 3;
            const double x = (l[j] * l[j] + l[k] * l[k] - l[i] * l[i]) / (2.0 * l[j] * l[k]);
            if (x > 1.0 + 1e-12 || x < -1.0 - 1e-12) {
                return Degeneracy{i, std::abs(x) - 1.0};
            }
            out.theta[i] = std::acos(clamp_unit(x));
        }
        return out;
    }

    // Hyperbolic half-angle form, evaluated through log(sinh) so that both
    // tiny and large lengths stay inside double range:
    //   sin^2(theta_i/2) = sinh(s - l_j) sinh(s - l_k) / (sinh l_j sinh l_k)
    //   cos^2(theta_i/2) = sinh(s) sinh(s - l_i) / (sinh l_j sinh l_k)
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const double denom = log_sinh(l[j]) + log_sinh(l[k]);
        const double sin_half =
            (margin[j] == 0.0 || margin[k] == 0.0)
                ? 0.0
                : std::exp(0.5 * (log_sinh(margin[j]) + log_sinh(margin[k]) - denom));
        const double cos_half =
            (margin[i] == 0.0)
                ? 0.0
                : std::exp(0.5 * (log_sinh(s) + log_sinh(margin[i]) - denom));
        out.theta[i] = 2.0 * std::atan2(sin_half, cos_half);
    }
    return out;
}

bool condition_S(double phi_i, double phi_j, double phi_k) {
    const double ci = std::cos(phi_i);
    const double cj = std::cos(phi_j);
    const double ck = std::cos(phi_k);
    return ci + cj * ck >= 0.0 && cj + ck * ci >= 0.0 && ck + ci * cj >= 0.0;
}

ConditionReport condition_S_all(const DeltaComplex& c, const std::vector<double>& phi) {
    validate_angle_data(c, phi);
    ConditionReport report;
    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        if (!condition_S(phi[tr.d0], phi[tr.d1], phi[tr.d2])) {
            report.ok = false;
            report.failing_triangles.push_back(t);
        }
    }
    return report;
}

bool condition_W(double phi_i, double phi_j, double phi_k) {
    if (phi_i + phi_j + phi_k <= kPi) {
        return true;
    }
    return phi_i + phi_j < kPi + phi_k && phi_j + phi_k < kPi + phi_i &&
           phi_k + phi_i < kPi + phi_j;
}

double euclidean_E(double ri, double rj, double rk, double phi_i, double phi_j, double phi_k) {
    const double ci = std::cos(phi_i);
    const double cj = std::cos(phi_j);
    const double ck = std::cos(phi_k);
    return 4.0 * ri * ri * rj * rj * (1.0 - ck * ck) +
           4.0 * rj * rj * rk * rk * (1.0 - ci * ci) +
           4.0 * rk * rk * ri * ri * (1.0 - cj * cj) +
           8.0 * ri * rj * rk *
               (ri * (ci + cj * ck) + rj * (cj + ck * ci) + rk * (ck + ci * cj));
}

std::array<double, 3> degenerate_witness(double phi_i, double phi_j, double phi_k) {
    const std::array<double, 3> phi{phi_i, phi_j, phi_k};
    if (condition_W(phi_i, phi_j, phi_k)) {
        throw Error(ErrorKind::Domain, "degenerate_witness requires a W-violating triple");
    }
    // k indexes the smallest angle; W fails exactly through
    // phi_a + phi_b > pi + phi_k for the other two slots a, b.
    int k = 0;
    for (int s = 1; s < 3; ++s) {
        if (phi[s] < phi[k]) {
            k = s;
        }
    }
    const int a = (k + 1) % 3;
    const int b = (k + 2) % 3;
    if (!(phi[a] + phi[b] > kPi + phi[k])) {
        throw Error(ErrorKind::Domain, "degenerate_witness: no pairwise violation found");
    }
    const double ck = std::cos(phi[k]);
    if (std::abs(std::abs(ck) - 1.0) < 1e-12) {
        throw Error(ErrorKind::Domain, "degenerate_witness requires |cos(phi_k)| < 1");
    }
    const double ca = std::cos(phi[a]);
    const double cb = std::cos(phi[b]);
    const double t = -(ca + cb) / (1.0 - ck); // vertex of the degeneracy parabola
    if (!(t > 0.0)) {
        throw Error(ErrorKind::Domain, "degenerate_witness: parabola vertex not positive");
    }
    std::array<double, 3> r{};
    r[a] = t;
    r[b] = t;
    r[k] = 1.0;
    return r;
}

std::vector<double> edge_lengths_all(const DeltaComplex& c, const std::vector<double>& phi,
                                     const PackingMetric& m) {
    validate_angle_data(c, phi);
    validate_metric(c, m);
    std::vector<double> lengths(c.num_edges());
    for (int e = 0; e < c.num_edges(); ++e) {
        lengths[e] =
            edge_length(m.radii[c.edges[e].d0], m.radii[c.edges[e].d1], phi[e], m.background);
    }
    return lengths;
}

CurvatureOrDegenerate curvature_map(const DeltaComplex& c, const std::vector<double>& phi,
                                    const PackingMetric& m) {
    const std::vector<double> lengths = edge_lengths_all(c, phi, m);
    std::vector<double> curvature(c.num_vertices(), 2.0 * kPi);
    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        const std::array<double, 3> l{lengths[tr.d0], lengths[tr.d1], lengths[tr.d2]};
        const AnglesOrDegenerate result = triangle_angles(l[0], l[1], l[2], m.background);
        if (const auto* degenerate = std::get_if<Degeneracy>(&result)) {
            return DegenerateTriangle{t, l, *degenerate};
        }
        const TriangleAngles& angles = std::get<TriangleAngles>(result);
        const VertexTriple v = c.vertex_triple(t);
        for (int i = 0; i < 3; ++i) {
            curvature[v[i]] -= angles.theta[i];
        }
    }
    return curvature;
}

std::vector<double> curvature_map_or_throw(const DeltaComplex& c, const std::vector<double>& phi,
                                           const PackingMetric& m) {
    CurvatureOrDegenerate result = curvature_map(c, phi, m);
    if (const auto* degenerate = std::get_if<DegenerateTriangle>(&result)) {
        std::ostringstream os;
        os << "triangle " << degenerate->triangle << " is degenerate (lengths "
           << degenerate->lengths[0] << ", " << degenerate->lengths[1] << ", "
           << degenerate->lengths[2] << "; side " << degenerate->info.side << ")";
        throw Error(ErrorKind::Domain, os.str());
    }
    return std::get<std::vector<double>>(std::move(result));
}

std::vector<std::array<double, 3>> all_triangle_angles(const DeltaComplex& c,
                                                       const std::vector<double>& phi,
                                                       const PackingMetric& m) {
    const std::vector<double> lengths = edge_lengths_all(c, phi, m);
    std::vector<std::array<double, 3>> out(c.num_triangles());
    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        const AnglesOrDegenerate result =
            triangle_angles(lengths[tr.d0], lengths[tr.d1], lengths[tr.d2], m.background);
        if (std::holds_alternative<Degeneracy>(result)) {
            std::ostringstream os;
            os << "triangle " << t << " is degenerate";
            throw Error(ErrorKind::Domain, os.str());
        }
        out[t] = std::get<TriangleAngles>(result).theta;
    }
    return out;
}

namespace {

// d theta_i / d l_s for one triangle, via the cosine-law argument x_i.
std::array<std::array<double, 3>, 3> angle_length_derivatives(const std::array<double, 3>& l,
                                                              const std::array<double, 3>& theta,
                                                              Background bg) {
    std::array<std::array<double, 3>, 3> d{};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const double sin_theta = std::sin(theta[i]);
        std::array<double, 3> dx{};
        if (bg == Background::Euclidean) {
            dx[i] = -l[i] / (l[j] * l[k]);
            dx[j] = (l[j] * l[j] - l[k] * l[k] + l[i] * l[i]) / (2.0 * l[j] * l[j] * l[k]);
            dx[k] = (l[k] * l[k] - l[j] * l[j] + l[i] * l[i]) / (2.0 * l[j] * l[k] * l[k]);
        } else {
            const double shj = std::sinh(l[j]);
            const double shk = std::sinh(l[k]);
            const double chi = std::cosh(l[i]);
            const double chj = std::cosh(l[j]);
            const double chk = std::cosh(l[k]);
            dx[i] = -std::sinh(l[i]) / (shj * shk);
            dx[j] = (chi * chj - chk) / (shj * shj * shk);
            dx[k] = (chi * chk - chj) / (shj * shk * shk);
        }
        for (int s = 0; s < 3; ++s) {
            d[i][s] = -dx[s] / sin_theta;
        }
    }
    return d;
}

} // namespace

Eigen::MatrixXd curvature_jacobian_u(const DeltaComplex& c, const std::vector<double>& phi,
                                     const PackingMetric& m) {
    const std::vector<double> lengths = edge_lengths_all(c, phi, m);
    const int n = c.num_vertices();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);

    // d l_e / d u_v per edge endpoint slot (d1 then d0).
    std::vector<std::array<double, 2>> dl(c.num_edges());
    for (int e = 0; e < c.num_edges(); ++e) {
        const int a = c.edges[e].d1;
        const int b = c.edges[e].d0;
        const double cphi = std::cos(phi[e]);
        const double l = lengths[e];
        if (m.background == Background::Euclidean) {
            const double ra = m.radii[a];
            const double rb = m.radii[b];
            dl[e][0] = ra * (ra + rb * cphi) / l;
            dl[e][1] = rb * (rb + ra * cphi) / l;
        } else {
            const double ra = m.radii[a];
            const double rb = m.radii[b];
            const double shl = std::sinh(l);
            dl[e][0] = std::sinh(ra) * (std::sinh(ra) * std::cosh(rb) +
                                        std::cosh(ra) * std::sinh(rb) * cphi) / shl;
            dl[e][1] = std::sinh(rb) * (std::sinh(rb) * std::cosh(ra) +
                                        std::cosh(rb) * std::sinh(ra) * cphi) / shl;
        }
    }

    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        const std::array<double, 3> l{lengths[tr.d0], lengths[tr.d1], lengths[tr.d2]};
        const AnglesOrDegenerate result = triangle_angles(l[0], l[1], l[2], m.background);
        if (std::holds_alternative<Degeneracy>(result)) {
            std::ostringstream os;
            os << "jacobian undefined: triangle " << t << " is degenerate";
            throw Error(ErrorKind::Domain, os.str());
        }
        const std::array<double, 3> theta = std::get<TriangleAngles>(result).theta;
        const auto dtheta = angle_length_derivatives(l, theta, m.background);
        const VertexTriple v = c.vertex_triple(t);
        for (int i = 0; i < 3; ++i) {
            for (int s = 0; s < 3; ++s) {
                const int e = tr.slot(s);
                // K contributions are negative angle sums.
                jac(v[i], c.edges[e].d1) -= dtheta[i][s] * dl[e][0];
                jac(v[i], c.edges[e].d0) -= dtheta[i][s] * dl[e][1];
            }
        }
    }
    return jac;
}

} // namespace qcp
