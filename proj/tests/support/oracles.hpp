#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "qcp/covering.hpp"
#include "qcp/delta_complex.hpp"
#include "qcp/geometry.hpp"

// Independent oracles used to freeze expected values. Nothing here shares
// code paths with the implementations under test beyond plain accessors.
namespace oracles {

// Exact rank over the rationals by fraction-free (Bareiss) elimination.
inline int matrix_rank_rational(const qcp::IntMatrix& m) {
    if (m.empty() || m[0].empty()) {
        return 0;
    }
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            a[i][j] = m[i][j];
        }
    }
    int rank = 0;
    __int128 prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r) {
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            continue;
        }
        std::swap(a[rank], a[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int j = col + 1; j < cols; ++j) {
                a[r][j] = (a[rank][col] * a[r][j] - a[r][col] * a[rank][j]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

// Central difference of a scalar function.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Brute-force re-enumeration of the cover feasibility check: plain mask
// loop, per-subset link scan, no tables, no Gray code.
struct NaiveVerdict {
    bool gauss_bonnet_ok = false;
    long long violations = 0;
    long long subsets = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    std::vector<double> rhs_values;

    bool feasible() const { return gauss_bonnet_ok && violations == 0; }
};

inline NaiveVerdict naive_check_cover(const qcp::Covering& cov, const std::vector<double>& phi,
                                      const std::vector<double>& curvature, qcp::Background bg,
                                      bool keep_rhs = false) {
    using std::numbers::pi;
    NaiveVerdict out;

    double total = 0.0;
    for (double v : curvature) {
        total += v;
    }
    const double rhs_gb = 2.0 * pi * cov.base.euler_characteristic();
    out.gauss_bonnet_ok = (bg == qcp::Background::Euclidean) ? std::abs(total - rhs_gb) <= 1e-9
                                                             : total - rhs_gb > 1e-9;

    const qcp::DeltaComplex& t = cov.total;
    const int n = t.num_vertices();
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        double lhs = 0.0;
        std::vector<char> in(n, 0);
        for (int v = 0; v < n; ++v) {
            if (mask & (std::uint64_t{1} << v)) {
                in[v] = 1;
                lhs += curvature[cov.project_vertex(v)];
            }
        }
        double link_sum = 0.0;
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const qcp::VertexTriple v = t.vertex_triple(tri);
            for (int i = 0; i < 3; ++i) {
                if (in[v[i]] && !in[v[(i + 1) % 3]] && !in[v[(i + 2) % 3]]) {
                    link_sum += pi - phi[cov.project_edge(t.triangles[tri].slot(i))];
                }
            }
        }
        long long chi = 0;
        for (int v = 0; v < n; ++v) {
            chi += in[v];
        }
        for (const qcp::EdgeRec& e : t.edges) {
            if (in[e.d0] && in[e.d1]) {
                --chi;
            }
        }
        for (int tri = 0; tri < t.num_triangles(); ++tri) {
            const qcp::VertexTriple v = t.vertex_triple(tri);
            if (in[v.v0] && in[v.v1] && in[v.v2]) {
                ++chi;
            }
        }
        const double rhs = -link_sum + 2.0 * pi * static_cast<double>(chi);
        if (keep_rhs) {
            out.rhs_values.push_back(rhs);
        }
        const double slack = lhs - rhs;
        out.min_slack = std::min(out.min_slack, slack);
        out.subsets += 1;
        if (slack < -1e-9) {
            out.violations += 1;
        }
    }
    return out;
}

// Random angle triples. condition_S holds automatically on [0, pi/2];
// wider samples go through rejection.
class AngleSampler {
public:
    explicit AngleSampler(std::uint64_t seed) : rng_(seed) {}

    std::array<double, 3> s_triple() {
        using std::numbers::pi;
        std::uniform_real_distribution<double> wide(0.0, pi - 1e-6);
        for (int tries = 0; tries < 64; ++tries) {
            std::array<double, 3> phi{wide(rng_), wide(rng_), wide(rng_)};
            if (qcp::condition_S(phi[0], phi[1], phi[2])) {
                return phi;
            }
        }
        std::uniform_real_distribution<double> acute(0.0, pi / 2.0);
        return {acute(rng_), acute(rng_), acute(rng_)};
    }

    // phi_a + phi_b > pi + phi_k + margin with the small angle's cosine away
    // from +-1.
    std::array<double, 3> w_violating_triple(double margin = 0.05) {
        using std::numbers::pi;
        std::uniform_real_distribution<double> small(0.1, 0.45 * pi);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        while (true) {
            const double pk = small(rng_);
            const double need = pi + pk + margin;
            const double pa = 0.5 * need + unit(rng_) * (pi - 1e-3 - 0.5 * need);
            const double pb = need - pa + unit(rng_) * (pi - 1e-3 - (need - pa));
            if (pa < pi && pb < pi && pa + pb > need) {
                std::array<double, 3> phi{pa, pb, pk};
                // random slot for the small angle
                const int k = static_cast<int>(unit(rng_) * 3.0) % 3;
                std::swap(phi[2], phi[k]);
                return phi;
            }
        }
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// Per-complex sampler: radii in [lo, hi], per-edge angles with condition_S
// holding on every triangle.
inline std::vector<double> random_s_angles(const qcp::DeltaComplex& c, AngleSampler& sampler) {
    using std::numbers::pi;
    for (int tries = 0; tries < 200; ++tries) {
        std::vector<double> phi(c.num_edges());
        for (double& v : phi) {
            v = sampler.uniform(0.0, pi - 1e-6);
        }
        if (qcp::condition_S_all(c, phi).ok) {
            return phi;
        }
    }
    std::vector<double> phi(c.num_edges());
    for (double& v : phi) {
        v = sampler.uniform(0.0, pi / 2.0);
    }
    return phi;
}

inline std::vector<double> random_radii(int n, double lo, double hi, AngleSampler& sampler) {
    std::vector<double> r(n);
    for (double& v : r) {
        v = sampler.uniform(lo, hi);
    }
    return r;
}

} // namespace oracles
