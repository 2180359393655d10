#pragma once

#include <filesystem>

#include "qcp/delta_complex.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return std::filesystem::path(QCP_TEST_DATA_DIR); }

inline qcp::DeltaComplex one_vertex_torus() {
    qcp::DeltaComplex c;
    c.vertex_count = 1;
    c.edges = {{0, 0}, {0, 0}, {0, 0}};
    c.triangles = {{1, 2, 0}, {0, 2, 1}};
    return c;
}

inline qcp::DeltaComplex tetrahedron() {
    qcp::DeltaComplex c;
    c.vertex_count = 4;
    c.edges = {{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {3, 2}};
    c.triangles = {{3, 1, 0}, {4, 2, 0}, {5, 2, 1}, {5, 4, 3}};
    return c;
}

// Octagon a b a^-1 b^-1 c d c^-1 d^-1 with the inscribed-square diagonals;
// every edge carries a distinct homology class, so a small homology cover
// unwraps it.
inline qcp::DeltaComplex genus2() {
    qcp::DeltaComplex c;
    c.vertex_count = 1;
    c.edges.assign(9, {0, 0});
    c.triangles = {{4, 1, 0}, {5, 2, 1}, {6, 3, 2}, {7, 3, 0}, {5, 8, 4}, {6, 7, 8}};
    return c;
}

// Same surface, fan triangulation: diagonal g3 is homologous to side b, so
// their lifts stay parallel in every abelian cover.
inline qcp::DeltaComplex genus2_fan() {
    qcp::DeltaComplex c;
    c.vertex_count = 1;
    c.edges.assign(9, {0, 0});
    c.triangles = {{1, 4, 0}, {0, 4, 5}, {1, 5, 6}, {2, 7, 6}, {3, 8, 7}, {2, 8, 3}};
    return c;
}

inline qcp::DeltaComplex klein_bottle() {
    qcp::DeltaComplex c;
    c.vertex_count = 1;
    c.edges = {{0, 0}, {0, 0}, {0, 0}};
    c.triangles = {{1, 2, 0}, {0, 1, 2}};
    return c;
}

// Corner vertex 0 (loops a, b) and center vertex 1 joined by four parallel
// edges; a quasi-simplicial torus with a genuinely multi-vertex base.
inline qcp::DeltaComplex two_vertex_torus() {
    qcp::DeltaComplex c;
    c.vertex_count = 2;
    c.edges = {{0, 0}, {0, 0}, {1, 0}, {1, 0}, {1, 0}, {1, 0}};
    c.triangles = {{3, 2, 0}, {5, 3, 1}, {5, 4, 0}, {4, 2, 1}};
    return c;
}

// Two triangles glued along all three edges. A sphere, but its vertices
// have degree 2, so it fails full validation; used raw where only the
// chain complex matters.
inline qcp::DeltaComplex sphere_double_triangle() {
    qcp::DeltaComplex c;
    c.vertex_count = 3;
    c.edges = {{1, 0}, {2, 0}, {2, 1}};
    c.triangles = {{2, 1, 0}, {2, 1, 0}};
    return c;
}

// Relabels vertices by perm (old id -> new id), keeping edge/triangle ids.
inline qcp::DeltaComplex permute_vertices(const qcp::DeltaComplex& c,
                                          const std::vector<int>& perm) {
    qcp::DeltaComplex out = c;
    for (auto& e : out.edges) {
        e.d0 = perm[e.d0];
        e.d1 = perm[e.d1];
    }
    return out;
}

} // namespace fixtures
