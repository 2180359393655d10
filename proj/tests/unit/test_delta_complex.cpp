#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qcp/delta_complex.hpp"
#include "qcp/triangulation_io.hpp"

using namespace qcp;

namespace {

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.size(), std::vector<long long>(b.empty() ? 0 : b[0].size(), 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < b.size(); ++k) {
            for (std::size_t j = 0; j < out[i].size(); ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

bool all_zero(const IntMatrix& m) {
    for (const auto& row : m) {
        for (long long v : row) {
            if (v != 0) {
                return false;
            }
        }
    }
    return true;
}

// Exhaustive orientation count for small complexes: number of sign
// assignments satisfying the per-edge condition.
int count_valid_orientations(const DeltaComplex& c) {
    const int nt = c.num_triangles();
    int count = 0;
    for (int bits = 0; bits < (1 << nt); ++bits) {
        std::vector<int> eps(nt);
        for (int t = 0; t < nt; ++t) {
            eps[t] = (bits >> t) & 1 ? 1 : -1;
        }
        if (orientation_valid(c, eps)) {
            ++count;
        }
    }
    return count;
}

} // namespace

TEST_CASE("one-vertex torus: counts, validity, chi, genus") {
    const DeltaComplex c = fixtures::one_vertex_torus();
    CHECK_NOTHROW(validate(c));
    CHECK(c.num_vertices() == 1);
    CHECK(c.num_edges() == 3);
    CHECK(c.num_triangles() == 2);
    CHECK(c.euler_characteristic() == 0);
    CHECK(genus(c) == 1);
    CHECK(is_connected(c));
}

TEST_CASE("tetrahedron: simplicial, chi = 2, genus 0") {
    const DeltaComplex c = fixtures::tetrahedron();
    CHECK_NOTHROW(validate(c));
    CHECK(c.euler_characteristic() == 2);
    CHECK(genus(c) == 0);
    const SimplicialWitnesses w = check_simplicial(c);
    CHECK(w.simplicial());
    CHECK(w.loops.empty());
    CHECK(w.parallel_pairs.empty());
}

TEST_CASE("one-vertex genus-2: chi = -2, genus 2") {
    for (const DeltaComplex& c : {fixtures::genus2(), fixtures::genus2_fan()}) {
        CHECK_NOTHROW(validate(c));
        CHECK(c.euler_characteristic() == -2);
        CHECK(genus(c) == 2);
    }
}

TEST_CASE("simplicial witnesses: loops and parallel pairs") {
    const SimplicialWitnesses torus = check_simplicial(fixtures::one_vertex_torus());
    CHECK_FALSE(torus.simplicial());
    CHECK(torus.loops == std::vector<int>{0, 1, 2});

    const SimplicialWitnesses two = check_simplicial(fixtures::two_vertex_torus());
    CHECK_FALSE(two.simplicial());
    CHECK(two.loops == std::vector<int>{0, 1});
    // four parallel edges joining the two vertices -> 6 unordered pairs
    CHECK(two.parallel_pairs.size() == 6);
}

TEST_CASE("vertex triples satisfy the simplicial identities") {
    for (const DeltaComplex& c :
         {fixtures::tetrahedron(), fixtures::two_vertex_torus(), fixtures::genus2()}) {
        for (int t = 0; t < c.num_triangles(); ++t) {
            const TriangleRec& tr = c.triangles[t];
            const VertexTriple v = c.vertex_triple(t);
            CHECK(c.edges[tr.d2].d1 == v.v0);
            CHECK(c.edges[tr.d2].d0 == v.v1);
            CHECK(c.edges[tr.d1].d1 == v.v0);
            CHECK(c.edges[tr.d1].d0 == v.v2);
            CHECK(c.edges[tr.d0].d1 == v.v1);
            CHECK(c.edges[tr.d0].d0 == v.v2);
        }
    }
}

TEST_CASE("validation rejects broken complexes") {
    SUBCASE("missing edge id") {
        DeltaComplex c = fixtures::one_vertex_torus();
        c.triangles[0].d2 = 9;
        CHECK_THROWS_AS(validate(c), Error);
    }
    SUBCASE("missing vertex id") {
        DeltaComplex c = fixtures::tetrahedron();
        c.edges[0].d0 = 7;
        CHECK_THROWS_AS(validate(c), Error);
    }
    SUBCASE("simplicial identity violation") {
        DeltaComplex c = fixtures::tetrahedron();
        std::swap(c.triangles[0].d0, c.triangles[0].d1);
        CHECK_THROWS_AS(validate(c), Error);
    }
    SUBCASE("open surface: edge on one triangle only") {
        DeltaComplex c = fixtures::tetrahedron();
        c.triangles.pop_back();
        CHECK_THROWS_AS(validate(c), Error);
    }
    SUBCASE("degree-2 vertices (double triangle)") {
        CHECK_THROWS_AS(validate(fixtures::sphere_double_triangle()), Error);
    }
}

TEST_CASE("boundary matrices: chain identity and paper sign convention") {
    SUBCASE("loops give a zero D1 (one-vertex torus)") {
        const BoundaryMatrices m = boundary_matrices(fixtures::one_vertex_torus());
        CHECK(all_zero(m.d1));
        CHECK(all_zero(multiply(m.d1, m.d2)));
    }
    SUBCASE("tetrahedron: D1 * D2 = 0 entrywise") {
        const BoundaryMatrices m = boundary_matrices(fixtures::tetrahedron());
        CHECK_FALSE(all_zero(m.d1));
        CHECK(all_zero(multiply(m.d1, m.d2)));
        // column convention: d1(e) - d0(e)
        CHECK(m.d1[0][0] == 1);  // edge 0 runs 0 -> 1
        CHECK(m.d1[1][0] == -1);
    }
    SUBCASE("double triangle sphere: ranks over the rationals") {
        const DeltaComplex c = fixtures::sphere_double_triangle();
        const BoundaryMatrices m = boundary_matrices(c);
        CHECK(oracles::matrix_rank_rational(m.d1) == 2);
        CHECK(oracles::matrix_rank_rational(m.d2) == 1);
        CHECK(c.euler_characteristic() == 2);
        CHECK(all_zero(multiply(m.d1, m.d2)));
    }
    SUBCASE("chain identity across all fixtures") {
        for (const DeltaComplex& c : {fixtures::one_vertex_torus(), fixtures::tetrahedron(),
                                      fixtures::genus2(), fixtures::genus2_fan(),
                                      fixtures::two_vertex_torus(), fixtures::klein_bottle()}) {
            const BoundaryMatrices m = boundary_matrices(c);
            CHECK(all_zero(multiply(m.d1, m.d2)));
        }
    }
}

TEST_CASE("orientation: forced signs, Klein bottle rejection, uniqueness") {
    SUBCASE("one-vertex torus: eps(0) = +1 forces eps(1) = -1") {
        const Orientation o = orientation(fixtures::one_vertex_torus());
        CHECK(o.eps == std::vector<int>{1, -1});
    }
    SUBCASE("tetrahedron is orientable") {
        const Orientation o = orientation(fixtures::tetrahedron());
        CHECK(o.eps[0] == 1);
        CHECK(orientation_valid(fixtures::tetrahedron(), o.eps));
    }
    SUBCASE("Klein bottle gluing is non-orientable, with an edge-cycle witness") {
        try {
            orientation(fixtures::klein_bottle());
            FAIL("expected non-orientable error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Domain);
            CHECK(std::string(e.what()).find("cycle") != std::string::npos);
        }
        CHECK_THROWS_AS(genus(fixtures::klein_bottle()), Error);
    }
    SUBCASE("exactly two valid sign assignments per connected complex") {
        CHECK(count_valid_orientations(fixtures::one_vertex_torus()) == 2);
        CHECK(count_valid_orientations(fixtures::tetrahedron()) == 2);
        CHECK(count_valid_orientations(fixtures::genus2()) == 2);
        CHECK(count_valid_orientations(fixtures::klein_bottle()) == 0);
    }
}

TEST_CASE("2|E| = 3|F| on every valid closed complex") {
    for (const DeltaComplex& c : {fixtures::one_vertex_torus(), fixtures::tetrahedron(),
                                  fixtures::genus2(), fixtures::two_vertex_torus()}) {
        CHECK(2 * c.num_edges() == 3 * c.num_triangles());
    }
}

TEST_CASE("subcomplex summaries") {
    const DeltaComplex tet = fixtures::tetrahedron();
    SUBCASE("single vertex of the tetrahedron") {
        const SubcomplexSummary s = subcomplex_summary(tet, {1});
        CHECK(s.edge_count == 0);
        CHECK(s.face_count == 0);
        CHECK(s.euler_char == 1);
    }
    SUBCASE("three vertices of one face") {
        const SubcomplexSummary s = subcomplex_summary(tet, {0, 1, 2});
        CHECK(s.edge_count == 3);
        CHECK(s.face_count == 1);
        CHECK(s.euler_char == 1);
    }
    SUBCASE("full vertex set returns global counts") {
        const SubcomplexSummary s = subcomplex_summary(tet, {0, 1, 2, 3});
        CHECK(s.edge_count == tet.num_edges());
        CHECK(s.face_count == tet.num_triangles());
        CHECK(s.euler_char == tet.euler_characteristic());
    }
    SUBCASE("loops at a vertex count as subcomplex edges") {
        const SubcomplexSummary s = subcomplex_summary(fixtures::two_vertex_torus(), {0});
        CHECK(s.edge_count == 2); // the two loops
        CHECK(s.face_count == 0);
        CHECK(s.euler_char == -1);
    }
    SUBCASE("empty subset rejected") {
        CHECK_THROWS_AS(subcomplex_summary(tet, {}), Error);
    }
}

TEST_CASE("link pairs") {
    const DeltaComplex tet = fixtures::tetrahedron();
    SUBCASE("tetrahedron, single vertex: three opposite edges") {
        const auto pairs = link_pairs(tet, {0}, LinkMode::Simplicial);
        CHECK(pairs.size() == 3);
        for (const LinkPair& p : pairs) {
            CHECK(tet.edges[p.edge].d0 != 0);
            CHECK(tet.edges[p.edge].d1 != 0);
            const VertexTriple v = tet.vertex_triple(p.triangle);
            CHECK(v[p.slot] == 0);
        }
    }
    SUBCASE("delta and simplicial modes agree on simplicial complexes") {
        for (const std::vector<int>& subset :
             {std::vector<int>{0}, std::vector<int>{1, 2}, std::vector<int>{0, 3}, std::vector<int>{1, 2, 3}}) {
            auto a = link_pairs(tet, subset, LinkMode::Simplicial);
            auto b = link_pairs(tet, subset, LinkMode::Delta);
            auto key = [](const LinkPair& p) { return std::tuple(p.edge, p.triangle, p.slot); };
            std::sort(a.begin(), a.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
            std::sort(b.begin(), b.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(key(a[i]) == key(b[i]));
            }
        }
    }
    SUBCASE("simplicial mode refuses non-simplicial complexes") {
        CHECK_THROWS_AS(link_pairs(fixtures::one_vertex_torus(), {0}, LinkMode::Simplicial),
                        Error);
    }
    SUBCASE("improper subsets rejected") {
        CHECK_THROWS_AS(link_pairs(tet, {}, LinkMode::Delta), Error);
        CHECK_THROWS_AS(link_pairs(tet, {0, 1, 2, 3}, LinkMode::Delta), Error);
    }
    SUBCASE("two-vertex torus, center vertex: four slot pairs") {
        // every triangle holds the center in slot 2 with both corners outside
        const auto pairs = link_pairs(fixtures::two_vertex_torus(), {1}, LinkMode::Delta);
        CHECK(pairs.size() == 4);
        for (const LinkPair& p : pairs) {
            CHECK(p.slot == 2);
        }
    }
    SUBCASE("two-vertex torus, corner vertex: empty link") {
        // each slot at the corner has the other corner-slot inside the set
        const auto pairs = link_pairs(fixtures::two_vertex_torus(), {0}, LinkMode::Delta);
        CHECK(pairs.empty());
    }
}

TEST_CASE("parser round trip and diagnostics") {
    SUBCASE("fixture files parse to the programmatic fixtures") {
        const Triangulation torus =
            load_triangulation(fixtures::data_dir() / "one_vertex_torus.tri");
        CHECK(torus.complex.num_vertices() == 1);
        CHECK(torus.complex.num_edges() == 3);
        CHECK(torus.complex.num_triangles() == 2);
        CHECK_FALSE(torus.phi.has_value());

        const Triangulation tet = load_triangulation(fixtures::data_dir() / "tetrahedron.tri");
        CHECK(tet.complex.edges.size() == fixtures::tetrahedron().edges.size());
        for (int e = 0; e < tet.complex.num_edges(); ++e) {
            CHECK(tet.complex.edges[e].d0 == fixtures::tetrahedron().edges[e].d0);
            CHECK(tet.complex.edges[e].d1 == fixtures::tetrahedron().edges[e].d1);
        }
    }
    SUBCASE("phi lines are read and validated") {
        const Triangulation tri =
            load_triangulation(fixtures::data_dir() / "tetrahedron_phi.tri");
        REQUIRE(tri.phi.has_value());
        CHECK((*tri.phi)[0] == doctest::Approx(0.3));
        CHECK((*tri.phi)[5] == doctest::Approx(0.4));
    }
    SUBCASE("missing edge reference is an invariant violation") {
        try {
            load_triangulation(fixtures::data_dir() / "bad_missing_edge.tri");
            FAIL("expected invariant error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Invariant);
        }
    }
    SUBCASE("truncated line reports the line number") {
        try {
            load_triangulation(fixtures::data_dir() / "bad_truncated.tri");
            FAIL("expected parse error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("missing file is an I/O error") {
        try {
            load_triangulation(fixtures::data_dir() / "does_not_exist.tri");
            FAIL("expected io error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Io);
        }
    }
    SUBCASE("every fixture file matches its programmatic twin") {
        const std::vector<std::pair<const char*, DeltaComplex>> twins{
            {"one_vertex_torus.tri", fixtures::one_vertex_torus()},
            {"tetrahedron.tri", fixtures::tetrahedron()},
            {"genus2.tri", fixtures::genus2()},
            {"genus2_fan.tri", fixtures::genus2_fan()},
            {"klein_bottle.tri", fixtures::klein_bottle()},
            {"two_vertex_torus.tri", fixtures::two_vertex_torus()},
        };
        for (const auto& [name, expected] : twins) {
            const Triangulation parsed = load_triangulation(fixtures::data_dir() / name);
            const DeltaComplex& c = parsed.complex;
            REQUIRE(c.vertex_count == expected.vertex_count);
            REQUIRE(c.edges.size() == expected.edges.size());
            REQUIRE(c.triangles.size() == expected.triangles.size());
            for (int e = 0; e < c.num_edges(); ++e) {
                CHECK(c.edges[e].d0 == expected.edges[e].d0);
                CHECK(c.edges[e].d1 == expected.edges[e].d1);
            }
            for (int t = 0; t < c.num_triangles(); ++t) {
                CHECK(c.triangles[t].d0 == expected.triangles[t].d0);
                CHECK(c.triangles[t].d1 == expected.triangles[t].d1);
                CHECK(c.triangles[t].d2 == expected.triangles[t].d2);
            }
        }
    }
    SUBCASE("format/parse round trip preserves the complex") {
        const DeltaComplex c = fixtures::genus2();
        const Triangulation back = parse_triangulation(format_triangulation(c, nullptr));
        CHECK(back.complex.vertex_count == c.vertex_count);
        REQUIRE(back.complex.edges.size() == c.edges.size());
        REQUIRE(back.complex.triangles.size() == c.triangles.size());
        for (int t = 0; t < c.num_triangles(); ++t) {
            CHECK(back.complex.triangles[t].d0 == c.triangles[t].d0);
            CHECK(back.complex.triangles[t].d1 == c.triangles[t].d1);
            CHECK(back.complex.triangles[t].d2 == c.triangles[t].d2);
        }
    }
}
