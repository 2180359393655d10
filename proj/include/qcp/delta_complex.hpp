#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcp/error.hpp"

namespace qcp {

// An edge carries two face maps to vertices: d0 is the terminal vertex,
// d1 the initial one. Loops (d0 == d1) are allowed.
struct EdgeRec {
    int d0 = -1;
    int d1 = -1;
};

// A triangle carries three face maps to edges; d_i is the edge opposite
// the i-th vertex. Repeated edge ids are allowed.
struct TriangleRec {
    int d0 = -1;
    int d1 = -1;
    int d2 = -1;

    int slot(int i) const { return i == 0 ? d0 : (i == 1 ? d1 : d2); }
};

// Ordered vertex triple of a triangle, derived from the face maps:
// v0 = d1(d2), v1 = d0(d2), v2 = d0(d1).
struct VertexTriple {
    int v0 = -1;
    int v1 = -1;
    int v2 = -1;

    int operator[](int i) const { return i == 0 ? v0 : (i == 1 ? v1 : v2); }
};

// One (edge, triangle, slot) incidence. Each edge of a closed-surface
// complex appears in exactly two of these.
struct EdgeIncidence {
    int triangle = -1;
    int slot = -1;
};

// Combinatorial model of a (quasi-simplicial) triangulated surface as a
// two-dimensional Delta complex. Cells are dense 0-based integer ids.
// Instances are plain immutable data after construction; all operations
// below are pure functions of their inputs.
struct DeltaComplex {
    int vertex_count = 0;
    std::vector<EdgeRec> edges;
    std::vector<TriangleRec> triangles;

    int num_vertices() const { return vertex_count; }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }

    VertexTriple vertex_triple(int t) const {
        const TriangleRec& tr = triangles[t];
        return VertexTriple{edges[tr.d2].d1, edges[tr.d2].d0, edges[tr.d1].d0};
    }

    int euler_characteristic() const {
        return num_vertices() - num_edges() + num_triangles();
    }

    // For each edge, its (triangle, slot) incidences in (triangle, slot) order.
    std::vector<std::vector<EdgeIncidence>> edge_incidences() const;

    // Edge-endpoint incidences per vertex; loops count twice.
    std::vector<int> vertex_degrees() const;
};

// Checks every structural invariant: id ranges, the simplicial identities,
// the closed-surface condition (each edge in exactly two triangle slots),
// and vertex degree >= 3. Throws Error{Invariant} naming the offending cell.
void validate(const DeltaComplex& c);

// True iff the complex is connected (walk on the triangle adjacency graph;
// a valid closed complex has every vertex and edge on some triangle).
bool is_connected(const DeltaComplex& c);

struct SimplicialWitnesses {
    std::vector<int> loops;                         // edge ids with d0 == d1
    std::vector<std::pair<int, int>> parallel_pairs; // distinct edges, same endpoint pair

    bool simplicial() const { return loops.empty() && parallel_pairs.empty(); }
};

// Loop / multi-edge detection. Witnesses enumerate every offending loop and
// every unordered pair of parallel edges.
SimplicialWitnesses check_simplicial(const DeltaComplex& c);

// eps : F -> {+1, -1} with eps(t)(-1)^i + eps(t')(-1)^j = 0 across every
// shared edge; eps(triangle 0) = +1 by convention.
struct Orientation {
    std::vector<int> eps;
};

// Throws Error{Domain} when the complex is disconnected, or non-orientable
// (message carries an obstructing edge cycle).
Orientation orientation(const DeltaComplex& c);

// Is the given eps a valid orientation? Used by tests and by the
// non-orientability witness itself.
bool orientation_valid(const DeltaComplex& c, const std::vector<int>& eps);

using IntMatrix = std::vector<std::vector<long long>>;

// Boundary matrices with the sign convention
//   D1 column e:  +1 at d1(e), -1 at d0(e)       (zero column on loops)
//   D2 column t:  +1 at d0(t), -1 at d1(t), +1 at d2(t)   (entries accumulate)
// Satisfies D1 * D2 = 0.
struct BoundaryMatrices {
    IntMatrix d1; // |V| x |E|
    IntMatrix d2; // |E| x |F|
};

BoundaryMatrices boundary_matrices(const DeltaComplex& c);

// chi = |V| - |E| + |F|; genus from chi = 2 - 2g. genus() requires a
// connected orientable complex and throws Error{Domain} otherwise (or on
// odd chi, which signals non-surface input).
int genus(const DeltaComplex& c);

struct SubcomplexSummary {
    std::vector<int> subset;
    int edge_count = 0;
    int face_count = 0;
    int euler_char = 0;
};

// Counts cells all of whose (multiset of) vertices lie in the subset.
// Throws Error{Domain} on an empty subset or out-of-range ids.
SubcomplexSummary subcomplex_summary(const DeltaComplex& c, const std::vector<int>& subset);

struct LinkPair {
    int edge = -1;
    int triangle = -1;
    int slot = -1;
};

enum class LinkMode {
    Simplicial, // (e, t): e a side of t, both endpoints of e outside I, t touches I
    Delta,      // (t, i): v_i(t) in I, v_s(t) outside I for s != i; slot-counted
};

// Link of a vertex subset. Requires a non-empty proper subset; simplicial
// mode additionally requires check_simplicial(c) to pass. In delta mode a
// triangle may contribute several pairs (one per qualifying slot).
std::vector<LinkPair> link_pairs(const DeltaComplex& c, const std::vector<int>& subset,
                                 LinkMode mode);

// Internal helper shared with the subset machinery: membership mask from a
// list of vertex ids. Throws Error{Domain} on out-of-range or duplicate ids.
std::vector<uint8_t> subset_mask(const DeltaComplex& c, const std::vector<int>& subset);

} // namespace qcp
