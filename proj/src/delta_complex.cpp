#include "qcp/delta_complex.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <queue>
#include <sstream>

namespace qcp {

std::vector<std::vector<EdgeIncidence>> DeltaComplex::edge_incidences() const {
    std::vector<std::vector<EdgeIncidence>> inc(edges.size());
    for (int t = 0; t < num_triangles(); ++t) {
        for (int i = 0; i < 3; ++i) {
            inc[triangles[t].slot(i)].push_back(EdgeIncidence{t, i});
        }
    }
    return inc;
}

std::vector<int> DeltaComplex::vertex_degrees() const {
    std::vector<int> deg(vertex_count, 0);
    for (const EdgeRec& e : edges) {
        deg[e.d0] += 1;
        deg[e.d1] += 1;
    }
    return deg;
}

void validate(const DeltaComplex& c) {
    if (c.vertex_count < 0) {
        throw Error(ErrorKind::Invariant, "negative vertex count");
    }
    for (int e = 0; e < c.num_edges(); ++e) {
        const EdgeRec& rec = c.edges[e];
        if (rec.d0 < 0 || rec.d0 >= c.vertex_count || rec.d1 < 0 || rec.d1 >= c.vertex_count) {
            std::ostringstream os;
            os << "edge " << e << " references missing vertex (d0=" << rec.d0
               << ", d1=" << rec.d1 << ", |V|=" << c.vertex_count << ")";
            throw Error(ErrorKind::Invariant, os.str());
        }
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        for (int i = 0; i < 3; ++i) {
            if (tr.slot(i) < 0 || tr.slot(i) >= c.num_edges()) {
                std::ostringstream os;
                os << "triangle " << t << " references missing edge id " << tr.slot(i)
                   << " in slot " << i;
                throw Error(ErrorKind::Invariant, os.str());
            }
        }
        const EdgeRec& e0 = c.edges[tr.d0];
        const EdgeRec& e1 = c.edges[tr.d1];
        const EdgeRec& e2 = c.edges[tr.d2];
        // d_i d_j = d_{j-1} d_i for 0 <= i < j <= 2
        if (e1.d0 != e0.d0 || e2.d0 != e0.d1 || e2.d1 != e1.d1) {
            std::ostringstream os;
            os << "triangle " << t << " violates the simplicial identities: "
               << "d0(d1)=" << e1.d0 << " vs d0(d0)=" << e0.d0 << ", "
               << "d0(d2)=" << e2.d0 << " vs d1(d0)=" << e0.d1 << ", "
               << "d1(d2)=" << e2.d1 << " vs d1(d1)=" << e1.d1;
            throw Error(ErrorKind::Invariant, os.str());
        }
    }
    const auto incidences = c.edge_incidences();
    for (int e = 0; e < c.num_edges(); ++e) {
        if (incidences[e].size() != 2) {
            std::ostringstream os;
            os << "edge " << e << " lies in " << incidences[e].size()
               << " triangle slots, expected exactly 2 (closed-surface condition)";
            throw Error(ErrorKind::Invariant, os.str());
        }
    }
    const auto degrees = c.vertex_degrees();
    for (int v = 0; v < c.vertex_count; ++v) {
        if (degrees[v] < 3) {
            std::ostringstream os;
            os << "vertex " << v << " has degree " << degrees[v]
               << " (< 3, counting loops twice)";
            throw Error(ErrorKind::Invariant, os.str());
        }
    }
}

bool is_connected(const DeltaComplex& c) {
    if (c.num_triangles() == 0) {
        return c.vertex_count <= 1 && c.num_edges() == 0;
    }
    // Triangles sharing an edge are adjacent; a valid closed complex is
    // connected iff its triangle graph is.
    const auto incidences = c.edge_incidences();
    std::vector<uint8_t> seen(c.num_triangles(), 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    while (!frontier.empty()) {
        const int t = frontier.front();
        frontier.pop();
        for (int i = 0; i < 3; ++i) {
            for (const EdgeIncidence& inc : incidences[c.triangles[t].slot(i)]) {
                if (!seen[inc.triangle]) {
                    seen[inc.triangle] = 1;
                    frontier.push(inc.triangle);
                }
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        return false;
    }
    // Vertices or edges not touched by any triangle also disconnect.
    std::vector<uint8_t> vertex_seen(c.vertex_count, 0);
    for (const EdgeRec& e : c.edges) {
        vertex_seen[e.d0] = 1;
        vertex_seen[e.d1] = 1;
    }
    return std::find(vertex_seen.begin(), vertex_seen.end(), 0) == vertex_seen.end();
}

SimplicialWitnesses check_simplicial(const DeltaComplex& c) {
    SimplicialWitnesses w;
    std::map<std::pair<int, int>, std::vector<int>> by_endpoints;
    for (int e = 0; e < c.num_edges(); ++e) {
        const EdgeRec& rec = c.edges[e];
        if (rec.d0 == rec.d1) {
            w.loops.push_back(e);
            continue;
        }
        by_endpoints[{std::min(rec.d0, rec.d1), std::max(rec.d0, rec.d1)}].push_back(e);
    }
    for (const auto& [endpoints, ids] : by_endpoints) {
        for (std::size_t a = 0; a + 1 < ids.size(); ++a) {
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
                w.parallel_pairs.emplace_back(ids[a], ids[b]);
            }
        }
    }
    return w;
}

bool orientation_valid(const DeltaComplex& c, const std::vector<int>& eps) {
    if (eps.size() != static_cast<std::size_t>(c.num_triangles())) {
        return false;
    }
    const auto incidences = c.edge_incidences();
    for (int e = 0; e < c.num_edges(); ++e) {
        if (incidences[e].size() != 2) {
            return false;
        }
        int sum = 0;
        for (const EdgeIncidence& inc : incidences[e]) {
            const int sign = (inc.slot % 2 == 0) ? 1 : -1;
            sum += eps[inc.triangle] * sign;
        }
        if (sum != 0) {
            return false;
        }
    }
    return true;
}

Orientation orientation(const DeltaComplex& c) {
    if (c.num_triangles() == 0) {
        throw Error(ErrorKind::Domain, "orientation undefined for a complex without triangles");
    }
    if (!is_connected(c)) {
        throw Error(ErrorKind::Domain, "orientation requires a connected complex");
    }
    const int nt = c.num_triangles();
    const auto incidences = c.edge_incidences();
    std::vector<int> eps(nt, 0);
    std::vector<int> parent(nt, -1);
    std::vector<int> parent_edge(nt, -1);
    std::queue<int> frontier;
    eps[0] = 1;
    frontier.push(0);
    while (!frontier.empty()) {
        const int t = frontier.front();
        frontier.pop();
        for (int i = 0; i < 3; ++i) {
            const int e = c.triangles[t].slot(i);
            for (const EdgeIncidence& inc : incidences[e]) {
                if (inc.triangle == t && inc.slot == i) {
                    continue;
                }
                // eps(t)(-1)^i + eps(t')(-1)^j = 0
                const int si = (i % 2 == 0) ? 1 : -1;
                const int sj = (inc.slot % 2 == 0) ? 1 : -1;
                const int forced = -eps[t] * si * sj;
                if (eps[inc.triangle] == 0) {
                    eps[inc.triangle] = forced;
                    parent[inc.triangle] = t;
                    parent_edge[inc.triangle] = e;
                    frontier.push(inc.triangle);
                } else if (eps[inc.triangle] != forced) {
                    // Obstructing cycle: tree paths of both triangles plus e.
                    std::vector<int> cycle{e};
                    for (int a = t; parent[a] != -1; a = parent[a]) {
                        cycle.push_back(parent_edge[a]);
                    }
                    for (int a = inc.triangle; parent[a] != -1; a = parent[a]) {
                        cycle.push_back(parent_edge[a]);
                    }
                    std::ostringstream os;
                    os << "complex is non-orientable; obstructing edge cycle:";
                    for (int ce : cycle) {
                        os << ' ' << ce;
                    }
                    throw Error(ErrorKind::Domain, os.str());
                }
            }
        }
    }
    return Orientation{std::move(eps)};
}

BoundaryMatrices boundary_matrices(const DeltaComplex& c) {
    BoundaryMatrices m;
    m.d1.assign(c.num_vertices(), std::vector<long long>(c.num_edges(), 0));
    m.d2.assign(c.num_edges(), std::vector<long long>(c.num_triangles(), 0));
    for (int e = 0; e < c.num_edges(); ++e) {
        m.d1[c.edges[e].d1][e] += 1;
        m.d1[c.edges[e].d0][e] -= 1;
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        m.d2[c.triangles[t].d0][t] += 1;
        m.d2[c.triangles[t].d1][t] -= 1;
        m.d2[c.triangles[t].d2][t] += 1;
    }
    return m;
}

int genus(const DeltaComplex& c) {
    if (!is_connected(c)) {
        throw Error(ErrorKind::Domain, "genus requires a connected complex");
    }
    orientation(c); // throws on non-orientable input
    const int chi = c.euler_characteristic();
    if ((2 - chi) % 2 != 0) {
        std::ostringstream os;
        os << "genus undefined: odd Euler characteristic " << chi;
        throw Error(ErrorKind::Domain, os.str());
    }
    return (2 - chi) / 2;
}

std::vector<uint8_t> subset_mask(const DeltaComplex& c, const std::vector<int>& subset) {
    std::vector<uint8_t> mask(c.vertex_count, 0);
    for (int v : subset) {
        if (v < 0 || v >= c.vertex_count) {
            std::ostringstream os;
            os << "subset vertex id " << v << " out of range";
            throw Error(ErrorKind::Domain, os.str());
        }
        if (mask[v]) {
            std::ostringstream os;
            os << "subset repeats vertex id " << v;
            throw Error(ErrorKind::Domain, os.str());
        }
        mask[v] = 1;
    }
    return mask;
}

SubcomplexSummary subcomplex_summary(const DeltaComplex& c, const std::vector<int>& subset) {
    if (subset.empty()) {
        throw Error(ErrorKind::Domain, "subcomplex of the empty vertex set is undefined");
    }
    const auto mask = subset_mask(c, subset);
    SubcomplexSummary s;
    s.subset = subset;
    std::sort(s.subset.begin(), s.subset.end());
    for (const EdgeRec& e : c.edges) {
        if (mask[e.d0] && mask[e.d1]) {
            s.edge_count += 1;
        }
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        const VertexTriple v = c.vertex_triple(t);
        if (mask[v.v0] && mask[v.v1] && mask[v.v2]) {
            s.face_count += 1;
        }
    }
    s.euler_char = static_cast<int>(subset.size()) - s.edge_count + s.face_count;
    return s;
}

std::vector<LinkPair> link_pairs(const DeltaComplex& c, const std::vector<int>& subset,
                                 LinkMode mode) {
    const auto mask = subset_mask(c, subset);
    if (subset.empty() || static_cast<int>(subset.size()) == c.vertex_count) {
        throw Error(ErrorKind::Domain, "link requires a non-empty proper vertex subset");
    }
    std::vector<LinkPair> out;
    if (mode == LinkMode::Simplicial) {
        if (!check_simplicial(c).simplicial()) {
            throw Error(ErrorKind::Domain, "simplicial link mode requires a simplicial complex");
        }
        // (e, t) with e a side of t, both endpoints of e outside I, and t
        // touching I. Sides of a simplicial triangle are distinct, so
        // iterating slots enumerates each pair once.
        for (int t = 0; t < c.num_triangles(); ++t) {
            const VertexTriple v = c.vertex_triple(t);
            const bool touches = mask[v.v0] || mask[v.v1] || mask[v.v2];
            if (!touches) {
                continue;
            }
            for (int i = 0; i < 3; ++i) {
                const int e = c.triangles[t].slot(i);
                if (!mask[c.edges[e].d0] && !mask[c.edges[e].d1]) {
                    out.push_back(LinkPair{e, t, i});
                }
            }
        }
    } else {
        // (t, i) with v_i(t) in I and v_s(t) outside I for s != i.
        for (int t = 0; t < c.num_triangles(); ++t) {
            const VertexTriple v = c.vertex_triple(t);
            for (int i = 0; i < 3; ++i) {
                bool ok = mask[v[i]] != 0;
                for (int s = 0; s < 3 && ok; ++s) {
                    if (s != i && mask[v[s]]) {
                        ok = false;
                    }
                }
                if (ok) {
                    out.push_back(LinkPair{c.triangles[t].slot(i), t, i});
                }
            }
        }
    }
    return out;
}

} // namespace qcp
