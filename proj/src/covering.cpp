#include "qcp/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "qcp/triangulation_io.hpp"

namespace qcp {

int VoltageGroup::degree() const {
    int d = 1;
    for (int i = 0; i < rank; ++i) {
        d *= prime;
    }
    return d;
}

std::vector<int> VoltageGroup::tuple_of(int rank_index) const {
    std::vector<int> t(rank, 0);
    for (int i = rank - 1; i >= 0; --i) {
        t[i] = rank_index % prime;
        rank_index /= prime;
    }
    return t;
}

int VoltageGroup::rank_of(const std::vector<int>& tuple) const {
    int r = 0;
    for (int i = 0; i < rank; ++i) {
        r = r * prime + ((tuple[i] % prime) + prime) % prime;
    }
    return r;
}

int VoltageGroup::add(int a, int b) const {
    int r = 0;
    int scale = 1;
    for (int i = 0; i < rank; ++i) {
        scale *= prime;
    }
    for (int i = 0; i < rank; ++i) {
        scale /= prime;
        const int da = (a / scale) % prime;
        const int db = (b / scale) % prime;
        r += ((da + db) % prime) * scale;
        a %= scale * prime;
        b %= scale * prime;
    }
    return r;
}

int VoltageGroup::neg(int a) const {
    int r = 0;
    int scale = degree();
    for (int i = 0; i < rank; ++i) {
        scale /= prime;
        const int da = (a / scale) % prime;
        r += ((prime - da) % prime) * scale;
    }
    return r;
}

void verify_voltages(const DeltaComplex& c, const VoltageAssignment& va) {
    if (static_cast<int>(va.alpha.size()) != c.num_edges()) {
        throw Error(ErrorKind::Domain, "voltage assignment size does not match edge count");
    }
    const int deg = va.group.degree();
    for (int e = 0; e < c.num_edges(); ++e) {
        if (va.alpha[e] < 0 || va.alpha[e] >= deg) {
            throw Error(ErrorKind::Domain,
                        "voltage of edge " + std::to_string(e) + " outside the group");
        }
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        const int lhs = va.group.add(va.alpha[tr.d2], va.alpha[tr.d0]);
        if (lhs != va.alpha[tr.d1]) {
            std::ostringstream os;
            os << "triangle " << t << " relator violated: alpha(d2) + alpha(d0) != alpha(d1)";
            throw Error(ErrorKind::Domain, os.str());
        }
    }
}

namespace {

int mod_pow(int base, int exp, int p) {
    long long r = 1;
    long long b = base % p;
    while (exp > 0) {
        if (exp & 1) {
            r = r * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    return static_cast<int>(r);
}

int mod_inverse(int a, int p) { return mod_pow(((a % p) + p) % p, p - 2, p); }

bool is_prime(int p) {
    if (p < 2) {
        return false;
    }
    for (int d = 2; d * d <= p; ++d) {
        if (p % d == 0) {
            return false;
        }
    }
    return true;
}

// BFS spanning tree of the 1-skeleton rooted at vertex 0; loops never
// qualify. Ties break toward the smallest edge id because neighbors are
// scanned in edge-id order.
std::vector<uint8_t> spanning_tree_edges(const DeltaComplex& c) {
    std::vector<std::vector<int>> vertex_edges(c.vertex_count);
    for (int e = 0; e < c.num_edges(); ++e) {
        if (c.edges[e].d0 != c.edges[e].d1) {
            vertex_edges[c.edges[e].d0].push_back(e);
            vertex_edges[c.edges[e].d1].push_back(e);
        }
    }
    std::vector<uint8_t> in_tree(c.num_edges(), 0);
    std::vector<uint8_t> visited(c.vertex_count, 0);
    std::queue<int> frontier;
    if (c.vertex_count > 0) {
        visited[0] = 1;
        frontier.push(0);
    }
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int e : vertex_edges[v]) {
            const int w = (c.edges[e].d0 == v) ? c.edges[e].d1 : c.edges[e].d0;
            if (!visited[w]) {
                visited[w] = 1;
                in_tree[e] = 1;
                frontier.push(w);
            }
        }
    }
    return in_tree;
}

} // namespace

VoltageAssignment homology_voltages(const DeltaComplex& c, int prime) {
    if (!is_prime(prime)) {
        throw Error(ErrorKind::Domain, "modulus " + std::to_string(prime) + " is not prime");
    }
    if (!is_connected(c)) {
        throw Error(ErrorKind::Domain, "homology voltages require a connected complex");
    }
    orientation(c); // rejects non-orientable input

    const auto in_tree = spanning_tree_edges(c);
    std::vector<int> generator_index(c.num_edges(), -1);
    std::vector<int> generator_edges;
    for (int e = 0; e < c.num_edges(); ++e) {
        if (!in_tree[e]) {
            generator_index[e] = static_cast<int>(generator_edges.size());
            generator_edges.push_back(e);
        }
    }
    const int m = static_cast<int>(generator_edges.size());

    // Triangle relators restricted to the generators (tree edges are
    // collapsed, i.e. contribute zero).
    std::vector<std::vector<int>> rows;
    rows.reserve(c.num_triangles());
    for (const TriangleRec& tr : c.triangles) {
        std::vector<int> row(m, 0);
        auto bump = [&](int e, int coeff) {
            if (generator_index[e] >= 0) {
                row[generator_index[e]] = (((row[generator_index[e]] + coeff) % prime) + prime) % prime;
            }
        };
        bump(tr.d0, 1);
        bump(tr.d1, -1);
        bump(tr.d2, 1);
        rows.push_back(std::move(row));
    }

    // Row-reduce mod p.
    std::vector<int> pivot_row_of_col(m, -1);
    int rank = 0;
    for (int col = 0; col < m && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (rows[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        const int inv = mod_inverse(rows[rank][col], prime);
        for (int j = col; j < m; ++j) {
            rows[rank][j] = rows[rank][j] * inv % prime;
        }
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r != rank && rows[r][col] != 0) {
                const int factor = rows[r][col];
                for (int j = col; j < m; ++j) {
                    rows[r][j] = ((rows[r][j] - factor * rows[rank][j]) % prime + prime) % prime;
                }
            }
        }
        pivot_row_of_col[col] = rank;
        ++rank;
    }

    std::vector<int> free_cols;
    for (int col = 0; col < m; ++col) {
        if (pivot_row_of_col[col] < 0) {
            free_cols.push_back(col);
        }
    }
    const int k = static_cast<int>(free_cols.size());
    std::vector<int> free_slot(m, -1);
    for (int i = 0; i < k; ++i) {
        free_slot[free_cols[i]] = i;
    }

    VoltageGroup group{prime, k};
    VoltageAssignment va;
    va.group = group;
    va.alpha.assign(c.num_edges(), 0);
    for (int e = 0; e < c.num_edges(); ++e) {
        const int col = generator_index[e];
        if (col < 0) {
            continue; // tree edge
        }
        std::vector<int> tuple(k, 0);
        if (free_slot[col] >= 0) {
            tuple[free_slot[col]] = 1 % prime;
        } else {
            // Pivot generator: its class is minus the free part of its row.
            const std::vector<int>& row = rows[pivot_row_of_col[col]];
            for (int i = 0; i < k; ++i) {
                tuple[i] = (prime - row[free_cols[i]]) % prime;
            }
        }
        va.alpha[e] = group.rank_of(tuple);
    }

    verify_voltages(c, va);
    return va;
}

Covering derived_cover(const DeltaComplex& c, const VoltageAssignment& va) {
    verify_voltages(c, va);
    const int deg = va.group.degree();

    Covering cov;
    cov.base = c;
    cov.voltages = va;
    cov.degree = deg;

    DeltaComplex& total = cov.total;
    total.vertex_count = c.num_vertices() * deg;
    total.edges.resize(static_cast<std::size_t>(c.num_edges()) * deg);
    total.triangles.resize(static_cast<std::size_t>(c.num_triangles()) * deg);

    for (int e = 0; e < c.num_edges(); ++e) {
        for (int h = 0; h < deg; ++h) {
            EdgeRec rec;
            rec.d1 = cov.cell_id(c.edges[e].d1, h);
            rec.d0 = cov.cell_id(c.edges[e].d0, va.group.add(h, va.alpha[e]));
            total.edges[cov.cell_id(e, h)] = rec;
        }
    }
    for (int t = 0; t < c.num_triangles(); ++t) {
        const TriangleRec& tr = c.triangles[t];
        for (int g = 0; g < deg; ++g) {
            TriangleRec rec;
            rec.d2 = cov.cell_id(tr.d2, g);
            rec.d1 = cov.cell_id(tr.d1, g);
            rec.d0 = cov.cell_id(tr.d0, va.group.add(g, va.alpha[tr.d2]));
            total.triangles[cov.cell_id(t, g)] = rec;
        }
    }
    validate(total);
    return cov;
}

Covering identity_cover(const DeltaComplex& c) {
    VoltageAssignment trivial;
    trivial.group = VoltageGroup{2, 0};
    trivial.alpha.assign(c.num_edges(), 0);
    return derived_cover(c, trivial);
}

Covering unwrap(const DeltaComplex& c, int p_max, std::vector<UnwrapAttempt>* rejected_out) {
    if (check_simplicial(c).simplicial()) {
        return identity_cover(c);
    }
    std::vector<UnwrapAttempt> attempts;
    for (int p = 2; p <= p_max; ++p) {
        if (!is_prime(p)) {
            continue;
        }
        const VoltageAssignment va = homology_voltages(c, p);
        Covering cov = derived_cover(c, va);
        SimplicialWitnesses w = check_simplicial(cov.total);
        if (w.simplicial()) {
            if (rejected_out != nullptr) {
                *rejected_out = std::move(attempts);
            }
            return cov;
        }
        attempts.push_back(UnwrapAttempt{p, std::move(w)});
    }
    std::ostringstream os;
    os << "no mod-p homology cover with p <= " << p_max
       << " unwraps this complex (tried:";
    for (const UnwrapAttempt& a : attempts) {
        os << " p=" << a.prime << " [" << a.witnesses.loops.size() << " loops, "
           << a.witnesses.parallel_pairs.size() << " parallel pairs]";
    }
    os << "); supply an explicit voltage file to use a cover outside this family";
    if (rejected_out != nullptr) {
        *rejected_out = attempts;
    }
    throw UnwrapError(os.str(), std::move(attempts));
}

std::vector<double> pullback_vertex_data(const Covering& cov, const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != cov.base.num_vertices()) {
        throw Error(ErrorKind::Domain, "vertex data size does not match base complex");
    }
    std::vector<double> out(cov.total.num_vertices());
    for (int v_hat = 0; v_hat < cov.total.num_vertices(); ++v_hat) {
        out[v_hat] = f[cov.project_vertex(v_hat)];
    }
    return out;
}

std::vector<double> pullback_edge_data(const Covering& cov, const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != cov.base.num_edges()) {
        throw Error(ErrorKind::Domain, "edge data size does not match base complex");
    }
    std::vector<double> out(cov.total.num_edges());
    for (int e_hat = 0; e_hat < cov.total.num_edges(); ++e_hat) {
        out[e_hat] = phi[cov.project_edge(e_hat)];
    }
    return out;
}

std::vector<double> pushforward_average(const Covering& cov, const std::vector<double>& f_hat) {
    if (static_cast<int>(f_hat.size()) != cov.total.num_vertices()) {
        throw Error(ErrorKind::Domain, "vertex data size does not match total complex");
    }
    std::vector<double> out(cov.base.num_vertices(), 0.0);
    for (int v = 0; v < cov.base.num_vertices(); ++v) {
        double sum = 0.0;
        for (int h = 0; h < cov.degree; ++h) {
            sum += f_hat[cov.cell_id(v, h)];
        }
        out[v] = sum / cov.degree;
    }
    return out;
}

DeckInvariance is_deck_invariant(const Covering& cov, const std::vector<double>& f_hat,
                                 double tol) {
    if (tol < 0) {
        throw Error(ErrorKind::Domain, "tolerance must be non-negative");
    }
    if (static_cast<int>(f_hat.size()) != cov.total.num_vertices()) {
        throw Error(ErrorKind::Domain, "vertex data size does not match total complex");
    }
    double deviation = 0.0;
    for (int v = 0; v < cov.base.num_vertices(); ++v) {
        double lo = f_hat[cov.cell_id(v, 0)];
        double hi = lo;
        for (int h = 1; h < cov.degree; ++h) {
            lo = std::min(lo, f_hat[cov.cell_id(v, h)]);
            hi = std::max(hi, f_hat[cov.cell_id(v, h)]);
        }
        deviation = std::max(deviation, hi - lo);
    }
    return DeckInvariance{deviation <= tol, deviation};
}

VoltageAssignment parse_voltage_file(std::string_view text, const DeltaComplex& c) {
    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_no = 0;
    bool have_group = false;
    VoltageAssignment va;
    std::vector<uint8_t> assigned;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        if (raw.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        std::istringstream in(raw);
        std::string kind;
        in >> kind;
        auto fail = [&](const std::string& what) -> void {
            throw Error(ErrorKind::Parse,
                        "voltage file line " + std::to_string(line_no) + ": " + what);
        };
        if (kind == "group") {
            if (have_group) {
                fail("duplicate 'group' line");
            }
            int p = 0;
            int k = -1;
            if (!(in >> p >> k) || k < 0) {
                fail("expected 'group <p> <k>'");
            }
            if (!is_prime(p)) {
                fail("group modulus must be prime");
            }
            va.group = VoltageGroup{p, k};
            va.alpha.assign(c.num_edges(), 0);
            assigned.assign(c.num_edges(), 0);
            have_group = true;
        } else if (kind == "volt") {
            if (!have_group) {
                fail("'volt' before 'group'");
            }
            int e = -1;
            if (!(in >> e) || e < 0 || e >= c.num_edges()) {
                fail("bad edge id");
            }
            if (assigned[e]) {
                fail("duplicate voltage for edge " + std::to_string(e));
            }
            std::vector<int> tuple(va.group.rank, 0);
            for (int i = 0; i < va.group.rank; ++i) {
                if (!(in >> tuple[i])) {
                    fail("expected " + std::to_string(va.group.rank) + " residues");
                }
            }
            std::string extra;
            if (in >> extra) {
                fail("unexpected trailing token '" + extra + "'");
            }
            va.alpha[e] = va.group.rank_of(tuple);
            assigned[e] = 1;
        } else {
            fail("unknown keyword '" + kind + "'");
        }
    }
    if (!have_group) {
        throw Error(ErrorKind::Parse, "voltage file missing 'group' line");
    }
    for (int e = 0; e < c.num_edges(); ++e) {
        if (!assigned[e]) {
            throw Error(ErrorKind::Parse, "voltage file missing edge " + std::to_string(e));
        }
    }
    verify_voltages(c, va);
    return va;
}

VoltageAssignment load_voltage_file(const std::filesystem::path& path, const DeltaComplex& c) {
    return parse_voltage_file(read_file(path), c);
}

std::string format_voltage_file(const VoltageAssignment& va) {
    std::ostringstream os;
    os << "group " << va.group.prime << ' ' << va.group.rank << '\n';
    for (std::size_t e = 0; e < va.alpha.size(); ++e) {
        os << "volt " << e;
        for (int digit : va.group.tuple_of(va.alpha[e])) {
            os << ' ' << digit;
        }
        os << '\n';
    }
    return os.str();
}

} // namespace qcp
