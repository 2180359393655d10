#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qcp/delta_complex.hpp"

namespace qcp {

// (Z/p)^k with elements addressed by their lexicographic rank: the tuple
// (c_1, ..., c_k) has rank c_1 p^{k-1} + ... + c_k. Rank arithmetic goes
// through digit tuples; there is no carry between digits.
struct VoltageGroup {
    int prime = 2;
    int rank = 0;

    int degree() const;
    std::vector<int> tuple_of(int rank_index) const;
    int rank_of(const std::vector<int>& tuple) const;
    int add(int a, int b) const;
    int neg(int a) const;
};

// alpha : E -> (Z/p)^k, stored as ranks. Valid iff each triangle's boundary
// relator maps to zero: alpha(d2) + alpha(d0) = alpha(d1).
struct VoltageAssignment {
    VoltageGroup group;
    std::vector<int> alpha;
};

// Throws Error{Domain} naming the first triangle whose relator fails.
void verify_voltages(const DeltaComplex& c, const VoltageAssignment& va);

// Mod-p homology voltages: spanning tree (BFS from vertex 0, smallest edge
// id first, loops excluded) gets voltage 0; the remaining generators map
// through mod-p elimination of the triangle relators onto (Z/p)^{2g}.
// Requires a valid, connected, orientable complex and a prime p.
VoltageAssignment homology_voltages(const DeltaComplex& c, int prime);

// A finite regular covering built from a voltage assignment. Total-cell ids
// interleave fibers: cell (x, g) has id x * degree + rank(g), so projection
// and the deck action are id arithmetic.
struct Covering {
    DeltaComplex base;
    VoltageAssignment voltages;
    DeltaComplex total;
    int degree = 1;

    int project_vertex(int v_hat) const { return v_hat / degree; }
    int project_edge(int e_hat) const { return e_hat / degree; }
    int project_triangle(int t_hat) const { return t_hat / degree; }
    int cell_group_element(int cell_hat) const { return cell_hat % degree; }
    int cell_id(int base_cell, int group_rank) const { return base_cell * degree + group_rank; }

    // Deck transformation by g: (x, h) -> (x, h + g); the same formula acts
    // on vertices, edges, and triangles.
    int deck_act(int g, int cell_hat) const {
        return cell_id(cell_hat / degree, voltages.group.add(cell_hat % degree, g));
    }
};

// Derived cover of the voltage assignment:
//   vertices V x G
//   edges    E x G,  d1(e,h) = (d1 e, h),   d0(e,h) = (d0 e, h + alpha(e))
//   triangles F x G, d2(t,g) = (e2, g), d1(t,g) = (e1, g), d0(t,g) = (e0, g + alpha(e2))
// Voltages are re-verified before building.
Covering derived_cover(const DeltaComplex& c, const VoltageAssignment& va);

// Degree-1 cover of c over itself (trivial group).
Covering identity_cover(const DeltaComplex& c);

struct UnwrapAttempt {
    int prime = 0;
    SimplicialWitnesses witnesses;
};

class UnwrapError : public Error {
public:
    UnwrapError(std::string message, std::vector<UnwrapAttempt> attempts)
        : Error(ErrorKind::Domain, std::move(message)), attempts_(std::move(attempts)) {}

    const std::vector<UnwrapAttempt>& attempts() const { return attempts_; }

private:
    std::vector<UnwrapAttempt> attempts_;
};

// Returns the identity cover when c is already simplicial; otherwise the
// mod-p homology cover for the first prime p <= p_max whose total complex is
// simplicial. Throws UnwrapError with per-prime witnesses when none works
// (which also flags inputs that are not quasi-simplicial, as far as this
// cover family can tell). When rejected_out is non-null it receives the
// attempts for the primes that were tried and failed before success.
Covering unwrap(const DeltaComplex& c, int p_max = 31,
                std::vector<UnwrapAttempt>* rejected_out = nullptr);

// f_hat(x_hat) = f(proj(x_hat)); deck-invariant by construction.
std::vector<double> pullback_vertex_data(const Covering& cov, const std::vector<double>& f);
std::vector<double> pullback_edge_data(const Covering& cov, const std::vector<double>& phi);

// Fiber mean per base vertex; left inverse of pullback_vertex_data.
std::vector<double> pushforward_average(const Covering& cov, const std::vector<double>& f_hat);

struct DeckInvariance {
    bool invariant = false;
    double deviation = 0.0; // max over fibers of (max - min)
};

DeckInvariance is_deck_invariant(const Covering& cov, const std::vector<double>& f_hat,
                                 double tol);

// Voltage file: `group <p> <k>` then one `volt <edge-id> <c_1> ... <c_k>`
// per edge. Relators are verified against the complex, not trusted.
VoltageAssignment parse_voltage_file(std::string_view text, const DeltaComplex& c);
VoltageAssignment load_voltage_file(const std::filesystem::path& path, const DeltaComplex& c);
std::string format_voltage_file(const VoltageAssignment& va);

} // namespace qcp
