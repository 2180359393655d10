#include "qcp/kat.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qcp {

namespace {

constexpr double kPi = std::numbers::pi;

double link_weight_sum(const std::vector<LinkPair>& pairs, const std::vector<double>& phi) {
    double sum = 0.0;
    for (const LinkPair& p : pairs) {
        sum += kPi - phi[p.edge];
    }
    return sum;
}

// Precomputed bitmask tables driving the subset sweep. `complex` must have
// at most 63 vertices (the enumeration cap cuts in far earlier).
struct SubsetTables {
    int n = 0;
    // One entry per (triangle, slot): qualifies for Lk(S) iff the slot's own
    // vertex is in S and the other two are not.
    std::vector<uint64_t> slot_own;
    std::vector<uint64_t> slot_others;
    std::vector<double> slot_weight; // pi - phi(edge of the slot)
    std::vector<uint64_t> edge_mask; // both endpoints
    std::vector<uint64_t> tri_mask;  // all three vertices
};

SubsetTables build_tables(const DeltaComplex& c, const std::vector<double>& phi) {
    SubsetTables tb;
    tb.n = c.num_vertices();
    for (int t = 0; t < c.num_triangles(); ++t) {
        const VertexTriple v = c.vertex_triple(t);
        for (int i = 0; i < 3; ++i) {
            const uint64_t own = uint64_t{1} << v[i];
            uint64_t others = 0;
            for (int s = 0; s < 3; ++s) {
                if (s != i) {
                    others |= uint64_t{1} << v[s];
                }
            }
            tb.slot_own.push_back(own);
            tb.slot_others.push_back(others);
            tb.slot_weight.push_back(kPi - phi[c.triangles[t].slot(i)]);
        }
        tb.tri_mask.push_back((uint64_t{1} << v.v0) | (uint64_t{1} << v.v1) |
                              (uint64_t{1} << v.v2));
    }
    for (const EdgeRec& e : c.edges) {
        tb.edge_mask.push_back((uint64_t{1} << e.d0) | (uint64_t{1} << e.d1));
    }
    return tb;
}

// A slot (t, i) qualifies iff v_i is in S and the other slot-vertices are
// not. When another slot repeats v_i, slot_others contains the own bit and
// the test rejects every S — the Delta-link rule v_s not in S for s != i.
double subset_rhs(const SubsetTables& tb, uint64_t mask) {
    double link_sum = 0.0;
    for (std::size_t s = 0; s < tb.slot_own.size(); ++s) {
        if ((mask & tb.slot_own[s]) != 0 && (mask & tb.slot_others[s]) == 0) {
            link_sum += tb.slot_weight[s];
        }
    }
    long long chi = std::popcount(mask);
    for (uint64_t em : tb.edge_mask) {
        if ((mask & em) == em) {
            --chi;
        }
    }
    for (uint64_t tm : tb.tri_mask) {
        if ((mask & tm) == tm) {
            ++chi;
        }
    }
    return -link_sum + 2.0 * kPi * static_cast<double>(chi);
}

std::vector<int> mask_to_ids(uint64_t mask) {
    std::vector<int> ids;
    while (mask) {
        const int b = std::countr_zero(mask);
        ids.push_back(b);
        mask &= mask - 1;
    }
    return ids;
}

GaussBonnetCheck gauss_bonnet_clause(const DeltaComplex& base, const std::vector<double>& k,
                                     Background bg) {
    GaussBonnetCheck gb;
    gb.background = bg;
    gb.rhs = 2.0 * kPi * base.euler_characteristic();
    gb.lhs = 0.0;
    for (double v : k) {
        gb.lhs += v;
    }
    if (bg == Background::Euclidean) {
        gb.ok = std::abs(gb.lhs - gb.rhs) <= kSlackBoundaryTol;
        gb.boundary = false;
    } else {
        const double slack = gb.lhs - gb.rhs;
        gb.ok = slack > kSlackBoundaryTol;
        gb.boundary = std::abs(slack) <= kSlackBoundaryTol;
    }
    return gb;
}

// Keeps the `limit` smallest-slack constraints seen so far.
struct WorstKeeper {
    std::size_t limit;
    std::vector<KatConstraint> items; // max-heap on slack

    explicit WorstKeeper(std::size_t lim) : limit(lim) {}

    static bool heap_less(const KatConstraint& a, const KatConstraint& b) {
        return a.slack < b.slack;
    }

    void offer(uint64_t mask, double lhs, double rhs) {
        if (limit == 0) {
            return;
        }
        const double slack = lhs - rhs;
        if (items.size() == limit) {
            if (slack >= items.front().slack) {
                return;
            }
            std::pop_heap(items.begin(), items.end(), heap_less);
            items.pop_back();
        }
        KatConstraint kc;
        kc.subset = mask_to_ids(mask);
        kc.lhs = lhs;
        kc.rhs = rhs;
        kc.slack = slack;
        items.push_back(std::move(kc));
        std::push_heap(items.begin(), items.end(), heap_less);
    }

    std::vector<KatConstraint> sorted() && {
        std::sort(items.begin(), items.end(),
                  [](const KatConstraint& a, const KatConstraint& b) {
                      if (a.slack != b.slack) {
                          return a.slack < b.slack;
                      }
                      return a.subset < b.subset;
                  });
        for (std::size_t i = 0; i < items.size(); ++i) {
            items[i].binding_rank = static_cast<long long>(i);
        }
        return std::move(items);
    }
};

// Core sweep over every non-empty proper subset, Gray-code order with an
// incremental lhs. `vertex_k[v]` is the curvature charged to vertex v of
// the swept complex.
void sweep_subsets(const DeltaComplex& c, const std::vector<double>& phi,
                   const std::vector<double>& vertex_k, const CheckOptions& opts,
                   FeasibilityVerdict& out) {
    const int n = c.num_vertices();
    if (n > std::min(opts.subset_cap, 62)) {
        std::ostringstream os;
        os << "subset enumeration needs |V| = " << n << " <= cap "
           << std::min(opts.subset_cap, 62);
        throw Error(ErrorKind::Cap, os.str());
    }
    const SubsetTables tb = build_tables(c, phi);
    const uint64_t full = (n >= 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);

    WorstKeeper violations(opts.keep_limit);
    WorstKeeper boundary(opts.keep_limit);
    std::optional<KatConstraint> worst;
    double worst_slack = std::numeric_limits<double>::infinity();

    double lhs = 0.0;
    uint64_t mask = 0;
    const uint64_t count = uint64_t{1} << n;
    for (uint64_t i = 1; i < count; ++i) {
        const int flip = std::countr_zero(i);
        const uint64_t bit = uint64_t{1} << flip;
        mask ^= bit;
        lhs += (mask & bit) ? vertex_k[flip] : -vertex_k[flip];
        if ((i & 0xfff) == 0) {
            // resync the incremental sum so roundoff cannot creep toward the
            // strictness tolerance over long sweeps
            lhs = 0.0;
            for (uint64_t m = mask; m;) {
                const int b = std::countr_zero(m);
                lhs += vertex_k[b];
                m &= m - 1;
            }
        }
        if (mask == 0 || mask == full) {
            continue;
        }
        const double rhs = subset_rhs(tb, mask);
        const double slack = lhs - rhs;
        out.subsets_checked += 1;
        if (slack < worst_slack) {
            worst_slack = slack;
            KatConstraint kc;
            kc.subset = mask_to_ids(mask);
            kc.lhs = lhs;
            kc.rhs = rhs;
            kc.slack = slack;
            worst = std::move(kc);
        }
        if (slack < -kSlackBoundaryTol) {
            out.violation_count += 1;
            violations.offer(mask, lhs, rhs);
        } else if (slack <= kSlackBoundaryTol) {
            out.boundary_count += 1;
            boundary.offer(mask, lhs, rhs);
        }
    }
    out.worst = std::move(worst);
    out.violations = std::move(violations).sorted();
    out.boundary_cases = std::move(boundary).sorted();
}

void apply_cone_clause(const std::vector<double>& k, const CheckOptions& opts,
                       FeasibilityVerdict& out) {
    out.cone_checked = opts.cone_positivity;
    if (!opts.cone_positivity) {
        return;
    }
    for (std::size_t v = 0; v < k.size(); ++v) {
        if (!(k[v] < 2.0 * kPi)) {
            out.cone_violations.push_back(static_cast<int>(v));
        }
    }
}

} // namespace

double kat_rhs(const DeltaComplex& c, const std::vector<double>& phi,
               const std::vector<int>& subset) {
    validate_angle_data(c, phi);
    const auto pairs = link_pairs(c, subset, LinkMode::Simplicial);
    const SubcomplexSummary sub = subcomplex_summary(c, subset);
    return -link_weight_sum(pairs, phi) + 2.0 * kPi * sub.euler_char;
}

double kat_rhs_delta(const DeltaComplex& c, const std::vector<double>& phi,
                     const std::vector<int>& subset) {
    validate_angle_data(c, phi);
    const auto pairs = link_pairs(c, subset, LinkMode::Delta);
    const SubcomplexSummary sub = subcomplex_summary(c, subset);
    return -link_weight_sum(pairs, phi) + 2.0 * kPi * sub.euler_char;
}

FeasibilityVerdict check_cover(const Covering& cov, const std::vector<double>& phi,
                               const std::vector<double>& curvature, Background bg,
                               const CheckOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    validate_angle_data(cov.base, phi);
    if (static_cast<int>(curvature.size()) != cov.base.num_vertices()) {
        throw Error(ErrorKind::Domain, "curvature size does not match base vertex count");
    }
    if (!check_simplicial(cov.total).simplicial()) {
        throw Error(ErrorKind::Domain, "check_cover requires a simplicial total complex");
    }

    FeasibilityVerdict out;
    out.necessary_only = false;
    out.gauss_bonnet = gauss_bonnet_clause(cov.base, curvature, bg);

    const std::vector<double> phi_hat = pullback_edge_data(cov, phi);
    const std::vector<double> k_hat = pullback_vertex_data(cov, curvature);
    sweep_subsets(cov.total, phi_hat, k_hat, opts, out);
    apply_cone_clause(curvature, opts, out);

    out.feasible = out.gauss_bonnet.ok && out.violation_count == 0 && out.cone_violations.empty();
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    return out;
}

FeasibilityVerdict check_base_necessary(const DeltaComplex& c, const std::vector<double>& phi,
                                        const std::vector<double>& curvature, Background bg,
                                        const CheckOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    validate_angle_data(c, phi);
    if (static_cast<int>(curvature.size()) != c.num_vertices()) {
        throw Error(ErrorKind::Domain, "curvature size does not match vertex count");
    }

    FeasibilityVerdict out;
    out.necessary_only = true;
    out.gauss_bonnet = gauss_bonnet_clause(c, curvature, bg);
    if (c.num_vertices() >= 2) {
        sweep_subsets(c, phi, curvature, opts, out);
    }
    apply_cone_clause(curvature, opts, out);
    out.feasible = out.gauss_bonnet.ok && out.violation_count == 0 && out.cone_violations.empty();
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    return out;
}

double curvature_limit_base(const DeltaComplex& c, const std::vector<double>& phi,
                            const std::vector<int>& subset) {
    validate_angle_data(c, phi);
    const auto mask = subset_mask(c, subset);
    if (subset.empty() || static_cast<int>(subset.size()) == c.num_vertices()) {
        throw Error(ErrorKind::Domain, "curvature limit requires a proper non-empty subset");
    }
    long long a23 = 0;
    for (int t = 0; t < c.num_triangles(); ++t) {
        const VertexTriple v = c.vertex_triple(t);
        const int inside = (mask[v.v0] ? 1 : 0) + (mask[v.v1] ? 1 : 0) + (mask[v.v2] ? 1 : 0);
        if (inside >= 2) {
            ++a23;
        }
    }
    const auto pairs = link_pairs(c, subset, LinkMode::Delta);
    return 2.0 * kPi * static_cast<double>(subset.size()) - kPi * static_cast<double>(a23) -
           link_weight_sum(pairs, phi);
}

ConstantCurvatureBound constant_curvature_interval(const Covering& cov,
                                                   const std::vector<double>& phi,
                                                   const CheckOptions& opts) {
    if (cov.base.num_vertices() != 1) {
        throw Error(ErrorKind::Domain,
                    "constant-curvature demonstration requires a one-vertex base");
    }
    validate_angle_data(cov.base, phi);
    if (!check_simplicial(cov.total).simplicial()) {
        throw Error(ErrorKind::Domain, "demonstration requires a simplicial total complex");
    }
    const int n = cov.total.num_vertices();
    if (n > std::min(opts.subset_cap, 62)) {
        std::ostringstream os;
        os << "subset enumeration needs |V| = " << n << " <= cap "
           << std::min(opts.subset_cap, 62);
        throw Error(ErrorKind::Cap, os.str());
    }

    ConstantCurvatureBound out;
    out.base_constraint_count = 0; // one-vertex base: no proper subsets

    const std::vector<double> phi_hat = pullback_edge_data(cov, phi);
    const SubsetTables tb = build_tables(cov.total, phi_hat);
    const uint64_t full = (uint64_t{1} << n) - 1;
    const double tie_tol = 1e-12;

    double subset_sup = -std::numeric_limits<double>::infinity();
    for (uint64_t mask = 1; mask < full; ++mask) {
        const double rhs = subset_rhs(tb, mask);
        const double bound = rhs / static_cast<double>(std::popcount(mask));
        out.subsets_checked += 1;
        // Every proper subset fails to be a fiber preimage on a one-vertex
        // base (the only preimages are the empty set and everything).
        out.non_preimage_count += 1;
        if (bound > subset_sup + tie_tol) {
            subset_sup = bound;
            out.binding_subsets.clear();
        }
        if (std::abs(bound - subset_sup) <= tie_tol &&
            static_cast<int>(out.binding_subsets.size()) < opts.keep_limit) {
            out.binding_subsets.push_back(BindingSubset{mask_to_ids(mask), bound});
        }
    }

    const double gb_bound = 2.0 * kPi * cov.base.euler_characteristic();
    out.lower_bound = std::max(gb_bound, subset_sup);
    out.gauss_bonnet_binding = gb_bound >= subset_sup - tie_tol;
    if (subset_sup < out.lower_bound - tie_tol) {
        out.binding_subsets.clear(); // only the Gauss-Bonnet clause binds
    }
    return out;
}

} // namespace qcp
