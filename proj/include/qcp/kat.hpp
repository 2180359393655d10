#pragma once

#include <optional>
#include <vector>

#include "qcp/covering.hpp"
#include "qcp/delta_complex.hpp"
#include "qcp/geometry.hpp"

namespace qcp {

// One KAT inequality: sum of K over `subset` must strictly exceed
// -sum_{Lk}(pi - Phi) + 2 pi chi(Sigma(subset)).
struct KatConstraint {
    std::vector<int> subset;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // lhs - rhs; satisfied iff > 0
    long long binding_rank = -1;
};

struct GaussBonnetCheck {
    double lhs = 0.0; // total curvature on the base
    double rhs = 0.0; // 2 pi chi(base)
    Background background = Background::Euclidean;
    bool ok = false;
    bool boundary = false; // hyperbolic slack within the strictness tolerance
};

struct CheckOptions {
    int subset_cap = 24;          // refuse enumeration beyond 2^cap subsets
    bool cone_positivity = false; // optional extra clause K_v < 2 pi
    int keep_limit = 64;          // constraints retained per category
};

struct FeasibilityVerdict {
    bool feasible = false;
    GaussBonnetCheck gauss_bonnet;
    std::optional<KatConstraint> worst; // minimum slack over all subsets
    std::vector<KatConstraint> violations; // smallest slacks first, capped
    long long violation_count = 0;
    std::vector<KatConstraint> boundary_cases; // |slack| within tolerance
    long long boundary_count = 0;
    long long subsets_checked = 0;
    bool necessary_only = false; // base Delta-complex check, not sufficient
    std::vector<int> cone_violations; // base vertices with K_v >= 2 pi
    bool cone_checked = false;
    double wall_ms = 0.0;
};

// Strictness tolerance: |slack| <= this is reported as "boundary", neither
// a clean pass nor a clean violation.
inline constexpr double kSlackBoundaryTol = 1e-9;

// -sum_{(e,t) in Lk(I)}(pi - Phi(e)) + 2 pi chi(Sigma(I)), with the
// simplicial link. Requires a simplicial complex and a proper subset.
double kat_rhs(const DeltaComplex& c, const std::vector<double>& phi,
               const std::vector<int>& subset);

// Same value with the Delta-complex (slot-counted) link; defined on any
// complex. Agrees with kat_rhs on simplicial ones.
double kat_rhs_delta(const DeltaComplex& c, const std::vector<double>& phi,
                     const std::vector<int>& subset);

// Theorem-level feasibility: enumerates every non-empty proper subset of
// the cover's vertex set (cap permitting), with K and Phi pulled back from
// the base, plus the base Gauss-Bonnet clause. Requires a simplicial total
// complex. Throws Error{Cap} when |V_hat| exceeds the cap.
FeasibilityVerdict check_cover(const Covering& cov, const std::vector<double>& phi,
                               const std::vector<double>& curvature, Background bg,
                               const CheckOptions& opts = {});

// The necessary-only conditions read off the base Delta complex itself.
// A single-vertex base has no proper subsets: subsets_checked = 0.
FeasibilityVerdict check_base_necessary(const DeltaComplex& c, const std::vector<double>& phi,
                                        const std::vector<double>& curvature, Background bg,
                                        const CheckOptions& opts = {});

// Limit of sum_{v in I} K_v as the radii over I shrink to zero:
// 2 pi |I| - (|A2| + |A3|) pi - sum_{Lk(I)}(pi - Phi(e)), where A2/A3 are
// the triangles with exactly two/three slot-vertices in I.
double curvature_limit_base(const DeltaComplex& c, const std::vector<double>& phi,
                            const std::vector<int>& subset);

struct BindingSubset {
    std::vector<int> subset;
    double bound = 0.0; // rhs / |subset|
};

// Hyperbolic constant-curvature demonstration for a one-vertex base: every
// cover constraint reduces to K > rhs(I_hat)/|I_hat| and Gauss-Bonnet to
// K > 2 pi chi(base). Reports the supremum of these lower bounds, which
// subsets attain it, and the (vacuous) base-level bound set for contrast.
struct ConstantCurvatureBound {
    double lower_bound = 0.0;
    bool gauss_bonnet_binding = false;
    std::vector<BindingSubset> binding_subsets; // capped
    long long subsets_checked = 0;
    long long non_preimage_count = 0; // proper subsets not of the form p^{-1}(I)
    long long base_constraint_count = 0;
};

ConstantCurvatureBound constant_curvature_interval(const Covering& cov,
                                                   const std::vector<double>& phi,
                                                   const CheckOptions& opts = {});

} // namespace qcp
