#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcp/covering.hpp"
#include "qcp/geometry.hpp"

namespace qcp {

// Conformal coordinates: u = log r (Euclidean), u = log tanh(r/2)
// (hyperbolic, domain u < 0). Mutually inverse with from_u.
std::vector<double> to_u(const PackingMetric& m);
PackingMetric from_u(const std::vector<double>& u, Background bg);

enum class SolveMethod {
    Newton,
    Flow,
};

struct SolveOptions {
    SolveMethod method = SolveMethod::Newton;
    double tol = 1e-10;            // on max_v |K(r)_v - target_v|
    int max_newton_iter = 200;
    long long max_flow_steps = 1'000'000;
    double backtrack_ratio = 0.5;
    double min_step = 1e-12;
    std::uint64_t seed = 0;        // recorded; used by randomized starts
};

enum class SolveStatus {
    Converged,
    Infeasible,       // rejected before iterating (Gauss-Bonnet) or by KAT
    BudgetExhausted,  // iteration budget spent without reaching tol
    StepUnderflow,    // line search / flow step shrank below min_step
};

struct SolveResult {
    SolveStatus status = SolveStatus::BudgetExhausted;
    PackingMetric metric;          // meaningful when status == Converged
    std::vector<double> u;         // final coordinates (gauged when Euclidean)
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    std::vector<double> residual_trajectory; // downsampled for long runs
    std::string diagnostic;        // infeasibility / divergence notes
    std::uint64_t seed = 0;

    bool converged() const { return status == SolveStatus::Converged; }
};

// Newton iteration on F(u) = K(from_u(u)) - target with the analytic
// Jacobian and a backtracking line search on |F|_inf. Euclidean iterates
// are held in the sum(u) = 0 gauge. Infeasible targets (Gauss-Bonnet) are
// rejected before iterating.
SolveResult solve_prescribed(const DeltaComplex& c, const std::vector<double>& phi,
                             const std::vector<double>& target, Background bg,
                             const SolveOptions& opts = {});

// Same contract via explicit Euler on du/dt = -(K(u) - target) with an
// adaptive step; used as fallback and as an independent cross-check.
SolveResult flow_to_target(const DeltaComplex& c, const std::vector<double>& phi,
                           const std::vector<double>& target, Background bg,
                           const SolveOptions& opts = {});

// Entry points taking an explicit start.
SolveResult solve_prescribed_from(const DeltaComplex& c, const std::vector<double>& phi,
                                  const std::vector<double>& target, Background bg,
                                  const SolveOptions& opts, const std::vector<double>& start_u);
SolveResult flow_to_target_from(const DeltaComplex& c, const std::vector<double>& phi,
                                const std::vector<double>& target, Background bg,
                                const SolveOptions& opts, const std::vector<double>& start_u);

struct CoverSolveResult {
    SolveResult solve;                  // on the total complex
    double invariance_deviation = 0.0;  // orbit spread of the solved radii
    double pushforward_residual = 0.0;  // max |avg(K_hat(r_hat)) - target|
};

// Solves on the cover with target and angles pulled back from the base,
// starting from a deliberately non-deck-invariant seeded perturbation, and
// measures how deck-invariant the solution came out.
CoverSolveResult solve_on_cover(const Covering& cov, const std::vector<double>& phi,
                                const std::vector<double>& target, Background bg,
                                const SolveOptions& opts = {});

} // namespace qcp
