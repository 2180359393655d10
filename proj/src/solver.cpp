#include "qcp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace qcp {

namespace {

constexpr double kPi = std::numbers::pi;

// Coordinate bounds past which a trial step is rejected outright; they are
// far outside any representable configuration of interest.
constexpr double kEuclideanUBound = 300.0;
constexpr double kHyperbolicULow = -600.0;

void project_mean_zero(std::vector<double>& u) {
    double mean = 0.0;
    for (double v : u) {
        mean += v;
    }
    mean /= static_cast<double>(u.size());
    for (double& v : u) {
        v -= mean;
    }
}

bool u_in_domain(const std::vector<double>& u, Background bg) {
    for (double v : u) {
        if (!std::isfinite(v)) {
            return false;
        }
        if (bg == Background::Euclidean) {
            if (std::abs(v) > kEuclideanUBound) {
                return false;
            }
        } else {
            if (v >= 0.0 || v < kHyperbolicULow) {
                return false;
            }
        }
    }
    return true;
}

// max |K(u) - target|, or nullopt when the configuration is degenerate.
std::optional<double> residual_at(const DeltaComplex& c, const std::vector<double>& phi,
                                  const std::vector<double>& target, Background bg,
                                  const std::vector<double>& u, std::vector<double>* k_out) {
    const PackingMetric m = from_u(u, bg);
    CurvatureOrDegenerate k = curvature_map(c, phi, m);
    if (std::holds_alternative<DegenerateTriangle>(k)) {
        return std::nullopt;
    }
    const std::vector<double>& kv = std::get<std::vector<double>>(k);
    double r = 0.0;
    for (int v = 0; v < c.num_vertices(); ++v) {
        r = std::max(r, std::abs(kv[v] - target[v]));
    }
    if (k_out != nullptr) {
        *k_out = kv;
    }
    return r;
}

// Gauss-Bonnet admissibility of the target; fills the diagnostic and
// returns false when the solve must stop as Infeasible.
bool gauss_bonnet_admissible(const DeltaComplex& c, const std::vector<double>& target,
                             Background bg, std::string* diagnostic) {
    double total = 0.0;
    for (double v : target) {
        total += v;
    }
    const double rhs = 2.0 * kPi * c.euler_characteristic();
    if (bg == Background::Euclidean) {
        if (std::abs(total - rhs) > 1e-9) {
            std::ostringstream os;
            os << "target violates Gauss-Bonnet: sum K = " << total << ", 2 pi chi = " << rhs;
            *diagnostic = os.str();
            return false;
        }
    } else if (!(total > rhs)) {
        std::ostringstream os;
        os << "target violates Gauss-Bonnet: sum K = " << total << " must exceed 2 pi chi = "
           << rhs;
        *diagnostic = os.str();
        return false;
    }
    return true;
}

std::string divergence_pattern(const std::vector<double>& u, Background bg) {
    double lo = u[0];
    double hi = u[0];
    for (double v : u) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::ostringstream os;
    os << "u range [" << lo << ", " << hi << "]";
    if (bg == Background::Euclidean) {
        if (hi > 20.0) {
            os << "; some radii diverging";
        }
        if (lo < -20.0) {
            os << "; some radii collapsing to 0";
        }
    } else {
        if (hi > -1e-6) {
            os << "; some radii diverging (u -> 0)";
        }
        if (lo < -40.0) {
            os << "; some radii collapsing to 0";
        }
    }
    return os.str();
}

std::vector<double> default_start(int n, Background bg) {
    const double u1 = (bg == Background::Euclidean) ? 0.0 : std::log(std::tanh(0.5));
    return std::vector<double>(n, u1);
}

void validate_solve_inputs(const DeltaComplex& c, const std::vector<double>& phi,
                           const std::vector<double>& target, const SolveOptions& opts) {
    validate_angle_data(c, phi);
    if (static_cast<int>(target.size()) != c.num_vertices()) {
        throw Error(ErrorKind::Domain, "target curvature size does not match vertex count");
    }
    if (!(opts.tol > 0.0) || !(opts.backtrack_ratio > 0.0 && opts.backtrack_ratio < 1.0)) {
        throw Error(ErrorKind::Domain, "invalid solve options");
    }
}

} // namespace

std::vector<double> to_u(const PackingMetric& m) {
    std::vector<double> u(m.radii.size());
    for (std::size_t v = 0; v < m.radii.size(); ++v) {
        const double r = m.radii[v];
        if (!(r > 0.0)) {
            throw Error(ErrorKind::Domain, "to_u requires positive radii");
        }
        if (m.background == Background::Euclidean) {
            u[v] = std::log(r);
        } else {
            // log tanh(r/2) = log1p(-e^{-r}) - log1p(e^{-r})
            const double er = std::exp(-r);
            u[v] = std::log1p(-er) - std::log1p(er);
        }
    }
    return u;
}

PackingMetric from_u(const std::vector<double>& u, Background bg) {
    PackingMetric m;
    m.background = bg;
    m.radii.resize(u.size());
    for (std::size_t v = 0; v < u.size(); ++v) {
        if (bg == Background::Euclidean) {
            m.radii[v] = std::exp(u[v]);
        } else {
            if (!(u[v] < 0.0)) {
                throw Error(ErrorKind::Domain, "hyperbolic u-coordinates must be negative");
            }
            const double x = std::exp(u[v]);            // tanh(r/2) in (0, 1)
            const double one_minus_x = -std::expm1(u[v]); // 1 - x without cancellation
            m.radii[v] = std::log1p(2.0 * x / one_minus_x);
        }
        if (!(m.radii[v] > 0.0) || !std::isfinite(m.radii[v])) {
            throw Error(ErrorKind::Domain, "u-coordinate out of representable range");
        }
    }
    return m;
}

SolveResult solve_prescribed_from(const DeltaComplex& c, const std::vector<double>& phi,
                                  const std::vector<double>& target, Background bg,
                                  const SolveOptions& opts, const std::vector<double>& start_u) {
    validate_solve_inputs(c, phi, target, opts);
    SolveResult result;
    result.seed = opts.seed;

    if (!gauss_bonnet_admissible(c, target, bg, &result.diagnostic)) {
        result.status = SolveStatus::Infeasible;
        return result;
    }

    std::vector<double> u = start_u;
    if (bg == Background::Euclidean) {
        project_mean_zero(u);
    }
    if (!u_in_domain(u, bg)) {
        throw Error(ErrorKind::Domain, "start point outside the coordinate domain");
    }

    std::vector<double> k;
    std::optional<double> resid = residual_at(c, phi, target, bg, u, &k);
    if (!resid) {
        throw Error(ErrorKind::Domain, "start configuration is degenerate");
    }
    result.residual_trajectory.push_back(*resid);

    const int n = c.num_vertices();
    for (int iter = 0; iter < opts.max_newton_iter; ++iter) {
        if (*resid <= opts.tol) {
            result.status = SolveStatus::Converged;
            break;
        }
        const PackingMetric m = from_u(u, bg);
        Eigen::MatrixXd jac = curvature_jacobian_u(c, phi, m);
        Eigen::VectorXd f(n);
        for (int v = 0; v < n; ++v) {
            f(v) = k[v] - target[v];
        }

        Eigen::VectorXd delta;
        double shift = 1e-12;
        for (int attempt = 0; attempt < 6; ++attempt) {
            Eigen::MatrixXd shifted = jac;
            shifted.diagonal().array() += shift;
            delta = shifted.ldlt().solve(-f);
            if (delta.allFinite()) {
                break;
            }
            shift *= 1e3;
        }
        if (!delta.allFinite()) {
            result.status = SolveStatus::StepUnderflow;
            result.diagnostic = "Newton system unsolvable; " + divergence_pattern(u, bg);
            break;
        }
        if (bg == Background::Euclidean) {
            const double mean = delta.mean();
            delta.array() -= mean;
        }

        // Backtracking on |F|_inf; domain violations and degenerate trials
        // also shrink the step.
        double step = 1.0;
        bool accepted = false;
        std::vector<double> u_try(n);
        while (step >= opts.min_step) {
            for (int v = 0; v < n; ++v) {
                u_try[v] = u[v] + step * delta(v);
            }
            if (bg == Background::Euclidean) {
                project_mean_zero(u_try);
            }
            if (u_in_domain(u_try, bg)) {
                std::vector<double> k_try;
                const std::optional<double> resid_try =
                    residual_at(c, phi, target, bg, u_try, &k_try);
                if (resid_try && *resid_try < *resid) {
                    u = u_try;
                    k = std::move(k_try);
                    resid = resid_try;
                    accepted = true;
                    break;
                }
            }
            step *= opts.backtrack_ratio;
        }
        result.iterations = iter + 1;
        if (!accepted) {
            result.status = SolveStatus::StepUnderflow;
            result.diagnostic = "line search stalled; " + divergence_pattern(u, bg);
            break;
        }
        result.residual_trajectory.push_back(*resid);
    }

    result.residual = *resid;
    result.u = u;
    result.metric = from_u(u, bg);
    if (result.status != SolveStatus::Converged && result.status != SolveStatus::StepUnderflow) {
        if (*resid <= opts.tol) {
            result.status = SolveStatus::Converged;
        } else {
            result.status = SolveStatus::BudgetExhausted;
            result.diagnostic = "Newton budget exhausted; " + divergence_pattern(u, bg);
        }
    }
    return result;
}

SolveResult solve_prescribed(const DeltaComplex& c, const std::vector<double>& phi,
                             const std::vector<double>& target, Background bg,
                             const SolveOptions& opts) {
    if (opts.method == SolveMethod::Flow) {
        return flow_to_target(c, phi, target, bg, opts);
    }
    return solve_prescribed_from(c, phi, target, bg, opts,
                                 default_start(c.num_vertices(), bg));
}

SolveResult flow_to_target_from(const DeltaComplex& c, const std::vector<double>& phi,
                                const std::vector<double>& target, Background bg,
                                const SolveOptions& opts, const std::vector<double>& start_u) {
    validate_solve_inputs(c, phi, target, opts);
    SolveResult result;
    result.seed = opts.seed;

    if (!gauss_bonnet_admissible(c, target, bg, &result.diagnostic)) {
        result.status = SolveStatus::Infeasible;
        return result;
    }

    std::vector<double> u = start_u;
    if (bg == Background::Euclidean) {
        project_mean_zero(u);
    }
    if (!u_in_domain(u, bg)) {
        throw Error(ErrorKind::Domain, "start point outside the coordinate domain");
    }

    std::vector<double> k;
    std::optional<double> resid = residual_at(c, phi, target, bg, u, &k);
    if (!resid) {
        throw Error(ErrorKind::Domain, "start configuration is degenerate");
    }

    const int n = c.num_vertices();
    const long long trajectory_stride = std::max<long long>(1, opts.max_flow_steps / 1000);
    double h = 0.5;
    long long step_count = 0;
    result.residual_trajectory.push_back(*resid);

    while (*resid > opts.tol && step_count < opts.max_flow_steps) {
        bool accepted = false;
        std::vector<double> u_try(n);
        while (h >= opts.min_step) {
            for (int v = 0; v < n; ++v) {
                u_try[v] = u[v] - h * (k[v] - target[v]);
            }
            if (bg == Background::Euclidean) {
                project_mean_zero(u_try);
            }
            if (u_in_domain(u_try, bg)) {
                std::vector<double> k_try;
                const std::optional<double> resid_try =
                    residual_at(c, phi, target, bg, u_try, &k_try);
                if (resid_try && *resid_try <= *resid) {
                    u = u_try;
                    k = std::move(k_try);
                    resid = resid_try;
                    accepted = true;
                    h = std::min(h * 1.2, 2.0);
                    break;
                }
            }
            h *= 0.5;
        }
        ++step_count;
        if (!accepted) {
            result.status = SolveStatus::StepUnderflow;
            result.diagnostic = "flow step underflow; " + divergence_pattern(u, bg);
            break;
        }
        if (step_count % trajectory_stride == 0) {
            result.residual_trajectory.push_back(*resid);
        }
    }

    result.iterations = static_cast<int>(std::min<long long>(step_count,
                                                             std::numeric_limits<int>::max()));
    result.residual = *resid;
    result.u = u;
    result.metric = from_u(u, bg);
    if (result.status != SolveStatus::StepUnderflow) {
        if (*resid <= opts.tol) {
            result.status = SolveStatus::Converged;
        } else {
            result.status = SolveStatus::BudgetExhausted;
            result.diagnostic = "flow budget exhausted; " + divergence_pattern(u, bg);
        }
    }
    return result;
}

SolveResult flow_to_target(const DeltaComplex& c, const std::vector<double>& phi,
                           const std::vector<double>& target, Background bg,
                           const SolveOptions& opts) {
    return flow_to_target_from(c, phi, target, bg, opts, default_start(c.num_vertices(), bg));
}

CoverSolveResult solve_on_cover(const Covering& cov, const std::vector<double>& phi,
                                const std::vector<double>& target, Background bg,
                                const SolveOptions& opts) {
    validate_angle_data(cov.base, phi);
    if (static_cast<int>(target.size()) != cov.base.num_vertices()) {
        throw Error(ErrorKind::Domain, "target size does not match base vertex count");
    }
    const std::vector<double> phi_hat = pullback_edge_data(cov, phi);
    const std::vector<double> target_hat = pullback_vertex_data(cov, target);

    // Deliberately non-invariant start: seeded uniform jitter around r = 1.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::vector<double> start = default_start(cov.total.num_vertices(), bg);
    for (double& v : start) {
        v += jitter(rng);
    }

    CoverSolveResult out;
    out.solve = (opts.method == SolveMethod::Flow)
                    ? flow_to_target_from(cov.total, phi_hat, target_hat, bg, opts, start)
                    : solve_prescribed_from(cov.total, phi_hat, target_hat, bg, opts, start);
    if (!out.solve.converged()) {
        out.invariance_deviation = std::numeric_limits<double>::infinity();
        out.pushforward_residual = std::numeric_limits<double>::infinity();
        return out;
    }

    out.invariance_deviation =
        is_deck_invariant(cov, out.solve.metric.radii, 0.0).deviation;

    const std::vector<double> k_hat =
        curvature_map_or_throw(cov.total, phi_hat, out.solve.metric);
    const std::vector<double> pushed = pushforward_average(cov, k_hat);
    double residual = 0.0;
    for (int v = 0; v < cov.base.num_vertices(); ++v) {
        residual = std::max(residual, std::abs(pushed[v] - target[v]));
    }
    out.pushforward_residual = residual;
    return out;
}

} // namespace qcp
