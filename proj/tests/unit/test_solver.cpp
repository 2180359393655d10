#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qcp/solver.hpp"

using namespace qcp;
using std::numbers::pi;

namespace {

std::vector<double> gauged(std::vector<double> u) {
    double mean = 0.0;
    for (double v : u) {
        mean += v;
    }
    mean /= static_cast<double>(u.size());
    for (double& v : u) {
        v -= mean;
    }
    return u;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

TEST_CASE("u-coordinates") {
    SUBCASE("euclidean r = 1 maps to u = 0 and back") {
        const PackingMetric m{{1.0, 1.0}, Background::Euclidean};
        const auto u = to_u(m);
        CHECK(u[0] == 0.0);
        CHECK(from_u(u, Background::Euclidean).radii[0] == doctest::Approx(1.0));
    }
    SUBCASE("hyperbolic r = 2 maps to log tanh 1 and back") {
        const PackingMetric m{{2.0}, Background::Hyperbolic};
        const auto u = to_u(m);
        CHECK(u[0] == doctest::Approx(std::log(std::tanh(1.0))).epsilon(1e-14));
        CHECK(u[0] == doctest::Approx(-0.2723414690).epsilon(1e-7));
        CHECK(from_u(u, Background::Hyperbolic).radii[0] == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("hyperbolic u must be negative") {
        CHECK_THROWS_AS(from_u({0.1}, Background::Hyperbolic), Error);
        CHECK_THROWS_AS(from_u({0.0}, Background::Hyperbolic), Error);
    }
    SUBCASE("round trips across scales") {
        oracles::AngleSampler sampler(73);
        for (int i = 0; i < 100; ++i) {
            const double r = std::exp(sampler.uniform(-8.0, 3.0));
            const PackingMetric me{{r}, Background::Euclidean};
            CHECK(from_u(to_u(me), Background::Euclidean).radii[0] ==
                  doctest::Approx(r).epsilon(1e-12));
            const PackingMetric mh{{r}, Background::Hyperbolic};
            CHECK(from_u(to_u(mh), Background::Hyperbolic).radii[0] ==
                  doctest::Approx(r).epsilon(1e-12));
        }
    }
}

TEST_CASE("newton solve on symmetric targets") {
    SUBCASE("flat one-vertex torus lands on the gauged constant metric") {
        const SolveResult r = solve_prescribed(fixtures::one_vertex_torus(), {0, 0, 0}, {0.0},
                                               Background::Euclidean, {});
        REQUIRE(r.converged());
        CHECK(r.residual < 1e-10);
        CHECK(r.metric.radii[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.iterations <= 20);
    }
    SUBCASE("flat torus from a constant start r = 0.37: the gauge removes the offset") {
        const std::vector<double> start{std::log(0.37)};
        const SolveResult r = solve_prescribed_from(fixtures::one_vertex_torus(), {0, 0, 0},
                                                    {0.0}, Background::Euclidean, {}, start);
        REQUIRE(r.converged());
        CHECK(r.residual < 1e-10);
        CHECK(r.metric.radii[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.iterations <= 20);
    }
    SUBCASE("tetrahedron with K = pi lands on the constant metric") {
        const SolveResult r =
            solve_prescribed(fixtures::tetrahedron(), std::vector<double>(6, 0.0),
                             std::vector<double>(4, pi), Background::Euclidean, {});
        REQUIRE(r.converged());
        for (double radius : r.metric.radii) {
            CHECK(radius == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("hyperbolic round trip on the torus recovers r = 1 from r = 0.5") {
    const DeltaComplex torus = fixtures::one_vertex_torus();
    const std::vector<double> phi(3, 0.0);
    const auto k_star = curvature_map_or_throw(torus, phi, {{1.0}, Background::Hyperbolic});
    const std::vector<double> start = to_u(PackingMetric{{0.5}, Background::Hyperbolic});
    const SolveResult r =
        solve_prescribed_from(torus, phi, k_star, Background::Hyperbolic, {}, start);
    REQUIRE(r.converged());
    CHECK(r.metric.radii[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("gauss-bonnet pre-checks reject impossible targets without iterating") {
    const DeltaComplex torus = fixtures::one_vertex_torus();
    const std::vector<double> phi(3, 0.0);
    SUBCASE("euclidean total must equal 2 pi chi") {
        const SolveResult r = solve_prescribed(torus, phi, {0.5}, Background::Euclidean, {});
        CHECK(r.status == SolveStatus::Infeasible);
        CHECK(r.iterations == 0);
        CHECK_FALSE(r.diagnostic.empty());
    }
    SUBCASE("hyperbolic total must exceed 2 pi chi") {
        const SolveResult r = solve_prescribed(torus, phi, {-0.1}, Background::Hyperbolic, {});
        CHECK(r.status == SolveStatus::Infeasible);
        const SolveResult rf = flow_to_target(torus, phi, {-0.1}, Background::Hyperbolic, {});
        CHECK(rf.status == SolveStatus::Infeasible);
    }
}

TEST_CASE("round trips: solve recovers the generating radii") {
    oracles::AngleSampler sampler(79);
    for (const DeltaComplex& c : {fixtures::tetrahedron(), fixtures::two_vertex_torus()}) {
        for (Background bg : {Background::Euclidean, Background::Hyperbolic}) {
            for (int i = 0; i < 5; ++i) {
                const auto phi = oracles::random_s_angles(c, sampler);
                const auto radii =
                    oracles::random_radii(c.num_vertices(), 0.4, 1.8, sampler);
                const PackingMetric truth{radii, bg};
                const auto target = curvature_map_or_throw(c, phi, truth);
                const SolveResult r = solve_prescribed(c, phi, target, bg, {});
                REQUIRE(r.converged());
                if (bg == Background::Hyperbolic) {
                    CHECK(max_abs_diff(r.metric.radii, radii) < 1e-7);
                } else {
                    CHECK(max_abs_diff(gauged(r.u), gauged(to_u(truth))) < 1e-7);
                }
            }
        }
    }
}

TEST_CASE("newton and flow agree on converged solutions") {
    oracles::AngleSampler sampler(83);
    const DeltaComplex c = fixtures::tetrahedron();
    for (Background bg : {Background::Euclidean, Background::Hyperbolic}) {
        const auto phi = oracles::random_s_angles(c, sampler);
        const auto radii = oracles::random_radii(4, 0.6, 1.5, sampler);
        const auto target = curvature_map_or_throw(c, phi, {radii, bg});
        const SolveResult newton = solve_prescribed(c, phi, target, bg, {});
        SolveOptions flow_opts;
        flow_opts.method = SolveMethod::Flow;
        const SolveResult flow = flow_to_target(c, phi, target, bg, flow_opts);
        REQUIRE(newton.converged());
        REQUIRE(flow.converged());
        CHECK(max_abs_diff(newton.metric.radii, flow.metric.radii) < 1e-6);
    }
}

TEST_CASE("euclidean gauge is deterministic across starts") {
    oracles::AngleSampler sampler(89);
    const DeltaComplex c = fixtures::tetrahedron();
    const auto phi = oracles::random_s_angles(c, sampler);
    const auto target =
        curvature_map_or_throw(c, phi, {{0.7, 1.3, 0.9, 1.1}, Background::Euclidean});
    std::vector<double> reference;
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> start(4);
        for (double& v : start) {
            v = sampler.uniform(-1.0, 1.0);
        }
        const SolveResult r =
            solve_prescribed_from(c, phi, target, Background::Euclidean, {}, start);
        REQUIRE(r.converged());
        double mean = 0.0;
        for (double v : r.u) {
            mean += v;
        }
        CHECK(std::abs(mean) < 1e-12); // sum-u-zero gauge
        if (reference.empty()) {
            reference = r.u;
        } else {
            CHECK(max_abs_diff(reference, r.u) < 1e-7);
        }
    }
}

TEST_CASE("jacobian at accepted solutions is symmetric and definite") {
    oracles::AngleSampler sampler(97);
    const DeltaComplex c = fixtures::tetrahedron();
    const auto phi = oracles::random_s_angles(c, sampler);
    SUBCASE("euclidean: positive semi-definite with the constant kernel") {
        const auto target =
            curvature_map_or_throw(c, phi, {{0.8, 1.2, 1.0, 0.9}, Background::Euclidean});
        const SolveResult r = solve_prescribed(c, phi, target, Background::Euclidean, {});
        REQUIRE(r.converged());
        const Eigen::MatrixXd jac = curvature_jacobian_u(c, phi, r.metric);
        CHECK((jac - jac.transpose()).cwiseAbs().maxCoeff() < 1e-8);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            0.5 * (jac + jac.transpose()));
        CHECK(eig.eigenvalues()(0) > -1e-9);
        CHECK(eig.eigenvalues()(0) < 1e-9); // the kernel direction
        CHECK(eig.eigenvalues()(1) > 1e-6); // one-dimensional only
        const Eigen::VectorXd kernel = eig.eigenvectors().col(0);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4).normalized();
        CHECK(std::abs(std::abs(kernel.dot(ones)) - 1.0) < 1e-6);
    }
    SUBCASE("hyperbolic: positive definite") {
        const auto target =
            curvature_map_or_throw(c, phi, {{0.8, 1.2, 1.0, 0.9}, Background::Hyperbolic});
        const SolveResult r = solve_prescribed(c, phi, target, Background::Hyperbolic, {});
        REQUIRE(r.converged());
        const Eigen::MatrixXd jac = curvature_jacobian_u(c, phi, r.metric);
        CHECK((jac - jac.transpose()).cwiseAbs().maxCoeff() < 1e-8);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            0.5 * (jac + jac.transpose()));
        CHECK(eig.eigenvalues()(0) > 1e-8);
    }
}

TEST_CASE("iteration budget exhaustion is distinct from infeasibility") {
    const DeltaComplex c = fixtures::tetrahedron();
    const std::vector<double> phi(6, 0.0);
    // a feasible but non-trivial target with a one-iteration budget
    const auto target =
        curvature_map_or_throw(c, phi, {{0.5, 1.7, 1.1, 0.8}, Background::Hyperbolic});
    SolveOptions opts;
    opts.max_newton_iter = 1;
    const SolveResult r = solve_prescribed(c, phi, target, Background::Hyperbolic, opts);
    CHECK(r.status == SolveStatus::BudgetExhausted);
    CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("solve on the cover from non-invariant starts") {
    const DeltaComplex torus = fixtures::one_vertex_torus();
    const Covering cov = unwrap(torus, 7);
    const std::vector<double> phi(3, 0.0);
    SUBCASE("euclidean flat target: deck-invariant after the gauge") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            SolveOptions opts;
            opts.seed = seed;
            const CoverSolveResult r =
                solve_on_cover(cov, phi, {0.0}, Background::Euclidean, opts);
            REQUIRE(r.solve.converged());
            CHECK(r.solve.seed == seed);
            CHECK(r.invariance_deviation <= 1e-8);
            CHECK(r.pushforward_residual <= 1e-9);
        }
    }
    SUBCASE("hyperbolic target from the base metric r = 1") {
        const auto k_star =
            curvature_map_or_throw(torus, phi, {{1.0}, Background::Hyperbolic});
        SolveOptions opts;
        opts.seed = 5;
        const CoverSolveResult r = solve_on_cover(cov, phi, k_star, Background::Hyperbolic, opts);
        REQUIRE(r.solve.converged());
        CHECK(r.invariance_deviation <= 1e-8);
        CHECK(r.pushforward_residual <= 1e-9);
        // the solution is the pulled-back base solution
        for (double radius : r.solve.metric.radii) {
            CHECK(radius == doctest::Approx(1.0).epsilon(1e-7));
        }
    }
    SUBCASE("identity cover reduces to the plain solve") {
        const Covering id = identity_cover(fixtures::tetrahedron());
        const std::vector<double> phi6(6, 0.0);
        const CoverSolveResult r = solve_on_cover(id, phi6, std::vector<double>(4, pi),
                                                  Background::Euclidean, {});
        REQUIRE(r.solve.converged());
        CHECK(r.invariance_deviation == 0.0); // fibers are singletons
        CHECK(r.pushforward_residual < 1e-10);
    }
    SUBCASE("pushforward identity: K of the averaged radii matches the averaged curvature") {
        const auto k_star =
            curvature_map_or_throw(torus, phi, {{1.3}, Background::Hyperbolic});
        SolveOptions opts;
        opts.seed = 11;
        const CoverSolveResult r = solve_on_cover(cov, phi, k_star, Background::Hyperbolic, opts);
        REQUIRE(r.solve.converged());
        const std::vector<double> base_radii = pushforward_average(cov, r.solve.metric.radii);
        const auto k_base =
            curvature_map_or_throw(torus, phi, {base_radii, Background::Hyperbolic});
        const auto k_hat = curvature_map_or_throw(
            cov.total, pullback_edge_data(cov, phi), r.solve.metric);
        const auto pushed = pushforward_average(cov, k_hat);
        CHECK(max_abs_diff(k_base, pushed) < 1e-9);
    }
}

TEST_CASE("trajectories and seeds are recorded") {
    const SolveResult r = solve_prescribed(fixtures::tetrahedron(), std::vector<double>(6, 0.0),
                                           std::vector<double>(4, pi), Background::Euclidean,
                                           {});
    CHECK_FALSE(r.residual_trajectory.empty());
    CHECK(r.seed == 0);
}
