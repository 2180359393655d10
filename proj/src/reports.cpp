#include "qcp/reports.hpp"

#include <algorithm>
#include <cmath>

namespace qcp {

json simplicial_witnesses_json(const SimplicialWitnesses& w) {
    json parallel = json::array();
    for (const auto& [a, b] : w.parallel_pairs) {
        parallel.push_back(json::array({a, b}));
    }
    return json{
        {"verdict", w.simplicial()},
        {"loops", w.loops},
        {"parallel_pairs", parallel},
    };
}

json validate_report(const Triangulation& tri) {
    const DeltaComplex& c = tri.complex;
    json report{
        {"valid", true},
        {"vertices", c.num_vertices()},
        {"edges", c.num_edges()},
        {"triangles", c.num_triangles()},
        {"euler_characteristic", c.euler_characteristic()},
        {"simplicial", simplicial_witnesses_json(check_simplicial(c))},
        {"connected", is_connected(c)},
        {"has_phi", tri.phi.has_value()},
    };
    try {
        orientation(c);
        report["orientable"] = true;
        report["genus"] = genus(c);
    } catch (const Error& e) {
        report["orientable"] = false;
        report["orientability_error"] = e.what();
    }
    return report;
}

json covering_json(const Covering& cov) {
    const SimplicialWitnesses w = check_simplicial(cov.total);
    json report{
        {"degree", cov.degree},
        {"group", {{"prime", cov.voltages.group.prime}, {"rank", cov.voltages.group.rank}}},
        {"total_vertices", cov.total.num_vertices()},
        {"total_edges", cov.total.num_edges()},
        {"total_triangles", cov.total.num_triangles()},
        {"total_euler_characteristic", cov.total.euler_characteristic()},
        {"simplicial", simplicial_witnesses_json(w)},
    };
    try {
        report["total_genus"] = genus(cov.total);
    } catch (const Error&) {
        // leave absent for degenerate inputs
    }
    return report;
}

json cover_sidecar_json(const Covering& cov) {
    auto cell_map = [&cov](int count) {
        json entries = json::array();
        for (int id = 0; id < count; ++id) {
            entries.push_back(json{
                {"base", id / cov.degree},
                {"group_element", cov.voltages.group.tuple_of(id % cov.degree)},
            });
        }
        return entries;
    };
    return json{
        {"degree", cov.degree},
        {"group", {{"prime", cov.voltages.group.prime}, {"rank", cov.voltages.group.rank}}},
        {"vertices", cell_map(cov.total.num_vertices())},
        {"edges", cell_map(cov.total.num_edges())},
        {"triangles", cell_map(cov.total.num_triangles())},
    };
}

json unwrap_attempts_json(const std::vector<UnwrapAttempt>& attempts) {
    json out = json::array();
    for (const UnwrapAttempt& a : attempts) {
        out.push_back(json{
            {"prime", a.prime},
            {"witnesses", simplicial_witnesses_json(a.witnesses)},
        });
    }
    return out;
}

json gauss_bonnet_json(const GaussBonnetCheck& gb) {
    return json{
        {"lhs", gb.lhs},
        {"rhs", gb.rhs},
        {"mode", gb.background == Background::Euclidean ? "equality" : "strict-greater"},
        {"ok", gb.ok},
        {"boundary", gb.boundary},
    };
}

json kat_constraint_json(const KatConstraint& kc) {
    return json{
        {"subset", kc.subset},
        {"lhs", kc.lhs},
        {"rhs", kc.rhs},
        {"slack", kc.slack},
        {"binding_rank", kc.binding_rank},
    };
}

json feasibility_json(const FeasibilityVerdict& verdict) {
    json violations = json::array();
    for (const KatConstraint& kc : verdict.violations) {
        violations.push_back(kat_constraint_json(kc));
    }
    json boundary = json::array();
    for (const KatConstraint& kc : verdict.boundary_cases) {
        boundary.push_back(kat_constraint_json(kc));
    }
    json report{
        {"verdict", verdict.feasible ? "feasible" : "infeasible"},
        {"mode", verdict.necessary_only ? "NECESSARY-ONLY" : "cover-sufficient"},
        {"gauss_bonnet", gauss_bonnet_json(verdict.gauss_bonnet)},
        {"violations", violations},
        {"violation_count", verdict.violation_count},
        {"boundary_cases", boundary},
        {"boundary_count", verdict.boundary_count},
        {"subsets_checked", verdict.subsets_checked},
        {"wall_time_ms", verdict.wall_ms},
    };
    if (verdict.worst) {
        report["worst"] = kat_constraint_json(*verdict.worst);
    }
    if (verdict.cone_checked) {
        report["cone_positivity"] = json{
            {"checked", true},
            {"violations", verdict.cone_violations},
        };
    }
    return report;
}

json constant_bound_json(const ConstantCurvatureBound& bound) {
    json binding = json::array();
    for (const BindingSubset& b : bound.binding_subsets) {
        binding.push_back(json{{"subset", b.subset}, {"bound", b.bound}});
    }
    return json{
        {"lower_bound", bound.lower_bound},
        {"gauss_bonnet_binding", bound.gauss_bonnet_binding},
        {"binding_subsets", binding},
        {"subsets_checked", bound.subsets_checked},
        {"non_preimage_count", bound.non_preimage_count},
        {"base_constraint_count", bound.base_constraint_count},
    };
}

json solve_json(const SolveResult& result, int trajectory_limit) {
    const char* status = nullptr;
    switch (result.status) {
    case SolveStatus::Converged:
        status = "converged";
        break;
    case SolveStatus::Infeasible:
        status = "infeasible";
        break;
    case SolveStatus::BudgetExhausted:
        status = "budget-exhausted";
        break;
    case SolveStatus::StepUnderflow:
        status = "step-underflow";
        break;
    }
    std::vector<double> trajectory = result.residual_trajectory;
    if (static_cast<int>(trajectory.size()) > trajectory_limit) {
        std::vector<double> sampled;
        const double stride =
            static_cast<double>(trajectory.size() - 1) / (trajectory_limit - 1);
        for (int i = 0; i < trajectory_limit; ++i) {
            sampled.push_back(trajectory[static_cast<std::size_t>(i * stride)]);
        }
        trajectory = std::move(sampled);
    }
    json report{
        {"status", status},
        {"iterations", result.iterations},
        {"residual_trajectory", trajectory},
        {"seed", result.seed},
    };
    if (std::isfinite(result.residual)) {
        report["residual"] = result.residual;
    }
    if (!result.diagnostic.empty()) {
        report["diagnostic"] = result.diagnostic;
    }
    if (result.status == SolveStatus::Converged) {
        report["radii"] = result.metric.radii;
        report["u"] = result.u;
        report["gauge"] =
            result.metric.background == Background::Euclidean ? "sum-u-zero" : "none";
    }
    return report;
}

} // namespace qcp
