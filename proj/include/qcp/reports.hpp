#pragma once

#include <json.hpp>

#include "qcp/covering.hpp"
#include "qcp/delta_complex.hpp"
#include "qcp/kat.hpp"
#include "qcp/solver.hpp"
#include "qcp/triangulation_io.hpp"

namespace qcp {

using json = nlohmann::json;

json simplicial_witnesses_json(const SimplicialWitnesses& w);

// Full validation report: counts, chi, simplicial verdict with witnesses,
// connectivity, orientability, genus where defined.
json validate_report(const Triangulation& tri);

json covering_json(const Covering& cov);

// Sidecar mapping total-cell ids to (base id, group element tuple).
json cover_sidecar_json(const Covering& cov);

json unwrap_attempts_json(const std::vector<UnwrapAttempt>& attempts);

json gauss_bonnet_json(const GaussBonnetCheck& gb);
json kat_constraint_json(const KatConstraint& kc);
json feasibility_json(const FeasibilityVerdict& verdict);
json constant_bound_json(const ConstantCurvatureBound& bound);

json solve_json(const SolveResult& result, int trajectory_limit = 200);

} // namespace qcp
