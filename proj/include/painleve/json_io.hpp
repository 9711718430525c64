#pragma once

#include "painleve/experiments.hpp"

#include <json.hpp>

#include <iosfwd>

namespace painleve {

using Json = nlohmann::ordered_json;

// Table export: {family, m, params, backend, step, p_u, p_U, a: [[re,im],...],
// A: [[re,im],...]}. Exact rationals are emitted as decimal strings; Q(w)
// tables additionally carry the exact basis coordinates, since the imaginary
// embedding coordinate is a multiple of sqrt(3)/2.
Json table_json(const CoefficientTable& t);

Json params_json(const EquationSpec& eq);
Json trajectory_json(const Trajectory& t);
void trajectory_csv(const Trajectory& t, std::ostream& os);
Json patch_json(const SolutionPatch& p);
Json fit_json(const FitReport& r);
Json decay_json(const DecayReport& r);
Json overlap_json(const OverlapReport& r);
Json sweep_json(const SweepReport& r);
Json polefield_json(const PoleFieldReport& r);
Json wasow_json(const std::vector<WasowBranchReport>& reps);
Json growth_json(const GrowthReport& g);
Json residual_json(const ResidualReport& r);

std::string format_double(double v);  // deterministic shortest round-trip

}  // namespace painleve
