#pragma once

// Report serialization. Numbers are printed with 17 significant digits so
// identical runs give byte-identical files.

#include "dhym/config.hpp"
#include "dhym/continuity.hpp"
#include "dhym/phase.hpp"
#include "dhym/stability.hpp"
#include "dhym/subsolution.hpp"
#include "dhym/torus.hpp"

#include <string>

namespace dhym {

std::string format_double(double v);

/// Pretty JSON with %.17g numbers; non-finite numbers become null.
std::string dump_json(const json& j);

/// Write to path + ".tmp" and rename over path.
void write_atomic(const std::string& path, const std::string& contents);

/// "# n=<n> N=<N>" comment line, then index,x1..xn,<name>.
std::string field_csv(const TorusGrid& grid, const ScalarField& values, const std::string& name);
std::string history_csv(const SolveReport& report);
/// stage,t,constant,lower_bound,upper_bound,residual_max,min_subsolution_slack,min_supercritical_slack,newton_iterations
std::string path_csv(const PathReport& a, const PathReport* b);

json to_json(const Spectrum& s);
json to_json(const BoundaryReport& r);
json to_json(const SubsolutionVerdict& v);
json to_json(const FormPositivityResult& r);
json to_json(const ArgumentPairingResult& r);
json to_json(const FieldSubsolutionVerdict& v);
json to_json(const SolveReport& r, bool with_history = false);
json to_json(const Theta1Checks& c);
json to_json(const PathConfig& c);
json to_json(const PathReport& r);
json to_json(const StabilityReport& r);
json to_json(const SurfaceCriterionReport& r);
json to_json(const PhaseIdentityReport& r);
json to_json(Complex z);

/// Which mathematical statement each reported check corresponds to.
json refs_phase();
json refs_subsolution();
json refs_solve();
json refs_continuity();
json refs_stability();

}  // namespace dhym
