#pragma once

// Strict JSON run configuration. Every section rejects unknown keys.
//
//   {
//     "problem":  {"n": 2, "N": 64, "alpha": "I", "B": "diag:1,1",
//                  "h": {"constant": 1.57} | {"expression": "..."} | {"from_potential": "..."}},
//     "solver":   {"method": "newton" | "flow", "tol_nl": 1e-10, ..., "initial": "0"},
//     "path":     {"delta0": ..., "t_step_init": 0.1, ..., "theta_hat": ...},
//     "chi":      {"potential": "0.03*cos(2*pi*x1)"},
//     "subsolution": {"mu": [1, 1], "h": 1.57, "p": 1},
//     "stability": {"classdata": "file.json" | {...}},
//     "output":   {"directory": "out", "formats": ["json", "csv"]},
//     "seed": 0
//   }

#include "dhym/continuity.hpp"
#include "dhym/expression.hpp"
#include "dhym/hermitian.hpp"
#include "dhym/stability.hpp"
#include "dhym/torus.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dhym {

using json = nlohmann::json;

/// Matrix literal: "I" / "identity", "diag:a,b,...", a nested JSON array of
/// numbers or {"re": x, "im": y} entries, or a string holding such an array.
/// `n` <= 0 infers the size (not possible for "I").
HermitianForm parse_form(const json& value, int n, const std::string& what);
HermitianForm parse_form(const std::string& text, int n, const std::string& what);

/// Comma-separated list of reals.
std::vector<double> parse_list(const std::string& text, const std::string& what);

ClassData class_data_from_json(const json& j);
ClassData load_class_data(const std::string& path);

struct PhaseTarget {
    enum Kind { constant, expression, from_potential } kind = constant;
    double value = 0.0;
    std::string text;
};

struct ProblemConfig {
    int n = 0;
    int N = 0;
    HermitianForm alpha;
    RealMatrix B;
    std::optional<PhaseTarget> h;
};

struct RunConfig {
    std::optional<ProblemConfig> problem;

    SolverOptions solver;
    std::string method = "newton";
    double t_end = 1e3;       // flow horizon
    std::string initial = "0";

    PathConfig path;
    std::optional<double> theta_hat;

    std::optional<std::string> chi_potential;

    std::optional<std::vector<double>> mu;
    std::optional<double> subsolution_h;
    std::optional<int> pairing_p;

    std::optional<json> classdata;  // inline object or a path string

    std::string output_directory = ".";
    std::vector<std::string> formats = {"json", "csv"};
    std::uint64_t seed = 0;
};

/// Throws InputError on unknown keys, wrong types or non-positive tolerances.
RunConfig parse_run_config(const json& j);
json load_json_file(const std::string& path);

/// Applies "a.b.c=value" overrides (value parsed as JSON, falling back to a string).
void apply_override(json& j, const std::string& assignment);

TorusProblem make_problem(const ProblemConfig& p);
/// Samples an expression on the grid.
ScalarField sample(const Expression& e, const TorusGrid& grid);
/// h on the grid; from_potential evaluates theta_field of the sampled potential.
ScalarField target_field(const PhaseTarget& t, const TorusProblem& prob);

}  // namespace dhym
