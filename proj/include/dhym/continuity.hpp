#pragma once

// Two-stage method of continuity on the torus.
//
//   Stage A:  Theta(chi + i ddbar u_t) = (1-t) Theta0 + t Theta1 + b_t
//   Stage B:  Theta(omega1 + i ddbar v_t) = (1-t) Theta1 + t theta_hat + c_t
//
// with Theta0 = Theta(chi), Theta1 the regularized maximum of theta_hat and
// Theta0, omega1 = chi + i ddbar u_1. The constants b_t, c_t are unknowns of
// the discrete systems; the bounds they must satisfy are checked at every
// accepted step and a violation throws InvariantViolation.

#include "dhym/subsolution.hpp"
#include "dhym/torus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dhym {

struct PathConfig {
    double delta0 = 0.0;
    double delta1 = 0.0;
    double delta = 0.0;  // min(delta0, delta1)

    double t_step_init = 0.1;
    double t_step_min = 1e-4;
    double t_step_max = 0.25;
    int successes_before_growth = 2;

    double tau_path = 1e-8;
    double supercritical_margin = 0.0;  // RHS must exceed (n-2)pi/2 by this
    double degenerate_tol = 1e-12;      // max|Theta0 - theta_hat| treated as already solved
};

/// delta0 = s/200, delta1 = (theta_hat - inf Theta0)/100, delta = min.
/// Rejects s <= 0 and inf Theta0 >= theta_hat.
PathConfig choose_deltas(const ScalarField& theta0, double theta_hat, double subsolution_slack,
                         PathConfig base = {});

/// C^2 even smoothing of |s|: equals |s| for |s| >= delta and the quartic
/// 3 delta/8 + 3 s^2/(4 delta) - s^4/(8 delta^3) inside.
double smoothed_abs(double s, double delta);
double smoothed_abs_derivative(double s, double delta);

/// mean(a, b) + smoothed_abs(|a - b| / 2).
double regularized_max(double a, double b, double delta);
ScalarField regularized_max(const ScalarField& a, const ScalarField& b, double delta);

struct Theta1Checks {
    std::size_t argmin_point = 0;  // p, lowest linear index among ties
    double inf_theta0 = 0.0;
    bool kernel_smooth = false;        // (i)  C^1 match of the kernel at +-delta
    double sandwich_low = 0.0;         // (ii) min(Theta1 - max)
    double sandwich_high = 0.0;        //      max(Theta1 - max - delta)
    double below_region_error = 0.0;   // (iii) max |Theta1 - theta_hat| where Theta0 + d <= theta_hat - d
    double at_argmin_error = 0.0;      //       |Theta1(p) - theta_hat|
    double above_region_error = 0.0;   // (iv) max |Theta1 - Theta0| where theta_hat + d <= Theta0 - d
    double infimum_error = 0.0;        // (v)  max over sampled t
    double sup_gap_error = 0.0;        // (vi) |sup(Theta1 - Theta0) - (theta_hat - inf Theta0)|
    double sup_at_argmin_error = 0.0;  //      |(Theta1 - Theta0)(p) - sup|
    bool all_pass = false;
};

struct Theta1Field {
    ScalarField values;
    Theta1Checks checks;
};

/// Builds Theta1 and verifies its properties on the grid; throws
/// InvariantViolation when any exceeds cfg.tau_path.
Theta1Field build_theta1(const ScalarField& theta0, double theta_hat, const PathConfig& cfg);

/// Arg of the grid mean of prod_j (1 + i lambda_j), lifted to the branch
/// nearest mean(Theta0).
double class_phase(const PhaseEvaluation& chi_phase);

struct PathStep {
    char stage = 'A';
    double t = 0.0;
    double constant = 0.0;     // b_t or c_t
    double lower_bound = 0.0;  // asserted interval for the constant
    double upper_bound = 0.0;
    double residual_max = 0.0;
    double min_subsolution_slack = 0.0;
    double min_supercritical_slack = 0.0;  // min RHS - (n-2)pi/2
    int newton_iterations = 0;
};

struct PathReport {
    bool success = false;
    std::string failure;
    double last_good_t = 0.0;
    int rejected_steps = 0;
    std::vector<PathStep> steps;
};

/// Everything derived from chi before either stage runs.
struct ContinuityPlan {
    PotentialField chi;         // subsolution potential
    PhaseEvaluation chi_phase;  // Theta0 and the spectra mu of chi
    double theta_hat = 0.0;
    double subsolution_slack = 0.0;  // against max(Theta0, theta_hat)
    FieldSubsolutionVerdict target_verdict;  // chi against theta_hat
    bool degenerate = false;    // Theta0 == theta_hat
    PathConfig config;
    Theta1Field theta1;         // empty when degenerate
    double sup_theta0_minus_theta1 = 0.0;
    double sup_theta1_minus_theta0 = 0.0;
};

/// Computes Theta0, theta_hat, the subsolution slack, the deltas and Theta1.
/// Throws InputError if chi is not a subsolution for theta_hat or is not
/// supercritical. `theta_hat` overrides the class value when given.
ContinuityPlan plan_continuity(const PotentialField& chi, const TorusProblem& prob,
                               PathConfig base = {}, std::optional<double> theta_hat = std::nullopt);

struct StageResult {
    PotentialField potential;  // u_t relative to chi (stage A) or v_t relative to omega1 (stage B)
    double constant = 0.0;     // b_1 or c_1
    PathReport report;
    SolveReport last_solve;
};

StageResult run_stage_a(const ContinuityPlan& plan, const TorusProblem& prob,
                        const SolverOptions& options = {});

StageResult run_stage_b(const ContinuityPlan& plan, const StageResult& stage_a,
                        const TorusProblem& prob, const SolverOptions& options = {});

struct ContinuityResult {
    ContinuityPlan plan;
    std::optional<StageResult> stage_a;
    std::optional<StageResult> stage_b;
    bool success = false;
    PotentialField solution;  // total potential relative to B: chi + u_1 + v_1
    double c = 0.0;           // final constant c_1
    double final_residual_max = 0.0;  // max |Theta - theta_hat - c_1|
};

ContinuityResult run_continuity(const PotentialField& chi, const TorusProblem& prob,
                                PathConfig base = {}, const SolverOptions& options = {});
ContinuityResult run_continuity(ContinuityPlan plan, const TorusProblem& prob,
                                const SolverOptions& options = {});

}  // namespace dhym
