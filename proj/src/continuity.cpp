#include "dhym/continuity.hpp"

#include "dhym/errors.hpp"
#include "dhym/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dhym {

PathConfig choose_deltas(const ScalarField& theta0, double theta_hat, double subsolution_slack,
                         PathConfig base) {
    if (!(subsolution_slack > 0.0)) {
        std::ostringstream msg;
        msg << "choose_deltas: subsolution slack must be positive (got " << subsolution_slack << ")";
        throw InputError(msg.str());
    }
    if (theta0.size() == 0) throw InputError("choose_deltas: empty Theta0 field");
    const double inf0 = theta0.minCoeff();
    if (!(inf0 < theta_hat)) {
        std::ostringstream msg;
        msg << "choose_deltas: need inf Theta0 < theta_hat (inf Theta0 = " << inf0
            << ", theta_hat = " << theta_hat << ")";
        throw InputError(msg.str());
    }
    base.delta0 = subsolution_slack / 200.0;
    base.delta1 = (theta_hat - inf0) / 100.0;
    base.delta = std::min(base.delta0, base.delta1);
    return base;
}

double smoothed_abs(double s, double delta) {
    const double a = std::abs(s);
    if (a >= delta) return a;
    const double r = s / delta;
    return delta * (3.0 / 8.0 + 0.75 * r * r - 0.125 * r * r * r * r);
}

double smoothed_abs_derivative(double s, double delta) {
    if (std::abs(s) >= delta) return s > 0.0 ? 1.0 : -1.0;
    const double r = s / delta;
    return 1.5 * r - 0.5 * r * r * r;
}

double regularized_max(double a, double b, double delta) {
    if (!(delta > 0.0)) throw InputError("regularized_max: delta must be positive");
    const double hi = std::max(a, b);
    if (std::abs(a - b) >= 2.0 * delta) return hi;
    return std::max(hi, 0.5 * (a + b) + smoothed_abs(0.5 * (a - b), delta));
}

ScalarField regularized_max(const ScalarField& a, const ScalarField& b, double delta) {
    if (a.size() != b.size()) throw InputError("regularized_max: field size mismatch");
    ScalarField out(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = regularized_max(a[i], b[i], delta);
    return out;
}

namespace {

std::size_t argmin_lowest(const ScalarField& f) {
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < f.size(); ++i) {
        if (f[i] < f[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
    }
    return best;
}

}  // namespace

Theta1Field build_theta1(const ScalarField& theta0, double theta_hat, const PathConfig& cfg) {
    const double d = cfg.delta;
    if (!(d > 0.0)) throw InputError("build_theta1: delta must be positive");
    if (!(theta0.minCoeff() <= theta_hat - 2.0 * d)) {
        throw InputError("build_theta1: inf Theta0 must lie at least 2 delta below theta_hat");
    }
    Theta1Field out;
    const ScalarField hat = ScalarField::Constant(theta0.size(), theta_hat);
    out.values = regularized_max(hat, theta0, d);
    const ScalarField& t1 = out.values;
    Theta1Checks& ck = out.checks;

    ck.argmin_point = argmin_lowest(theta0);
    const auto p = static_cast<Eigen::Index>(ck.argmin_point);
    ck.inf_theta0 = theta0[p];

    // (i) kernel value and slope continuous across +-delta.
    {
        const double eps = 1e-9 * d;
        const double jump_value = std::abs(smoothed_abs(d - eps, d) - smoothed_abs(d + eps, d));
        const double jump_slope =
            std::abs(smoothed_abs_derivative(d - eps, d) - smoothed_abs_derivative(d + eps, d));
        ck.kernel_smooth = jump_value <= 4.0 * eps && jump_slope <= 1e-6;
    }

    const ScalarField upper = hat.cwiseMax(theta0);
    ck.sandwich_low = (t1 - upper).minCoeff();
    ck.sandwich_high = (t1 - upper).maxCoeff() - d;

    ck.below_region_error = 0.0;
    ck.above_region_error = 0.0;
    for (Eigen::Index i = 0; i < t1.size(); ++i) {
        if (theta0[i] + d <= theta_hat - d) {
            ck.below_region_error = std::max(ck.below_region_error, std::abs(t1[i] - theta_hat));
        }
        if (theta_hat + d <= theta0[i] - d) {
            ck.above_region_error = std::max(ck.above_region_error, std::abs(t1[i] - theta0[i]));
        }
    }
    ck.at_argmin_error = std::abs(t1[p] - theta_hat);

    ck.infimum_error = 0.0;
    for (double t : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
        const double lhs = ((1.0 - t) * theta0 + t * t1).minCoeff();
        const double rhs = (1.0 - t) * ck.inf_theta0 + t * theta_hat;
        ck.infimum_error = std::max(ck.infimum_error, std::abs(lhs - rhs));
    }

    const ScalarField gap = t1 - theta0;
    const double sup_gap = gap.maxCoeff();
    ck.sup_gap_error = std::abs(sup_gap - (theta_hat - ck.inf_theta0));
    ck.sup_at_argmin_error = std::abs(gap[p] - sup_gap);

    const double tau = cfg.tau_path;
    ck.all_pass = ck.kernel_smooth && ck.sandwich_low >= -tau && ck.sandwich_high <= tau &&
                  ck.below_region_error <= tau && ck.at_argmin_error <= tau &&
                  ck.above_region_error <= tau && ck.infimum_error <= tau &&
                  ck.sup_gap_error <= tau && ck.sup_at_argmin_error <= tau;
    if (!ck.all_pass) {
        std::ostringstream msg;
        msg << "build_theta1: regularized maximum property failed (sandwich " << ck.sandwich_low
            << "/" << ck.sandwich_high << ", below " << ck.below_region_error << ", argmin "
            << ck.at_argmin_error << ", above " << ck.above_region_error << ", infimum "
            << ck.infimum_error << ", sup gap " << ck.sup_gap_error << "/" << ck.sup_at_argmin_error
            << ")";
        throw InvariantViolation(msg.str());
    }
    return out;
}

double class_phase(const PhaseEvaluation& chi_phase) {
    Complex acc{0.0, 0.0};
    for (const Spectrum& mu : chi_phase.spectra) {
        Complex p{1.0, 0.0};
        for (double v : mu.values()) p *= Complex{1.0, v};
        acc += p;
    }
    acc /= static_cast<double>(chi_phase.spectra.size());
    if (std::abs(acc) == 0.0) throw InputError("class_phase: the class integral vanishes");
    const double principal = std::arg(acc);
    const double reference = chi_phase.theta.mean();
    const double k = std::round((reference - principal) / (2.0 * kPi));
    return principal + 2.0 * kPi * k;
}

ContinuityPlan plan_continuity(const PotentialField& chi, const TorusProblem& prob, PathConfig base,
                               std::optional<double> theta_hat) {
    if (!(chi.grid() == prob.grid)) throw InputError("plan_continuity: chi grid mismatch");
    ContinuityPlan plan;
    plan.chi = chi;
    plan.chi_phase = evaluate_phase(chi.values(), prob);
    const int n = prob.dim();
    if (!(plan.chi_phase.min_supercritical_slack > 0.0)) {
        std::ostringstream msg;
        msg << "plan_continuity: chi is not supercritical (min Theta0 - (n-2)pi/2 = "
            << plan.chi_phase.min_supercritical_slack << ")";
        throw InputError(msg.str());
    }
    plan.theta_hat = theta_hat ? *theta_hat : class_phase(plan.chi_phase);
    if (!(plan.theta_hat > supercritical_floor(n) && plan.theta_hat < phase_ceiling(n))) {
        std::ostringstream msg;
        msg << "plan_continuity: theta_hat = " << plan.theta_hat << " is not supercritical";
        throw InputError(msg.str());
    }
    const ScalarField& theta0 = plan.chi_phase.theta;

    const ScalarField target = ScalarField::Constant(theta0.size(), plan.theta_hat);
    plan.target_verdict = subsolution_field_test(plan.chi_phase.spectra, std::span(target.data(), target.size()), &prob.grid);

    plan.config = base;
    plan.degenerate = (theta0.array() - plan.theta_hat).abs().maxCoeff() <= base.degenerate_tol;
    if (plan.degenerate) return plan;

    if (!plan.target_verdict.is_subsolution) {
        std::ostringstream msg;
        msg << "plan_continuity: chi is not a subsolution for theta_hat (min slack "
            << plan.target_verdict.slack << ")";
        throw InputError(msg.str());
    }
    const ScalarField upper = theta0.cwiseMax(target);
    const auto verdict = subsolution_field_test(plan.chi_phase.spectra,
                                                std::span(upper.data(), upper.size()), &prob.grid);
    plan.subsolution_slack = verdict.slack;

    PathConfig cfg = choose_deltas(theta0, plan.theta_hat, plan.subsolution_slack, base);
    if (base.delta0 > 0.0) cfg.delta0 = base.delta0;
    if (base.delta1 > 0.0) cfg.delta1 = base.delta1;
    cfg.delta = std::min(cfg.delta0, cfg.delta1);
    plan.config = cfg;

    plan.theta1 = build_theta1(theta0, plan.theta_hat, cfg);
    plan.sup_theta0_minus_theta1 = (theta0 - plan.theta1.values).maxCoeff();
    plan.sup_theta1_minus_theta0 = (plan.theta1.values - theta0).maxCoeff();
    return plan;
}

namespace {

struct StageSpec {
    char stage;
    ScalarField start_rhs;  // RHS at t = 0
    ScalarField end_rhs;    // RHS at t = 1
    ScalarField base;       // total potential at t = 0
    double start_constant;
};

// Checks at an accepted step. Throws InvariantViolation.
void assert_step(const PathStep& s, const char* what, double tau) {
    if (s.constant > s.upper_bound + tau || s.constant < s.lower_bound - tau) {
        std::ostringstream msg;
        msg << what << ": constant " << s.constant << " at t = " << s.t << " left ["
            << s.lower_bound << ", " << s.upper_bound << "]";
        throw InvariantViolation(msg.str());
    }
    if (!(s.min_subsolution_slack > kClassTol)) {
        std::ostringstream msg;
        msg << what << ": chi stopped being a subsolution at t = " << s.t << " (slack "
            << s.min_subsolution_slack << ")";
        throw InvariantViolation(msg.str());
    }
}

template <class Bounds>
StageResult run_stage(const StageSpec& spec, const ContinuityPlan& plan, const TorusProblem& prob,
                      const SolverOptions& options, Bounds bounds, const char* what) {
    const PathConfig& cfg = plan.config;
    const int n = prob.dim();
    StageResult out;
    PathReport& report = out.report;

    auto measure = [&](double t, double constant, const ScalarField& residual, int newton_its) {
        PathStep s;
        s.stage = spec.stage;
        s.t = t;
        s.constant = constant;
        const auto [lo, hi] = bounds(t);
        s.lower_bound = lo;
        s.upper_bound = hi;
        s.residual_max = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
        ScalarField rhs = (1.0 - t) * spec.start_rhs + t * spec.end_rhs;
        rhs.array() += constant;
        s.min_supercritical_slack = rhs.minCoeff() - supercritical_floor(n);
        const auto verdict = subsolution_field_test(plan.chi_phase.spectra,
                                                    std::span(rhs.data(), rhs.size()));
        s.min_subsolution_slack = verdict.slack;
        s.newton_iterations = newton_its;
        return s;
    };

    // t = 0 is exact by construction.
    ScalarField potential = spec.base;
    double constant = spec.start_constant;
    {
        ScalarField residual = evaluate_phase(potential, prob).theta - spec.start_rhs;
        residual.array() -= constant;
        PathStep s = measure(0.0, constant, residual, 0);
        assert_step(s, what, cfg.tau_path);
        report.steps.push_back(s);
    }

    double t = 0.0;
    double dt = cfg.t_step_init;
    int successes = 0;
    while (t < 1.0) {
        const double t_try = std::min(1.0, t + dt);
        const ScalarField rhs = (1.0 - t_try) * spec.start_rhs + t_try * spec.end_rhs;
        SolveResult solve = newton_solve(PotentialField(prob.grid, potential), rhs, prob, options, constant);
        out.last_solve = solve.report;
        if (!solve.report.converged) {
            ++report.rejected_steps;
            successes = 0;
            dt *= 0.5;
            if (dt < cfg.t_step_min) {
                std::ostringstream msg;
                msg << "continuation step fell below " << cfg.t_step_min << " at t = " << t
                    << " (last solver failure: " << solve.report.failure << ")";
                report.failure = msg.str();
                report.last_good_t = t;
                out.potential = PotentialField(prob.grid, potential - spec.base);
                out.constant = constant;
                return out;
            }
            continue;
        }
        t = t_try;
        potential = solve.u.values();
        constant = solve.c;
        ScalarField residual = evaluate_phase(potential, prob).theta - rhs;
        residual.array() -= constant;
        PathStep s = measure(t, constant, residual, solve.report.iterations);
        if (!(s.min_supercritical_slack > cfg.supercritical_margin)) {
            std::ostringstream msg;
            msg << what << ": right-hand side not supercritical at t = " << t << " (min slack "
                << s.min_supercritical_slack << ")";
            throw InvariantViolation(msg.str());
        }
        assert_step(s, what, cfg.tau_path);
        report.steps.push_back(s);
        report.last_good_t = t;
        if (++successes >= cfg.successes_before_growth) {
            dt = std::min(2.0 * dt, cfg.t_step_max);
            successes = 0;
        }
    }
    report.success = true;
    out.potential = PotentialField(prob.grid, potential - spec.base);
    out.constant = constant;
    return out;
}

}  // namespace

StageResult run_stage_a(const ContinuityPlan& plan, const TorusProblem& prob, const SolverOptions& options) {
    if (plan.degenerate) throw InputError("run_stage_a: degenerate plan, nothing to continue");
    StageSpec spec{'A', plan.chi_phase.theta, plan.theta1.values, plan.chi.values(), 0.0};
    const double up = plan.sup_theta0_minus_theta1;
    const double down = plan.sup_theta1_minus_theta0;
    auto bounds = [up, down](double t) { return std::pair{-t * down, t * up}; };
    return run_stage(spec, plan, prob, options, bounds, "stage A");
}

StageResult run_stage_b(const ContinuityPlan& plan, const StageResult& stage_a, const TorusProblem& prob,
                        const SolverOptions& options) {
    if (!stage_a.report.success) throw InputError("run_stage_b: stage A did not complete");
    const ScalarField hat = ScalarField::Constant(plan.chi_phase.theta.size(), plan.theta_hat);
    ScalarField omega1 = plan.chi.values() + stage_a.potential.values();
    StageSpec spec{'B', plan.theta1.values, hat, omega1, stage_a.constant};
    const double b1 = stage_a.constant;
    auto bounds = [b1](double) { return std::pair{b1, 0.0}; };
    return run_stage(spec, plan, prob, options, bounds, "stage B");
}

ContinuityResult run_continuity(const PotentialField& chi, const TorusProblem& prob, PathConfig base,
                                const SolverOptions& options) {
    return run_continuity(plan_continuity(chi, prob, base), prob, options);
}

ContinuityResult run_continuity(ContinuityPlan plan_in, const TorusProblem& prob, const SolverOptions& options) {
    ContinuityResult out;
    out.plan = std::move(plan_in);
    const ContinuityPlan& plan = out.plan;
    const PotentialField& chi = plan.chi;
    if (plan.degenerate) {
        out.success = true;
        out.solution = chi;
        out.c = 0.0;
        out.final_residual_max = (plan.chi_phase.theta.array() - plan.theta_hat).abs().maxCoeff();
        return out;
    }
    out.stage_a = run_stage_a(plan, prob, options);
    if (!out.stage_a->report.success) return out;
    out.stage_b = run_stage_b(plan, *out.stage_a, prob, options);
    if (!out.stage_b->report.success) return out;

    out.success = true;
    out.solution = PotentialField(prob.grid, chi.values() + out.stage_a->potential.values() +
                                                 out.stage_b->potential.values());
    out.c = out.stage_b->constant;
    ScalarField residual = theta_field(out.solution, prob);
    residual.array() -= plan.theta_hat + out.c;
    out.final_residual_max = residual.cwiseAbs().maxCoeff();
    return out;
}

}  // namespace dhym
