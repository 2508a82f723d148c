#include "commands.hpp"

#include "dhym/config.hpp"
#include "dhym/continuity.hpp"
#include "dhym/errors.hpp"
#include "dhym/phase.hpp"
#include "dhym/report.hpp"
#include "dhym/stability.hpp"
#include "dhym/subsolution.hpp"
#include "dhym/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

namespace dhym::cli {

namespace {

void emit(const json& j) { std::fputs(dump_json(j).c_str(), stdout); }

RunConfig load_config(const RunArgs& args) {
    json j = args.config.empty() ? json::object() : load_json_file(args.config);
    for (const auto& o : args.overrides) apply_override(j, o);
    if (!args.output.empty()) j["output"]["directory"] = args.output;
    return parse_run_config(j);
}

bool wants(const RunConfig& c, const char* format) {
    return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

std::string out_path(const RunConfig& c, const char* name) {
    return (std::filesystem::path(c.output_directory) / name).string();
}

json form_json(const HermitianForm& f) {
    json rows = json::array();
    for (int i = 0; i < f.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < f.dim(); ++k) {
            const Complex z = f.matrix()(i, k);
            if (f.is_real()) row.push_back(z.real());
            else row.push_back(to_json(z));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

const ProblemConfig& require_problem(const RunConfig& c) {
    if (!c.problem) throw InputError("config: a 'problem' section is required");
    return *c.problem;
}

PotentialField initial_potential(const std::string& text, const TorusGrid& grid) {
    return PotentialField(grid, sample(Expression::parse(text), grid));
}

}  // namespace

int cmd_phase_eval(const PhaseArgs& args) {
    Spectrum lambda;
    json out;
    if (!args.lambda.empty()) {
        if (!args.omega.empty()) throw InputError("give either --lambda or --omega, not both");
        lambda = Spectrum(parse_list(args.lambda, "--lambda"));
    } else {
        if (args.omega.empty()) throw InputError("one of --lambda or --omega is required");
        const HermitianForm omega = parse_form(args.omega, 0, "--omega");
        const HermitianForm alpha = args.alpha.empty() ? HermitianForm::identity(omega.dim())
                                                       : parse_form(args.alpha, omega.dim(), "--alpha");
        lambda = relative_eigenvalues(alpha, omega);
        out["eta"] = form_json(eta_metric(alpha, omega));
    }
    const int n = lambda.size();
    const double th = theta(lambda);
    out["spectrum"] = to_json(lambda);
    out["theta"] = th;

    const double sigma = args.sigma.value_or(supercritical_floor(n));
    const ConeMembership cm = cone_membership(lambda, ConeLevel{n, sigma});
    out["cone"] = {{"in_cone", std::string(to_string(cm.cone_region))}, {"cone_slack", cm.cone_slack}};
    if (args.sigma) {
        out["sigma"] = sigma;
        out["level"] = {{"region", std::string(to_string(cm.level_region))}, {"slack", cm.slack}};
        if (std::abs(sigma) < phase_ceiling(n)) out["f0"] = f0(lambda, sigma);
        if (n >= 2 && std::abs(th - sigma) <= kPredicateTol && sigma >= supercritical_floor(n) - kPredicateTol) {
            out["boundary_report"] = to_json(boundary_report(lambda, sigma));
        }
    }
    out["paper_refs"] = refs_phase();
    emit(out);
    return kExitOk;
}

int cmd_subsolution(const SubsolutionArgs& args) {
    const RunConfig cfg = load_config(args.run);
    json out;
    bool ok = false;

    std::optional<std::vector<double>> mu = cfg.mu;
    if (!args.mu.empty()) mu = parse_list(args.mu, "--mu");
    std::optional<double> h = args.h ? args.h : cfg.subsolution_h;
    std::optional<int> p = args.p ? args.p : cfg.pairing_p;

    if (mu) {
        if (!h) throw InputError("pointwise check needs --target");
        const Spectrum s(*mu);
        const int n = s.size();
        const SubsolutionVerdict v = c_subsolution_test(s, *h);
        out["mode"] = "pointwise";
        out["mu"] = to_json(s);
        out["h"] = *h;
        out["eigenvalue_form"] = to_json(v);
        out["form_positivity"] = to_json(form_positivity_test(s, *h));
        json pairing = json::object();
        if (p) {
            pairing[std::to_string(*p)] = to_json(argument_pairing_test(s, *h, *p));
        } else {
            for (int k = 1; k <= n - 1; ++k) pairing[std::to_string(k)] = to_json(argument_pairing_test(s, *h, k));
        }
        out["argument_pairing"] = std::move(pairing);
        ok = v.is_subsolution;
    } else {
        const ProblemConfig& pc = require_problem(cfg);
        const TorusProblem prob = make_problem(pc);
        const PotentialField chi = initial_potential(cfg.chi_potential.value_or("0"), prob.grid);
        const PhaseEvaluation phase = evaluate_phase(chi.values(), prob);
        ScalarField target;
        if (h) {
            target = ScalarField::Constant(static_cast<Eigen::Index>(prob.grid.size()), *h);
        } else if (pc.h) {
            target = target_field(*pc.h, prob);
        } else {
            const double hat = cfg.theta_hat.value_or(class_phase(phase));
            target = ScalarField::Constant(static_cast<Eigen::Index>(prob.grid.size()), hat);
            out["theta_hat"] = hat;
        }
        const auto v = subsolution_field_test(phase.spectra, std::span(target.data(), target.size()), &prob.grid);
        out["mode"] = "field";
        out["n"] = pc.n;
        out["N"] = pc.N;
        out["verdict"] = to_json(v);
        out["theta_min"] = phase.theta.minCoeff();
        out["theta_max"] = phase.theta.maxCoeff();
        ok = v.is_subsolution;
    }
    out["paper_refs"] = refs_subsolution();
    emit(out);
    return ok ? kExitOk : kExitRefused;
}

int cmd_solve(const RunArgs& args) {
    const RunConfig cfg = load_config(args);
    const ProblemConfig& pc = require_problem(cfg);
    if (!pc.h) throw InputError("solve: problem.h is required");
    const TorusProblem prob = make_problem(pc);
    const ScalarField h = target_field(*pc.h, prob);
    const PotentialField u0 = initial_potential(cfg.initial, prob.grid);
    const int n = pc.n;

    json out;
    out["problem"] = {{"n", n}, {"N", pc.N}, {"method", cfg.method}};
    out["paper_refs"] = refs_solve();
    const double h_min = h.minCoeff();
    const double h_max = h.maxCoeff();
    const double slack0 = evaluate_phase(u0.values(), prob).min_supercritical_slack;
    if (!(h_min > supercritical_floor(n)) || !(h_max < phase_ceiling(n)) || !(slack0 > 0.0)) {
        std::ostringstream msg;
        msg << "subcritical input refused (min h - (n-2)pi/2 = " << h_min - supercritical_floor(n)
            << ", initial min Theta - (n-2)pi/2 = " << slack0 << ")";
        out["refused"] = msg.str();
        emit(out);
        std::fprintf(stderr, "%s\n", msg.str().c_str());
        return kExitRefused;
    }

    const SolveResult r = cfg.method == "flow" ? flow_solve(u0, h, prob, cfg.t_end, cfg.solver)
                                               : newton_solve(u0, h, prob, cfg.solver);
    out["report"] = to_json(r.report);
    if (wants(cfg, "csv")) {
        write_atomic(out_path(cfg, "solution.csv"), field_csv(prob.grid, r.u.values(), "u"));
        write_atomic(out_path(cfg, "history.csv"), history_csv(r.report));
    }
    if (wants(cfg, "json")) write_atomic(out_path(cfg, "report.json"), dump_json(out));
    emit(out);
    return r.report.converged ? kExitOk : kExitSolver;
}

int cmd_continuity(const RunArgs& args) {
    const RunConfig cfg = load_config(args);
    const ProblemConfig& pc = require_problem(cfg);
    const TorusProblem prob = make_problem(pc);
    const PotentialField chi = initial_potential(cfg.chi_potential.value_or("0"), prob.grid);

    json out;
    out["problem"] = {{"n", pc.n}, {"N", pc.N}};
    out["paper_refs"] = refs_continuity();

    ContinuityPlan plan;
    try {
        plan = plan_continuity(chi, prob, cfg.path, cfg.theta_hat);
    } catch (const InputError& e) {
        out["refused"] = e.what();
        emit(out);
        std::fprintf(stderr, "refused: %s\n", e.what());
        return kExitRefused;
    }
    out["plan"] = {{"theta_hat", plan.theta_hat},
                   {"theta0_min", plan.chi_phase.theta.minCoeff()},
                   {"theta0_max", plan.chi_phase.theta.maxCoeff()},
                   {"degenerate", plan.degenerate},
                   {"subsolution_slack", plan.subsolution_slack},
                   {"target_verdict", to_json(plan.target_verdict)},
                   {"deltas", to_json(plan.config)}};
    if (!plan.degenerate) {
        out["plan"]["theta1_checks"] = to_json(plan.theta1.checks);
        out["plan"]["sup_theta0_minus_theta1"] = plan.sup_theta0_minus_theta1;
        out["plan"]["sup_theta1_minus_theta0"] = plan.sup_theta1_minus_theta0;
    }

    const ContinuityResult r = run_continuity(std::move(plan), prob, cfg.solver);
    if (r.stage_a) {
        out["stage_a"] = to_json(r.stage_a->report);
        out["stage_a"]["b1"] = r.stage_a->constant;
    }
    if (r.stage_b) {
        out["stage_b"] = to_json(r.stage_b->report);
        out["stage_b"]["c1"] = r.stage_b->constant;
    }
    out["success"] = r.success;
    if (r.success) {
        out["c1"] = r.c;
        out["final_residual_max"] = r.final_residual_max;
    }
    if (wants(cfg, "csv")) {
        if (r.stage_a) {
            write_atomic(out_path(cfg, "path.csv"),
                         path_csv(r.stage_a->report, r.stage_b ? &r.stage_b->report : nullptr));
        }
        if (r.success) write_atomic(out_path(cfg, "solution.csv"), field_csv(prob.grid, r.solution.values(), "u"));
    }
    if (wants(cfg, "json")) write_atomic(out_path(cfg, "report.json"), dump_json(out));
    emit(out);
    return r.success ? kExitOk : kExitSolver;
}

int cmd_stability(const StabilityArgs& args) {
    ClassData data;
    if (!args.classdata.empty()) {
        data = load_class_data(args.classdata);
    } else {
        const RunConfig cfg = load_config(args.run);
        if (!cfg.classdata) throw InputError("stability: give a ClassData file or stability.classdata");
        data = cfg.classdata->is_string() ? load_class_data(cfg.classdata->get<std::string>())
                                          : class_data_from_json(*cfg.classdata);
    }
    json out;
    out["n"] = data.n;
    out["stability"] = to_json(stability_check(data));
    if (data.n == 2) {
        try {
            out["surface_criterion"] = to_json(surface_criterion(data));
        } catch (const InputError& e) {
            out["surface_criterion"] = {{"error", e.what()}};
        }
        try {
            out["phase_identity"] = to_json(dim2_phase_identity(data));
        } catch (const InputError& e) {
            out["phase_identity"] = {{"error", e.what()}};
        }
    }
    out["paper_refs"] = refs_stability();
    emit(out);
    return kExitOk;
}

}  // namespace dhym::cli
