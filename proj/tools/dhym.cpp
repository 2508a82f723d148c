// dhym: command-line front end.
//
// Exit codes: 0 ok, 2 input error, 3 refused (not a subsolution / subcritical
// input), 4 solver or path failure, 5 path assertion violated.

#include "commands.hpp"

#include "dhym/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
    using namespace dhym::cli;

    CLI::App app{"Lagrangian phase / dHYM numerical laboratory"};
    app.require_subcommand(1);

    PhaseArgs phase;
    auto* phase_cmd = app.add_subcommand("phase", "pointwise phase algebra");
    phase_cmd->require_subcommand(1);
    auto* eval = phase_cmd->add_subcommand("eval", "Theta, cone slack, f0 and boundary report");
    eval->add_option("--lambda", phase.lambda, "comma-separated spectrum");
    eval->add_option("--alpha", phase.alpha, "background form (default I)");
    eval->add_option("--omega", phase.omega, "form, e.g. diag:3,-1 or [[1,0],[0,2]]");
    eval->add_option("--sigma", phase.sigma, "phase level");

    SubsolutionArgs sub;
    auto* sub_cmd = app.add_subcommand("subsolution", "C-subsolution checks");
    sub_cmd->require_subcommand(1);
    auto* check = sub_cmd->add_subcommand("check", "pointwise or field verdict");
    check->add_option("--config", sub.run.config, "JSON run configuration");
    check->add_option("--set", sub.run.overrides, "override key.path=value");
    check->add_option("--mu", sub.mu, "comma-separated spectrum");
    check->add_option("--target", sub.h, "phase target h (constant)");
    check->add_option("-p,--pairing-dim", sub.p, "subset size for the argument test");

    RunArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Newton or flow solve on the torus");
    solve_cmd->add_option("--config", solve.config, "JSON run configuration")->required();
    solve_cmd->add_option("--set", solve.overrides, "override key.path=value");
    solve_cmd->add_option("-o,--output", solve.output, "output directory");

    RunArgs path;
    auto* cont_cmd = app.add_subcommand("continuity", "two-stage method of continuity");
    cont_cmd->require_subcommand(1);
    auto* run = cont_cmd->add_subcommand("run", "run both stages");
    run->add_option("--config", path.config, "JSON run configuration")->required();
    run->add_option("--set", path.overrides, "override key.path=value");
    run->add_option("-o,--output", path.output, "output directory");

    StabilityArgs stab;
    auto* stab_cmd = app.add_subcommand("stability", "class-level stability toolkit");
    stab_cmd->require_subcommand(1);
    auto* scheck = stab_cmd->add_subcommand("check", "obstruction and surface criterion");
    scheck->add_option("classdata", stab.classdata, "ClassData JSON file");
    scheck->add_option("--config", stab.run.config, "JSON run configuration");
    scheck->add_option("--set", stab.run.overrides, "override key.path=value");

    SelftestArgs self;
    auto* self_cmd = app.add_subcommand("selftest", "randomized property checks");
    self_cmd->add_option("--seed", self.seed, "generator seed (default 0)");
    self_cmd->add_option("--samples", self.samples, "samples per property")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*eval) return cmd_phase_eval(phase);
        if (*check) return cmd_subsolution(sub);
        if (*solve_cmd) return cmd_solve(solve);
        if (*run) return cmd_continuity(path);
        if (*scheck) return cmd_stability(stab);
        if (*self_cmd) return cmd_selftest(self);
    } catch (const dhym::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const dhym::InvariantViolation& e) {
        std::fprintf(stderr, "invariant violated: %s\n", e.what());
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitInput;
}
