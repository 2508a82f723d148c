#include "commands.hpp"

#include "dhym/continuity.hpp"
#include "dhym/phase.hpp"
#include "dhym/report.hpp"
#include "dhym/sampling.hpp"
#include "dhym/stability.hpp"
#include "dhym/subsolution.hpp"
#include "dhym/tolerances.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace dhym::cli {

namespace {

struct Check {
    long failures = 0;
    double worst = 0.0;  // most negative slack seen (0 when all clean)

    void record(double slack) {
        if (slack < worst) worst = slack;
        if (slack < 0.0) ++failures;
    }
    json to_json() const { return {{"passed", failures == 0}, {"failures", failures}, {"worst_slack", worst}}; }
};

}  // namespace

int cmd_selftest(const SelftestArgs& args) {
    Rng rng(args.seed);
    std::uniform_int_distribution<int> dim(2, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int count = args.samples;
    json checks;

    Check odd;
    for (int s = 0; s < count; ++s) {
        const Spectrum l = random_spectrum(rng, dim(rng));
        odd.record(1e-12 - std::abs(theta(l) + theta(l.negated())));
    }
    checks["theta_odd"] = odd.to_json();

    Check det;
    for (int s = 0; s < count; ++s) {
        const int n = dim(rng);
        const HermitianForm a = random_positive_definite(rng, n);
        const HermitianForm w = random_hermitian(rng, n);
        const Spectrum l = relative_eigenvalues(a, w);
        double prod = 1.0;
        for (double x : l.values()) prod *= 1.0 + x * x;
        const Complex lhs = (a.matrix().inverse() * eta_metric(a, w).matrix()).determinant();
        det.record(1e-10 - std::abs(lhs - prod) / prod);
    }
    checks["eta_determinant"] = det.to_json();

    Check wy;
    for (int s = 0; s < count; ++s) {
        const int n = dim(rng);
        const double sigma = supercritical_floor(n) + 1.4 * unit(rng);
        const auto r = boundary_report(boundary_sample(rng, n, sigma), sigma);
        wy.record(r.all() ? 0.0 : -1.0);
    }
    checks["boundary_arithmetic"] = wy.to_json();

    Check equiv;
    for (int s = 0; s < count; ++s) {
        const int n = dim(rng) + (unit(rng) < 0.2 ? 1 : 0);
        const Spectrum mu = spectrum_with_deficit(rng, n, kPi * (0.01 + 0.98 * unit(rng)));
        const double hat = supercritical_floor(n) + kPi * (0.005 + 0.99 * unit(rng));
        const auto a = c_subsolution_test(mu, hat);
        if (std::abs(a.slack) <= 1e-8) continue;
        const bool b = form_positivity_test(mu, hat).positive;
        const bool c = argument_pairing_test(mu, hat, n - 1).passes;
        equiv.record(a.is_subsolution == b && b == c ? 0.0 : -1.0);
    }
    checks["subsolution_equivalence"] = equiv.to_json();

    Check concave;
    for (int s = 0; s < count; ++s) {
        const int n = 2 + static_cast<int>(unit(rng) * 3);
        const double sigma = supercritical_floor(n) + (phase_ceiling(n) - supercritical_floor(n)) * unit(rng);
        const HermitianForm a = random_hermitian(rng, n, 2.0);
        const HermitianForm b = random_hermitian(rng, n, 2.0);
        const HermitianForm id = HermitianForm::identity(n);
        const double fa = f0(relative_eigenvalues(id, a), sigma);
        const double fb = f0(relative_eigenvalues(id, b), sigma);
        const double fm = f0(relative_eigenvalues(id, 0.5 * (a + b)), sigma);
        concave.record(fm - 0.5 * (fa + fb) + 1e-9);
    }
    checks["f0_concavity"] = concave.to_json();

    Check rmax;
    for (int s = 0; s < count; ++s) {
        const double d = 1e-3 + unit(rng);
        const double a = 4.0 * (unit(rng) - 0.5);
        const double b = 4.0 * (unit(rng) - 0.5);
        const double m = regularized_max(a, b, d);
        const double hi = std::max(a, b);
        rmax.record(std::min(m - hi, hi + d - m) + 1e-14);
    }
    checks["regularized_max_sandwich"] = rmax.to_json();

    Check surface;
    for (int s = 0; s < count; ++s) {
        ClassData data;
        data.n = 2;
        const double m1 = 0.1 + 2.0 * unit(rng);
        data.m = {2.0, m1, 2.0 * (unit(rng) - 0.5)};
        const double theta_x = std::arg(z_ambient(data));
        data.subvarieties.push_back({"C", 1, {0.05 + 3.0 * unit(rng), 6.0 * (unit(rng) - 0.5)}});
        const double lhs = surface_criterion(data).curves[0].integral;
        const double rhs = stability_check(data).verdicts[0].margin;
        if (std::abs(lhs) <= 1e-9 || std::abs(rhs) <= 1e-9 || theta_x <= 0.0) continue;
        surface.record((lhs > 0.0) == (rhs > 0.0) ? 0.0 : -1.0);
    }
    checks["surface_curve_equivalence"] = surface.to_json();

    bool all = true;
    for (const auto& item : checks.items()) all = all && item.value()["passed"].get<bool>();
    json out = {{"seed", args.seed}, {"samples", count}, {"checks", checks}, {"all_passed", all}};
    std::fputs(dump_json(out).c_str(), stdout);
    return all ? kExitOk : kExitSelftest;
}

}  // namespace dhym::cli
