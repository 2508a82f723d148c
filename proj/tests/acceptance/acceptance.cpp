// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "dhym/continuity.hpp"
#include "dhym/phase.hpp"
#include "dhym/sampling.hpp"
#include "dhym/stability.hpp"
#include "dhym/subsolution.hpp"
#include "dhym/tolerances.hpp"
#include "dhym/torus.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

using namespace dhym;

namespace {

std::uniform_real_distribution<double> unit(0.0, 1.0);

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;
constexpr double kNoLimit = std::numeric_limits<double>::infinity();

void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    char limit[32] = "no limit";
    if (std::isfinite(limit_s)) std::snprintf(limit, sizeof limit, "limit %.0fs", limit_s);
    std::printf("[%s] criterion %d: %s | %s | %.2fs (%s)%s\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
                limit, in_time ? "" : " TIME LIMIT EXCEEDED");
    std::fflush(stdout);
}

ScalarField sample(const TorusGrid& g, const std::function<double(const std::array<double, 3>&)>& f) {
    ScalarField v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(g.coordinates(i));
    return v;
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

Outcome boundary_arithmetic() {
    Rng rng(1);
    double worst = 1e300;
    long bad = 0, total = 0;
    for (int n = 2; n <= 5; ++n) {
        for (double off : {0.0, 0.5, 1.2}) {
            const double sigma = supercritical_floor(n) + off;
            for (int s = 0; s < 10000; ++s) {
                const auto r = boundary_report(boundary_sample(rng, n, sigma), sigma);
                double w = std::min({r.positivity_slack, r.dominance_slack, r.trace_slack});
                for (double e : r.symmetric) w = std::min(w, e);
                worst = std::min(worst, w);
                if (!r.all() || w < -kPredicateTol) ++bad;
                ++total;
            }
        }
    }
    std::ostringstream d;
    d << total << " boundary spectra, n=2..5 x 3 levels, violations " << bad << ", worst slack " << worst;
    return {bad == 0 && worst >= -1e-9, d.str()};
}

Outcome subsolution_equivalence() {
    Rng rng(2);
    long disagreements = 0, total = 0, pole = 0, even = 0, odd = 0, positive = 0;
    for (int n = 2; n <= 6; ++n) {
        int kept = 0;
        while (kept < 10000) {
            const Spectrum mu = spectrum_with_deficit(rng, n, kPi * (0.005 + 0.99 * unit(rng)));
            const double r = unit(rng);
            double hat;
            // (n-1)pi/2 is the cot/tan-singular level inside the range
            if (r < 0.15) hat = hypercritical_floor(n);
            else if (r < 0.2) hat = supercritical_floor(n) + 1e-6 + 1e-4 * unit(rng);
            else if (r < 0.25) hat = phase_ceiling(n) - 1e-6 - 1e-4 * unit(rng);
            else hat = supercritical_floor(n) + kPi * (1e-6 + (1 - 2e-6) * unit(rng));
            const auto a = c_subsolution_test(mu, hat);
            if (std::abs(a.slack) <= 1e-8) continue;
            ++kept;
            const auto b = form_positivity_test(mu, hat);
            const auto c = argument_pairing_test(mu, hat, n - 1);
            if (b.positive != a.is_subsolution || c.passes != a.is_subsolution) ++disagreements;
            pole += b.used_argument_form;
            (n % 2 == 0 ? even : odd) += 1;
            positive += a.is_subsolution;
            ++total;
        }
    }
    std::ostringstream d;
    d << total << " samples (even n " << even << ", odd n " << odd << ", pole-level " << pole << ", subsolutions "
      << positive << "), disagreements " << disagreements;
    return {disagreements == 0 && pole > 0 && even > 0 && odd > 0, d.str()};
}

Outcome f0_contract() {
    Rng rng(3);
    // boundary spectra: Theta = sigma to 1e-12 and f0 = 0
    double worst_theta = 0.0, worst_f0 = 0.0, worst_shift = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const int n = 2 + s % 4;
        const double sigma = supercritical_floor(n) + 1.4 * unit(rng);
        const Spectrum l = boundary_sample(rng, n, sigma);
        double slope = 0.0;
        for (double x : l.values()) slope += 1.0 / (1.0 + x * x);
        worst_theta = std::max(worst_theta, std::abs(theta(l) - sigma));
        worst_f0 = std::max(worst_f0, std::abs(f0(l, sigma)) * slope);
        // off the level set f0 recovers the shift, with its sign
        const double shift = (unit(rng) < 0.5 ? -1.0 : 1.0) * (1e-3 + unit(rng));
        const double f = f0(l.shifted(-shift), sigma);
        worst_shift = std::max(worst_shift, std::abs(f - shift));
        if ((f > 0) != (shift > 0)) worst_shift = 1.0;
    }
    double worst_concave = 1e300;
    for (int s = 0; s < 1000; ++s) {
        const int n = 1 + s % 4;
        const double sigma = supercritical_floor(n) + (phase_ceiling(n) - supercritical_floor(n)) * (0.01 + 0.98 * unit(rng));
        const HermitianForm a = random_hermitian(rng, n, 2.0), b = random_hermitian(rng, n, 2.0);
        const HermitianForm id = HermitianForm::identity(n);
        const double fa = f0(relative_eigenvalues(id, a), sigma);
        const double fb = f0(relative_eigenvalues(id, b), sigma);
        const double fm = f0(relative_eigenvalues(id, 0.5 * (a + b)), sigma);
        worst_concave = std::min(worst_concave, fm - 0.5 * (fa + fb));
    }
    const double analytic = std::abs(f0(Spectrum{3.0, 1.0}, kHalfPi) - (2.0 - std::sqrt(2.0)));
    std::ostringstream d;
    d << "boundary max|Theta-sigma| " << worst_theta << ", max|f0|*Theta' " << worst_f0 << ", shifted max|f0-s| "
      << worst_shift << "; concavity min slack " << worst_concave << "; |f0(3,1)-(2-sqrt2)| " << analytic;
    return {worst_theta <= 1e-12 && worst_f0 <= 1e-12 && worst_shift <= 1e-9 && worst_concave >= -1e-9 &&
                analytic <= 1e-12,
            d.str()};
}

Outcome linearization() {
    std::ostringstream d;
    bool ok = true;
    for (int n : {1, 2}) {
        const TorusProblem p(n, 64, RealMatrix::Identity(n, n));
        const ScalarField u = sample(p.grid, [n](const auto& x) {
            return 0.05 * std::cos(2 * kPi * x[0]) + (n > 1 ? 0.03 * std::sin(2 * kPi * (x[0] + x[1])) : 0.0);
        });
        const ScalarField w = sample(p.grid, [n](const auto& x) {
            return 0.02 * std::sin(4 * kPi * x[0]) + (n > 1 ? 0.02 * std::cos(2 * kPi * (x[0] - 2 * x[1])) : 0.0);
        });
        const ScalarField lin = linearized_apply(u, w, p);
        double err[3];
        const double eps0 = 0.2;
        for (int k = 0; k < 3; ++k) {
            const double eps = eps0 / (1 << k);
            const ScalarField fd =
                (theta_field(ScalarField(u + eps * w), p) - theta_field(ScalarField(u - eps * w), p)) / (2 * eps);
            err[k] = (fd - lin).cwiseAbs().maxCoeff();
        }
        const double o1 = order(err[0], err[1]), o2 = order(err[1], err[2]);
        const double h = p.grid.spacing();
        const double C = err[0] / (eps0 * eps0 + h * h);
        ok = ok && o1 >= 1.9 && o2 >= 1.9;
        d << "n=" << n << " errors " << err[0] << "," << err[1] << "," << err[2] << " orders " << o1 << "," << o2
          << " C " << C << "; ";
    }
    return {ok, d.str()};
}

Outcome manufactured() {
    std::ostringstream d;
    const TorusProblem p(1, 64, RealMatrix::Identity(1, 1));
    const auto ustar_f = [](const auto& x) { return 0.3 * std::cos(2 * kPi * x[0]); };
    const ScalarField ustar = sample(p.grid, ustar_f);
    const SolveResult r = newton_solve(PotentialField::zero(p.grid), theta_field(ustar, p), p);
    const double e = (r.u.values() - ustar).cwiseAbs().maxCoeff();
    bool ok = r.report.converged && e <= 1e-8 && r.report.iterations <= 8;
    d << "discrete h: error " << e << " in " << r.report.iterations << " iterations; analytic h errors";
    double errs[3];
    int k = 0;
    for (int N : {32, 64, 128}) {
        const TorusProblem q(1, N, RealMatrix::Identity(1, 1));
        const ScalarField h = sample(q.grid, [](const auto& x) {
            return std::atan(1.0 + 0.25 * (-0.3 * 4 * kPi * kPi * std::cos(2 * kPi * x[0])));
        });
        const SolveResult s = newton_solve(PotentialField::zero(q.grid), h, q);
        ok = ok && s.report.converged;
        errs[k++] = (s.u.values() - sample(q.grid, ustar_f)).cwiseAbs().maxCoeff();
        d << " " << errs[k - 1];
    }
    const double o1 = order(errs[0], errs[1]), o2 = order(errs[1], errs[2]);
    d << " orders " << o1 << "," << o2;
    return {ok && o1 >= 1.9 && o2 >= 1.9, d.str()};
}

struct PipelineCheck {
    bool bounds_ok = true;
    double worst_bound = 0.0;
};

void check_bounds(const ContinuityResult& r, PipelineCheck& pc) {
    for (const auto& s : r.stage_a->report.steps) {
        const double lo = -s.t * r.plan.sup_theta1_minus_theta0, hi = s.t * r.plan.sup_theta0_minus_theta1;
        const double v = std::max(s.constant - hi, lo - s.constant);
        pc.worst_bound = std::max(pc.worst_bound, v);
    }
    const double b1 = r.stage_a->constant;
    for (const auto& s : r.stage_b->report.steps) {
        pc.worst_bound = std::max(pc.worst_bound, std::max(s.constant, b1 - s.constant));
    }
    pc.bounds_ok = pc.bounds_ok && pc.worst_bound <= kPathTol;
}

Outcome pipeline() {
    std::ostringstream d;
    bool ok = true;
    PipelineCheck pc;
    double worst_lemma = 0.0;
    auto lemma = [&](const Theta1Checks& c, double delta) {
        worst_lemma = std::max({worst_lemma, -c.sandwich_low, c.sandwich_high, c.below_region_error, c.at_argmin_error,
                                c.above_region_error, c.infimum_error, c.sup_gap_error, c.sup_at_argmin_error});
        (void)delta;
        ok = ok && c.all_pass;
    };

    // n = 1
    double c1_n1 = 0.0;
    for (int N : {32, 64, 128}) {
        const TorusProblem p(1, N, RealMatrix::Identity(1, 1));
        const PotentialField chi(p.grid, sample(p.grid, [](const auto& x) { return 0.2 * std::cos(2 * kPi * x[0]); }));
        const ContinuityResult r = run_continuity(chi, p);
        ok = ok && r.success && r.final_residual_max <= 1e-10;
        if (!r.success) return {false, "n=1 pipeline failed at N=" + std::to_string(N)};
        check_bounds(r, pc);
        lemma(r.plan.theta1.checks, r.plan.config.delta);
        c1_n1 = std::max(c1_n1, std::abs(r.c));
    }
    d << "n=1 max|c1| " << c1_n1 << " (discretely compatible class phase)";

    // n = 2
    double c1[3];
    double agree = 0.0;
    int k = 0;
    for (int N : {16, 32, 64}) {
        const TorusProblem p(2, N, RealMatrix::Identity(2, 2));
        const PotentialField chi(p.grid, sample(p.grid, [](const auto& x) {
            return 0.03 * std::cos(2 * kPi * x[0]) + 0.02 * std::sin(2 * kPi * (x[0] + x[1]));
        }));
        const ContinuityResult r = run_continuity(chi, p);
        if (!r.success) return {false, "n=2 pipeline failed at N=" + std::to_string(N)};
        ok = ok && r.final_residual_max <= 1e-10;
        check_bounds(r, pc);
        lemma(r.plan.theta1.checks, r.plan.config.delta);
        c1[k++] = std::abs(r.c);
        const ScalarField hat = ScalarField::Constant(static_cast<Eigen::Index>(p.grid.size()), r.plan.theta_hat);
        const SolveResult direct = newton_solve(chi, hat, p);
        if (direct.report.converged) {
            agree = std::max({agree, (direct.u.values() - r.solution.values()).cwiseAbs().maxCoeff(),
                              std::abs(direct.c - r.c)});
        }
    }
    const double o1 = order(c1[0], c1[1]), o2 = order(c1[1], c1[2]);
    d << "; n=2 |c1| " << c1[0] << "," << c1[1] << "," << c1[2] << " orders " << o1 << "," << o2
      << "; direct-solve agreement " << agree << "; worst bound excess " << pc.worst_bound
      << "; worst theta1 property error " << worst_lemma;
    ok = ok && pc.bounds_ok && c1_n1 <= 1e-12 && o1 >= 1.9 && o2 >= 1.9 && agree <= 1e-8 && worst_lemma <= kPathTol;
    return {ok, d.str()};
}

Outcome stability() {
    std::ostringstream d;
    ClassData s;
    s.n = 2;
    s.m = {2.0, 1.0, 0.0};
    s.subvarieties = {{"C0", 1, {1.0, 0.0}}, {"C1", 1, {1.0, -2.0}}};
    const auto r = stability_check(s);
    const double expected = kPi / 4.0 - std::abs(std::atan(2.0) - kHalfPi);
    bool ok = std::abs(r.theta_x.value - kPi / 4.0) <= 1e-15 && r.verdicts[0].stable && !r.verdicts[1].stable &&
              std::abs(r.verdicts[0].margin - kPi / 4.0) <= 1e-14 &&
              std::abs(r.verdicts[1].margin + expected) <= 1e-14;
    const auto sc0 = surface_criterion(ClassData{2, {2.0, 1.0, 0.0}, {{"C0", 1, {1.0, 0.0}}}});
    const auto sc1 = surface_criterion(ClassData{2, {2.0, 1.0, 0.0}, {{"C1", 1, {1.0, -2.0}}}});
    ok = ok && sc0.exists && !sc1.exists;
    d << "Theta_X " << r.theta_x.value << ", margins " << r.verdicts[0].margin << " / " << r.verdicts[1].margin;

    Rng rng(7);
    long agree = 0, band = 0, total = 0;
    for (int k = 0; k < 10000; ++k) {
        ClassData c;
        c.n = 2;
        c.m = {2.0, 0.01 + 3.0 * unit(rng), 6.0 * (unit(rng) - 0.5)};
        c.subvarieties = {{"C", 1, {0.01 + 3.0 * unit(rng), 8.0 * (unit(rng) - 0.5)}}};
        const double tx = theta_angle(z_ambient(c)).value;
        const double cot = 1.0 / std::tan(tx);
        const double integral = cot * c.subvarieties[0].v[0] + c.subvarieties[0].v[1];
        const double tc = theta_angle(z_subvariety(c.subvarieties[0])).value;
        const double margin = tc - (tx - kHalfPi);
        ++total;
        if (std::abs(integral) <= 1e-9 || std::abs(margin) <= 1e-9) {
            ++band;
            continue;
        }
        agree += (integral > 0.0) == (margin > 0.0);
    }
    d << "; random curves " << total << ", agreements " << agree << ", inside band " << band;
    ok = ok && agree == total - band;
    return {ok, d.str()};
}

Outcome hypercritical_concavity() {
    Rng rng(8);
    double worst = 1e300;
    for (int s = 0; s < 1000; ++s) {
        const int n = 1 + s % 4;
        const Spectrum la = spectrum_with_deficit(rng, n, kHalfPi * (0.01 + 0.98 * unit(rng)));
        const Spectrum lb = spectrum_with_deficit(rng, n, kHalfPi * (0.01 + 0.98 * unit(rng)));
        const HermitianForm a = conjugated(la, random_unitary(rng, n));
        const HermitianForm b = conjugated(lb, random_unitary(rng, n));
        const HermitianForm id = HermitianForm::identity(n);
        const double ta = theta(relative_eigenvalues(id, a)), tb = theta(relative_eigenvalues(id, b));
        const double tm = theta(relative_eigenvalues(id, 0.5 * (a + b)));
        worst = std::min(worst, tm - 0.5 * (ta + tb));
    }
    std::ostringstream d;
    d << "1000 hypercritical pairs n=1..4, min midpoint slack " << worst;
    return {worst >= -1e-9, d.str()};
}

}  // namespace

int main() {
    run(1, "boundary arithmetic suite", 10.0, boundary_arithmetic);
    run(2, "subsolution three-way equivalence", 30.0, subsolution_equivalence);
    run(3, "F0 contract", kNoLimit, f0_contract);
    run(4, "linearization check", kNoLimit, linearization);
    run(5, "manufactured-solution recovery", 5.0, manufactured);
    run(6, "continuity pipeline", 60.0, pipeline);
    run(7, "stability toolkit", 5.0, stability);
    run(8, "hypercritical concavity", kNoLimit, hypercritical_concavity);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
