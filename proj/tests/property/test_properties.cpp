#include "dhym/continuity.hpp"
#include "dhym/phase.hpp"
#include "dhym/sampling.hpp"
#include "dhym/stability.hpp"
#include "dhym/subsolution.hpp"
#include "dhym/tolerances.hpp"

#include <doctest.h>

#include <cmath>

using namespace dhym;

namespace {

std::uniform_real_distribution<double> unit(0.0, 1.0);

HermitianForm psd(Rng& rng, int n) {
    const HermitianForm g = random_hermitian(rng, n);
    return HermitianForm(ComplexMatrix(g.matrix() * g.matrix().adjoint()));
}

}  // namespace

TEST_CASE("theta is monotone componentwise and under the Loewner order") {
    Rng rng(101);
    for (int s = 0; s < 1000; ++s) {
        const int n = 1 + s % 5;
        const Spectrum l = random_spectrum(rng, n);
        std::vector<double> up(l.values());
        for (auto& x : up) x += 2.0 * unit(rng);
        CHECK(theta(l) <= theta(Spectrum(up)) + 1e-15);

        const HermitianForm a = random_hermitian(rng, n, 2.0);
        const HermitianForm b = a + psd(rng, n);
        const HermitianForm id = HermitianForm::identity(n);
        const Spectrum la = relative_eigenvalues(id, a), lb = relative_eigenvalues(id, b);
        CHECK(theta(la) <= theta(lb) + 1e-12);
        const double sigma = supercritical_floor(n) + (phase_ceiling(n) - supercritical_floor(n)) * unit(rng);
        CHECK(f0(la, sigma) <= f0(lb, sigma) + 1e-9);
    }
}

TEST_CASE("theta is odd") {
    Rng rng(102);
    for (int s = 0; s < 1000; ++s) {
        const Spectrum l = random_spectrum(rng, 1 + s % 6);
        CHECK(std::abs(theta(l) + theta(l.negated())) <= 4e-16 * l.size());
    }
}

TEST_CASE("relative eigenvalues are congruence invariant") {
    Rng rng(103);
    std::normal_distribution<double> g;
    for (int s = 0; s < 500; ++s) {
        const int n = 1 + s % 5;
        const HermitianForm a = random_positive_definite(rng, n);
        const HermitianForm w = random_hermitian(rng, n);
        ComplexMatrix p(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) p(i, k) = Complex(g(rng), g(rng));
        p += 2.0 * ComplexMatrix::Identity(n, n);
        const HermitianForm a2(ComplexMatrix(p.adjoint() * a.matrix() * p));
        const HermitianForm w2(ComplexMatrix(p.adjoint() * w.matrix() * p));
        const Spectrum l1 = relative_eigenvalues(a, w), l2 = relative_eigenvalues(a2, w2);
        for (int i = 0; i < n; ++i) CHECK(std::abs(l1[i] - l2[i]) <= 1e-9 * std::max(1.0, std::abs(l1[i])));
    }
}

TEST_CASE("eta determinant identity on 1000 pairs") {
    Rng rng(104);
    for (int s = 0; s < 1000; ++s) {
        const int n = 1 + s % 5;
        const HermitianForm a = random_positive_definite(rng, n);
        const HermitianForm w = random_hermitian(rng, n);
        const Spectrum l = relative_eigenvalues(a, w);
        double prod = 1.0;
        for (double x : l.values()) prod *= 1.0 + x * x;
        const Complex det = (a.matrix().inverse() * eta_metric(a, w).matrix()).determinant();
        CHECK(std::abs(det - prod) <= 1e-10 * prod);
        CHECK(eta_metric(a, w).is_positive_definite());
    }
}

TEST_CASE("f0 is midpoint concave for supercritical levels") {
    Rng rng(105);
    for (int s = 0; s < 1000; ++s) {
        const int n = 1 + s % 4;
        const double sigma = supercritical_floor(n) + (phase_ceiling(n) - supercritical_floor(n)) * (0.01 + 0.98 * unit(rng));
        const HermitianForm a = random_hermitian(rng, n, 2.0), b = random_hermitian(rng, n, 2.0);
        const HermitianForm id = HermitianForm::identity(n);
        const double fa = f0(relative_eigenvalues(id, a), sigma);
        const double fb = f0(relative_eigenvalues(id, b), sigma);
        const double fm = f0(relative_eigenvalues(id, 0.5 * (a + b)), sigma);
        CHECK(fm >= 0.5 * (fa + fb) - 1e-9);
    }
}

TEST_CASE("supercritical level sets are convex: midpoint of boundary samples stays above") {
    Rng rng(106);
    for (int s = 0; s < 2000; ++s) {
        const int n = 2 + s % 4;
        const double sigma = supercritical_floor(n) + 1.4 * unit(rng);
        const Spectrum a = boundary_sample(rng, n, sigma), b = boundary_sample(rng, n, sigma);
        // both sorted descending, so componentwise midpoint is a valid convex combination
        std::vector<double> m(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)] = 0.5 * (a[i] + b[i]);
        CHECK(theta(Spectrum(m)) >= sigma - 1e-9);
    }
}

TEST_CASE("three subsolution forms agree away from the boundary, all parity branches") {
    Rng rng(107);
    for (int s = 0; s < 4000; ++s) {
        const int n = 2 + s % 5;
        const Spectrum mu = spectrum_with_deficit(rng, n, kPi * (0.01 + 0.98 * unit(rng)));
        double hat = supercritical_floor(n) + kPi * (0.002 + 0.996 * unit(rng));
        if (s % 17 == 0) hat = hypercritical_floor(n);  // cot/tan pole
        const auto a = c_subsolution_test(mu, hat);
        if (std::abs(a.slack) <= 10 * kClassTol) continue;
        CHECK(form_positivity_test(mu, hat).positive == a.is_subsolution);
        CHECK(argument_pairing_test(mu, hat, n - 1).passes == a.is_subsolution);
    }
}

TEST_CASE("subsolution at level n-1 implies every argument pairing test") {
    Rng rng(108);
    for (int s = 0; s < 2000; ++s) {
        const int n = 2 + s % 5;
        const Spectrum mu = spectrum_with_deficit(rng, n, kPi * (0.01 + 0.98 * unit(rng)));
        const double hat = supercritical_floor(n) + kPi * (0.002 + 0.996 * unit(rng));
        if (!c_subsolution_test(mu, hat).is_subsolution) continue;
        for (int p = 1; p <= n - 1; ++p) CHECK(argument_pairing_test(mu, hat, p).passes);
    }
}

TEST_CASE("subsolution slack is monotone and genuine solutions are subsolutions") {
    Rng rng(109);
    for (int s = 0; s < 2000; ++s) {
        const int n = 2 + s % 5;
        const Spectrum mu = spectrum_with_deficit(rng, n, kPi * (0.01 + 0.98 * unit(rng)));
        const double h = supercritical_floor(n) + kPi * (0.002 + 0.996 * unit(rng));
        std::vector<double> up(mu.values());
        up[static_cast<std::size_t>(s) % up.size()] += 3.0 * unit(rng);
        CHECK(c_subsolution_test(Spectrum(up), h).slack >= c_subsolution_test(mu, h).slack - 1e-14);
        CHECK(c_subsolution_test(mu, theta(mu)).slack > 0.0);
    }
}

TEST_CASE("regularized max properties on random pairs") {
    Rng rng(110);
    for (int s = 0; s < 5000; ++s) {
        const double d = 1e-3 + unit(rng);
        const double a = 6.0 * (unit(rng) - 0.5), b = 6.0 * (unit(rng) - 0.5);
        const double m = regularized_max(a, b, d);
        CHECK(m >= std::max(a, b));
        CHECK(m <= std::max(a, b) + d);
        if (a + d <= b - d) CHECK(m == b);
        if (b + d <= a - d) CHECK(m == a);
        CHECK(m == regularized_max(b, a, d));
    }
}

TEST_CASE("stability toolkit: linearity, scaling, sign equivariance, surface agreement") {
    Rng rng(111);
    for (int s = 0; s < 2000; ++s) {
        const int p = 1 + s % 3;
        SubvarietyData v{"V", p, {}};
        SubvarietyData w{"W", p, {}};
        v.v.push_back(0.1 + unit(rng));
        w.v.push_back(0.1 + unit(rng));
        for (int k = 1; k <= p; ++k) {
            v.v.push_back(4.0 * (unit(rng) - 0.5));
            w.v.push_back(4.0 * (unit(rng) - 0.5));
        }
        SubvarietyData sum{"S", p, {}};
        for (int k = 0; k <= p; ++k) sum.v.push_back(v.v[static_cast<std::size_t>(k)] + w.v[static_cast<std::size_t>(k)]);
        CHECK(std::abs(z_subvariety(sum) - z_subvariety(v) - z_subvariety(w)) <= 1e-12 * (1 + std::abs(z_subvariety(sum))));
        const double scale = 0.1 + 5.0 * unit(rng);
        SubvarietyData sv = v;
        for (auto& x : sv.v) x *= scale;
        CHECK(std::abs(theta_angle(z_subvariety(sv)).value - theta_angle(z_subvariety(v)).value) <= 1e-12);

        ClassData d;
        d.n = 2;
        d.m = {2.0, 0.05 + 2.0 * unit(rng), 4.0 * (unit(rng) - 0.5)};
        d.subvarieties.push_back({"C", 1, {0.05 + 2.0 * unit(rng), 4.0 * (unit(rng) - 0.5)}});
        const auto st = stability_check(d);
        CHECK(std::abs(stability_check(d.negated()).theta_x.value + st.theta_x.value) <= 1e-15);
        const auto sc = surface_criterion(d);
        if (std::abs(st.verdicts[0].margin) > 1e-9 && sc.kappa_square_positive) {
            CHECK(sc.exists == st.all_stable);
        }
    }
}

TEST_CASE("constant torus data: positive subsolution slack implies stable coordinate subtori") {
    Rng rng(112);
    int tested = 0;
    for (int s = 0; s < 3000; ++s) {
        const int n = 2 + s % 2;
        // Theta in (pi/2, pi) for n = 3, (0, pi) for n = 2 keeps principal values exact
        const double lo = n == 2 ? 0.05 : kHalfPi + 0.05;
        const double th = lo + (kPi - 0.05 - lo) * unit(rng);
        const Spectrum l = spectrum_with_deficit(rng, n, n * kHalfPi - th);
        if (!c_subsolution_test(l, theta(l)).is_subsolution) continue;
        std::vector<std::vector<int>> subs;
        for (int j = 0; j < n; ++j) subs.push_back({j});
        if (n == 3) subs.insert(subs.end(), {{0, 1}, {0, 2}, {1, 2}});
        const ClassData d = constant_torus_class(l, subs);
        const auto r = stability_check(d);
        CHECK(std::abs(r.theta_x.value - theta(l)) <= 1e-9);
        CHECK(r.all_stable);
        ++tested;
    }
    CHECK(tested > 1000);
}
