#include "dhym/sampling.hpp"

#include "dhym/errors.hpp"
#include "dhym/phase.hpp"
#include "dhym/tolerances.hpp"

#include <algorithm>
#include <cmath>

namespace dhym {

namespace {

// Uniform split of `total` into n positive parts, each at least `floor`.
std::vector<double> split(Rng& rng, int n, double total, double floor) {
    std::exponential_distribution<double> e(1.0);
    for (;;) {
        std::vector<double> w(static_cast<std::size_t>(n));
        double sum = 0.0;
        for (auto& x : w) sum += (x = e(rng));
        bool ok = true;
        for (auto& x : w) {
            x *= total / sum;
            ok = ok && x >= floor;
        }
        if (ok) return w;
    }
}

}  // namespace

Spectrum random_spectrum(Rng& rng, int n) {
    std::uniform_real_distribution<double> a(-kHalfPi + 1e-6, kHalfPi - 1e-6);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = std::tan(a(rng));
    return Spectrum(std::move(v));
}

Spectrum spectrum_with_deficit(Rng& rng, int n, double deficit) {
    if (!(deficit > 0.0 && deficit < n * kPi)) throw InputError("spectrum_with_deficit: deficit out of range");
    // Each part must stay below pi so every angle is above -pi/2.
    for (;;) {
        const auto d = split(rng, n, deficit, 1e-7);
        if (std::any_of(d.begin(), d.end(), [](double x) { return x >= kPi - 1e-7; })) continue;
        std::vector<double> v;
        for (double x : d) v.push_back(std::tan(kHalfPi - x));
        return Spectrum(std::move(v));
    }
}

Spectrum boundary_sample(Rng& rng, int n, double sigma) {
    if (n < 2) throw InputError("boundary_sample: n must be >= 2");
    const double deficit = n * kHalfPi - sigma;
    for (;;) {
        const Spectrum s = spectrum_with_deficit(rng, n, deficit);
        std::vector<double> prefix(s.values().begin(), s.values().end() - 1);
        try {
            const double last = boundary_solve(prefix, ConeLevel{n, sigma});
            prefix.push_back(last);
            return Spectrum(std::move(prefix));
        } catch (const InputError&) {
            // prefix too close to the edge of the admissible range; redraw
        }
    }
}

ComplexMatrix random_unitary(Rng& rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m(i, k) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(m);
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

HermitianForm conjugated(const Spectrum& lambda, const ComplexMatrix& u) {
    Eigen::VectorXcd d(lambda.size());
    for (int i = 0; i < lambda.size(); ++i) d(i) = lambda[i];
    ComplexMatrix m = u * d.asDiagonal() * u.adjoint();
    return HermitianForm(ComplexMatrix(0.5 * (m + m.adjoint())));
}

HermitianForm random_hermitian(Rng& rng, int n, double scale) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (int k = i + 1; k < n; ++k) {
            m(i, k) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
            m(k, i) = std::conj(m(i, k));
        }
    }
    return HermitianForm(m);
}

HermitianForm random_positive_definite(Rng& rng, int n, double shift) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) a(i, k) = Complex(g(rng), g(rng)) / std::sqrt(2.0 * n);
    ComplexMatrix m = a * a.adjoint() + shift * ComplexMatrix::Identity(n, n);
    return HermitianForm(ComplexMatrix(0.5 * (m + m.adjoint())));
}

}  // namespace dhym
