#include "dhym/subsolution.hpp"

#include "dhym/errors.hpp"
#include "dhym/parallel.hpp"
#include "dhym/tolerances.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace dhym {

namespace {

void require_phase_range(int n, double h, const char* what) {
    if (!(h > supercritical_floor(n) && h < phase_ceiling(n))) {
        std::ostringstream msg;
        msg << what << ": phase " << h << " outside the supercritical range ("
            << supercritical_floor(n) << ", " << phase_ceiling(n) << ")";
        throw InputError(msg.str());
    }
}

// (-1)^{k} for i^{2k}.
double real_power_of_i(int even_exponent) {
    return (even_exponent / 2) % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

SubsolutionVerdict c_subsolution_test(const Spectrum& mu, double h) {
    const int n = mu.size();
    if (n == 0) throw InputError("c_subsolution_test: empty spectrum");
    require_phase_range(n, h, "c_subsolution_test");
    const double total = theta(mu);
    SubsolutionVerdict v;
    v.slack = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double deleted = total - std::atan(mu[j]);
        const double s = deleted - (h - kHalfPi);
        if (s < v.slack) {
            v.slack = s;
            v.worst_index = j;
        }
    }
    v.region = classify(v.slack, kClassTol);
    v.is_subsolution = v.region == Region::inside;
    return v;
}

FormPositivityResult form_positivity_test(const Spectrum& mu, double theta_hat) {
    const int n = mu.size();
    if (n == 0) throw InputError("form_positivity_test: empty spectrum");
    require_phase_range(n, theta_hat, "form_positivity_test");

    FormPositivityResult out;
    out.mu_supercritical = theta(mu) > supercritical_floor(n);
    out.margins.resize(static_cast<std::size_t>(n));

    const bool even = n % 2 == 0;
    // n even: -(i^n)(Im P + cot Re P); n odd: i^{n-1}(tan Im P + Re P).
    // delegate at every multiple of pi/2, the interior one being (n-1)pi/2
    out.used_argument_form = std::abs(std::sin(2.0 * theta_hat)) < 1e-12;

    if (out.used_argument_form) {
        const auto pairing = argument_pairing_test(mu, theta_hat, n - 1);
        const double total = theta(mu);
        for (int j = 0; j < n; ++j) {
            out.margins[static_cast<std::size_t>(j)] =
                total - std::atan(mu[j]) - (theta_hat - kHalfPi);
        }
        out.positive = pairing.passes;
        return out;
    }

    const double sign = even ? -real_power_of_i(n) : real_power_of_i(n - 1);
    const double trig = even ? 1.0 / std::tan(theta_hat) : std::tan(theta_hat);
    out.positive = true;
    for (int j = 0; j < n; ++j) {
        Complex p{1.0, 0.0};
        for (int i = 0; i < n; ++i) {
            if (i != j) p *= Complex{1.0, mu[i]};
        }
        const double coeff = even ? sign * (p.imag() + trig * p.real())
                                  : sign * (trig * p.imag() + p.real());
        const double m = coeff / std::abs(p);
        out.margins[static_cast<std::size_t>(j)] = m;
        if (!(m > kClassTol)) out.positive = false;
    }
    return out;
}

ArgumentPairingResult argument_pairing_test(const Spectrum& mu, double theta_hat, int p) {
    const int n = mu.size();
    if (n > 12) throw InputError("argument_pairing_test: exhaustive enumeration limited to n <= 12");
    if (p < 1 || p > n - 1) throw InputError("argument_pairing_test: need 1 <= p <= n-1");

    std::vector<double> angle(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) angle[static_cast<std::size_t>(i)] = std::atan(mu[i]);
    const double threshold = theta_hat - (n - p) * kHalfPi;

    ArgumentPairingResult out;
    out.margin = std::numeric_limits<double>::infinity();
    // Subsets as bitmasks with popcount p, visited in increasing numeric order.
    const unsigned limit = 1u << n;
    for (unsigned mask = 0; mask < limit; ++mask) {
        if (std::popcount(mask) != p) continue;
        double arg = 0.0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) arg += angle[static_cast<std::size_t>(i)];
        }
        const double m = arg - threshold;
        if (m < out.margin) {
            out.margin = m;
            out.worst_subset.clear();
            for (int i = 0; i < n; ++i) {
                if (mask & (1u << i)) out.worst_subset.push_back(i);
            }
        }
    }
    out.passes = out.margin > kClassTol;
    return out;
}

FieldSubsolutionVerdict subsolution_field_test(std::span<const Spectrum> mu_field,
                                               std::span<const double> h_field,
                                               const TorusGrid* grid) {
    if (mu_field.size() != h_field.size()) {
        throw InputError("subsolution_field_test: spectrum and phase fields differ in size");
    }
    if (mu_field.empty()) throw InputError("subsolution_field_test: empty field");
    if (grid && grid->size() != mu_field.size()) {
        throw InputError("subsolution_field_test: field size does not match the grid");
    }
    std::vector<SubsolutionVerdict> local(mu_field.size());
    parallel_for(mu_field.size(), [&](std::size_t i) {
        local[i] = c_subsolution_test(mu_field[i], h_field[i]);
    });
    FieldSubsolutionVerdict out;
    out.slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < local.size(); ++i) {
        if (local[i].slack < out.slack) {
            out.slack = local[i].slack;
            out.worst_point = i;
            out.worst_index = local[i].worst_index;
        }
    }
    out.is_subsolution = out.slack > kClassTol;
    if (grid) out.worst_coordinates = grid->coordinates(out.worst_point);
    return out;
}

}  // namespace dhym
