#include "dhym/stability.hpp"

#include "dhym/errors.hpp"
#include "dhym/phase.hpp"
#include "dhym/tolerances.hpp"

#include <cmath>
#include <sstream>

namespace dhym {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binomial(int p, int k) { return factorial(p) / (factorial(k) * factorial(p - k)); }

// i^k for integer k >= 0, exact.
Complex i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void check_numbers(const std::vector<double>& v, int p, const std::string& what) {
    if (static_cast<int>(v.size()) != p + 1) {
        std::ostringstream msg;
        msg << what << ": expected " << p + 1 << " numbers for dimension " << p << ", got " << v.size();
        throw InputError(msg.str());
    }
    for (double x : v) {
        if (!std::isfinite(x)) throw InputError(what + ": non-finite intersection number");
    }
}

}  // namespace

void ClassData::validate() const {
    if (n < 1) throw InputError("class data: n must be >= 1");
    check_numbers(m, n, "class data m");
    for (const auto& s : subvarieties) {
        if (s.dim < 0 || s.dim >= n) {
            std::ostringstream msg;
            msg << "subvariety '" << s.label << "': dim " << s.dim << " is not a proper dimension for n = " << n;
            throw InputError(msg.str());
        }
        check_numbers(s.v, s.dim, "subvariety '" + s.label + "'");
        if (!(s.v[0] > 0.0)) {
            throw InputError("subvariety '" + s.label + "': v_0 = int alpha^p must be positive");
        }
    }
}

std::vector<std::string> ClassData::warnings() const {
    std::vector<std::string> out;
    if (std::abs(m.empty() ? 0.0 : m[0] - factorial(n)) > 1e-12 * factorial(n)) {
        std::ostringstream msg;
        msg << "m_0 = " << (m.empty() ? 0.0 : m[0]) << " differs from n! = " << factorial(n)
            << " (normalization not met; synthetic data)";
        out.push_back(msg.str());
    }
    if (subvarieties.empty()) {
        out.push_back("no subvarieties listed; the verdict is vacuous");
    } else {
        out.push_back("subvariety list is user-supplied and not known to be exhaustive");
    }
    return out;
}

ClassData ClassData::negated() const {
    ClassData out = *this;
    for (std::size_t k = 1; k < out.m.size(); k += 2) out.m[k] = -out.m[k];
    for (auto& s : out.subvarieties) {
        for (std::size_t k = 1; k < s.v.size(); k += 2) s.v[k] = -s.v[k];
    }
    return out;
}

ClassData constant_torus_class(const Spectrum& lambda, const std::vector<std::vector<int>>& subtori) {
    ClassData data;
    data.n = lambda.size();
    const auto e = elementary_symmetric(lambda.span());
    for (int k = 0; k <= data.n; ++k) data.m.push_back(factorial(k) * factorial(data.n - k) * e[k]);
    for (const auto& J : subtori) {
        SubvarietyData s;
        std::ostringstream label;
        label << "T";
        std::vector<double> sub;
        for (int j : J) {
            if (j < 0 || j >= data.n) throw InputError("constant_torus_class: subtorus index out of range");
            sub.push_back(lambda[j]);
            label << j + 1;
        }
        s.label = label.str();
        s.dim = static_cast<int>(J.size());
        const auto es = elementary_symmetric(sub);
        for (int k = 0; k <= s.dim; ++k) s.v.push_back(factorial(k) * factorial(s.dim - k) * es[k]);
        data.subvarieties.push_back(std::move(s));
    }
    return data;
}

Complex z_ambient(const ClassData& data) {
    check_numbers(data.m, data.n, "z_ambient");
    Complex z{0.0, 0.0};
    for (int k = 0; k <= data.n; ++k) z += binomial(data.n, k) * i_power(k) * data.m[k];
    return z / factorial(data.n);
}

Complex z_subvariety(const SubvarietyData& sub) {
    check_numbers(sub.v, sub.dim, "z_subvariety");
    Complex z{0.0, 0.0};
    for (int k = 0; k <= sub.dim; ++k) z += binomial(sub.dim, k) * i_power(k) * sub.v[k];
    return z;
}

Complex central_charge(const std::vector<double>& numbers, int p) {
    check_numbers(numbers, p, "central_charge");
    Complex z{0.0, 0.0};
    // (-i)^{p-k} = i^{3(p-k)}
    for (int k = 0; k <= p; ++k) z += binomial(p, k) * i_power(3 * (p - k)) * numbers[k];
    return -z / factorial(p);
}

Angle theta_angle(Complex z) {
    if (z == Complex{0.0, 0.0}) throw InputError("theta_angle: zero charge, angle undefined");
    Angle a;
    a.value = std::arg(z);
    if (a.value == -kPi) a.value = kPi;
    a.near_branch = std::abs(a.value) > kPi - 0.01;
    return a;
}

StabilityReport stability_check(const ClassData& data) {
    data.validate();
    StabilityReport r;
    r.warnings = data.warnings();
    r.z_x = z_ambient(data);
    r.theta_x = theta_angle(r.z_x);
    r.central_charge_x = central_charge(data.m, data.n);
    const double arg_x = theta_angle(r.central_charge_x).value;
    for (const auto& s : data.subvarieties) {
        SubvarietyVerdict v;
        v.label = s.label;
        v.dim = s.dim;
        v.theta_v = theta_angle(z_subvariety(s));
        v.margin = v.theta_v.value - r.theta_x.value + (data.n - s.dim) * kHalfPi;
        v.stable = v.margin > kClassTol;
        v.central_charge_v = central_charge(s.v, s.dim);
        v.central_arg_v = theta_angle(v.central_charge_v).value;
        v.central_arg_x = arg_x;
        v.central_charge_stable = v.central_arg_v > arg_x + kClassTol;
        r.all_stable = r.all_stable && v.stable;
        r.verdicts.push_back(std::move(v));
    }
    return r;
}

SurfaceCriterionReport surface_criterion(const ClassData& input) {
    if (input.n != 2) throw InputError("surface_criterion: requires n = 2");
    input.validate();
    SurfaceCriterionReport r;
    r.caveat =
        "conclusive only if the listed curves include every irreducible curve on the surface";
    const double theta0 = theta_angle(z_ambient(input)).value;
    if (kPi - std::abs(theta0) <= kClassTol) {
        throw InputError("surface_criterion: Theta_X = pi, the normalization is undefined");
    }
    if (std::abs(theta0) <= kClassTol) {
        r.exists = true;
        r.vacuous = true;
        r.theta_x = 0.0;
        return r;
    }
    const ClassData data = theta0 < 0.0 ? input.negated() : input;
    r.flipped = theta0 < 0.0;
    r.theta_x = std::abs(theta0);
    r.cot_theta = 1.0 / std::tan(r.theta_x);
    const double c = r.cot_theta;
    r.kappa_square = c * c * data.m[0] + 2.0 * c * data.m[1] + data.m[2];
    r.kappa_square_positive = r.kappa_square > kClassTol;
    r.kappa_square_at_least_one = r.kappa_square >= 1.0 - kClassTol;
    r.exists = r.kappa_square_positive;
    for (const auto& s : data.subvarieties) {
        if (s.dim != 1) continue;
        CurveTest t;
        t.label = s.label;
        t.integral = c * s.v[0] + s.v[1];
        t.positive = t.integral > kClassTol;
        r.exists = r.exists && t.positive;
        r.curves.push_back(std::move(t));
    }
    return r;
}

PhaseIdentityReport dim2_phase_identity(const ClassData& data) {
    if (data.n != 2) throw InputError("dim2_phase_identity: requires n = 2");
    const Complex z = z_ambient(data);
    PhaseIdentityReport r;
    r.theta_x = theta_angle(z).value;
    if (!(r.theta_x > 0.0 && r.theta_x < kPi)) {
        std::ostringstream msg;
        msg << "dim2_phase_identity: Theta_X = " << r.theta_x << " is outside (0, pi)";
        throw InputError(msg.str());
    }
    const double c = 1.0 / std::tan(r.theta_x);
    r.definitional_residual = z.real() - c * z.imag();
    r.printed_residual = 1.0 - data.m[2] - 2.0 * c * data.m[1];
    return r;
}

}  // namespace dhym
