#pragma once

// Cohomological side: phase angles and central charges of a class [omega]
// computed from intersection numbers, the subvariety obstruction
//   Theta_V > Theta_X - (n - dim V) pi/2,
// and the surface existence criterion through the class cot(Theta_X) alpha + omega.

#include "dhym/hermitian.hpp"

#include <complex>
#include <string>
#include <vector>

namespace dhym {

struct SubvarietyData {
    std::string label;
    int dim = 0;
    std::vector<double> v;  // v_k = int_V alpha^{p-k} omega^k, k = 0..p
};

struct ClassData {
    int n = 0;
    std::vector<double> m;  // m_k = int_X alpha^{n-k} omega^k, k = 0..n
    std::vector<SubvarietyData> subvarieties;

    /// Structural checks (sizes, dims, finiteness). Throws InputError.
    void validate() const;
    /// Non-fatal remarks, e.g. m_0 != n!.
    std::vector<std::string> warnings() const;
    /// omega -> -omega: negates every odd-k number.
    ClassData negated() const;
};

/// Numbers of a constant form on a flat torus with int alpha^n = n!:
/// m_k = k!(n-k)! e_k(lambda). Each coordinate subtorus spanned by the
/// eigen-directions J contributes v_k = k!(p-k)! e_k(lambda_J); `subtori`
/// lists the index sets.
ClassData constant_torus_class(const Spectrum& lambda, const std::vector<std::vector<int>>& subtori = {});

/// int_X (alpha + i omega)^n / n!.
Complex z_ambient(const ClassData& data);
/// int_V (alpha + i omega)^p, no factorial.
Complex z_subvariety(const SubvarietyData& sub);

/// -(1/p!) sum_k C(p,k) (-i)^{p-k} v_k: the order-p term of -int e^{-i alpha + omega}.
Complex central_charge(const std::vector<double>& numbers, int p);

struct Angle {
    double value = 0.0;        // principal value in (-pi, pi]
    bool near_branch = false;  // |value| > pi - 0.01
};

/// Principal argument; throws InputError on a zero charge.
Angle theta_angle(Complex z);

struct SubvarietyVerdict {
    std::string label;
    int dim = 0;
    Angle theta_v;
    double margin = 0.0;  // Theta_V - Theta_X + (n - p) pi/2
    bool stable = false;  // margin > kClassTol
    Complex central_charge_v;
    double central_arg_v = 0.0;
    double central_arg_x = 0.0;
    bool central_charge_stable = false;  // Arg Z(V) > Arg Z(X)
};

struct StabilityReport {
    Complex z_x;
    Angle theta_x;
    Complex central_charge_x;
    std::vector<SubvarietyVerdict> verdicts;
    bool all_stable = true;
    std::vector<std::string> warnings;
};

StabilityReport stability_check(const ClassData& data);

struct CurveTest {
    std::string label;
    double integral = 0.0;  // cot(Theta_X) v_0 + v_1
    bool positive = false;
};

struct SurfaceCriterionReport {
    bool exists = false;
    bool vacuous = false;   // Theta_X = 0
    bool flipped = false;   // omega replaced by -omega
    double theta_x = 0.0;   // after the flip
    double cot_theta = 0.0;
    double kappa_square = 0.0;  // cot^2 m_0 + 2 cot m_1 + m_2
    bool kappa_square_positive = false;
    bool kappa_square_at_least_one = false;  // meaningful when m_0 = 2
    std::vector<CurveTest> curves;
    std::string caveat;
};

/// Requires n = 2. Theta_X = pi is rejected.
SurfaceCriterionReport surface_criterion(const ClassData& data);

struct PhaseIdentityReport {
    double theta_x = 0.0;
    double definitional_residual = 0.0;  // Re Z - cot(Theta_X) Im Z
    double printed_residual = 0.0;       // 1 - m_2 - 2 cot(Theta_X) m_1
};

/// Requires n = 2 and Theta_X in (0, pi).
PhaseIdentityReport dim2_phase_identity(const ClassData& data);

}  // namespace dhym
