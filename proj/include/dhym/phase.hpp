#pragma once

// Pointwise algebra of the Lagrangian phase operator
//   Theta_alpha(omega) = sum_i arctan(lambda_i),
// where lambda_i are the eigenvalues of alpha^{-1} omega.

#include "dhym/hermitian.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace dhym {

/// Generalized eigenvalues of omega v = lambda alpha v, descending.
/// Reduces through the Cholesky factor of alpha.
Spectrum relative_eigenvalues(const HermitianForm& alpha, const HermitianForm& omega);

/// Sum of arctangents.
double theta(std::span<const double> lambda);
inline double theta(const Spectrum& lambda) { return theta(lambda.span()); }

/// eta = alpha + omega alpha^{-1} omega.
HermitianForm eta_metric(const HermitianForm& alpha, const HermitianForm& omega);

/// Cached Cholesky reduction for repeated evaluations against a fixed alpha.
class RelativeFrame {
public:
    explicit RelativeFrame(const HermitianForm& alpha);

    int dim() const { return n_; }
    const HermitianForm& alpha() const { return alpha_; }

    Spectrum eigenvalues(const ComplexMatrix& omega) const;

    /// Eigenvalues plus Re(eta^{-1}), the coefficient matrix of the
    /// linearization d Theta = tr(eta^{-1} d omega) for real symmetric d omega.
    struct Linearization {
        Spectrum lambda;
        RealMatrix eta_inverse_real;
    };
    Linearization linearize(const ComplexMatrix& omega) const;

private:
    ComplexMatrix reduce(const ComplexMatrix& omega) const;

    int n_;
    HermitianForm alpha_;
    ComplexMatrix lower_;  // alpha = L L^*
    bool real_;
};

enum class Region { inside, boundary, outside };
std::string_view to_string(Region r);

/// Classify a signed slack against the tolerance band.
Region classify(double slack, double tol);

struct ConeMembership {
    Region level_region;   // relative to Gamma^sigma
    double slack;          // Theta(lambda) - sigma
    Region cone_region;    // relative to the cone Gamma
    double cone_slack;     // max(Theta(lambda), Theta(infinity * lambda)) - (n-2)pi/2
};

/// Membership of lambda in Gamma^sigma and in Gamma.
ConeMembership cone_membership(const Spectrum& lambda, const ConeLevel& level);

/// The unique smallest eigenvalue completing a descending prefix of n-1 values
/// onto the level set Theta = sigma.
double boundary_solve(std::span<const double> prefix, const ConeLevel& level);

/// Elementary symmetric polynomials e_0..e_n.
std::vector<double> elementary_symmetric(std::span<const double> lambda);

struct BoundaryReport {
    int n = 0;
    double sigma = 0.0;
    // (i) lambda_{n-1} > 0 and lambda_{n-1} >= |lambda_n|
    double positivity_slack = 0.0;   // lambda_{n-1}
    double dominance_slack = 0.0;    // lambda_{n-1} - |lambda_n|
    bool part_i = false;
    // (ii) lambda_1 + (n-1) lambda_n >= 0
    double trace_slack = 0.0;
    bool part_ii = false;
    // (iii) e_k(lambda) >= 0, 1 <= k <= n-1
    std::vector<double> symmetric;   // e_1..e_{n-1}
    bool part_iii = false;

    bool all() const { return part_i && part_ii && part_iii; }
};

/// Arithmetic properties of a spectrum on a supercritical level set.
/// Requires |Theta - sigma| <= 1e-9 and sigma >= (n-2)pi/2.
BoundaryReport boundary_report(const Spectrum& lambda, double sigma);

/// The shift t solving Theta(lambda - t) = sigma. Positive iff Theta(lambda) > sigma.
double f0(const Spectrum& lambda, double sigma);

}  // namespace dhym
