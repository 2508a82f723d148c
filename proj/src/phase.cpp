#include "dhym/phase.hpp"

#include "dhym/errors.hpp"
#include "dhym/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dhym {

RelativeFrame::RelativeFrame(const HermitianForm& alpha)
    : n_(alpha.dim()), alpha_(alpha), real_(alpha.is_real()) {
    alpha.require_positive_definite("relative_eigenvalues");
    Eigen::LLT<ComplexMatrix> llt(alpha.matrix());
    if (llt.info() != Eigen::Success) {
        throw InputError("relative_eigenvalues: Cholesky factorization of alpha failed");
    }
    lower_ = llt.matrixL();
}

ComplexMatrix RelativeFrame::reduce(const ComplexMatrix& omega) const {
    if (omega.rows() != n_ || omega.cols() != n_) {
        throw InputError("relative_eigenvalues: dimension mismatch between alpha and omega");
    }
    // L^{-1} omega L^{-*}
    const auto lower = lower_.triangularView<Eigen::Lower>();
    ComplexMatrix x = lower.solve(omega);
    ComplexMatrix m = lower.solve(ComplexMatrix(x.adjoint()));
    return 0.5 * (m + m.adjoint());
}

namespace {

Spectrum descending(const Eigen::VectorXd& ascending) {
    std::vector<double> v(ascending.data(), ascending.data() + ascending.size());
    std::reverse(v.begin(), v.end());
    return Spectrum(std::move(v));
}

}  // namespace

Spectrum RelativeFrame::eigenvalues(const ComplexMatrix& omega) const {
    const ComplexMatrix m = reduce(omega);
    if (real_ && m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(m.real(), Eigen::EigenvaluesOnly);
        return descending(es.eigenvalues());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    return descending(es.eigenvalues());
}

RelativeFrame::Linearization RelativeFrame::linearize(const ComplexMatrix& omega) const {
    const ComplexMatrix m = reduce(omega);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const Eigen::VectorXd lam = es.eigenvalues();
    const Eigen::VectorXd weight = (1.0 + lam.array().square()).inverse().matrix();
    // eta^{-1} = L^{-*} Q diag(1/(1+lambda^2)) Q^* L^{-1}
    const ComplexMatrix inner = es.eigenvectors() * weight.asDiagonal() * es.eigenvectors().adjoint();
    const auto lower = lower_.triangularView<Eigen::Lower>();
    ComplexMatrix y = lower.adjoint().solve(inner);                      // L^{-*} inner
    ComplexMatrix eta_inv = lower.adjoint().solve(ComplexMatrix(y.adjoint())).adjoint();
    RealMatrix re = eta_inv.real();
    re = 0.5 * (re + re.transpose()).eval();
    return {descending(lam), std::move(re)};
}

Spectrum relative_eigenvalues(const HermitianForm& alpha, const HermitianForm& omega) {
    if (alpha.dim() != omega.dim()) {
        throw InputError("relative_eigenvalues: dimension mismatch between alpha and omega");
    }
    return RelativeFrame(alpha).eigenvalues(omega.matrix());
}

double theta(std::span<const double> lambda) {
    double s = 0.0;
    for (double l : lambda) s += std::atan(l);
    return s;
}

HermitianForm eta_metric(const HermitianForm& alpha, const HermitianForm& omega) {
    if (alpha.dim() != omega.dim()) {
        throw InputError("eta_metric: dimension mismatch between alpha and omega");
    }
    alpha.require_positive_definite("eta_metric");
    Eigen::LLT<ComplexMatrix> llt(alpha.matrix());
    const ComplexMatrix eta = alpha.matrix() + omega.matrix() * llt.solve(omega.matrix());
    return HermitianForm(ComplexMatrix(0.5 * (eta + eta.adjoint())));
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::inside: return "inside";
        case Region::boundary: return "boundary";
        case Region::outside: return "outside";
    }
    return "unknown";
}

Region classify(double slack, double tol) {
    if (std::abs(slack) <= tol) return Region::boundary;
    return slack > 0.0 ? Region::inside : Region::outside;
}

ConeMembership cone_membership(const Spectrum& lambda, const ConeLevel& level) {
    const int n = lambda.size();
    if (n == 0 || level.n != n) {
        throw InputError("cone_membership: level dimension does not match spectrum length");
    }
    ConeMembership out{};
    const double th = theta(lambda);
    out.slack = th - level.sigma;
    out.level_region = classify(out.slack, kClassTol);

    const double floor = supercritical_floor(n);
    const bool all_zero = std::all_of(lambda.values().begin(), lambda.values().end(),
                                      [](double v) { return v == 0.0; });
    if (all_zero) {
        out.cone_slack = 0.0;
        out.cone_region = Region::boundary;
        return out;
    }

    // Theta(s lambda) as s -> infinity tends to (pi/2)(#pos - #neg), with
    // first-order correction -(1/s) sum 1/lambda_i over nonzero entries.
    int signature = 0;
    double inverse_sum = 0.0;
    for (double v : lambda.values()) {
        if (v > 0.0) ++signature;
        if (v < 0.0) --signature;
        if (v != 0.0) inverse_sum += 1.0 / v;
    }
    const int floor_count = n - 2;
    const double direct = th - floor;
    if (signature > floor_count) {
        out.cone_slack = std::max(direct, (signature - floor_count) * kHalfPi);
        out.cone_region = Region::inside;
    } else if (signature < floor_count) {
        out.cone_slack = direct;
        out.cone_region = classify(direct, kClassTol);
    } else {
        // Limit equals the floor; decide by the direction of approach.
        out.cone_slack = direct;
        if (direct > kClassTol || inverse_sum < 0.0) {
            out.cone_slack = std::max(direct, 0.0);
            out.cone_region = direct > kClassTol ? Region::inside
                              : inverse_sum < 0.0 ? Region::inside
                                                  : Region::boundary;
        } else {
            out.cone_region = classify(direct, kClassTol);
            if (out.cone_region == Region::outside && inverse_sum == 0.0) {
                out.cone_region = Region::boundary;
            }
        }
    }
    return out;
}

double boundary_solve(std::span<const double> prefix, const ConeLevel& level) {
    const int n = static_cast<int>(prefix.size()) + 1;
    if (level.n != n) {
        throw InputError("boundary_solve: prefix must hold n-1 values");
    }
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        if (prefix[i] > prefix[i - 1]) throw InputError("boundary_solve: prefix not descending");
    }
    const double partial = theta(prefix);
    const double target = level.sigma - partial;  // required arctan(lambda_n)
    if (!(target > -kHalfPi && target < kHalfPi)) {
        std::ostringstream msg;
        msg << "boundary_solve: no root, required angle " << target << " outside (-pi/2, pi/2)";
        throw InputError(msg.str());
    }
    // tan(sigma - arg P) with P = prod(1 + i lambda_j), evaluated rationally so
    // large prefix values do not lose the root to arctan rounding.
    Complex prod(1.0, 0.0);
    for (double l : prefix) prod *= Complex(1.0, l);
    const double cs = std::cos(level.sigma), sn = std::sin(level.sigma);
    double x = (sn * prod.real() - cs * prod.imag()) / (cs * prod.real() + sn * prod.imag());
    if (!std::isfinite(x) || std::abs(std::atan(x) - target) > 1e-6) x = std::tan(target);
    for (int it = 0; it < 8; ++it) {
        const double g = partial + std::atan(x) - level.sigma;
        if (std::abs(g) <= kRootTol) break;
        x -= g * (1.0 + x * x);
    }
    if (!prefix.empty() && x > prefix.back() + 1e-12 * std::max(1.0, std::abs(prefix.back()))) {
        std::ostringstream msg;
        msg << "boundary_solve: root " << x << " exceeds the smallest prefix value "
            << prefix.back();
        throw InputError(msg.str());
    }
    return x;
}

std::vector<double> elementary_symmetric(std::span<const double> lambda) {
    std::vector<double> e(lambda.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t m = 0; m < lambda.size(); ++m) {
        for (std::size_t k = m + 1; k >= 1; --k) {
            e[k] += lambda[m] * e[k - 1];
        }
    }
    return e;
}

BoundaryReport boundary_report(const Spectrum& lambda, double sigma) {
    const int n = lambda.size();
    if (n < 2) throw InputError("boundary_report: needs n >= 2");
    if (std::abs(theta(lambda) - sigma) > kClassTol) {
        throw InputError("boundary_report: spectrum is not on the level set Theta = sigma");
    }
    if (sigma < supercritical_floor(n) - kClassTol) {
        throw InputError("boundary_report: sigma below the supercritical floor");
    }
    BoundaryReport r;
    r.n = n;
    r.sigma = sigma;
    const double ln1 = lambda[n - 2];
    const double ln = lambda[n - 1];
    r.positivity_slack = ln1;
    r.dominance_slack = ln1 - std::abs(ln);
    r.part_i = r.positivity_slack > -kPredicateTol && r.dominance_slack >= -kPredicateTol;
    r.trace_slack = lambda[0] + (n - 1) * ln;
    r.part_ii = r.trace_slack >= -kPredicateTol;
    const auto e = elementary_symmetric(lambda.span());
    r.symmetric.assign(e.begin() + 1, e.begin() + n);
    r.part_iii = std::all_of(r.symmetric.begin(), r.symmetric.end(),
                             [](double v) { return v >= -kPredicateTol; });
    return r;
}

double f0(const Spectrum& lambda, double sigma) {
    const int n = lambda.size();
    if (n == 0) throw InputError("f0: empty spectrum");
    if (!(sigma > -phase_ceiling(n) && sigma < phase_ceiling(n))) {
        throw InputError("f0: sigma outside (-n pi/2, n pi/2)");
    }
    const auto& v = lambda.values();
    auto g = [&](double t) {
        double s = 0.0;
        for (double l : v) s += std::atan(l - t);
        return s - sigma;
    };
    auto dg = [&](double t) {
        double s = 0.0;
        for (double l : v) s -= 1.0 / (1.0 + (l - t) * (l - t));
        return s;
    };
    // g is strictly decreasing in t.
    double lo = lambda.smallest() - 1.0;
    double hi = lambda.largest() + 1.0;
    for (double w = 1.0; g(lo) < 0.0; w *= 2.0) lo -= w;
    for (double w = 1.0; g(hi) > 0.0; w *= 2.0) hi += w;
    const double width = std::max(1.0, std::abs(lo) + std::abs(hi));
    while (hi - lo > 1e-6 * width) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) lo = mid; else hi = mid;
    }
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double gt = g(t);
        if (std::abs(gt) <= kRootTol) break;
        if (gt > 0.0) lo = t; else hi = t;
        double next = t - gt / dg(t);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == t) break;
        t = next;
    }
    return t;
}

}  // namespace dhym
