#include "dhym/krylov.hpp"

#include <cmath>
#include <vector>

namespace dhym {

GmresResult gmres(const LinearMap& apply_a, const LinearMap& apply_m, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, const GmresOptions& options) {
    GmresResult result;
    const Eigen::Index size = b.size();
    const double b_norm = b.norm();
    if (b_norm == 0.0) {
        x.setZero(size);
        result.converged = true;
        return result;
    }
    if (x.size() != size) x.setZero(size);

    const int m = options.restart;
    Eigen::MatrixXd basis(size, m + 1);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs(m), sn(m), g(m + 1);
    Eigen::VectorXd r(size), w(size), z(size);

    while (result.iterations < options.max_iterations) {
        apply_a(x, w);
        r = b - w;
        double beta = r.norm();
        result.relative_residual = beta / b_norm;
        if (result.relative_residual <= options.relative_tolerance) {
            result.converged = true;
            return result;
        }
        basis.col(0) = r / beta;
        g.setZero();
        g(0) = beta;
        hess.setZero();

        int k = 0;
        for (; k < m && result.iterations < options.max_iterations; ++k) {
            ++result.iterations;
            apply_m(basis.col(k), z);
            apply_a(z, w);
            // Modified Gram-Schmidt.
            for (int i = 0; i <= k; ++i) {
                hess(i, k) = w.dot(basis.col(i));
                w -= hess(i, k) * basis.col(i);
            }
            hess(k + 1, k) = w.norm();
            if (hess(k + 1, k) > 0.0) basis.col(k + 1) = w / hess(k + 1, k);

            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * hess(i, k) + sn(i) * hess(i + 1, k);
                hess(i + 1, k) = -sn(i) * hess(i, k) + cs(i) * hess(i + 1, k);
                hess(i, k) = t;
            }
            const double denom = std::hypot(hess(k, k), hess(k + 1, k));
            cs(k) = hess(k, k) / denom;
            sn(k) = hess(k + 1, k) / denom;
            hess(k, k) = denom;
            hess(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);

            if (std::abs(g(k + 1)) / b_norm <= options.relative_tolerance) {
                ++k;
                break;
            }
        }
        // Back substitution and update x += M V y.
        Eigen::VectorXd y = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        Eigen::VectorXd update = basis.leftCols(k) * y;
        apply_m(update, z);
        x += z;
    }
    apply_a(x, w);
    result.relative_residual = (b - w).norm() / b_norm;
    result.converged = result.relative_residual <= options.relative_tolerance;
    return result;
}

}  // namespace dhym
