#pragma once

#include <Eigen/Dense>

#include <functional>

namespace dhym {

using LinearMap = std::function<void(const Eigen::VectorXd& in, Eigen::VectorXd& out)>;

struct GmresOptions {
    double relative_tolerance = 1e-12;
    int max_iterations = 500;
    int restart = 80;
};

struct GmresResult {
    bool converged = false;
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Restarted GMRES with right preconditioning: solves A x = b with x = M y.
/// `x` holds the initial guess on entry.
GmresResult gmres(const LinearMap& apply_a, const LinearMap& apply_m, const Eigen::VectorXd& b,
                  Eigen::VectorXd& x, const GmresOptions& options);

}  // namespace dhym
