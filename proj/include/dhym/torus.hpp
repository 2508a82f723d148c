#pragma once

// Specified phase equation Theta_alpha(B + i ddbar u) = h + c on a flat complex
// torus, under the reduction where potentials depend only on the real parts
// x_j of z_j. Then (i ddbar u)_{jk} = (1/4) d^2u/dx_j dx_k and the form becomes
// the real symmetric field omega(x) = B + Hess u(x) / 4 on the grid [0,1)^n.

#include "dhym/grid.hpp"
#include "dhym/hermitian.hpp"
#include "dhym/krylov.hpp"
#include "dhym/phase.hpp"

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <vector>

namespace dhym {

using ScalarField = Eigen::VectorXd;

/// Grid potential with the gauge fixed: construction subtracts the mean.
class PotentialField {
public:
    PotentialField() = default;
    PotentialField(TorusGrid grid, ScalarField values);
    static PotentialField zero(const TorusGrid& grid);

    const TorusGrid& grid() const { return grid_; }
    const ScalarField& values() const { return values_; }

private:
    TorusGrid grid_;
    ScalarField values_;
};

/// Field of real symmetric n x n matrices, stored contiguously per point.
class MatrixField {
public:
    MatrixField() = default;
    MatrixField(const TorusGrid& grid);

    const TorusGrid& grid() const { return grid_; }
    int dim() const { return grid_.dim(); }
    std::size_t size() const { return grid_.size(); }

    Eigen::Map<RealMatrix> at(std::size_t i);
    Eigen::Map<const RealMatrix> at(std::size_t i) const;

private:
    TorusGrid grid_;
    std::vector<double> data_;
};

struct TorusProblem {
    TorusProblem(int n, int points_per_axis, HermitianForm alpha, RealMatrix B);
    /// Identity alpha.
    TorusProblem(int n, int points_per_axis, RealMatrix B);

    TorusGrid grid;
    HermitianForm alpha;
    RealMatrix B;  // constant reduced background form
    RelativeFrame frame;

    int dim() const { return grid.dim(); }
};

/// Central second differences with periodic wrap; mixed entries use the
/// four-point cross stencil over 4h^2.
MatrixField discrete_hessian(const TorusGrid& grid, const ScalarField& u);

/// omega(x) = B + Hess u(x) / 4.
MatrixField form_field(const ScalarField& u, const TorusProblem& prob);

struct PhaseEvaluation {
    ScalarField theta;
    std::vector<Spectrum> spectra;
    double min_supercritical_slack = 0.0;  // min_x Theta - (n-2)pi/2
};

PhaseEvaluation evaluate_phase(const ScalarField& u, const TorusProblem& prob);
ScalarField theta_field(const ScalarField& u, const TorusProblem& prob);
inline ScalarField theta_field(const PotentialField& u, const TorusProblem& prob) {
    return theta_field(u.values(), prob);
}

/// Delta_eta with coefficients frozen at a potential:
/// (Delta_eta w)(x) = sum_{jk} Re(eta^{-1})_{jk}(x) (1/4) D_jk w(x).
class LinearizedOperator {
public:
    LinearizedOperator(const ScalarField& u, const TorusProblem& prob);

    ScalarField apply(const ScalarField& w) const;
    void apply(const ScalarField& w, ScalarField& out) const;

    /// Coefficients a_jk(x) = Re(eta^{-1})_{jk}(x) / 4.
    const MatrixField& coefficients() const { return coeff_; }
    /// Grid mean of the coefficients.
    RealMatrix mean_coefficients() const;

    const PhaseEvaluation& phase() const { return phase_; }

private:
    const TorusProblem* prob_;
    MatrixField coeff_;
    PhaseEvaluation phase_;
};

ScalarField linearized_apply(const ScalarField& u, const ScalarField& w, const TorusProblem& prob);

/// Exact inverse of the augmented constant-coefficient system
///   sum a_jk D_jk du - dc = r,  mean(du) = s
/// applied with FFTs on the periodic grid.
class SpectralPreconditioner {
public:
    SpectralPreconditioner(const TorusGrid& grid, const RealMatrix& coefficients);
    ~SpectralPreconditioner();
    SpectralPreconditioner(const SpectralPreconditioner&) = delete;
    SpectralPreconditioner& operator=(const SpectralPreconditioner&) = delete;

    /// in = [r; s], out = [du; dc].
    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;

    /// Fourier symbol of the constant-coefficient operator at a multi-index.
    static double symbol(const TorusGrid& grid, const RealMatrix& a, const std::array<int, 3>& k);

private:
    struct Plans;
    TorusGrid grid_;
    std::vector<double> inverse_symbol_;
    std::unique_ptr<Plans> plans_;
};

struct SolverOptions {
    double tol_nl = 1e-10;
    double krylov_tol = 1e-12;
    int krylov_max_iter = 500;
    int krylov_restart = 80;
    int max_newton_iter = 50;
    int max_halvings = 30;
    double armijo = 1e-4;
    double slack_guard = 0.5;  // trial min slack must stay above this fraction
    // Flow.
    double flow_dt_initial = 0.0;   // 0: estimate from the coefficients
    double flow_dt_min = 1e-12;
    double flow_dt_growth = 1.2;
    long flow_max_steps = 5'000'000;
};

struct IterationRecord {
    int iteration = 0;
    double residual_max = 0.0;
    double residual_l2 = 0.0;
    double c = 0.0;
    double step = 0.0;           // accepted Newton damping or flow dt
    double time = 0.0;           // flow time, 0 for Newton
    int krylov_iterations = 0;
    double min_supercritical_slack = 0.0;
};

struct SolveReport {
    bool converged = false;
    std::string failure;  // empty on success
    int iterations = 0;
    double residual_max = 0.0;
    double residual_l2 = 0.0;
    double c = 0.0;
    double min_supercritical_slack = 0.0;
    long krylov_iterations = 0;
    double final_time = 0.0;  // flow only
    std::vector<IterationRecord> history;
};

struct SolveResult {
    PotentialField u;
    double c = 0.0;
    SolveReport report;
};

/// Grid L2 norm: sqrt(mean(v^2)).
double grid_l2(const ScalarField& v);

/// Damped Newton on R(u, c) = Theta(u) - h - c with the augmented linear
/// system Delta_eta du - dc = -R, mean(du) = 0, solved by GMRES with the
/// spectral preconditioner. Failures are reported, never thrown.
SolveResult newton_solve(const PotentialField& u0, const ScalarField& h, const TorusProblem& prob,
                         const SolverOptions& options = {}, double c0 = 0.0);

/// Explicit flow du/dt = Theta(u) - h - c(t), c(t) = mean(Theta(u) - h), with
/// dt adapted so the L2 residual never increases.
SolveResult flow_solve(const PotentialField& u0, const ScalarField& h, const TorusProblem& prob,
                       double t_end, const SolverOptions& options = {});

}  // namespace dhym
