#include "dhym/torus.hpp"

#include "dhym/errors.hpp"
#include "dhym/parallel.hpp"
#include "dhym/tolerances.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dhym {

PotentialField::PotentialField(TorusGrid grid, ScalarField values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
        throw InputError("PotentialField: value count does not match the grid");
    }
    if (!values_.allFinite()) throw InputError("PotentialField: non-finite value");
    values_.array() -= values_.mean();
}

PotentialField PotentialField::zero(const TorusGrid& grid) {
    return PotentialField(grid, ScalarField::Zero(static_cast<Eigen::Index>(grid.size())));
}

MatrixField::MatrixField(const TorusGrid& grid)
    : grid_(grid), data_(grid.size() * static_cast<std::size_t>(grid.dim() * grid.dim()), 0.0) {}

Eigen::Map<RealMatrix> MatrixField::at(std::size_t i) {
    const int n = dim();
    return {data_.data() + i * static_cast<std::size_t>(n * n), n, n};
}

Eigen::Map<const RealMatrix> MatrixField::at(std::size_t i) const {
    const int n = dim();
    return {data_.data() + i * static_cast<std::size_t>(n * n), n, n};
}

TorusProblem::TorusProblem(int n, int points_per_axis, HermitianForm alpha_in, RealMatrix B_in)
    : grid(n, points_per_axis), alpha(std::move(alpha_in)), B(std::move(B_in)), frame(alpha) {
    if (alpha.dim() != n) throw InputError("TorusProblem: alpha dimension does not match n");
    if (B.rows() != n || B.cols() != n) throw InputError("TorusProblem: B must be n x n");
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > kHermTol * std::max(1.0, B.cwiseAbs().maxCoeff())) {
        throw InputError("TorusProblem: B must be symmetric");
    }
    if (points_per_axis < 8 || points_per_axis % 2 != 0) {
        throw InputError("TorusProblem: N must be even and at least 8");
    }
}

TorusProblem::TorusProblem(int n, int points_per_axis, RealMatrix B_in)
    : TorusProblem(n, points_per_axis, HermitianForm::identity(n), std::move(B_in)) {}

namespace {

double second_difference(const TorusGrid& g, const ScalarField& u, std::size_t i, int j, int k,
                         double inv_h2) {
    if (j == k) {
        return (u[static_cast<Eigen::Index>(g.step(i, j, +1))] - 2.0 * u[static_cast<Eigen::Index>(i)] +
                u[static_cast<Eigen::Index>(g.step(i, j, -1))]) *
               inv_h2;
    }
    const std::size_t p = g.step(i, j, +1);
    const std::size_t m = g.step(i, j, -1);
    const double pp = u[static_cast<Eigen::Index>(g.step(p, k, +1))];
    const double pm = u[static_cast<Eigen::Index>(g.step(p, k, -1))];
    const double mp = u[static_cast<Eigen::Index>(g.step(m, k, +1))];
    const double mm = u[static_cast<Eigen::Index>(g.step(m, k, -1))];
    return (pp - pm - mp + mm) * 0.25 * inv_h2;
}

void require_field(const TorusGrid& grid, const ScalarField& f, const char* what) {
    if (static_cast<std::size_t>(f.size()) != grid.size()) {
        std::ostringstream msg;
        msg << what << ": field has " << f.size() << " values, grid has " << grid.size();
        throw InputError(msg.str());
    }
}

ComplexMatrix form_at(const TorusProblem& prob, const RealMatrix& hess) {
    return (prob.B + 0.25 * hess).cast<Complex>();
}

}  // namespace

MatrixField discrete_hessian(const TorusGrid& grid, const ScalarField& u) {
    require_field(grid, u, "discrete_hessian");
    MatrixField out(grid);
    const int n = grid.dim();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto m = out.at(i);
        for (int j = 0; j < n; ++j) {
            for (int k = j; k < n; ++k) {
                const double v = second_difference(grid, u, i, j, k, inv_h2);
                m(j, k) = v;
                m(k, j) = v;
            }
        }
    });
    return out;
}

MatrixField form_field(const ScalarField& u, const TorusProblem& prob) {
    MatrixField out = discrete_hessian(prob.grid, u);
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto m = out.at(i);
        m = prob.B + 0.25 * m;
    }
    return out;
}

PhaseEvaluation evaluate_phase(const ScalarField& u, const TorusProblem& prob) {
    const MatrixField hess = discrete_hessian(prob.grid, u);
    PhaseEvaluation out;
    const std::size_t size = prob.grid.size();
    out.theta.resize(static_cast<Eigen::Index>(size));
    out.spectra.resize(size);
    parallel_for(size, [&](std::size_t i) {
        out.spectra[i] = prob.frame.eigenvalues(form_at(prob, hess.at(i)));
        out.theta[static_cast<Eigen::Index>(i)] = theta(out.spectra[i]);
    });
    out.min_supercritical_slack = out.theta.minCoeff() - supercritical_floor(prob.dim());
    return out;
}

ScalarField theta_field(const ScalarField& u, const TorusProblem& prob) {
    return evaluate_phase(u, prob).theta;
}

LinearizedOperator::LinearizedOperator(const ScalarField& u, const TorusProblem& prob)
    : prob_(&prob), coeff_(prob.grid) {
    const MatrixField hess = discrete_hessian(prob.grid, u);
    const std::size_t size = prob.grid.size();
    phase_.theta.resize(static_cast<Eigen::Index>(size));
    phase_.spectra.resize(size);
    parallel_for(size, [&](std::size_t i) {
        auto lin = prob.frame.linearize(form_at(prob, hess.at(i)));
        coeff_.at(i) = 0.25 * lin.eta_inverse_real;
        phase_.theta[static_cast<Eigen::Index>(i)] = theta(lin.lambda);
        phase_.spectra[i] = std::move(lin.lambda);
    });
    phase_.min_supercritical_slack = phase_.theta.minCoeff() - supercritical_floor(prob.dim());
}

void LinearizedOperator::apply(const ScalarField& w, ScalarField& out) const {
    const TorusGrid& grid = prob_->grid;
    require_field(grid, w, "linearized_apply");
    const int n = grid.dim();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    out.resize(w.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const auto a = coeff_.at(i);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            acc += a(j, j) * second_difference(grid, w, i, j, j, inv_h2);
            for (int k = j + 1; k < n; ++k) {
                acc += 2.0 * a(j, k) * second_difference(grid, w, i, j, k, inv_h2);
            }
        }
        out[static_cast<Eigen::Index>(i)] = acc;
    });
}

ScalarField LinearizedOperator::apply(const ScalarField& w) const {
    ScalarField out;
    apply(w, out);
    return out;
}

RealMatrix LinearizedOperator::mean_coefficients() const {
    const int n = coeff_.dim();
    RealMatrix acc = RealMatrix::Zero(n, n);
    for (std::size_t i = 0; i < coeff_.size(); ++i) acc += coeff_.at(i);
    return acc / static_cast<double>(coeff_.size());
}

ScalarField linearized_apply(const ScalarField& u, const ScalarField& w, const TorusProblem& prob) {
    require_field(prob.grid, u, "linearized_apply");
    return LinearizedOperator(u, prob).apply(w);
}

struct SpectralPreconditioner::Plans {
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (buffer) fftw_free(buffer);
    }
};

double SpectralPreconditioner::symbol(const TorusGrid& grid, const RealMatrix& a,
                                      const std::array<int, 3>& k) {
    const int n = grid.dim();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double tj = 2.0 * kPi * k[static_cast<std::size_t>(j)] / grid.points_per_axis();
        s += a(j, j) * (2.0 * std::cos(tj) - 2.0) * inv_h2;
        for (int l = j + 1; l < n; ++l) {
            const double tl = 2.0 * kPi * k[static_cast<std::size_t>(l)] / grid.points_per_axis();
            s -= 2.0 * a(j, l) * std::sin(tj) * std::sin(tl) * inv_h2;
        }
    }
    return s;
}

SpectralPreconditioner::SpectralPreconditioner(const TorusGrid& grid, const RealMatrix& coefficients)
    : grid_(grid), inverse_symbol_(grid.size(), 0.0), plans_(std::make_unique<Plans>()) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double s = symbol(grid, coefficients, grid.multi_index(i));
        inverse_symbol_[i] = s != 0.0 ? 1.0 / s : 0.0;
    }
    std::array<int, TorusGrid::kMaxDim> dims{};
    for (int j = 0; j < grid.dim(); ++j) dims[static_cast<std::size_t>(j)] = grid.points_per_axis();
    plans_->buffer = fftw_alloc_complex(grid.size());
    plans_->forward = fftw_plan_dft(grid.dim(), dims.data(), plans_->buffer, plans_->buffer,
                                    FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft(grid.dim(), dims.data(), plans_->buffer, plans_->buffer,
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralPreconditioner::~SpectralPreconditioner() = default;

void SpectralPreconditioner::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    const std::size_t size = grid_.size();
    const auto m = static_cast<Eigen::Index>(size);
    out.resize(m + 1);
    const double mean_r = in.head(m).mean();
    fftw_complex* buf = plans_->buffer;
    for (std::size_t i = 0; i < size; ++i) {
        buf[i][0] = in[static_cast<Eigen::Index>(i)];
        buf[i][1] = 0.0;
    }
    fftw_execute(plans_->forward);
    for (std::size_t i = 1; i < size; ++i) {
        buf[i][0] *= inverse_symbol_[i];
        buf[i][1] *= inverse_symbol_[i];
    }
    buf[0][0] = in[m] * static_cast<double>(size);
    buf[0][1] = 0.0;
    fftw_execute(plans_->backward);
    const double scale = 1.0 / static_cast<double>(size);
    for (std::size_t i = 0; i < size; ++i) out[static_cast<Eigen::Index>(i)] = buf[i][0] * scale;
    out[m] = -mean_r;
}

double grid_l2(const ScalarField& v) {
    return v.size() == 0 ? 0.0 : std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

namespace {

void require_solver_inputs(const PotentialField& u0, const ScalarField& h, const TorusProblem& prob,
                           const char* what) {
    if (!(u0.grid() == prob.grid)) throw InputError(std::string(what) + ": initial potential grid mismatch");
    require_field(prob.grid, h, what);
    if (!h.allFinite()) throw InputError(std::string(what) + ": non-finite target phase");
}

std::string describe_supercritical_loss(double slack) {
    std::ostringstream msg;
    msg << "initial iterate is not supercritical (min Theta - (n-2)pi/2 = " << slack << ")";
    return msg.str();
}

}  // namespace

SolveResult newton_solve(const PotentialField& u0, const ScalarField& h, const TorusProblem& prob,
                         const SolverOptions& options, double c0) {
    require_solver_inputs(u0, h, prob, "newton_solve");
    const auto size = static_cast<Eigen::Index>(prob.grid.size());

    SolveResult result;
    SolveReport& report = result.report;
    ScalarField u = u0.values();
    double c = c0;

    auto linear = std::make_unique<LinearizedOperator>(u, prob);
    ScalarField residual = linear->phase().theta - h;
    residual.array() -= c;
    double slack = linear->phase().min_supercritical_slack;
    double res_l2 = grid_l2(residual);
    double res_max = residual.cwiseAbs().maxCoeff();

    auto record = [&](int it, double step, int kry) {
        report.history.push_back({it, res_max, res_l2, c, step, 0.0, kry, slack});
    };
    auto finish = [&](bool ok, std::string why) {
        report.converged = ok;
        report.failure = std::move(why);
        report.residual_max = res_max;
        report.residual_l2 = res_l2;
        report.c = c;
        report.min_supercritical_slack = slack;
        result.u = PotentialField(prob.grid, u);
        result.c = c;
    };

    record(0, 0.0, 0);
    if (!(slack > 0.0)) {
        finish(false, describe_supercritical_loss(slack));
        return result;
    }

    GmresOptions gopt{options.krylov_tol, options.krylov_max_iter, options.krylov_restart};
    for (int it = 1;; ++it) {
        if (res_max <= options.tol_nl) {
            finish(true, {});
            return result;
        }
        if (it > options.max_newton_iter) {
            std::ostringstream msg;
            msg << "Newton did not converge in " << options.max_newton_iter << " iterations";
            finish(false, msg.str());
            return result;
        }
        report.iterations = it;

        SpectralPreconditioner precond(prob.grid, linear->mean_coefficients());
        const LinearizedOperator& op = *linear;
        ScalarField scratch(size);
        LinearMap apply_a = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            y.resize(size + 1);
            op.apply(x.head(size), scratch);
            y.head(size) = scratch.array() - x[size];
            y[size] = x.head(size).mean();
        };
        LinearMap apply_m = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { precond.apply(x, y); };
        Eigen::VectorXd rhs(size + 1);
        rhs.head(size) = -residual;
        rhs[size] = 0.0;
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(size + 1);
        const GmresResult kr = gmres(apply_a, apply_m, rhs, delta, gopt);
        report.krylov_iterations += kr.iterations;
        if (!kr.converged) {
            std::ostringstream msg;
            msg << "Krylov solve did not converge (" << kr.iterations
                << " iterations, relative residual " << kr.relative_residual << ")";
            finish(false, msg.str());
            return result;
        }

        double step = 1.0;
        int halvings = 0;
        for (;;) {
            ScalarField trial_u = u + step * delta.head(size);
            const double trial_c = c + step * delta[size];
            auto trial_op = std::make_unique<LinearizedOperator>(trial_u, prob);
            ScalarField trial_res = trial_op->phase().theta - h;
            trial_res.array() -= trial_c;
            const double trial_l2 = grid_l2(trial_res);
            const double trial_slack = trial_op->phase().min_supercritical_slack;
            const bool decrease = trial_l2 <= (1.0 - options.armijo * step) * res_l2;
            const bool keeps_cone = trial_slack >= options.slack_guard * slack;
            if (decrease && keeps_cone) {
                u = std::move(trial_u);
                c = trial_c;
                linear = std::move(trial_op);
                residual = std::move(trial_res);
                res_l2 = trial_l2;
                res_max = residual.cwiseAbs().maxCoeff();
                slack = trial_slack;
                break;
            }
            if (++halvings > options.max_halvings) {
                std::ostringstream msg;
                msg << "line search stagnated after " << options.max_halvings << " halvings";
                if (!keeps_cone) msg << " (loss of supercriticality)";
                finish(false, msg.str());
                return result;
            }
            step *= 0.5;
        }
        record(it, step, kr.iterations);
    }
}

SolveResult flow_solve(const PotentialField& u0, const ScalarField& h, const TorusProblem& prob,
                       double t_end, const SolverOptions& options) {
    require_solver_inputs(u0, h, prob, "flow_solve");
    if (!(t_end > 0.0)) throw InputError("flow_solve: t_end must be positive");

    SolveResult result;
    SolveReport& report = result.report;
    ScalarField u = u0.values();

    PhaseEvaluation phase = evaluate_phase(u, prob);
    ScalarField drift = phase.theta - h;
    double c = drift.mean();
    ScalarField residual = drift.array() - c;
    double res_l2 = grid_l2(residual);
    double res_max = residual.cwiseAbs().maxCoeff();
    double slack = phase.min_supercritical_slack;
    double t = 0.0;

    double dt = options.flow_dt_initial;
    if (!(dt > 0.0)) {
        // 1 / (bound on the spectral radius of the frozen linearization).
        const LinearizedOperator op(u, prob);
        const int n = prob.dim();
        double rho = 0.0;
        for (std::size_t i = 0; i < prob.grid.size(); ++i) {
            const auto a = op.coefficients().at(i);
            double r = 4.0 * a.trace();
            for (int j = 0; j < n; ++j) {
                for (int k = j + 1; k < n; ++k) r += 2.0 * std::abs(a(j, k));
            }
            rho = std::max(rho, r);
        }
        const double h2 = prob.grid.spacing() * prob.grid.spacing();
        dt = rho > 0.0 ? h2 / rho : h2;
    }

    auto record = [&](int it, double step) {
        report.history.push_back({it, res_max, res_l2, c, step, t, 0, slack});
    };
    auto finish = [&](bool ok, std::string why) {
        report.converged = ok;
        report.failure = std::move(why);
        report.residual_max = res_max;
        report.residual_l2 = res_l2;
        report.c = c;
        report.min_supercritical_slack = slack;
        report.final_time = t;
        result.u = PotentialField(prob.grid, u);
        result.c = c;
    };

    record(0, 0.0);
    if (!(slack > 0.0)) {
        finish(false, describe_supercritical_loss(slack));
        return result;
    }

    long steps = 0;
    while (true) {
        if (res_max <= options.tol_nl) {
            if (report.history.back().iteration != steps) record(static_cast<int>(steps), dt);
            finish(true, {});
            return result;
        }
        if (t >= t_end) {
            record(static_cast<int>(steps), dt);
            finish(false, "reached t_end before the residual tolerance");
            return result;
        }
        if (steps >= options.flow_max_steps) {
            record(static_cast<int>(steps), dt);
            finish(false, "exceeded the maximum number of flow steps");
            return result;
        }
        const double step = std::min(dt, t_end - t);
        ScalarField trial_u = u + step * residual;
        trial_u.array() -= trial_u.mean();
        PhaseEvaluation trial = evaluate_phase(trial_u, prob);
        ScalarField trial_drift = trial.theta - h;
        const double trial_c = trial_drift.mean();
        ScalarField trial_res = trial_drift.array() - trial_c;
        const double trial_l2 = grid_l2(trial_res);
        if (trial.min_supercritical_slack > 0.0 && trial_l2 <= res_l2 * (1.0 + 1e-12)) {
            u = std::move(trial_u);
            residual = std::move(trial_res);
            c = trial_c;
            res_l2 = trial_l2;
            res_max = residual.cwiseAbs().maxCoeff();
            slack = trial.min_supercritical_slack;
            t += step;
            ++steps;
            report.iterations = static_cast<int>(std::min<long>(steps, std::numeric_limits<int>::max()));
            if (steps % 100 == 0) record(static_cast<int>(steps), step);
            dt = step * options.flow_dt_growth;
        } else {
            dt = 0.5 * step;
            if (dt < options.flow_dt_min) {
                record(static_cast<int>(steps), dt);
                finish(false, "time step underflow");
                return result;
            }
        }
    }
}

}  // namespace dhym
