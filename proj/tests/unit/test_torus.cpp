#include "dhym/errors.hpp"
#include "dhym/sampling.hpp"
#include "dhym/tolerances.hpp"
#include "dhym/torus.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace dhym;
using doctest::Approx;

namespace {

ScalarField sample(const TorusGrid& g, const std::function<double(const std::array<double, 3>&)>& f) {
    ScalarField v(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(g.coordinates(i));
    return v;
}

double c2(double x) { return std::cos(2.0 * kPi * x); }

}  // namespace

TEST_CASE("grid indexing is row-major with periodic wrap") {
    const TorusGrid g(2, 8);
    CHECK(g.size() == 64);
    CHECK(g.linear_index({1, 2, 0}) == 10);
    CHECK(g.multi_index(10)[0] == 1);
    CHECK(g.multi_index(10)[1] == 2);
    CHECK(g.step(g.linear_index({7, 0, 0}), 0, +1) == g.linear_index({0, 0, 0}));
    CHECK(g.step(g.linear_index({0, 0, 0}), 1, -1) == g.linear_index({0, 7, 0}));
    CHECK(g.coordinates(10)[1] == Approx(0.25));
    CHECK_THROWS_AS(TorusGrid(4, 8), InputError);
}

TEST_CASE("discrete hessian of zero and of cos(2 pi x1)") {
    const TorusGrid g(1, 16);
    const MatrixField z = discrete_hessian(g, ScalarField::Zero(16));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(z.at(i)(0, 0) == 0.0);

    double err[2];
    int idx = 0;
    for (int N : {32, 64}) {
        const TorusGrid gn(1, N);
        const ScalarField u = sample(gn, [](const auto& x) { return c2(x[0]); });
        const MatrixField h = discrete_hessian(gn, u);
        double e = 0.0;
        for (std::size_t i = 0; i < gn.size(); ++i) {
            const double exact = -4.0 * kPi * kPi * c2(gn.coordinates(i)[0]);
            e = std::max(e, std::abs(h.at(i)(0, 0) - exact));
        }
        err[idx++] = e;
    }
    CHECK(err[0] / err[1] == Approx(4.0).epsilon(0.01));
}

TEST_CASE("mixed stencil reproduces the cross derivative to second order") {
    double err[2];
    int idx = 0;
    for (int N : {32, 64}) {
        const TorusGrid g(2, N);
        const ScalarField u = sample(g, [](const auto& x) { return c2(x[0]) * c2(x[1]); });
        const MatrixField h = discrete_hessian(g, u);
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto x = g.coordinates(i);
            const double exact = 4.0 * kPi * kPi * std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]);
            e = std::max(e, std::abs(h.at(i)(0, 1) - exact));
            CHECK(h.at(i)(0, 1) == h.at(i)(1, 0));
        }
        err[idx++] = e;
    }
    CHECK(err[0] / err[1] == Approx(4.0).epsilon(0.02));
}

TEST_CASE("theta field of constant backgrounds") {
    const TorusProblem p(2, 8, RealMatrix::Identity(2, 2));
    const ScalarField t = theta_field(ScalarField::Zero(64), p);
    CHECK((t.array() - kHalfPi).abs().maxCoeff() <= 1e-15);

    // eigenvalues (3, 1/3) in a rotated frame
    Eigen::Matrix2d r;
    r << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
    const RealMatrix B = r * Eigen::Vector2d(3.0, 1.0 / 3.0).asDiagonal() * r.transpose();
    const TorusProblem q(2, 8, B);
    const ScalarField s = theta_field(ScalarField::Zero(64), q);
    CHECK((s.array() - kHalfPi).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(TorusProblem(1, 6, RealMatrix::Identity(1, 1)), InputError);
    CHECK_THROWS_AS(TorusProblem(1, 9, RealMatrix::Identity(1, 1)), InputError);
    RealMatrix bad(2, 2);
    bad << 1, 2, 0, 1;
    CHECK_THROWS_AS(TorusProblem(2, 8, bad), InputError);
    CHECK_THROWS_AS(TorusProblem(2, 8, HermitianForm::diagonal({1.0, -1.0}), RealMatrix::Identity(2, 2)), InputError);
}

TEST_CASE("linearized operator: quarter Laplacian at omega = 0, constants in the kernel") {
    const TorusProblem p(2, 16, RealMatrix::Zero(2, 2));
    const ScalarField zero = ScalarField::Zero(256);
    const ScalarField w = sample(p.grid, [](const auto& x) { return c2(x[0]) + std::sin(2 * kPi * x[1]); });
    const ScalarField lw = linearized_apply(zero, w, p);
    const MatrixField h = discrete_hessian(p.grid, w);
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        CHECK(lw[static_cast<Eigen::Index>(i)] == Approx(0.25 * h.at(i).trace()).epsilon(1e-12));
    }
    const ScalarField one = ScalarField::Constant(256, 3.0);
    CHECK(linearized_apply(w * 0.01, one, p).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("linearization matches central differences of theta") {
    const TorusProblem p(2, 32, RealMatrix::Identity(2, 2));
    const ScalarField u = sample(p.grid, [](const auto& x) { return 0.02 * c2(x[0] + 2 * x[1]); });
    const ScalarField w = sample(p.grid, [](const auto& x) { return 0.01 * std::sin(2 * kPi * x[0]) * c2(x[1]); });
    const ScalarField lin = linearized_apply(u, w, p);
    double prev = 0.0;
    for (double eps : {1e-3, 1e-4}) {
        const ScalarField fd = (theta_field(ScalarField(u + eps * w), p) - theta_field(ScalarField(u - eps * w), p)) / (2 * eps);
        const double err = (fd - lin).cwiseAbs().maxCoeff();
        if (prev > 0.0) CHECK(err < prev);
        CHECK(err < 1e-6);
        prev = err;
    }
}

TEST_CASE("spectral preconditioner inverts the constant-coefficient augmented system") {
    const TorusGrid g(2, 16);
    RealMatrix a(2, 2);
    a << 0.3, 0.05, 0.05, 0.2;
    SpectralPreconditioner pre(g, a);
    Rng rng(3);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd du(g.size());
    for (auto& v : du) v = gauss(rng);
    du.array() -= du.mean();
    const double dc = 0.7;
    // forward operator: sum a_jk D_jk du - dc
    const MatrixField h = discrete_hessian(g, du);
    Eigen::VectorXd in(g.size() + 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        in[static_cast<Eigen::Index>(i)] = (a.array() * h.at(i).array()).sum() - dc;
    }
    in[static_cast<Eigen::Index>(g.size())] = 0.0;
    Eigen::VectorXd out;
    pre.apply(in, out);
    CHECK((out.head(g.size()) - du).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(out[static_cast<Eigen::Index>(g.size())] == Approx(dc).epsilon(1e-10));
}

TEST_CASE("newton: exact initial guess converges immediately") {
    const TorusProblem p(1, 32, RealMatrix::Identity(1, 1));
    const ScalarField h = theta_field(ScalarField::Zero(32), p);
    const SolveResult r = newton_solve(PotentialField::zero(p.grid), h, p);
    CHECK(r.report.converged);
    CHECK(r.report.iterations <= 1);
    CHECK(r.u.values().cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(r.c) <= 1e-15);
}

TEST_CASE("newton: manufactured solution is recovered to solver precision") {
    const TorusProblem p(1, 64, RealMatrix::Identity(1, 1));
    const ScalarField ustar = sample(p.grid, [](const auto& x) { return 0.3 * c2(x[0]); });
    const ScalarField h = theta_field(ustar, p);
    const SolveResult r = newton_solve(PotentialField::zero(p.grid), h, p);
    REQUIRE(r.report.converged);
    CHECK(r.report.iterations <= 8);
    CHECK((r.u.values() - ustar).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(r.report.residual_max <= 1e-10);
    for (const auto& it : r.report.history) CHECK(it.min_supercritical_slack > 0.0);
}

TEST_CASE("newton: gauge and translation invariance") {
    const TorusProblem p(2, 16, RealMatrix::Identity(2, 2));
    const ScalarField ustar = sample(p.grid, [](const auto& x) { return 0.02 * c2(x[0]) + 0.01 * std::sin(2 * kPi * (x[0] - x[1])); });
    const ScalarField h = theta_field(ustar, p);
    const SolveResult a = newton_solve(PotentialField::zero(p.grid), h, p);
    const SolveResult b = newton_solve(PotentialField(p.grid, ScalarField::Constant(256, 5.0)), h, p);
    REQUIRE(a.report.converged);
    REQUIRE(b.report.converged);
    CHECK((a.u.values() - b.u.values()).cwiseAbs().maxCoeff() <= 1e-10);

    // shift h by (3, 5) lattice steps
    ScalarField hs(256), expect(256);
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const std::size_t j = p.grid.shifted(i, {3, 5, 0});
        hs[static_cast<Eigen::Index>(j)] = h[static_cast<Eigen::Index>(i)];
        expect[static_cast<Eigen::Index>(j)] = a.u.values()[static_cast<Eigen::Index>(i)];
    }
    const SolveResult s = newton_solve(PotentialField::zero(p.grid), hs, p);
    REQUIRE(s.report.converged);
    CHECK((s.u.values() - expect).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("newton reports failures instead of throwing") {
    const TorusProblem p(2, 8, RealMatrix::Identity(2, 2) * -1.0);
    const ScalarField h = ScalarField::Constant(64, 0.5);
    const SolveResult r = newton_solve(PotentialField::zero(p.grid), h, p);
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.failure.find("supercritical") != std::string::npos);
}

TEST_CASE("flow: fixed point and agreement with newton") {
    const TorusProblem p(1, 16, RealMatrix::Identity(1, 1));
    const ScalarField ustar = sample(p.grid, [](const auto& x) { return 0.3 * c2(x[0]); });
    const ScalarField h = theta_field(ustar, p);

    const SolveResult fixed = flow_solve(PotentialField(p.grid, ustar), h, p, 10.0);
    CHECK(fixed.report.converged);
    CHECK(fixed.report.iterations == 0);

    SolverOptions o;
    o.tol_nl = 1e-9;
    const SolveResult f = flow_solve(PotentialField::zero(p.grid), h, p, 1e4, o);
    REQUIRE(f.report.converged);
    CHECK((f.u.values() - ustar).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(std::abs(f.c) <= 1e-8);
    for (std::size_t k = 1; k < f.report.history.size(); ++k) {
        CHECK(f.report.history[k].residual_l2 <= f.report.history[k - 1].residual_l2 * (1.0 + 1e-12));
    }
}
