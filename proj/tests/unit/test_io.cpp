#include "dhym/config.hpp"
#include "dhym/errors.hpp"
#include "dhym/expression.hpp"
#include "dhym/report.hpp"
#include "dhym/tolerances.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace dhym;
using doctest::Approx;

TEST_CASE("expression parser") {
    CHECK(Expression::parse("1 + 2*3")({0, 0, 0}) == 7.0);
    CHECK(Expression::parse("-2^2")({0, 0, 0}) == -4.0);
    CHECK(Expression::parse("2^3^2")({0, 0, 0}) == 512.0);
    CHECK(Expression::parse("0.3*cos(2*pi*x1)")({0.5, 0, 0}) == Approx(-0.3));
    CHECK(Expression::parse("x + y*z")({1, 2, 3}) == 7.0);
    CHECK(Expression::parse("atan(x2) + sqrt(abs(-4))")({0, 1, 0}) == Approx(kPi / 4 + 2));
    CHECK(Expression::parse("1e-3*exp(0)")({0, 0, 0}) == Approx(1e-3));
    CHECK_THROWS_AS(Expression::parse("foo(1)"), InputError);
    CHECK_THROWS_AS(Expression::parse("1 +"), InputError);
    CHECK_THROWS_AS(Expression::parse("(1"), InputError);
    CHECK_THROWS_AS(Expression::parse("1 2"), InputError);
}

TEST_CASE("matrix literals") {
    CHECK((parse_form(std::string("I"), 3, "m").matrix() - ComplexMatrix::Identity(3, 3)).norm() == 0.0);
    const HermitianForm d = parse_form(std::string("diag:3,-1"), 0, "m");
    CHECK(d.dim() == 2);
    CHECK(d.matrix()(1, 1).real() == -1.0);
    const HermitianForm c = parse_form(json::parse(R"([[1, {"re": 0, "im": 1}], [{"re": 0, "im": -1}, 2]])"), 2, "m");
    CHECK(c.matrix()(0, 1) == Complex(0, 1));
    CHECK_FALSE(c.is_real());
    CHECK_THROWS_AS(parse_form(std::string("I"), 0, "m"), InputError);
    CHECK_THROWS_AS(parse_form(std::string("diag:1,x"), 0, "m"), InputError);
    CHECK_THROWS_AS(parse_form(std::string("[[1,2],[3,4]]"), 0, "m"), InputError);
    CHECK_THROWS_AS(parse_form(std::string("diag:1,2"), 3, "m"), InputError);
}

TEST_CASE("strict run config") {
    const json j = json::parse(R"({
        "problem": {"n": 2, "N": 16, "B": "I", "h": {"constant": 1.6}},
        "solver": {"tol_nl": 1e-9, "method": "flow"},
        "path": {"t_step_init": 0.05},
        "seed": 4
    })");
    const RunConfig c = parse_run_config(j);
    REQUIRE(c.problem);
    CHECK(c.problem->N == 16);
    CHECK(c.solver.tol_nl == 1e-9);
    CHECK(c.method == "flow");
    CHECK(c.path.t_step_init == 0.05);
    CHECK(c.seed == 4);
    CHECK(parse_run_config(json::object()).seed == 0);

    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"problem": {"n": 1, "M": 3}})")), InputError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"extra": 1})")), InputError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"solver": {"tol_nl": -1}})")), InputError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"solver": {"method": "magic"}})")), InputError);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"chi": {"potential": "sin("}})")), InputError);
}

TEST_CASE("overrides") {
    json j = json::parse(R"({"solver": {"tol_nl": 1e-10}})");
    apply_override(j, "solver.tol_nl=1e-8");
    apply_override(j, "problem.B=diag:1,2");
    CHECK(j["solver"]["tol_nl"].get<double>() == 1e-8);
    CHECK(j["problem"]["B"].get<std::string>() == "diag:1,2");
    CHECK_THROWS_AS(apply_override(j, "novalue"), InputError);
}

TEST_CASE("class data json") {
    const ClassData d = class_data_from_json(json::parse(
        R"({"n": 2, "m": [2, 1, 0], "subvarieties": [{"label": "C", "dim": 1, "v": [1, -2]}]})"));
    CHECK(d.subvarieties[0].v[1] == -2.0);
    CHECK_THROWS_AS(class_data_from_json(json::parse(R"({"n": 2, "m": [2, 1]})")), InputError);
    CHECK_THROWS_AS(class_data_from_json(json::parse(R"({"n": 2, "m": [2, 1, 0], "x": 1})")), InputError);
}

TEST_CASE("target field kinds") {
    const TorusProblem p(1, 8, RealMatrix::Identity(1, 1));
    PhaseTarget t;
    t.value = 0.5;
    CHECK(target_field(t, p).maxCoeff() == 0.5);
    t.kind = PhaseTarget::expression;
    t.text = "0.5 + 0.1*sin(2*pi*x)";
    CHECK(target_field(t, p)[2] == Approx(0.6));
    t.kind = PhaseTarget::from_potential;
    t.text = "0";
    CHECK(target_field(t, p)[3] == Approx(kPi / 4));
}

TEST_CASE("json output is deterministic with 17 significant digits") {
    const json j = {{"b", 0.1}, {"a", {1, 2.5}}, {"c", std::nan("")}};
    const std::string s = dump_json(j);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("null") != std::string::npos);
    CHECK(s == dump_json(j));
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("atomic write and field csv") {
    const auto dir = std::filesystem::temp_directory_path() / "dhym_io_test";
    const std::string path = (dir / "f.csv").string();
    const TorusGrid g(2, 2);
    ScalarField v(4);
    v << 1, 2, 3, 4;
    write_atomic(path, field_csv(g, v, "u"));
    std::ifstream in(path);
    std::string l1, l2, l3;
    std::getline(in, l1);
    std::getline(in, l2);
    std::getline(in, l3);
    CHECK(l1 == "# n=2 N=2");
    CHECK(l2 == "index,x1,x2,u");
    CHECK(l3 == "0,0,0,1");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove_all(dir);
}
