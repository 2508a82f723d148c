#include "dhym/config.hpp"

#include "dhym/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace dhym {

namespace {

void require_keys(const json& j, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw InputError(section + ": expected an object");
    for (const auto& item : j.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                    [&](const char* k) { return item.key() == k; });
        if (!ok) throw InputError(section + ": unknown key '" + item.key() + "'");
    }
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw InputError(what + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(what + ": non-finite value");
    return v;
}

double positive(const json& j, const std::string& what) {
    const double v = number(j, what);
    if (!(v > 0.0)) throw InputError(what + ": must be positive");
    return v;
}

long integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw InputError(what + ": expected an integer");
    return j.get<long>();
}

std::string string(const json& j, const std::string& what) {
    if (!j.is_string()) throw InputError(what + ": expected a string");
    return j.get<std::string>();
}

Complex entry(const json& e, const std::string& what) {
    if (e.is_number()) return {number(e, what), 0.0};
    if (e.is_object()) {
        require_keys(e, what, {"re", "im"});
        const double re = e.contains("re") ? number(e["re"], what + ".re") : 0.0;
        const double im = e.contains("im") ? number(e["im"], what + ".im") : 0.0;
        return {re, im};
    }
    throw InputError(what + ": matrix entries must be numbers or {\"re\", \"im\"} objects");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InputError(what + ": '" + item + "' is not a number");
        }
        if (used != item.size() || !std::isfinite(v)) {
            throw InputError(what + ": '" + item + "' is not a finite number");
        }
        out.push_back(v);
    }
    if (out.empty()) throw InputError(what + ": empty list");
    return out;
}

HermitianForm parse_form(const std::string& text, int n, const std::string& what) {
    const std::string t = trim(text);
    if (t == "I" || t == "identity") {
        if (n <= 0) throw InputError(what + ": cannot infer the size of the identity");
        return HermitianForm::identity(n);
    }
    if (t.rfind("diag:", 0) == 0) {
        const auto d = parse_list(t.substr(5), what);
        if (n > 0 && static_cast<int>(d.size()) != n) {
            std::ostringstream msg;
            msg << what << ": diagonal has " << d.size() << " entries, expected " << n;
            throw InputError(msg.str());
        }
        return HermitianForm::diagonal(d);
    }
    json j;
    try {
        j = json::parse(t);
    } catch (const json::parse_error&) {
        throw InputError(what + ": unrecognized matrix '" + t + "'");
    }
    return parse_form(j, n, what);
}

HermitianForm parse_form(const json& value, int n, const std::string& what) {
    if (value.is_string()) return parse_form(value.get<std::string>(), n, what);
    if (!value.is_array() || value.empty()) throw InputError(what + ": expected a matrix");
    const int rows = static_cast<int>(value.size());
    if (n > 0 && rows != n) {
        std::ostringstream msg;
        msg << what << ": " << rows << " rows, expected " << n;
        throw InputError(msg.str());
    }
    ComplexMatrix m(rows, rows);
    for (int i = 0; i < rows; ++i) {
        const json& row = value[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != rows) {
            throw InputError(what + ": matrix must be square");
        }
        for (int k = 0; k < rows; ++k) m(i, k) = entry(row[static_cast<std::size_t>(k)], what);
    }
    return HermitianForm(m);
}

ClassData class_data_from_json(const json& j) {
    require_keys(j, "classdata", {"n", "m", "subvarieties"});
    if (!j.contains("n") || !j.contains("m")) throw InputError("classdata: 'n' and 'm' are required");
    ClassData d;
    d.n = static_cast<int>(integer(j["n"], "classdata.n"));
    if (!j["m"].is_array()) throw InputError("classdata.m: expected an array");
    for (const auto& v : j["m"]) d.m.push_back(number(v, "classdata.m"));
    if (j.contains("subvarieties")) {
        if (!j["subvarieties"].is_array()) throw InputError("classdata.subvarieties: expected an array");
        for (const auto& s : j["subvarieties"]) {
            require_keys(s, "classdata.subvarieties[]", {"label", "dim", "v"});
            if (!s.contains("dim") || !s.contains("v")) {
                throw InputError("classdata.subvarieties[]: 'dim' and 'v' are required");
            }
            SubvarietyData sv;
            sv.label = s.contains("label") ? string(s["label"], "subvariety label")
                                           : "V" + std::to_string(d.subvarieties.size() + 1);
            sv.dim = static_cast<int>(integer(s["dim"], "subvariety dim"));
            if (!s["v"].is_array()) throw InputError("subvariety v: expected an array");
            for (const auto& v : s["v"]) sv.v.push_back(number(v, "subvariety v"));
            d.subvarieties.push_back(std::move(sv));
        }
    }
    d.validate();
    return d;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

ClassData load_class_data(const std::string& path) { return class_data_from_json(load_json_file(path)); }

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw InputError("override '" + assignment + "': expected key.path=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &j;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object() && !node->is_null()) throw InputError("override '" + path + "': not an object");
        node = &(*node)[parts[i]];
    }
    if (!node->is_object() && !node->is_null()) throw InputError("override '" + path + "': not an object");
    (*node)[parts.back()] = value;
}

RunConfig parse_run_config(const json& j) {
    require_keys(j, "config", {"problem", "solver", "path", "chi", "subsolution", "stability", "output", "seed"});
    RunConfig c;

    if (j.contains("problem")) {
        const json& p = j["problem"];
        require_keys(p, "problem", {"n", "N", "alpha", "B", "h"});
        ProblemConfig pc;
        if (!p.contains("n")) throw InputError("problem.n is required");
        pc.n = static_cast<int>(integer(p["n"], "problem.n"));
        if (pc.n < 1 || pc.n > 3) throw InputError("problem.n must be 1, 2 or 3");
        pc.N = p.contains("N") ? static_cast<int>(integer(p["N"], "problem.N")) : 64;
        pc.alpha = p.contains("alpha") ? parse_form(p["alpha"], pc.n, "problem.alpha")
                                       : HermitianForm::identity(pc.n);
        const HermitianForm B = p.contains("B") ? parse_form(p["B"], pc.n, "problem.B")
                                                : HermitianForm::identity(pc.n);
        if (!B.is_real()) throw InputError("problem.B must be real symmetric");
        pc.B = B.matrix().real();
        if (p.contains("h")) {
            const json& h = p["h"];
            PhaseTarget t;
            if (h.is_number()) {
                t.value = number(h, "problem.h");
            } else {
                require_keys(h, "problem.h", {"constant", "expression", "from_potential"});
                if (h.size() != 1) throw InputError("problem.h: give exactly one of constant, expression, from_potential");
                if (h.contains("constant")) {
                    t.value = number(h["constant"], "problem.h.constant");
                } else if (h.contains("expression")) {
                    t.kind = PhaseTarget::expression;
                    t.text = string(h["expression"], "problem.h.expression");
                    Expression::parse(t.text);
                } else {
                    t.kind = PhaseTarget::from_potential;
                    t.text = string(h["from_potential"], "problem.h.from_potential");
                    Expression::parse(t.text);
                }
            }
            pc.h = t;
        }
        c.problem = std::move(pc);
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        require_keys(s, "solver",
                     {"method", "tol_nl", "krylov_tol", "krylov_max_iter", "krylov_restart", "max_newton_iter",
                      "max_halvings", "armijo", "slack_guard", "flow_dt_initial", "flow_dt_min",
                      "flow_dt_growth", "flow_max_steps", "t_end", "initial"});
        SolverOptions& o = c.solver;
        if (s.contains("method")) {
            c.method = string(s["method"], "solver.method");
            if (c.method != "newton" && c.method != "flow") {
                throw InputError("solver.method must be 'newton' or 'flow'");
            }
        }
        if (s.contains("tol_nl")) o.tol_nl = positive(s["tol_nl"], "solver.tol_nl");
        if (s.contains("krylov_tol")) o.krylov_tol = positive(s["krylov_tol"], "solver.krylov_tol");
        if (s.contains("krylov_max_iter")) o.krylov_max_iter = static_cast<int>(integer(s["krylov_max_iter"], "solver.krylov_max_iter"));
        if (s.contains("krylov_restart")) o.krylov_restart = static_cast<int>(integer(s["krylov_restart"], "solver.krylov_restart"));
        if (s.contains("max_newton_iter")) o.max_newton_iter = static_cast<int>(integer(s["max_newton_iter"], "solver.max_newton_iter"));
        if (s.contains("max_halvings")) o.max_halvings = static_cast<int>(integer(s["max_halvings"], "solver.max_halvings"));
        if (s.contains("armijo")) o.armijo = positive(s["armijo"], "solver.armijo");
        if (s.contains("slack_guard")) o.slack_guard = positive(s["slack_guard"], "solver.slack_guard");
        if (s.contains("flow_dt_initial")) o.flow_dt_initial = positive(s["flow_dt_initial"], "solver.flow_dt_initial");
        if (s.contains("flow_dt_min")) o.flow_dt_min = positive(s["flow_dt_min"], "solver.flow_dt_min");
        if (s.contains("flow_dt_growth")) o.flow_dt_growth = positive(s["flow_dt_growth"], "solver.flow_dt_growth");
        if (s.contains("flow_max_steps")) o.flow_max_steps = integer(s["flow_max_steps"], "solver.flow_max_steps");
        if (s.contains("t_end")) c.t_end = positive(s["t_end"], "solver.t_end");
        if (s.contains("initial")) {
            c.initial = string(s["initial"], "solver.initial");
            Expression::parse(c.initial);
        }
        if (o.krylov_max_iter < 1 || o.krylov_restart < 1 || o.max_newton_iter < 0 || o.max_halvings < 0 ||
            o.flow_max_steps < 0) {
            throw InputError("solver: iteration limits must be positive");
        }
    }

    if (j.contains("path")) {
        const json& p = j["path"];
        require_keys(p, "path",
                     {"delta0", "delta1", "t_step_init", "t_step_min", "t_step_max", "successes_before_growth",
                      "tau_path", "supercritical_margin", "theta_hat"});
        PathConfig& pc = c.path;
        if (p.contains("delta0")) pc.delta0 = positive(p["delta0"], "path.delta0");
        if (p.contains("delta1")) pc.delta1 = positive(p["delta1"], "path.delta1");
        if (p.contains("t_step_init")) pc.t_step_init = positive(p["t_step_init"], "path.t_step_init");
        if (p.contains("t_step_min")) pc.t_step_min = positive(p["t_step_min"], "path.t_step_min");
        if (p.contains("t_step_max")) pc.t_step_max = positive(p["t_step_max"], "path.t_step_max");
        if (p.contains("successes_before_growth")) {
            pc.successes_before_growth = static_cast<int>(integer(p["successes_before_growth"], "path.successes_before_growth"));
            if (pc.successes_before_growth < 1) throw InputError("path.successes_before_growth must be positive");
        }
        if (p.contains("tau_path")) pc.tau_path = positive(p["tau_path"], "path.tau_path");
        if (p.contains("supercritical_margin")) {
            pc.supercritical_margin = number(p["supercritical_margin"], "path.supercritical_margin");
            if (pc.supercritical_margin < 0.0) throw InputError("path.supercritical_margin must be non-negative");
        }
        if (p.contains("theta_hat")) c.theta_hat = number(p["theta_hat"], "path.theta_hat");
    }

    if (j.contains("chi")) {
        require_keys(j["chi"], "chi", {"potential"});
        if (j["chi"].contains("potential")) {
            c.chi_potential = string(j["chi"]["potential"], "chi.potential");
            Expression::parse(*c.chi_potential);
        }
    }

    if (j.contains("subsolution")) {
        const json& s = j["subsolution"];
        require_keys(s, "subsolution", {"mu", "h", "p"});
        if (s.contains("mu")) {
            if (!s["mu"].is_array() || s["mu"].empty()) throw InputError("subsolution.mu: expected a non-empty array");
            std::vector<double> mu;
            for (const auto& v : s["mu"]) mu.push_back(number(v, "subsolution.mu"));
            c.mu = std::move(mu);
        }
        if (s.contains("h")) c.subsolution_h = number(s["h"], "subsolution.h");
        if (s.contains("p")) c.pairing_p = static_cast<int>(integer(s["p"], "subsolution.p"));
    }

    if (j.contains("stability")) {
        require_keys(j["stability"], "stability", {"classdata"});
        if (j["stability"].contains("classdata")) c.classdata = j["stability"]["classdata"];
    }

    if (j.contains("output")) {
        const json& o = j["output"];
        require_keys(o, "output", {"directory", "formats"});
        if (o.contains("directory")) c.output_directory = string(o["directory"], "output.directory");
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw InputError("output.formats: expected an array");
            c.formats.clear();
            for (const auto& f : o["formats"]) {
                const std::string s = string(f, "output.formats");
                if (s != "json" && s != "csv") throw InputError("output.formats: unknown format '" + s + "'");
                c.formats.push_back(s);
            }
        }
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError("seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

TorusProblem make_problem(const ProblemConfig& p) { return TorusProblem(p.n, p.N, p.alpha, p.B); }

ScalarField sample(const Expression& e, const TorusGrid& grid) {
    ScalarField out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = e(grid.coordinates(i));
        if (!std::isfinite(v)) {
            throw InputError("expression '" + e.text() + "' is not finite on the grid");
        }
        out[static_cast<Eigen::Index>(i)] = v;
    }
    return out;
}

ScalarField target_field(const PhaseTarget& t, const TorusProblem& prob) {
    const auto size = static_cast<Eigen::Index>(prob.grid.size());
    switch (t.kind) {
        case PhaseTarget::constant: return ScalarField::Constant(size, t.value);
        case PhaseTarget::expression: return sample(Expression::parse(t.text), prob.grid);
        case PhaseTarget::from_potential:
            return theta_field(sample(Expression::parse(t.text), prob.grid), prob);
    }
    return {};
}

}  // namespace dhym
