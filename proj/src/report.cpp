#include "dhym/report.hpp"

#include "dhym/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dhym {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump(const json& j, std::ostringstream& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            for (const auto& item : j.items()) {
                if (!first) out << ",\n";
                first = false;
                out << pad << json(item.key()).dump() << ": ";
                dump(item.value(), out, depth + 1);
            }
            out << "\n" << close << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            if (flat) {
                out << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out << ", ";
                    dump(j[i], out, depth + 1);
                }
                out << "]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ",\n";
                out << pad;
                dump(j[i], out, depth + 1);
            }
            out << "\n" << close << "]";
            return;
        }
        case json::value_t::number_float: out << format_double(j.get<double>()); return;
        default: out << j.dump(); return;
    }
}

}  // namespace

std::string dump_json(const json& j) {
    std::ostringstream out;
    dump(j, out, 0);
    out << "\n";
    return out.str();
}

void write_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string field_csv(const TorusGrid& grid, const ScalarField& values, const std::string& name) {
    std::ostringstream out;
    out << "# n=" << grid.dim() << " N=" << grid.points_per_axis() << "\nindex";
    for (int j = 0; j < grid.dim(); ++j) out << ",x" << j + 1;
    out << "," << name << "\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.coordinates(i);
        out << i;
        for (int j = 0; j < grid.dim(); ++j) out << "," << format_double(x[static_cast<std::size_t>(j)]);
        out << "," << format_double(values[static_cast<Eigen::Index>(i)]) << "\n";
    }
    return out.str();
}

std::string history_csv(const SolveReport& r) {
    std::ostringstream out;
    out << "iteration,residual_max,residual_l2,c,step,time,krylov_iterations,min_supercritical_slack\n";
    for (const auto& h : r.history) {
        out << h.iteration << "," << format_double(h.residual_max) << "," << format_double(h.residual_l2) << ","
            << format_double(h.c) << "," << format_double(h.step) << "," << format_double(h.time) << ","
            << h.krylov_iterations << "," << format_double(h.min_supercritical_slack) << "\n";
    }
    return out.str();
}

std::string path_csv(const PathReport& a, const PathReport* b) {
    std::ostringstream out;
    out << "stage,t,constant,lower_bound,upper_bound,residual_max,min_subsolution_slack,"
           "min_supercritical_slack,newton_iterations\n";
    auto rows = [&](const PathReport& r) {
        for (const auto& s : r.steps) {
            out << s.stage << "," << format_double(s.t) << "," << format_double(s.constant) << ","
                << format_double(s.lower_bound) << "," << format_double(s.upper_bound) << ","
                << format_double(s.residual_max) << "," << format_double(s.min_subsolution_slack) << ","
                << format_double(s.min_supercritical_slack) << "," << s.newton_iterations << "\n";
        }
    };
    rows(a);
    if (b) rows(*b);
    return out.str();
}

json to_json(const Spectrum& s) { return s.values(); }

json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const BoundaryReport& r) {
    return {{"n", r.n},
            {"sigma", r.sigma},
            {"positivity_slack", r.positivity_slack},
            {"dominance_slack", r.dominance_slack},
            {"part_i", r.part_i},
            {"trace_slack", r.trace_slack},
            {"part_ii", r.part_ii},
            {"elementary_symmetric", r.symmetric},
            {"part_iii", r.part_iii},
            {"all", r.all()}};
}

json to_json(const SubsolutionVerdict& v) {
    return {{"is_subsolution", v.is_subsolution},
            {"worst_index", v.worst_index},
            {"slack", v.slack},
            {"region", std::string(to_string(v.region))}};
}

json to_json(const FormPositivityResult& r) {
    return {{"positive", r.positive},
            {"margins", r.margins},
            {"used_argument_form", r.used_argument_form},
            {"mu_supercritical", r.mu_supercritical}};
}

json to_json(const ArgumentPairingResult& r) {
    return {{"passes", r.passes}, {"worst_subset", r.worst_subset}, {"margin", r.margin}};
}

json to_json(const FieldSubsolutionVerdict& v) {
    json j = {{"is_subsolution", v.is_subsolution},
              {"slack", v.slack},
              {"worst_point", v.worst_point},
              {"worst_index", v.worst_index}};
    if (v.worst_coordinates) j["worst_coordinates"] = *v.worst_coordinates;
    return j;
}

json to_json(const SolveReport& r, bool with_history) {
    json j = {{"converged", r.converged},
              {"failure", r.failure},
              {"iterations", r.iterations},
              {"residual_max", r.residual_max},
              {"residual_l2", r.residual_l2},
              {"c", r.c},
              {"min_supercritical_slack", r.min_supercritical_slack},
              {"krylov_iterations", r.krylov_iterations},
              {"final_time", r.final_time}};
    if (with_history) {
        json h = json::array();
        for (const auto& it : r.history) {
            h.push_back({{"iteration", it.iteration},
                         {"residual_max", it.residual_max},
                         {"residual_l2", it.residual_l2},
                         {"c", it.c},
                         {"step", it.step},
                         {"time", it.time},
                         {"krylov_iterations", it.krylov_iterations},
                         {"min_supercritical_slack", it.min_supercritical_slack}});
        }
        j["history"] = std::move(h);
    }
    return j;
}

json to_json(const Theta1Checks& c) {
    return {{"argmin_point", c.argmin_point},
            {"inf_theta0", c.inf_theta0},
            {"kernel_smooth", c.kernel_smooth},
            {"sandwich_low", c.sandwich_low},
            {"sandwich_high", c.sandwich_high},
            {"below_region_error", c.below_region_error},
            {"at_argmin_error", c.at_argmin_error},
            {"above_region_error", c.above_region_error},
            {"infimum_error", c.infimum_error},
            {"sup_gap_error", c.sup_gap_error},
            {"sup_at_argmin_error", c.sup_at_argmin_error},
            {"all_pass", c.all_pass}};
}

json to_json(const PathConfig& c) {
    return {{"delta0", c.delta0},
            {"delta1", c.delta1},
            {"delta", c.delta},
            {"t_step_init", c.t_step_init},
            {"t_step_min", c.t_step_min},
            {"t_step_max", c.t_step_max},
            {"successes_before_growth", c.successes_before_growth},
            {"tau_path", c.tau_path},
            {"supercritical_margin", c.supercritical_margin}};
}

json to_json(const PathReport& r) {
    json steps = json::array();
    for (const auto& s : r.steps) {
        steps.push_back({{"t", s.t},
                         {"constant", s.constant},
                         {"lower_bound", s.lower_bound},
                         {"upper_bound", s.upper_bound},
                         {"residual_max", s.residual_max},
                         {"min_subsolution_slack", s.min_subsolution_slack},
                         {"min_supercritical_slack", s.min_supercritical_slack},
                         {"newton_iterations", s.newton_iterations}});
    }
    return {{"success", r.success},
            {"failure", r.failure},
            {"last_good_t", r.last_good_t},
            {"rejected_steps", r.rejected_steps},
            {"steps", std::move(steps)}};
}

json to_json(const StabilityReport& r) {
    json subs = json::array();
    for (const auto& v : r.verdicts) {
        subs.push_back({{"label", v.label},
                        {"dim", v.dim},
                        {"theta_v", v.theta_v.value},
                        {"near_branch", v.theta_v.near_branch},
                        {"margin", v.margin},
                        {"stable", v.stable},
                        {"central_charge", to_json(v.central_charge_v)},
                        {"central_arg_v", v.central_arg_v},
                        {"central_arg_x", v.central_arg_x},
                        {"central_charge_stable", v.central_charge_stable}});
    }
    return {{"z_x", to_json(r.z_x)},
            {"theta_x", r.theta_x.value},
            {"theta_x_near_branch", r.theta_x.near_branch},
            {"central_charge_x", to_json(r.central_charge_x)},
            {"subvarieties", std::move(subs)},
            {"all_stable", r.all_stable},
            {"warnings", r.warnings}};
}

json to_json(const SurfaceCriterionReport& r) {
    json curves = json::array();
    for (const auto& c : r.curves) {
        curves.push_back({{"label", c.label}, {"integral", c.integral}, {"positive", c.positive}});
    }
    return {{"exists", r.exists},
            {"vacuous", r.vacuous},
            {"flipped", r.flipped},
            {"theta_x", r.theta_x},
            {"cot_theta", r.cot_theta},
            {"kappa_square", r.kappa_square},
            {"kappa_square_positive", r.kappa_square_positive},
            {"kappa_square_at_least_one", r.kappa_square_at_least_one},
            {"curves", std::move(curves)},
            {"caveat", r.caveat}};
}

json to_json(const PhaseIdentityReport& r) {
    return {{"theta_x", r.theta_x},
            {"definitional_residual", r.definitional_residual},
            {"printed_residual", r.printed_residual}};
}

json refs_phase() {
    return {{"theta", "Lagrangian phase: sum of arctangents of the relative eigenvalues"},
            {"cone_slack", "super-level set Gamma^sigma = {Theta > sigma} inside the cone Gamma"},
            {"f0", "concave reformulation F0(A) = inf{t : lambda(A) - t in closure of Gamma^sigma}"},
            {"boundary_arithmetic", "arithmetic lemma for boundary spectra of supercritical level sets, parts (i)-(iii)"}};
}

json refs_subsolution() {
    return {{"eigenvalue_form", "C-subsolution: deleted arctangent sums exceed h - pi/2"},
            {"form_positivity", "subsolution as positivity of an (n-1,n-1) form"},
            {"argument_pairing", "argument lemma for simple positive (n-p,n-p) forms"}};
}

json refs_solve() {
    return {{"equation", "specified phase equation Theta_alpha(omega0 + i ddbar u) = h + c"},
            {"newton", "openness: (v, c) -> Delta_eta v + c is surjective"},
            {"flow", "parabolic flow from the subsolution converges under hypercritical hypotheses"}};
}

json refs_continuity() {
    return {{"theta1", "regularized maximum of theta_hat and Theta0 and its six listed properties"},
            {"stage_a", "Theta(chi + i ddbar u_t) = (1-t) Theta0 + t Theta1 + b_t with b_t <= t sup(Theta0 - Theta1) <= 0"},
            {"stage_b", "Theta(omega1 + i ddbar v_t) = (1-t) Theta1 + t theta_hat + c_t with b_1 <= c_t <= 0"},
            {"deltas", "delta = min(delta0, delta1) with the factor-100 margins"}};
}

json refs_stability() {
    return {{"obstruction", "necessary condition Theta_V > Theta_X - (n - dim V) pi/2"},
            {"central_charge", "Z(V) = -int_V e^{-i alpha + omega} truncated at order dim V"},
            {"surface_criterion", "surface existence through Kahler class cot(Theta_X) alpha + omega"},
            {"phase_identity", "Re Z = cot(Theta_X) Im Z, with the printed variant reported separately"}};
}

}  // namespace dhym
