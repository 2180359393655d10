#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcp/covering.hpp"
#include "qcp/delta_complex.hpp"
#include "qcp/geometry.hpp"
#include "qcp/kat.hpp"
#include "qcp/reports.hpp"
#include "qcp/solver.hpp"
#include "qcp/svg_render.hpp"
#include "qcp/triangulation_io.hpp"

namespace {

using nlohmann::json;

json g_invocation = json::array();

void emit_report(json report, const std::string& out_path) {
    report["invocation"] = g_invocation;
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        qcp::write_file_atomic(out_path, text);
    }
}

qcp::Background background_from(const std::string& name) {
    if (name == "euclidean") {
        return qcp::Background::Euclidean;
    }
    if (name == "hyperbolic") {
        return qcp::Background::Hyperbolic;
    }
    throw qcp::Error(qcp::ErrorKind::Domain,
                     "unknown background '" + name + "' (euclidean | hyperbolic)");
}

// "<number>" means a constant vector; anything else is a values file.
std::vector<double> vertex_values_from_arg(const std::string& arg, int n) {
    try {
        std::size_t pos = 0;
        const double value = std::stod(arg, &pos);
        if (pos == arg.size()) {
            return std::vector<double>(n, value);
        }
    } catch (const std::exception&) {
        // fall through to file loading
    }
    return qcp::load_vertex_values(arg, n);
}

std::vector<double> phi_or_default(const qcp::Triangulation& tri, json* report) {
    if (tri.phi) {
        if (report != nullptr) {
            (*report)["phi_source"] = "file";
        }
        return *tri.phi;
    }
    if (report != nullptr) {
        (*report)["phi_source"] = "default-zero";
    }
    return std::vector<double>(tri.complex.num_edges(), 0.0);
}

qcp::Covering cover_from_arg(const qcp::DeltaComplex& c, const std::string& arg, int p_max,
                             std::vector<qcp::UnwrapAttempt>* rejected) {
    if (arg == "auto") {
        return qcp::unwrap(c, p_max, rejected);
    }
    return qcp::derived_cover(c, qcp::load_voltage_file(arg, c));
}

struct CommonArgs {
    std::string input;
    std::string out;
    std::string background = "euclidean";
};

int run_validate(const std::string& input, const std::string& out) {
    const qcp::Triangulation tri = qcp::load_triangulation(input);
    emit_report(qcp::validate_report(tri), out);
    return 0;
}

int run_cover(const std::string& input, int p, int p_max, const std::string& voltages,
              const std::string& out_file, const std::string& report_path) {
    const qcp::Triangulation tri = qcp::load_triangulation(input);
    const qcp::DeltaComplex& c = tri.complex;

    json report;
    report["base"] = qcp::validate_report(tri);
    std::vector<qcp::UnwrapAttempt> rejected;
    qcp::Covering cov;
    bool built = false;
    try {
        if (!voltages.empty()) {
            report["cover_source"] = "voltage-file";
            cov = qcp::derived_cover(c, qcp::load_voltage_file(voltages, c));
        } else if (p > 0) {
            report["cover_source"] = "homology-p" + std::to_string(p);
            cov = qcp::derived_cover(c, qcp::homology_voltages(c, p));
        } else {
            report["cover_source"] = "auto";
            cov = qcp::unwrap(c, p_max, &rejected);
        }
        built = true;
    } catch (const qcp::UnwrapError& e) {
        report["error"] = e.what();
        report["rejected_primes"] = qcp::unwrap_attempts_json(e.attempts());
        emit_report(report, report_path);
        return 1;
    }

    report["cover"] = qcp::covering_json(cov);
    report["rejected_primes"] = qcp::unwrap_attempts_json(rejected);
    try {
        const int base_genus = qcp::genus(c);
        report["genus_formula"] = cov.degree * (base_genus - 1) + 1;
    } catch (const qcp::Error&) {
        // non-orientable bases have no genus; covering_json already reports
    }

    if (built && !out_file.empty()) {
        std::vector<double> phi_hat;
        const std::vector<double>* phi_ptr = nullptr;
        if (tri.phi) {
            phi_hat = qcp::pullback_edge_data(cov, *tri.phi);
            phi_ptr = &phi_hat;
        }
        qcp::write_file_atomic(out_file,
                               qcp::format_triangulation(cov.total, phi_ptr,
                                                         "derived cover, degree " +
                                                             std::to_string(cov.degree)));
        qcp::write_file_atomic(out_file + ".map.json", qcp::cover_sidecar_json(cov).dump(2) + "\n");
        report["files"] = json{{"complex", out_file}, {"sidecar", out_file + ".map.json"}};
    }
    emit_report(report, report_path);
    return qcp::check_simplicial(cov.total).simplicial() ? 0 : 1;
}

int run_curvature(const std::string& input, const std::string& radii_arg,
                  const std::string& background, const std::string& out) {
    const qcp::Triangulation tri = qcp::load_triangulation(input);
    const qcp::DeltaComplex& c = tri.complex;
    json report;
    const std::vector<double> phi = phi_or_default(tri, &report);
    qcp::PackingMetric metric;
    metric.background = background_from(background);
    metric.radii = vertex_values_from_arg(radii_arg, c.num_vertices());
    qcp::validate_metric(c, metric);

    const qcp::ConditionReport s_check = qcp::condition_S_all(c, phi);
    if (!s_check.ok) {
        report["warnings"] = json{{"condition_S_failing_triangles", s_check.failing_triangles}};
    }

    qcp::CurvatureOrDegenerate result = qcp::curvature_map(c, phi, metric);
    if (const auto* degenerate = std::get_if<qcp::DegenerateTriangle>(&result)) {
        report["error"] = json{
            {"degenerate_triangle", degenerate->triangle},
            {"lengths", degenerate->lengths},
        };
        emit_report(report, out);
        std::cerr << "error: triangle " << degenerate->triangle << " is degenerate\n";
        return 1;
    }
    const std::vector<double>& k = std::get<std::vector<double>>(result);

    double total = 0.0;
    for (double v : k) {
        total += v;
    }
    const double two_pi_chi = 2.0 * std::numbers::pi * c.euler_characteristic();
    json angles = json::array();
    for (const auto& triple : qcp::all_triangle_angles(c, phi, metric)) {
        angles.push_back(triple);
    }
    report["background"] = background;
    report["curvature"] = k;
    report["triangle_angles"] = angles;
    report["gauss_bonnet"] = json{
        {"sum_curvature", total},
        {"two_pi_chi", two_pi_chi},
        {"excess", total - two_pi_chi},
    };
    emit_report(report, out);
    return 0;
}

int run_kat(const std::string& input, const std::string& k_arg, const std::string& background,
            const std::string& cover_arg, bool cone_positivity, int p_max, int cap,
            const std::string& out) {
    const qcp::Triangulation tri = qcp::load_triangulation(input);
    const qcp::DeltaComplex& c = tri.complex;
    json report;
    const std::vector<double> phi = phi_or_default(tri, &report);
    const std::vector<double> k = vertex_values_from_arg(k_arg, c.num_vertices());
    const qcp::Background bg = background_from(background);

    std::vector<qcp::UnwrapAttempt> rejected;
    const qcp::Covering cov = cover_from_arg(c, cover_arg, p_max, &rejected);

    qcp::CheckOptions opts;
    opts.subset_cap = cap;
    opts.cone_positivity = cone_positivity;

    const qcp::FeasibilityVerdict on_cover = qcp::check_cover(cov, phi, k, bg, opts);
    const qcp::FeasibilityVerdict on_base = qcp::check_base_necessary(c, phi, k, bg, opts);

    report["background"] = background;
    report["curvature"] = k;
    report["cover"] = qcp::covering_json(cov);
    report["cover_check"] = qcp::feasibility_json(on_cover);
    report["base_necessary_check"] = qcp::feasibility_json(on_base);
    report["contrast"] = json{
        {"base_subsets_checked", on_base.subsets_checked},
        {"cover_subsets_checked", on_cover.subsets_checked},
        {"note", "base inequalities are necessary only; the cover supplies the full set"},
    };
    emit_report(report, out);
    return on_cover.feasible ? 0 : 1;
}

int solve_exit_code(const qcp::SolveResult& result) {
    switch (result.status) {
    case qcp::SolveStatus::Converged:
        return 0;
    case qcp::SolveStatus::Infeasible:
        return 1;
    case qcp::SolveStatus::BudgetExhausted:
    case qcp::SolveStatus::StepUnderflow:
        return 4;
    }
    return 4;
}

int run_solve(const std::string& input, const std::string& k_arg, const std::string& background,
              const std::string& method, std::uint64_t seed, double tol,
              const std::string& cover_arg, int p_max, const std::string& radii_out,
              const std::string& out) {
    const qcp::Triangulation tri = qcp::load_triangulation(input);
    const qcp::DeltaComplex& c = tri.complex;
    json report;
    const std::vector<double> phi = phi_or_default(tri, &report);
    const std::vector<double> target = vertex_values_from_arg(k_arg, c.num_vertices());
    const qcp::Background bg = background_from(background);

    qcp::SolveOptions opts;
    opts.seed = seed;
    opts.tol = tol;
    if (method == "newton") {
        opts.method = qcp::SolveMethod::Newton;
    } else if (method == "flow") {
        opts.method = qcp::SolveMethod::Flow;
    } else {
        throw qcp::Error(qcp::ErrorKind::Domain, "unknown method '" + method + "'");
    }

    const qcp::SolveResult result = qcp::solve_prescribed(c, phi, target, bg, opts);
    report["background"] = background;
    report["method"] = method;
    report["target"] = target;
    report["solve"] = qcp::solve_json(result);

    if (result.converged() && !radii_out.empty()) {
        qcp::write_file_atomic(radii_out, qcp::format_vertex_values(result.metric.radii));
        report["radii_file"] = radii_out;
    }

    int exit_code = solve_exit_code(result);
    if (!cover_arg.empty()) {
        const qcp::Covering cov = cover_from_arg(c, cover_arg, p_max, nullptr);
        if (!result.converged()) {
            // attach the authoritative feasibility verdict as a diagnosis
            try {
                report["kat_check"] =
                    qcp::feasibility_json(qcp::check_cover(cov, phi, target, bg));
            } catch (const qcp::Error& e) {
                report["kat_check"] = json{{"unavailable", e.what()}};
            }
        }
        const qcp::CoverSolveResult cover_result =
            qcp::solve_on_cover(cov, phi, target, bg, opts);
        json cover_report{
            {"degree", cov.degree},
            {"solve", qcp::solve_json(cover_result.solve)},
        };
        if (std::isfinite(cover_result.invariance_deviation)) {
            cover_report["invariance_deviation"] = cover_result.invariance_deviation;
            cover_report["pushforward_residual"] = cover_result.pushforward_residual;
        }
        report["cover"] = std::move(cover_report);
        exit_code = std::max(exit_code, solve_exit_code(cover_result.solve));
    }
    emit_report(report, out);
    return exit_code;
}

int run_render(const std::vector<double>& radii, const std::vector<double>& phi,
               const std::string& out_svg, const std::string& report_path) {
    const std::array<double, 3> r{radii[0], radii[1], radii[2]};
    const std::array<double, 3> p{phi[0], phi[1], phi[2]};
    const qcp::TripleLayout layout = qcp::layout_triple(r, p);
    qcp::write_file_atomic(out_svg, qcp::render_triple_svg(r, p));
    json report{
        {"svg", out_svg},
        {"centers", layout.centers},
        {"lengths", layout.lengths},
        {"angles_from_coordinates", layout.angles},
    };
    emit_report(report, report_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
        g_invocation.push_back(argv[i]);
    }

    CLI::App app{"circle patterns with prescribed intersection angles on quasi-simplicial "
                 "triangulated surfaces"};
    app.require_subcommand(1);

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "parse and check a triangulation file");
    std::string v_input, v_out;
    validate_cmd->add_option("file", v_input, "triangulation file")->required();
    validate_cmd->add_option("--out", v_out, "report path (default stdout)");

    // cover
    auto* cover_cmd = app.add_subcommand("cover", "build a finite cover with simplicial lift");
    std::string c_input, c_volt, c_out, c_report;
    int c_p = 0;
    int c_pmax = 31;
    cover_cmd->add_option("file", c_input, "triangulation file")->required();
    cover_cmd->add_option("--p", c_p, "use the mod-p homology cover for this prime");
    cover_cmd->add_option("--auto", c_pmax, "search primes up to this bound (default 31)");
    cover_cmd->add_option("--voltages", c_volt, "explicit voltage file");
    cover_cmd->add_option("--out", c_out, "write the cover complex here (+ .map.json sidecar)");
    cover_cmd->add_option("--report", c_report, "report path (default stdout)");

    // curvature
    auto* curv_cmd = app.add_subcommand("curvature", "evaluate the curvature map");
    std::string k_input, k_radii = "1", k_bg = "euclidean", k_out;
    curv_cmd->add_option("file", k_input, "triangulation file")->required();
    curv_cmd->add_option("--radii", k_radii, "radii file or constant (default 1)");
    curv_cmd->add_option("--bg", k_bg, "euclidean | hyperbolic");
    curv_cmd->add_option("--out", k_out, "report path (default stdout)");

    // kat
    auto* kat_cmd = app.add_subcommand("kat", "KAT feasibility of a curvature vector");
    std::string f_input, f_k = "0", f_bg = "euclidean", f_cover = "auto", f_out;
    bool f_cone = false;
    int f_pmax = 31;
    int f_cap = 24;
    kat_cmd->add_option("file", f_input, "triangulation file")->required();
    kat_cmd->add_option("--K", f_k, "target curvature file or constant (default 0)");
    kat_cmd->add_option("--bg", f_bg, "euclidean | hyperbolic");
    kat_cmd->add_option("--cover", f_cover, "'auto' or a voltage file (default auto)");
    kat_cmd->add_flag("--cone-positivity", f_cone, "also require K_v < 2 pi per vertex");
    kat_cmd->add_option("--p-max", f_pmax, "prime bound for auto covers (default 31)");
    kat_cmd->add_option("--cap", f_cap, "subset enumeration cap on |V| (default 24)");
    kat_cmd->add_option("--out", f_out, "report path (default stdout)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve the prescribed curvature problem");
    std::string s_input, s_k = "0", s_bg = "euclidean", s_method = "newton", s_cover, s_radii_out,
                s_out;
    std::uint64_t s_seed = 0;
    double s_tol = 1e-10;
    int s_pmax = 31;
    solve_cmd->add_option("file", s_input, "triangulation file")->required();
    solve_cmd->add_option("--K", s_k, "target curvature file or constant (default 0)");
    solve_cmd->add_option("--bg", s_bg, "euclidean | hyperbolic");
    solve_cmd->add_option("--method", s_method, "newton | flow (default newton)");
    solve_cmd->add_option("--seed", s_seed, "seed for randomized starts (default 0)");
    solve_cmd->add_option("--tol", s_tol, "residual tolerance (default 1e-10)");
    solve_cmd->add_option("--cover", s_cover, "also solve on this cover ('auto' or voltage file)");
    solve_cmd->add_option("--p-max", s_pmax, "prime bound for auto covers (default 31)");
    solve_cmd->add_option("--radii-out", s_radii_out, "write solved radii here");
    solve_cmd->add_option("--out", s_out, "report path (default stdout)");

    // render-triple
    auto* render_cmd =
        app.add_subcommand("render-triple", "SVG of a Euclidean three-circle configuration");
    std::vector<double> r_radii, r_phi;
    std::string r_out, r_report;
    render_cmd->add_option("--r", r_radii, "three radii")->expected(3)->required();
    render_cmd->add_option("--phi", r_phi, "three intersection angles")->expected(3)->required();
    render_cmd->add_option("--out", r_out, "SVG output path")->required();
    render_cmd->add_option("--report", r_report, "report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (validate_cmd->parsed()) {
            return run_validate(v_input, v_out);
        }
        if (cover_cmd->parsed()) {
            const int modes = (c_p > 0 ? 1 : 0) + (c_volt.empty() ? 0 : 1) +
                              (cover_cmd->count("--auto") > 0 ? 1 : 0);
            if (modes > 1) {
                throw qcp::Error(qcp::ErrorKind::Domain,
                                 "--p, --auto, and --voltages are mutually exclusive");
            }
            return run_cover(c_input, c_p, c_pmax, c_volt, c_out, c_report);
        }
        if (curv_cmd->parsed()) {
            return run_curvature(k_input, k_radii, k_bg, k_out);
        }
        if (kat_cmd->parsed()) {
            return run_kat(f_input, f_k, f_bg, f_cover, f_cone, f_pmax, f_cap, f_out);
        }
        if (solve_cmd->parsed()) {
            return run_solve(s_input, s_k, s_bg, s_method, s_seed, s_tol, s_cover, s_pmax,
                             s_radii_out, s_out);
        }
        if (render_cmd->parsed()) {
            return run_render(r_radii, r_phi, r_out, r_report);
        }
    } catch (const qcp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case qcp::ErrorKind::Io:
            return 2;
        case qcp::ErrorKind::Cap:
            return 3;
        case qcp::ErrorKind::Budget:
            return 4;
        default:
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
