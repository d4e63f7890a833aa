#include "rrfsi/rrfsi.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace rrfsi;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParameterError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir))
        throw IoError("cannot create output directory " + config.out_dir);
}

std::string out_path(const RunConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

SchemeParams scheme_params(const RunConfig& c) {
    SchemeParams p;
    p.rho_f = c.rho_f;
    p.mu_f = c.mu_f;
    p.rho_s = c.rho_s;
    p.mu_s = c.mu_s;
    p.lambda_s = c.lambda_s;
    p.L1 = c.L1;
    p.L2 = c.L2;
    p.dt = c.dt;
    return p;
}

int round_steps(const RunConfig& c) {
    return int(std::lround(c.T / c.dt));
}

void dump_state(const RunConfig& config, const Problem& problem, const SimState& state,
                const std::string& suffix) {
    write_vtk(out_path(config, "fluid_" + suffix + ".vtk"), problem.mesh().fluid,
              {{"velocity", &state.u}, {"pressure", &state.p}});
    write_vtk(out_path(config, "structure_" + suffix + ".vtk"), problem.mesh().structure,
              {{"displacement", &state.eta}, {"velocity", &state.xi}});
}

int cmd_mesh_info(const RunConfig& config) {
    const CoupledMesh mesh = build_layered_rect_mesh(config.fluid_rect, config.structure_rect,
                                                     config.nx, config.ny);
    const ElementAreaStats fs_ = element_area_stats(mesh.fluid);
    const ElementAreaStats ss = element_area_stats(mesh.structure);
    std::cout << "fluid:     " << mesh.fluid.n_vertices() << " vertices, "
              << mesh.fluid.n_triangles() << " triangles, area range [" << fs_.min_area << ", "
              << fs_.max_area << "]\n";
    std::cout << "structure: " << mesh.structure.n_vertices() << " vertices, "
              << mesh.structure.n_triangles() << " triangles, area range [" << ss.min_area
              << ", " << ss.max_area << "]\n";
    std::cout << "interface: " << mesh.interface_pairs.size() << " node pairs, "
              << mesh.interface_edges.size() << " edges, n_f = (" << mesh.interface_edges[0].n_f.x
              << ", " << mesh.interface_edges[0].n_f.y << ")\n";
    if (config.dump_fields) {
        ensure_out_dir(config);
        write_vtk(out_path(config, "fluid_mesh.vtk"), mesh.fluid);
        write_vtk(out_path(config, "structure_mesh.vtk"), mesh.structure);
        std::cout << "meshes written to " << config.out_dir << "\n";
    }
    return 0;
}

int cmd_stability(const RunConfig& config, bool parallel) {
    const int steps = round_steps(config);
    std::cout << "stability run: nx=" << config.nx << " dt=" << config.dt << " L1=" << config.L1
              << " L2=" << config.L2 << " steps=" << steps << " seed=" << config.seed << "\n";
    const StabilityResult result = stability_study(config.nx, config.dt, config.L1, config.L2,
                                                   steps, config.seed, parallel);
    ensure_out_dir(config);
    write_ledger_csv(out_path(config, "ledger.csv"), result.run.ledger);
    write_timings_csv(out_path(config, "timings.csv"), result.run.diagnostics);
    std::cout << "E0+I0 = " << format_g17(result.run.ledger.front().bound)
              << ", final running sum = " << format_g17(result.run.ledger.back().running_sum)
              << "\n";
    if (result.run.inequality_checked)
        std::cout << "energy inequality: " << (result.pass ? "PASS" : "FAIL") << "\n";
    else
        std::cout << "energy inequality: not checked (L1 != L2)\n";
    std::cout << "ledger written to " << out_path(config, "ledger.csv") << "\n";
    return 0;
}

int cmd_run(const RunConfig& config, bool parallel) {
    SchemeParams params = scheme_params(config);
    auto problem = Problem::create(
        build_layered_rect_mesh(config.fluid_rect, config.structure_rect, config.nx, config.ny),
        params);
    const SimState initial = random_initial_state(*problem, config.seed);
    ensure_out_dir(config);
    if (config.dump_fields)
        dump_state(config, *problem, initial, "initial");
    const RunResult result =
        run_simulation(*problem, ProblemData{}, initial, round_steps(config), parallel);
    write_ledger_csv(out_path(config, "ledger.csv"), result.ledger);
    write_timings_csv(out_path(config, "timings.csv"), result.diagnostics);
    if (config.dump_fields)
        dump_state(config, *problem, result.state, "final");
    std::cout << "ran " << result.state.step << " steps to t = " << result.state.time << "\n";
    std::cout << "max interface identity residual = "
              << format_g17(result.max_interface_identity_residual) << "\n";
    std::cout << "outputs in " << config.out_dir << "\n";
    return 0;
}

int cmd_converge(const RunConfig& config, bool parallel) {
    const ManufacturedCase mcase(ManufacturedParams{config.rho_f, config.mu_f, config.rho_s,
                                                    config.mu_s, config.lambda_s});
    for (const std::string& warning : mcase.validate())
        std::cout << "warning: " << warning << "\n";

    std::vector<ErrorReport> reports;
    for (double L : config.L_list) {
        std::cout << "convergence sweep: L=" << L << " nx=" << config.nx << " T=" << config.T
                  << "\n";
        ErrorReport rep = convergence_study(config.nx, config.dt_sweep, L, config.T, parallel,
                                            {config.fluid_rect, config.structure_rect});
        for (const auto& row : rep.rows)
            std::cout << "  dt=" << format_g17(row.dt) << "  e_u=" << row.e_u
                      << "  e_eta=" << row.e_eta << "  e_xi=" << row.e_xi << "  e_E=" << row.e_E
                      << "\n";
        std::cout << "  slopes: e_u=" << rep.slope_e_u << " e_eta=" << rep.slope_e_eta
                  << " e_xi=" << rep.slope_e_xi << " e_E=" << rep.slope_e_E << "\n";
        for (const auto& warning : rep.warnings)
            std::cout << "  warning: " << warning << "\n";
        reports.push_back(std::move(rep));
    }
    ensure_out_dir(config);
    write_errors_csv(out_path(config, "errors.csv"), reports);
    write_slopes_csv(out_path(config, "slopes.csv"), reports);
    std::cout << "errors.csv and slopes.csv written to " << config.out_dir << "\n";
    return 0;
}

/// interface displacement expressions: "uniform:dx,dy" or "sine:amp,periods"
std::function<Vec2(Vec2, double)> parse_interface_expr(const std::string& expr) {
    const auto colon = expr.find(':');
    const std::string kind = expr.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(expr.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ','))
            args.push_back(std::stod(item));
    }
    if (kind == "uniform" && args.size() == 2)
        return [args](Vec2, double t) { return Vec2{args[0] * t, args[1] * t}; };
    if (kind == "sine" && args.size() == 2)
        return [args](Vec2 p, double t) {
            return Vec2{0.0, args[0] * t * std::sin(args[1] * std::numbers::pi * p.x)};
        };
    throw ParameterError("ale-demo: bad interface_disp expression '" + expr +
                         "' (use uniform:dx,dy or sine:amp,periods)");
}

int cmd_ale_demo(const RunConfig& config) {
    const CoupledMesh mesh = build_layered_rect_mesh(config.fluid_rect, config.structure_rect,
                                                     config.nx, config.ny);
    const AleExtension ale(mesh.fluid);
    const auto expr = parse_interface_expr(config.interface_disp);
    ensure_out_dir(config);

    const int frames = 5;
    Field prev = ale.extend([&](Vec2 p) { return expr(p, 0.0); });
    for (int k = 1; k <= frames; ++k) {
        const double t = config.T * double(k) / double(frames);
        const Field disp = ale.extend([&](Vec2 p) { return expr(p, t); });
        const Field omega = mesh_velocity(prev, disp, config.T / double(frames));
        const MeshQuality q = mesh_quality_report(mesh.fluid, disp);
        // dump the displaced mesh with the motion fields attached
        TriMesh displaced = mesh.fluid;
        for (int v = 0; v < displaced.n_vertices(); ++v)
            displaced.vertices[size_t(v)] =
                displaced.vertices[size_t(v)] +
                Vec2{disp.values[ale.space().dof_of(v, 0)],
                     disp.values[ale.space().dof_of(v, 1)]};
        write_vtk(out_path(config, "ale_frame_" + std::to_string(k) + ".vtk"), displaced,
                  {{"mesh_displacement", &disp}, {"mesh_velocity", &omega}});
        std::cout << "t=" << t << "  min displaced area=" << format_g17(q.min_signed_area)
                  << "  worst aspect=" << format_g17(q.worst_aspect) << "\n";
        prev = disp;
    }
    std::cout << frames << " frames written to " << config.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rrfsi: explicit, fully parallel Robin-Robin partitioned FSI solver\n"
                 "(Stokes flow over linear elasticity on a layered rectangle)"};
    app.require_subcommand(1);

    std::string config_path;
    bool sequential = false;
    RunConfig config;  // documented defaults live in this struct

    // flag storage: only values the user actually set override the config file
    std::map<std::string, double> doubles;
    std::map<std::string, int> ints;
    std::string dt_sweep_text, L_list_text, out_dir_text, interface_disp_text;
    bool dump_fields_flag = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value configuration file");
        cmd->add_flag("--sequential", sequential,
                      "run the two subproblems sequentially instead of concurrently");
        cmd->add_option("--out", out_dir_text, "output directory (default fsi-out)");
        cmd->add_option("--dt", doubles["dt"], "time step (default 0.01)");
        cmd->add_option("--T", doubles["T"], "final time (default 1)");
        cmd->add_option("--L1", doubles["L1"], "fluid Robin parameter (default 1)");
        cmd->add_option("--L2", doubles["L2"], "structure Robin parameter (default 1)");
        cmd->add_option("--nx", ints["nx"], "cells per direction and layer (default 16)");
        cmd->add_option("--ny", ints["ny"], "cells per layer in y (default 16)");
        cmd->add_option("--seed", ints["seed"], "seed for random smooth initial data (default 1)");
        cmd->add_flag("--dump-fields", dump_fields_flag, "write VTK field dumps");
    };

    CLI::App* mesh_info = app.add_subcommand("mesh-info", "print mesh counts and element areas");
    add_common(mesh_info);
    CLI::App* stability = app.add_subcommand(
        "stability", "unforced seeded run with the discrete energy inequality check");
    add_common(stability);
    CLI::App* run = app.add_subcommand("run", "plain unforced run with ledger output");
    add_common(run);
    CLI::App* converge = app.add_subcommand(
        "converge", "manufactured-solution temporal convergence study");
    add_common(converge);
    converge->add_option("--dt-sweep", dt_sweep_text,
                         "comma list of dt values (default 0.025,0.0125,0.00625,0.003125,0.0015625)");
    converge->add_option("--L-list", L_list_text, "comma list of Robin parameters (default 1)");
    CLI::App* ale_demo = app.add_subcommand("ale-demo",
                                            "adaptive mesh extension driven by an expression");
    add_common(ale_demo);
    ale_demo->add_option("--interface-disp", interface_disp_text,
                         "uniform:dx,dy (ramped in t) or sine:amp,periods (default sine:0.1,1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty())
            config = parse_config(read_file(config_path));
        CLI::App* cmd = app.get_subcommands().front();
        config.mode = cmd->get_name();

        if (cmd->count("--dt")) config.dt = doubles["dt"];
        if (cmd->count("--T")) config.T = doubles["T"];
        if (cmd->count("--L1")) config.L1 = doubles["L1"];
        if (cmd->count("--L2")) config.L2 = doubles["L2"];
        if (cmd->count("--nx")) config.nx = ints["nx"];
        if (cmd->count("--ny")) config.ny = ints["ny"];
        if (cmd->count("--seed")) config.seed = std::uint32_t(ints["seed"]);
        if (cmd->count("--out")) config.out_dir = out_dir_text;
        if (cmd->count("--dump-fields")) config.dump_fields = dump_fields_flag;
        if (converge->count("--dt-sweep"))
            config.dt_sweep = detail::parse_double_list(dt_sweep_text, "dt_sweep");
        if (converge->count("--L-list"))
            config.L_list = detail::parse_double_list(L_list_text, "L_list");
        if (ale_demo->count("--interface-disp"))
            config.interface_disp = interface_disp_text;
        validate(config);

        if (config.mode == "mesh-info")
            return cmd_mesh_info(config);
        if (config.mode == "stability")
            return cmd_stability(config, !sequential);
        if (config.mode == "run")
            return cmd_run(config, !sequential);
        if (config.mode == "converge")
            return cmd_converge(config, !sequential);
        if (config.mode == "ale-demo")
            return cmd_ale_demo(config);
        throw ParameterError("unknown mode " + config.mode);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
