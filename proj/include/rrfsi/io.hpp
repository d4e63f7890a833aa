#pragma once

#include "rrfsi/fem.hpp"
#include "rrfsi/harness.hpp"
#include "rrfsi/mesh.hpp"
#include "rrfsi/orchestrator.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace rrfsi {

/// One run description; defaults match the documented stability setup.
struct RunConfig {
    std::string mode = "stability";  // converge | stability | run | ale-demo | mesh-info
    Rect fluid_rect{0.0, 0.0, 1.0, 1.0};
    Rect structure_rect{0.0, -1.0, 1.0, 0.0};
    int nx = 16;
    int ny = 16;
    double dt = 0.01;
    double T = 1.0;
    double L1 = 1.0;
    double L2 = 1.0;
    double rho_f = 1.0;
    double mu_f = 1.0;
    double rho_s = 1.0;
    double mu_s = 1.0;
    double lambda_s = 1.0;
    std::uint32_t seed = 1;
    std::string out_dir = "fsi-out";
    bool dump_fields = false;
    std::vector<double> dt_sweep = {0.1 / 4, 0.1 / 8, 0.1 / 16, 0.1 / 32, 0.1 / 64};
    std::vector<double> L_list = {1.0};
    std::string interface_disp = "sine:0.1,1";  // ale-demo expression
};

inline void validate(const RunConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw ParameterError(std::string("config: ") + name + " must be positive, got " +
                                 std::to_string(v));
    };
    positive(c.dt, "dt");
    positive(c.L1, "L1");
    positive(c.L2, "L2");
    positive(c.rho_f, "rho_f");
    positive(c.mu_f, "mu_f");
    positive(c.rho_s, "rho_s");
    positive(c.mu_s, "mu_s");
    positive(c.lambda_s, "lambda_s");
    if (c.nx < 1 || c.ny < 1)
        throw ParameterError("config: nx and ny must be >= 1");
    if (c.T < 0.0)
        throw ParameterError("config: T must be nonnegative");
    if (c.T > 0.0 && c.dt > c.T)
        throw ParameterError("config: dt must not exceed T");
    if (c.mode != "converge" && c.mode != "stability" && c.mode != "run" &&
        c.mode != "ale-demo" && c.mode != "mesh-info")
        throw ParameterError("config: unknown mode '" + c.mode + "'");
    for (double d : c.dt_sweep)
        positive(d, "dt_sweep entry");
    for (double l : c.L_list)
        positive(l, "L_list entry");
}

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            const double v = std::stod(item, &pos);
            while (pos < item.size() && std::isspace((unsigned char)item[pos]))
                ++pos;
            if (pos != item.size())
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParameterError("config: bad number '" + item + "' in key " + key);
        }
    }
    if (out.empty())
        throw ParameterError("config: empty list for key " + key);
    return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw ParameterError("config: bad boolean '" + v + "' for key " + key);
}

} // namespace detail

/// Parse a key = value document (lines, # comments). Unknown keys are
/// rejected by name; the result is validated.
inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config: line " + std::to_string(lineno) +
                                 " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        auto as_double = [&](double& dst) {
            try {
                dst = std::stod(value);
            } catch (const std::exception&) {
                throw ParameterError("config: bad number '" + value + "' for key " + key);
            }
        };
        auto as_int = [&](int& dst) {
            try {
                dst = std::stoi(value);
            } catch (const std::exception&) {
                throw ParameterError("config: bad integer '" + value + "' for key " + key);
            }
        };

        if (key == "mode") c.mode = value;
        else if (key == "nx") as_int(c.nx);
        else if (key == "ny") as_int(c.ny);
        else if (key == "dt") as_double(c.dt);
        else if (key == "T") as_double(c.T);
        else if (key == "L1") as_double(c.L1);
        else if (key == "L2") as_double(c.L2);
        else if (key == "rho_f") as_double(c.rho_f);
        else if (key == "mu_f") as_double(c.mu_f);
        else if (key == "rho_s") as_double(c.rho_s);
        else if (key == "mu_s") as_double(c.mu_s);
        else if (key == "lambda_s") as_double(c.lambda_s);
        else if (key == "seed") { int s = 0; as_int(s); c.seed = std::uint32_t(s); }
        else if (key == "out_dir") c.out_dir = value;
        else if (key == "dump_fields") c.dump_fields = detail::parse_bool(value, key);
        else if (key == "dt_sweep") c.dt_sweep = detail::parse_double_list(value, key);
        else if (key == "L_list") c.L_list = detail::parse_double_list(value, key);
        else if (key == "interface_disp") c.interface_disp = value;
        else if (key == "fluid_rect") {
            const auto v = detail::parse_double_list(value, key);
            if (v.size() != 4) throw ParameterError("config: fluid_rect needs x0,y0,x1,y1");
            c.fluid_rect = {v[0], v[1], v[2], v[3]};
        } else if (key == "structure_rect") {
            const auto v = detail::parse_double_list(value, key);
            if (v.size() != 4) throw ParameterError("config: structure_rect needs x0,y0,x1,y1");
            c.structure_rect = {v[0], v[1], v[2], v[3]};
        } else {
            throw ParameterError("config: unknown key '" + key + "'");
        }
    }
    validate(c);
    return c;
}

/// 17-significant-digit formatting: values written to CSV parse back to the
/// identical double.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_ledger_csv(const std::string& path, const std::vector<EnergyRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_ledger_csv: cannot open " + path);
    out << "step,t,E,D,I,running_sum,bound_E0_plus_I0,u_minus_xi_gamma_norm,"
           "F_gamma_norm,S_gamma_norm\n";
    for (const EnergyRow& r : rows)
        out << r.step << ',' << format_g17(r.t) << ',' << format_g17(r.E) << ','
            << format_g17(r.D) << ',' << format_g17(r.I) << ',' << format_g17(r.running_sum)
            << ',' << format_g17(r.bound) << ',' << format_g17(r.u_minus_xi_gamma) << ','
            << format_g17(r.F_gamma) << ',' << format_g17(r.S_gamma) << '\n';
    if (!out)
        throw IoError("write_ledger_csv: write failed for " + path);
}

inline void write_errors_csv(const std::string& path, const std::vector<ErrorReport>& reports) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_errors_csv: cannot open " + path);
    out << "L,dt,e_u,e_eta,e_xi,e_E\n";
    for (const ErrorReport& rep : reports)
        for (const ConvergenceRow& r : rep.rows)
            out << format_g17(rep.L) << ',' << format_g17(r.dt) << ',' << format_g17(r.e_u)
                << ',' << format_g17(r.e_eta) << ',' << format_g17(r.e_xi) << ','
                << format_g17(r.e_E) << '\n';
    if (!out)
        throw IoError("write_errors_csv: write failed for " + path);
}

inline void write_slopes_csv(const std::string& path, const std::vector<ErrorReport>& reports) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_slopes_csv: cannot open " + path);
    out << "L,slope_e_u,slope_e_eta,slope_e_xi,slope_e_E\n";
    for (const ErrorReport& rep : reports)
        out << format_g17(rep.L) << ',' << format_g17(rep.slope_e_u) << ','
            << format_g17(rep.slope_e_eta) << ',' << format_g17(rep.slope_e_xi) << ','
            << format_g17(rep.slope_e_E) << '\n';
    if (!out)
        throw IoError("write_slopes_csv: write failed for " + path);
}

/// Wall-clock per-subproblem timings (not part of the deterministic outputs).
inline void write_timings_csv(const std::string& path,
                              const std::vector<StepDiagnostics>& diags) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_timings_csv: cannot open " + path);
    out << "step,fluid_seconds,structure_seconds,step_seconds\n";
    for (size_t i = 0; i < diags.size(); ++i)
        out << (i + 1) << ',' << format_g17(diags[i].fluid_seconds) << ','
            << format_g17(diags[i].structure_seconds) << ','
            << format_g17(diags[i].step_seconds) << '\n';
}

/// Legacy VTK ASCII dump of a triangulation with optional vertex point data.
/// P2 fields are written at vertices (edge-midpoint values are not dumped).
inline void write_vtk(const std::string& path, const TriMesh& mesh,
                      const std::vector<std::pair<std::string, const Field*>>& fields = {}) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_vtk: cannot open " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "rrfsi mesh\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const Vec2& v : mesh.vertices)
        out << format_g17(v.x) << ' ' << format_g17(v.y) << " 0\n";
    out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
    for (const auto& t : mesh.triangles)
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << mesh.n_triangles() << '\n';
    for (int t = 0; t < mesh.n_triangles(); ++t)
        out << "5\n";
    if (!fields.empty()) {
        out << "POINT_DATA " << mesh.n_vertices() << '\n';
        for (const auto& [name, field] : fields) {
            // vertex count match suffices: displaced copies of a mesh share numbering
            if (field->space->mesh().n_vertices() != mesh.n_vertices())
                throw ParameterError("write_vtk: field '" + name + "' is not on this mesh");
            if (field->space->components() == 2) {
                out << "VECTORS " << name << " double\n";
                for (int v = 0; v < mesh.n_vertices(); ++v)
                    out << format_g17(field->values[field->space->dof_of(v, 0)]) << ' '
                        << format_g17(field->values[field->space->dof_of(v, 1)]) << " 0\n";
            } else {
                out << "SCALARS " << name << " double 1\n";
                out << "LOOKUP_TABLE default\n";
                for (int v = 0; v < mesh.n_vertices(); ++v)
                    out << format_g17(field->values[v]) << '\n';
            }
        }
    }
    if (!out)
        throw IoError("write_vtk: write failed for " + path);
}

} // namespace rrfsi
