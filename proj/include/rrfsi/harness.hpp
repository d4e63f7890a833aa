#pragma once

#include "rrfsi/manufactured.hpp"
#include "rrfsi/orchestrator.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace rrfsi {

/// || u_h - u_exact ||_L2 by element quadrature.
inline double l2_error(const Field& f, const std::function<Vec2(Vec2, double)>& exact,
                       double t) {
    const FESpace& space = *f.space;
    double acc = 0.0;
    for (int e = 0; e < space.mesh().n_triangles(); ++e) {
        const ElementData ed = element_data(space, e);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * ed.area;
            Vec2 uh{0.0, 0.0};
            for (int i = 0; i < ed.n_loc; ++i) {
                uh.x += ed.N[q][i] * f.values[space.dof_of(ed.nodes[size_t(i)], 0)];
                uh.y += ed.N[q][i] * f.values[space.dof_of(ed.nodes[size_t(i)], 1)];
            }
            const Vec2 d = uh - exact(ed.xq[q], t);
            acc += w * dot(d, d);
        }
    }
    return std::sqrt(acc);
}

/// Gradient of a 2-vector field, row = component, column = direction.
struct Grad2 {
    double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;
};

/// || eta_h - eta_exact ||_E, the elastic energy norm of the difference.
inline double energy_error(const Field& f, const std::function<Grad2(Vec2, double)>& exact_grad,
                           double t, double mu, double lambda) {
    const FESpace& space = *f.space;
    double acc = 0.0;
    for (int e = 0; e < space.mesh().n_triangles(); ++e) {
        const ElementData ed = element_data(space, e);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * ed.area;
            Grad2 g;
            for (int i = 0; i < ed.n_loc; ++i) {
                const double ux = f.values[space.dof_of(ed.nodes[size_t(i)], 0)];
                const double uy = f.values[space.dof_of(ed.nodes[size_t(i)], 1)];
                g.xx += ed.G[q][i][0] * ux;
                g.xy += ed.G[q][i][1] * ux;
                g.yx += ed.G[q][i][0] * uy;
                g.yy += ed.G[q][i][1] * uy;
            }
            const Grad2 ge = exact_grad(ed.xq[q], t);
            const double dxx = g.xx - ge.xx;
            const double dxy = g.xy - ge.xy;
            const double dyx = g.yx - ge.yx;
            const double dyy = g.yy - ge.yy;
            const double d12 = 0.5 * (dxy + dyx);
            const double dd = dxx * dxx + dyy * dyy + 2.0 * d12 * d12;
            const double div = dxx + dyy;
            acc += w * (2.0 * mu * dd + lambda * div * div);
        }
    }
    return std::sqrt(acc);
}

/// Gradient of the manufactured displacement via the autodiff route.
inline Grad2 manufactured_displacement_gradient(const ManufacturedCase&, Vec2 x, double t) {
    const auto v = manufactured_fields::displacement(Dual2::variable(x.x, 0),
                                                     Dual2::variable(x.y, 1),
                                                     Dual2::variable(t, 2));
    return {v.x.g[0], v.x.g[1], v.y.g[0], v.y.g[1]};
}

/// Forcing and exact-Dirichlet providers of the manufactured experiment.
inline ProblemData manufactured_problem_data(const ManufacturedCase& mcase) {
    ProblemData data;
    data.fluid_body_force = [mcase](Vec2 x, double t) { return mcase.fluid_body_force(x, t); };
    data.mass_source = [mcase](Vec2 x, double t) { return mcase.mass_source(x, t); };
    data.structure_body_force = [mcase](Vec2 x, double t) {
        return mcase.structure_body_force(x, t);
    };
    data.fluid_dirichlet = [mcase](Vec2 x, double t) { return mcase.velocity(x, t); };
    data.structure_dirichlet = [mcase](Vec2 x, double t) {
        return mcase.structure_velocity(x, t);
    };
    return data;
}

/// Exact initial fields plus exact initial interface tractions at t0.
inline SimState manufactured_initial_state(const Problem& problem,
                                           const ManufacturedCase& mcase, double t0 = 0.0) {
    SimState s = zero_state(problem);
    s.time = t0;
    s.u = interpolate(std::function<Vec2(Vec2, double)>(
                          [&](Vec2 x, double t) { return mcase.velocity(x, t); }),
                      problem.velocity_space(), t0);
    s.p = interpolate(std::function<double(Vec2, double)>(
                          [&](Vec2 x, double t) { return mcase.pressure(x, t); }),
                      problem.pressure_space(), t0);
    s.eta = interpolate(std::function<Vec2(Vec2, double)>(
                            [&](Vec2 x, double t) { return mcase.displacement(x, t); }),
                        problem.displacement_space(), t0);
    s.xi = interpolate(std::function<Vec2(Vec2, double)>(
                           [&](Vec2 x, double t) { return mcase.structure_velocity(x, t); }),
                       problem.displacement_space(), t0);
    const Vec2 n_f = problem.mesh().interface_edges.empty()
                         ? Vec2{0.0, -1.0}
                         : problem.mesh().interface_edges[0].n_f;
    s.ledger.u_trace = problem.trace().gather(s.u);
    s.ledger.xi_trace = problem.trace().gather(s.xi);
    s.ledger.F = problem.trace().interpolate(
        [&](Vec2 x, double t) { return mcase.fluid_traction(x, t, n_f); }, t0);
    s.ledger.S = problem.trace().interpolate(
        [&](Vec2 x, double t) { return mcase.structure_traction(x, t, n_f); }, t0);
    return s;
}

/// Smooth seeded initial data for stability runs: random low-frequency modes
/// that vanish on the external Dirichlet boundaries and are free on the
/// interface. Coefficients come raw from mt19937 (a = 2 u/2^32 - 1 in draw
/// order component-major, then k, then l), so a seed fully determines the run.
class SmoothRandomField {
public:
    SmoothRandomField(const Rect& rect, bool interface_at_bottom, std::uint32_t seed) {
        std::mt19937 rng(seed);
        for (auto& row : coeff_)
            for (auto& c : row)
                c = 2.0 * (double(rng()) / 4294967295.0) - 1.0;
        rect_ = rect;
        interface_at_bottom_ = interface_at_bottom;
    }

    Vec2 operator()(Vec2 p) const {
        const double xh = (p.x - rect_.x0) / rect_.width();
        // normalized wall distance: 0 on the interface, 1 on the opposite wall
        const double yh = interface_at_bottom_ ? (p.y - rect_.y0) / rect_.height()
                                               : (rect_.y1 - p.y) / rect_.height();
        Vec2 v{0.0, 0.0};
        constexpr double pi = std::numbers::pi;
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 3; ++l) {
                const double mode = std::sin(k * pi * xh) * std::cos((2 * l - 1) * pi * yh / 2.0);
                const int idx = (k - 1) * 3 + (l - 1);
                v.x += coeff_[0][size_t(idx)] * mode;
                v.y += coeff_[1][size_t(idx)] * mode;
            }
        return v;
    }

private:
    std::array<std::array<double, 9>, 2> coeff_{};
    Rect rect_;
    bool interface_at_bottom_ = true;
};

/// Seeded random initial data: u0 and xi0 smooth and nonzero on the interface,
/// eta0 = 0, F0 = S0 = 0.
inline SimState random_initial_state(const Problem& problem, std::uint32_t seed) {
    SimState s = zero_state(problem);
    const SmoothRandomField fluid_modes(problem.mesh().fluid_rect, true, seed);
    const SmoothRandomField structure_modes(problem.mesh().structure_rect, false, seed + 1);
    s.u = interpolate(std::function<Vec2(Vec2, double)>(
                          [&](Vec2 x, double) { return fluid_modes(x); }),
                      problem.velocity_space(), 0.0);
    s.xi = interpolate(std::function<Vec2(Vec2, double)>(
                           [&](Vec2 x, double) { return structure_modes(x); }),
                       problem.displacement_space(), 0.0);
    s.ledger.u_trace = problem.trace().gather(s.u);
    s.ledger.xi_trace = problem.trace().gather(s.xi);
    return s;
}

/// Least-squares slope of log(err) against log(dt); NaN for degenerate sweeps.
inline double fit_slope(const std::vector<double>& dts, const std::vector<double>& errs) {
    const int n = int(dts.size());
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(dts[size_t(i)]);
        const double y = std::log(std::max(errs[size_t(i)], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-30)
        return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

struct ConvergenceRow {
    double dt = 0.0;
    double e_u = 0.0;
    double e_eta = 0.0;
    double e_xi = 0.0;
    double e_E = 0.0;
};

struct ErrorReport {
    double L = 1.0;
    std::vector<ConvergenceRow> rows;
    double slope_e_u = 0.0;
    double slope_e_eta = 0.0;
    double slope_e_xi = 0.0;
    double slope_e_E = 0.0;
    double max_interface_identity_residual = 0.0;
    std::vector<std::string> warnings;
};

struct StudyDomain {
    Rect fluid_rect{0.0, 0.0, 1.0, 1.0};
    Rect structure_rect{0.0, -1.0, 1.0, 0.0};
};

/// Temporal convergence sweep of the manufactured experiment: exact initial
/// data and tractions, exact Dirichlet data on all external boundaries,
/// forcing from the differentiation oracle; errors measured at T.
inline ErrorReport convergence_study(int nx, const std::vector<double>& dt_list, double L,
                                     double T, bool parallel = false,
                                     const StudyDomain& domain = {}) {
    if (dt_list.empty())
        throw ParameterError("convergence_study: empty dt list");
    for (size_t i = 1; i < dt_list.size(); ++i)
        if (dt_list[i] > dt_list[i - 1])
            throw ParameterError("convergence_study: dt list must be descending");

    const ManufacturedCase mcase;
    const ProblemData data = manufactured_problem_data(mcase);

    ErrorReport report;
    report.L = L;
    for (double dt : dt_list) {
        const double ratio = T / dt;
        const long n_steps = std::lround(ratio);
        if (n_steps < 1 || std::abs(ratio - double(n_steps)) > 1e-9 * std::max(1.0, ratio))
            throw ParameterError("convergence_study: T = " + std::to_string(T) +
                                 " is not an integer multiple of dt = " + std::to_string(dt));

        SchemeParams params;
        params.L1 = params.L2 = L;
        params.dt = dt;
        auto problem = Problem::create(
            build_layered_rect_mesh(domain.fluid_rect, domain.structure_rect, nx, nx), params);
        RunResult run = run_simulation(*problem, data,
                                       manufactured_initial_state(*problem, mcase), int(n_steps),
                                       parallel);
        report.max_interface_identity_residual =
            std::max(report.max_interface_identity_residual,
                     run.max_interface_identity_residual);

        ConvergenceRow row;
        row.dt = dt;
        row.e_u = l2_error(run.state.u,
                           [&](Vec2 x, double t) { return mcase.velocity(x, t); }, T);
        row.e_eta = l2_error(run.state.eta,
                             [&](Vec2 x, double t) { return mcase.displacement(x, t); }, T);
        row.e_xi = l2_error(run.state.xi,
                            [&](Vec2 x, double t) { return mcase.structure_velocity(x, t); }, T);
        row.e_E = energy_error(
            run.state.eta,
            [&](Vec2 x, double t) { return manufactured_displacement_gradient(mcase, x, t); },
            T, 1.0, 1.0);
        report.rows.push_back(row);
    }

    std::vector<double> dts, eu, eeta, exi, eE;
    for (const auto& r : report.rows) {
        dts.push_back(r.dt);
        eu.push_back(r.e_u);
        eeta.push_back(r.e_eta);
        exi.push_back(r.e_xi);
        eE.push_back(r.e_E);
    }
    report.slope_e_u = fit_slope(dts, eu);
    report.slope_e_eta = fit_slope(dts, eeta);
    report.slope_e_xi = fit_slope(dts, exi);
    report.slope_e_E = fit_slope(dts, eE);
    if (std::isnan(report.slope_e_u))
        report.warnings.push_back("slope undefined: dt sweep is degenerate");
    return report;
}

struct StabilityResult {
    std::unique_ptr<Problem> problem;  // keeps the final state's spaces alive
    RunResult run;
    bool pass = false;  // the partial-sum energy inequality at every step
};

/// Unforced homogeneous-Dirichlet run from seeded random smooth initial data;
/// PASS iff the discrete energy inequality holds at every step.
inline StabilityResult stability_study(int nx, double dt, double L1, double L2, int steps,
                                       std::uint32_t seed, bool parallel = false,
                                       const StudyDomain& domain = {}) {
    SchemeParams params;
    params.L1 = L1;
    params.L2 = L2;
    params.dt = dt;
    StabilityResult result;
    result.problem = Problem::create(
        build_layered_rect_mesh(domain.fluid_rect, domain.structure_rect, nx, nx), params);
    const ProblemData unforced;  // zero forcing, homogeneous Dirichlet
    result.run = run_simulation(*result.problem, unforced,
                                random_initial_state(*result.problem, seed), steps, parallel);
    result.pass = result.run.inequality_checked && result.run.inequality_holds;
    return result;
}

} // namespace rrfsi
