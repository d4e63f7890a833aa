#pragma once

#include "rrfsi/coupling.hpp"
#include "rrfsi/fem.hpp"
#include "rrfsi/sparse.hpp"
#include "rrfsi/trace.hpp"

#include <functional>

namespace rrfsi {

struct StructureParams {
    double rho_s = 1.0;
    double mu_s = 1.0;
    double lambda_s = 1.0;
    double L2 = 1.0;
    double dt = 0.01;
};

/// One Backward-Euler linear-elastodynamics step with the Robin interface
/// term. The displacement update eta_new = eta_prev + dt * xi_new eliminates
/// eta from the solve, leaving one SPD system for the velocity xi:
///   [ (rho_s/dt) M + dt K + L2 M_Gamma ] xi = g + (rho_s/dt) M xi_prev
///                                             - K eta_prev + <r_s, .>_Gamma
class StructureStepSystem {
public:
    static constexpr std::uint8_t default_dirichlet = tag_bit(Boundary::StructureOuter);

    StructureStepSystem(const FESpace& displacement_space, const TraceSpace& trace,
                        StructureParams params,
                        std::uint8_t dirichlet_mask = default_dirichlet)
        : disp_(&displacement_space), trace_(&trace), params_(params),
          loads_(displacement_space),
          system_(build_matrix(displacement_space, trace, params)) {
        mass_ = assemble(FormKind::Mass, displacement_space, displacement_space);
        elasticity_ = assemble(FormKind::Elasticity, displacement_space, displacement_space,
                               {.mu = params.mu_s, .lambda = params.lambda_s});
        interface_mass_ = trace.scatter_mass(displacement_space);
        system_.set_dirichlet(disp_->dofs_with_tag(dirichlet_mask));
        system_.factorize();
    }

    struct Result {
        Field xi;
        Field eta;
        double residual = 0.0;
    };

    Result step(const Field& eta_prev, const Field& xi_prev,
                const Eigen::VectorXd& robin_rhs,
                const std::function<Vec2(Vec2, double)>& body_force,
                const std::function<Vec2(Vec2, double)>& dirichlet_velocity,
                double t_next) const {
        if (eta_prev.space != disp_ || xi_prev.space != disp_)
            throw ParameterError("structure_step: previous fields not on the structure space");
        if (robin_rhs.size() != trace_->n_dofs())
            throw ParameterError("structure_step: robin_rhs is not on the interface trace space");

        Eigen::VectorXd rhs = (params_.rho_s / params_.dt) * (mass_ * xi_prev.values) -
                              elasticity_ * eta_prev.values;
        loads_.add_vector_load(body_force, t_next, rhs);
        trace_->add_load(robin_rhs, *disp_, rhs);

        Eigen::VectorXd values = Eigen::VectorXd::Zero(disp_->n_dofs());
        if (dirichlet_velocity)
            for (int dof : system_.dirichlet_dofs()) {
                const Vec2 g = dirichlet_velocity(disp_->dof_coord(dof), t_next);
                values[dof] = disp_->dof_component(dof) == 0 ? g.x : g.y;
            }

        Result r;
        r.xi = Field{disp_, system_.solve(rhs, values)};
        r.eta = Field{disp_, eta_prev.values + params_.dt * r.xi.values};
        r.residual = system_.residual(r.xi.values, system_.constrained_rhs(rhs, values));
        return r;
    }

    const StructureParams& params() const { return params_; }
    const SparseSystem& system() const { return system_; }
    const SpMat& mass() const { return mass_; }
    const SpMat& elasticity() const { return elasticity_; }
    const SpMat& interface_mass() const { return interface_mass_; }
    const FESpace& displacement_space() const { return *disp_; }
    const TraceSpace& trace() const { return *trace_; }

private:
    static SpMat build_matrix(const FESpace& disp, const TraceSpace& trace,
                              const StructureParams& p) {
        if (disp.degree() != 2 || disp.components() != 2)
            throw ParameterError("StructureStepSystem: displacement space must be vector P2");
        const SpMat M = assemble(FormKind::Mass, disp, disp);
        const SpMat K = assemble(FormKind::Elasticity, disp, disp,
                                 {.mu = p.mu_s, .lambda = p.lambda_s});
        const SpMat MG = trace.scatter_mass(disp);
        SpMat A = (p.rho_s / p.dt) * M + p.dt * K + p.L2 * MG;
        return A;
    }

    const FESpace* disp_;
    const TraceSpace* trace_;
    StructureParams params_;
    LoadTable loads_;
    SparseSystem system_;
    SpMat mass_;
    SpMat elasticity_;
    SpMat interface_mass_;
};

} // namespace rrfsi
