#pragma once

#include "rrfsi/coupling.hpp"
#include "rrfsi/fem.hpp"
#include "rrfsi/sparse.hpp"
#include "rrfsi/trace.hpp"

#include <functional>
#include <utility>

namespace rrfsi {

struct FluidParams {
    double rho_f = 1.0;
    double mu_f = 1.0;
    double L1 = 1.0;
    double dt = 0.01;
};

/// One Backward-Euler Stokes step with the Robin interface term. The coupled
/// saddle-point operator is assembled and factorized once; every step reuses
/// the factorization with a fresh right-hand side.
///
/// Unknown layout: x = [velocity dofs; pressure dofs]. The operator is kept
/// symmetric by negating the continuity rows:
///   [ (rho/dt) M + 2 mu D:D + L1 M_Gamma   -B^T ] [u]   [ b_u ]
///   [ -B                                     0  ] [p] = [ -b_p ]
class FluidStepSystem {
public:
    /// All external fluid boundaries are Dirichlet by default; the interface
    /// stays natural (that is where the Robin term lives).
    static constexpr std::uint8_t default_dirichlet =
        std::uint8_t(tag_bit(Boundary::Inlet) | tag_bit(Boundary::Outlet) |
                     tag_bit(Boundary::Wall));

    FluidStepSystem(const FESpace& velocity_space, const FESpace& pressure_space,
                    const TraceSpace& trace, FluidParams params,
                    std::uint8_t dirichlet_mask = default_dirichlet)
        : vel_(&velocity_space), pres_(&pressure_space), trace_(&trace), params_(params),
          loads_(velocity_space), pressure_loads_(pressure_space),
          system_(build_matrix(velocity_space, pressure_space, trace, params)) {
        mass_ = assemble(FormKind::Mass, velocity_space, velocity_space);
        viscous_ = assemble(FormKind::Viscous, velocity_space, velocity_space,
                            {.mu = params.mu_f});
        divergence_ = assemble(FormKind::Divergence, velocity_space, pressure_space);
        interface_mass_ = trace.scatter_mass(velocity_space);

        system_.set_dirichlet(vel_->dofs_with_tag(dirichlet_mask));
        system_.factorize();
    }

    struct Result {
        Field u;
        Field p;
        double residual = 0.0;
    };

    Result step(const Field& u_prev, const Eigen::VectorXd& robin_rhs,
                const std::function<Vec2(Vec2, double)>& body_force,
                const std::function<double(Vec2, double)>& mass_source,
                const std::function<Vec2(Vec2, double)>& dirichlet_velocity,
                double t_next) const {
        if (u_prev.space != vel_)
            throw ParameterError("fluid_step: u_prev is not on the fluid velocity space");
        if (robin_rhs.size() != trace_->n_dofs())
            throw ParameterError("fluid_step: robin_rhs is not on the interface trace space");

        const int nu = vel_->n_dofs();
        const int np = pres_->n_dofs();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np);

        // (rho/dt)(u_prev, v)
        rhs.head(nu) = (params_.rho_f / params_.dt) * (mass_ * u_prev.values);
        // (f, v)
        {
            Eigen::VectorXd bu = Eigen::VectorXd::Zero(nu);
            loads_.add_vector_load(body_force, t_next, bu);
            rhs.head(nu) += bu;
        }
        // <robin_rhs, v>_Gamma
        {
            Eigen::VectorXd bu = Eigen::VectorXd::Zero(nu);
            trace_->add_load(robin_rhs, *vel_, bu);
            rhs.head(nu) += bu;
        }
        // -(f_m, q): continuity rows carry the negated sign of the symmetric form
        {
            Eigen::VectorXd bp = Eigen::VectorXd::Zero(np);
            pressure_loads_.add_scalar_load(mass_source, t_next, -1.0, bp);
            rhs.tail(np) = bp;
        }

        Eigen::VectorXd values = Eigen::VectorXd::Zero(nu + np);
        if (dirichlet_velocity)
            for (int dof : system_.dirichlet_dofs()) {
                const Vec2 g = dirichlet_velocity(vel_->dof_coord(dof), t_next);
                values[dof] = vel_->dof_component(dof) == 0 ? g.x : g.y;
            }

        const Eigen::VectorXd x = system_.solve(rhs, values);

        Result r;
        r.u = Field{vel_, x.head(nu)};
        r.p = Field{pres_, x.tail(np)};
        r.residual = system_.residual(x, system_.constrained_rhs(rhs, values));
        return r;
    }

    const FluidParams& params() const { return params_; }
    const SparseSystem& system() const { return system_; }
    const SpMat& velocity_mass() const { return mass_; }
    const SpMat& viscous() const { return viscous_; }
    const SpMat& divergence() const { return divergence_; }
    const SpMat& interface_mass() const { return interface_mass_; }
    const FESpace& velocity_space() const { return *vel_; }
    const FESpace& pressure_space() const { return *pres_; }
    const TraceSpace& trace() const { return *trace_; }

private:
    static SpMat build_matrix(const FESpace& vel, const FESpace& pres, const TraceSpace& trace,
                              const FluidParams& p) {
        if (vel.degree() != 2 || vel.components() != 2)
            throw ParameterError("FluidStepSystem: velocity space must be vector P2");
        if (pres.degree() != 1 || pres.components() != 1)
            throw ParameterError("FluidStepSystem: pressure space must be scalar P1");
        const SpMat M = assemble(FormKind::Mass, vel, vel);
        const SpMat K = assemble(FormKind::Viscous, vel, vel, {.mu = p.mu_f});
        const SpMat B = assemble(FormKind::Divergence, vel, pres);
        const SpMat MG = trace.scatter_mass(vel);
        const SpMat Auu = (p.rho_f / p.dt) * M + K + p.L1 * MG;

        const int nu = vel.n_dofs();
        const int np = pres.n_dofs();
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(size_t(Auu.nonZeros()) + 2 * size_t(B.nonZeros()));
        for (int k = 0; k < Auu.outerSize(); ++k)
            for (SpMat::InnerIterator it(Auu, k); it; ++it)
                trip.emplace_back(int(it.row()), int(it.col()), it.value());
        for (int k = 0; k < B.outerSize(); ++k)
            for (SpMat::InnerIterator it(B, k); it; ++it) {
                trip.emplace_back(nu + int(it.row()), int(it.col()), -it.value());
                trip.emplace_back(int(it.col()), nu + int(it.row()), -it.value());
            }
        SpMat A(nu + np, nu + np);
        A.setFromTriplets(trip.begin(), trip.end());
        return A;
    }

    const FESpace* vel_;
    const FESpace* pres_;
    const TraceSpace* trace_;
    FluidParams params_;
    LoadTable loads_;
    LoadTable pressure_loads_;
    SparseSystem system_;
    SpMat mass_;
    SpMat viscous_;
    SpMat divergence_;
    SpMat interface_mass_;
};

} // namespace rrfsi
