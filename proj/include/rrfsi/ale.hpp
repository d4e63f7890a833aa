#pragma once

#include "rrfsi/fem.hpp"
#include "rrfsi/mesh.hpp"
#include "rrfsi/sparse.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace rrfsi {

/// Per-element stiffening coefficients: tau^e = (1 - A_min/A_max) * A_max / A^e.
/// Uniform meshes get tau = 0 everywhere; the smallest elements are stiffened
/// the most so they deform the least under mesh motion.
inline std::vector<double> compute_tau_m(const TriMesh& mesh) {
    const ElementAreaStats stats = element_area_stats(mesh);
    std::vector<double> tau(stats.per_element.size(), 0.0);
    // areas of congruent elements differ by rounding only; keep tau exactly
    // zero there instead of leaking 1-ulp noise into the coefficient
    if (stats.max_area - stats.min_area <= 1e-12 * stats.max_area)
        return tau;
    const double factor = (1.0 - stats.min_area / stats.max_area) * stats.max_area;
    for (size_t e = 0; e < tau.size(); ++e)
        tau[e] = factor / stats.per_element[e];
    return tau;
}

/// Adaptively stiffened harmonic extension of interface displacements into the
/// fluid mesh: div((1 + tau) grad eta_f) = 0 componentwise, with eta_f equal to
/// the interface data on Gamma and zero on the remaining boundary.
///
/// The extension operates on vertex (P1) displacements, which is what actually
/// moves the mesh; both components share one factorization.
class AleExtension {
public:
    explicit AleExtension(const TriMesh& mesh)
        : scalar_(mesh, 1, 1), vector_(mesh, 1, 2), tau_(compute_tau_m(mesh)),
          system_(assemble(FormKind::WeightedDiffusion, scalar_, scalar_,
                           {.per_element = tau_})) {
        std::vector<int> boundary;
        for (int n = 0; n < scalar_.n_scalar_nodes(); ++n)
            if (scalar_.node_tags(n) != 0)
                boundary.push_back(n);
        boundary_nodes_ = boundary;
        system_.set_dirichlet(boundary);
        system_.factorize();
    }

    const std::vector<double>& tau() const { return tau_; }
    const FESpace& space() const { return vector_; }

    Field extend(const std::function<Vec2(Vec2)>& interface_displacement) const {
        Eigen::VectorXd vx = Eigen::VectorXd::Zero(scalar_.n_dofs());
        Eigen::VectorXd vy = Eigen::VectorXd::Zero(scalar_.n_dofs());
        for (int n : boundary_nodes_) {
            // Interface data wins where the interface meets the outer boundary.
            if (scalar_.node_tags(n) & tag_bit(Boundary::Interface)) {
                const Vec2 d = interface_displacement(scalar_.node_coord(n));
                vx[n] = d.x;
                vy[n] = d.y;
            }
        }
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(scalar_.n_dofs());
        const Eigen::VectorXd x = system_.solve(zero, vx);
        const Eigen::VectorXd y = system_.solve(zero, vy);
        Field out = Field::zero(vector_);
        for (int n = 0; n < scalar_.n_scalar_nodes(); ++n) {
            out.values[vector_.dof_of(n, 0)] = x[n];
            out.values[vector_.dof_of(n, 1)] = y[n];
        }
        return out;
    }

    /// Variant with data prescribed on every boundary node (linear functions
    /// are discretely harmonic on a uniform mesh, which this exposes to tests).
    Field extend_with_boundary_data(const std::function<Vec2(Vec2)>& boundary_data) const {
        Eigen::VectorXd vx = Eigen::VectorXd::Zero(scalar_.n_dofs());
        Eigen::VectorXd vy = Eigen::VectorXd::Zero(scalar_.n_dofs());
        for (int n : boundary_nodes_) {
            const Vec2 d = boundary_data(scalar_.node_coord(n));
            vx[n] = d.x;
            vy[n] = d.y;
        }
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(scalar_.n_dofs());
        const Eigen::VectorXd x = system_.solve(zero, vx);
        const Eigen::VectorXd y = system_.solve(zero, vy);
        Field out = Field::zero(vector_);
        for (int n = 0; n < scalar_.n_scalar_nodes(); ++n) {
            out.values[vector_.dof_of(n, 0)] = x[n];
            out.values[vector_.dof_of(n, 1)] = y[n];
        }
        return out;
    }

    /// The constrained scalar operator (exposed for the maximum-principle check).
    const SparseSystem& scalar_system() const { return system_; }
    const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }

private:
    FESpace scalar_;
    FESpace vector_;
    std::vector<double> tau_;
    std::vector<int> boundary_nodes_;
    SparseSystem system_;
};

/// Backward-difference mesh velocity of an extension time series.
inline Field mesh_velocity(const Field& prev, const Field& next, double dt) {
    if (prev.space != next.space)
        throw ParameterError("mesh_velocity: fields on different spaces");
    return Field{next.space, (next.values - prev.values) / dt};
}

struct MeshQuality {
    double min_signed_area = 0.0;
    double worst_aspect = 0.0;  // longest edge over its altitude
};

/// Element quality of the displaced mesh. Negative areas are reported, not
/// thrown; they mean the displacement tangled the mesh.
inline MeshQuality mesh_quality_report(const TriMesh& mesh, const Field& displacement) {
    if (&displacement.space->mesh() != &mesh || displacement.space->components() != 2)
        throw ParameterError("mesh_quality_report: displacement is not a vector field on this mesh");
    const FESpace& space = *displacement.space;
    MeshQuality q;
    q.min_signed_area = std::numeric_limits<double>::infinity();
    for (const auto& tri : mesh.triangles) {
        Vec2 p[3];
        for (int i = 0; i < 3; ++i) {
            const int v = tri[size_t(i)];
            p[i] = mesh.vertices[size_t(v)] +
                   Vec2{displacement.values[space.dof_of(v, 0)],
                        displacement.values[space.dof_of(v, 1)]};
        }
        const double area =
            0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y));
        q.min_signed_area = std::min(q.min_signed_area, area);
        double lmax = 0.0;
        for (int i = 0; i < 3; ++i)
            lmax = std::max(lmax, norm(p[(i + 1) % 3] - p[i]));
        const double aspect = area > 0.0 ? lmax * lmax / (2.0 * area)
                                         : std::numeric_limits<double>::infinity();
        q.worst_aspect = std::max(q.worst_aspect, aspect);
    }
    return q;
}

} // namespace rrfsi
