#pragma once

#include "rrfsi/fem.hpp"
#include "rrfsi/mesh.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <vector>

namespace rrfsi {

/// The shared P2 interface trace space. Each trace node is geometrically one
/// point of the interface with a fluid-side and a structure-side scalar node;
/// trace fields interleave the two components per node.
class TraceSpace {
public:
    struct Node {
        Vec2 xy;
        int fluid_node = -1;
        int structure_node = -1;
    };

    TraceSpace(const CoupledMesh& mesh, const FESpace& fluid_space,
               const FESpace& structure_space)
        : fluid_space_(&fluid_space), structure_space_(&structure_space) {
        if (fluid_space.degree() != 2 || structure_space.degree() != 2 ||
            fluid_space.components() != 2 || structure_space.components() != 2)
            throw ParameterError("TraceSpace: expects P2 vector spaces on both sides");
        for (const auto& [fv, sv] : mesh.interface_pairs)
            push_node(fv, sv);
        const int n_vertex_nodes = int(nodes_.size());
        std::vector<int> mid_of_edge;
        mid_of_edge.reserve(mesh.interface_edges.size());
        for (const auto& ie : mesh.interface_edges) {
            const int f_mid = fluid_space.boundary_edge_nodes({ie.fluid_a, ie.fluid_b,
                                                               Boundary::Interface})[2];
            const int s_mid = structure_space.boundary_edge_nodes(
                {ie.structure_a, ie.structure_b, Boundary::Interface})[2];
            mid_of_edge.push_back(int(nodes_.size()));
            push_node_by_id(f_mid, s_mid);
        }
        // One segment per interface edge: (end, end, midpoint) trace indices.
        for (size_t k = 0; k < mesh.interface_edges.size(); ++k) {
            const auto& ie = mesh.interface_edges[k];
            segments_.push_back({trace_index_of_fluid_vertex(mesh, ie.fluid_a, n_vertex_nodes),
                                 trace_index_of_fluid_vertex(mesh, ie.fluid_b, n_vertex_nodes),
                                 mid_of_edge[k]});
        }
        build_mass();
    }

    int n_nodes() const { return int(nodes_.size()); }
    int n_dofs() const { return 2 * n_nodes(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::array<int, 3>>& segments() const { return segments_; }
    const SpMat& mass() const { return mass_; }

    Eigen::VectorXd zero() const { return Eigen::VectorXd::Zero(n_dofs()); }

    /// Restrict a volume field to its interface trace dofs.
    Eigen::VectorXd gather(const Field& f) const {
        const bool from_fluid = f.space == fluid_space_;
        if (!from_fluid && f.space != structure_space_)
            throw ParameterError("TraceSpace::gather: field space is not an interface side");
        Eigen::VectorXd r(n_dofs());
        for (int k = 0; k < n_nodes(); ++k) {
            const int node = from_fluid ? nodes_[size_t(k)].fluid_node
                                        : nodes_[size_t(k)].structure_node;
            r[2 * k + 0] = f.values[f.space->dof_of(node, 0)];
            r[2 * k + 1] = f.values[f.space->dof_of(node, 1)];
        }
        return r;
    }

    /// Add the interface load <r, v>_Gamma to a volume right-hand side.
    void add_load(const Eigen::VectorXd& trace_values, const FESpace& space,
                  Eigen::VectorXd& rhs) const {
        const Eigen::VectorXd load = mass_ * trace_values;
        const bool to_fluid = &space == fluid_space_;
        if (!to_fluid && &space != structure_space_)
            throw ParameterError("TraceSpace::add_load: space is not an interface side");
        for (int k = 0; k < n_nodes(); ++k) {
            const int node = to_fluid ? nodes_[size_t(k)].fluid_node
                                      : nodes_[size_t(k)].structure_node;
            rhs[space.dof_of(node, 0)] += load[2 * k + 0];
            rhs[space.dof_of(node, 1)] += load[2 * k + 1];
        }
    }

    /// Interface mass matrix scattered into the dof numbering of one side,
    /// i.e. the <u, v>_Gamma operator on that volume space.
    SpMat scatter_mass(const FESpace& space) const {
        const bool to_fluid = &space == fluid_space_;
        if (!to_fluid && &space != structure_space_)
            throw ParameterError("TraceSpace::scatter_mass: space is not an interface side");
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < mass_.outerSize(); ++k) {
            for (SpMat::InnerIterator it(mass_, k); it; ++it) {
                const int ni = int(it.row()) / 2, ci = int(it.row()) % 2;
                const int nj = int(it.col()) / 2, cj = int(it.col()) % 2;
                const int vi = to_fluid ? nodes_[size_t(ni)].fluid_node
                                        : nodes_[size_t(ni)].structure_node;
                const int vj = to_fluid ? nodes_[size_t(nj)].fluid_node
                                        : nodes_[size_t(nj)].structure_node;
                trip.emplace_back(space.dof_of(vi, ci), space.dof_of(vj, cj), it.value());
            }
        }
        SpMat A(space.n_dofs(), space.n_dofs());
        A.setFromTriplets(trip.begin(), trip.end());
        return A;
    }

    /// L2(Gamma) norm of a trace field.
    double norm(const Eigen::VectorXd& v) const {
        return std::sqrt(std::max(0.0, v.dot(mass_ * v)));
    }

    /// Interpolate an analytic function on the trace nodes.
    Eigen::VectorXd interpolate(const std::function<Vec2(Vec2, double)>& f, double t) const {
        Eigen::VectorXd r(n_dofs());
        for (int k = 0; k < n_nodes(); ++k) {
            const Vec2 v = f(nodes_[size_t(k)].xy, t);
            r[2 * k + 0] = v.x;
            r[2 * k + 1] = v.y;
        }
        return r;
    }

private:
    void push_node(int fluid_vertex, int structure_vertex) {
        Node n;
        n.xy = fluid_space_->mesh().vertices[size_t(fluid_vertex)];
        n.fluid_node = fluid_vertex;
        n.structure_node = structure_vertex;
        check_coincident(n.xy, structure_space_->node_coord(structure_vertex));
        nodes_.push_back(n);
    }

    void push_node_by_id(int fluid_node, int structure_node) {
        Node n;
        n.xy = fluid_space_->node_coord(fluid_node);
        n.fluid_node = fluid_node;
        n.structure_node = structure_node;
        check_coincident(n.xy, structure_space_->node_coord(structure_node));
        nodes_.push_back(n);
    }

    static void check_coincident(Vec2 a, Vec2 b) {
        if (std::abs(a.x - b.x) > 1e-12 || std::abs(a.y - b.y) > 1e-12)
            throw GeometryError("TraceSpace: interface nodes do not coincide");
    }

    int trace_index_of_fluid_vertex(const CoupledMesh& mesh, int fluid_vertex,
                                    int n_vertex_nodes) const {
        for (int k = 0; k < n_vertex_nodes; ++k)
            if (mesh.interface_pairs[size_t(k)].first == fluid_vertex)
                return k;
        throw GeometryError("TraceSpace: interface edge endpoint is not an interface pair");
    }

    void build_mass() {
        std::vector<Eigen::Triplet<double>> trip;
        const auto& quad = edge_quadrature();
        for (const auto& seg : segments_) {
            const Vec2 pa = nodes_[size_t(seg[0])].xy;
            const Vec2 pb = nodes_[size_t(seg[1])].xy;
            const double len = rrfsi::norm(pb - pa);
            for (int q = 0; q < EdgeQuadrature::n; ++q) {
                double N[3];
                shapes::edge_eval(2, quad.s[size_t(q)], N);
                const double w = quad.weight[size_t(q)] * len;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int c = 0; c < 2; ++c)
                            trip.emplace_back(2 * seg[size_t(i)] + c, 2 * seg[size_t(j)] + c,
                                              w * N[i] * N[j]);
            }
        }
        mass_.resize(n_dofs(), n_dofs());
        mass_.setFromTriplets(trip.begin(), trip.end());
    }

    const FESpace* fluid_space_;
    const FESpace* structure_space_;
    std::vector<Node> nodes_;
    std::vector<std::array<int, 3>> segments_;
    SpMat mass_;
};

} // namespace rrfsi
