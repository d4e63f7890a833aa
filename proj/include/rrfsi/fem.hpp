#pragma once

#include "rrfsi/errors.hpp"
#include "rrfsi/mesh.hpp"
#include "rrfsi/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rrfsi {

using SpMat = Eigen::SparseMatrix<double>;

/// Scalar/vector Lagrange space (P1 or P2) on one triangulated subdomain.
///
/// Scalar nodes are ordered vertices first, then edge midpoints; the dof of
/// (node, component) is node * components + component. Edge enumeration
/// follows first appearance while scanning triangles in order, so identical
/// meshes produce identical dof numberings.
class FESpace {
public:
    FESpace(const TriMesh& mesh, int degree, int components)
        : mesh_(&mesh), degree_(degree), components_(components) {
        if (degree != 1 && degree != 2)
            throw ParameterError("FESpace: degree must be 1 or 2");
        if (components != 1 && components != 2)
            throw ParameterError("FESpace: components must be 1 or 2");
        build_edges();
        build_nodes();
        build_tags();
    }

    const TriMesh& mesh() const { return *mesh_; }
    int degree() const { return degree_; }
    int components() const { return components_; }
    int n_scalar_nodes() const { return int(node_xy_.size()); }
    int n_dofs() const { return n_scalar_nodes() * components_; }
    int nodes_per_element() const { return degree_ == 1 ? 3 : 6; }

    Vec2 node_coord(int node) const { return node_xy_[size_t(node)]; }
    Vec2 dof_coord(int dof) const { return node_xy_[size_t(dof / components_)]; }
    int dof_component(int dof) const { return dof % components_; }
    int dof_of(int node, int comp) const { return node * components_ + comp; }

    std::uint8_t node_tags(int node) const { return node_tags_[size_t(node)]; }

    /// Scalar node ids of element t in local order v0,v1,v2[,e01,e12,e20].
    std::array<int, 6> element_nodes(int t) const {
        const auto& tri = mesh_->triangles[size_t(t)];
        std::array<int, 6> n{tri[0], tri[1], tri[2], -1, -1, -1};
        if (degree_ == 2) {
            const auto& te = tri_edges_[size_t(t)];
            n[3] = n_vertices_ + te[0];
            n[4] = n_vertices_ + te[1];
            n[5] = n_vertices_ + te[2];
        }
        return n;
    }

    /// Scalar nodes of a boundary edge: both ends plus (for P2) the midpoint.
    std::array<int, 3> boundary_edge_nodes(const BoundaryEdge& e) const {
        std::array<int, 3> n{e.a, e.b, -1};
        if (degree_ == 2)
            n[2] = n_vertices_ + edge_id(e.a, e.b);
        return n;
    }

    /// All dofs whose node carries any tag in `mask` (all components).
    std::vector<int> dofs_with_tag(std::uint8_t mask) const {
        std::vector<int> dofs;
        for (int node = 0; node < n_scalar_nodes(); ++node)
            if (node_tags_[size_t(node)] & mask)
                for (int c = 0; c < components_; ++c)
                    dofs.push_back(dof_of(node, c));
        return dofs;
    }

    int edge_id(int a, int b) const {
        const auto it = edge_ids_.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        if (it == edge_ids_.end())
            throw ParameterError("FESpace: unknown edge (" + std::to_string(a) + "," +
                                 std::to_string(b) + ")");
        return it->second;
    }

private:
    void build_edges() {
        n_vertices_ = mesh_->n_vertices();
        tri_edges_.resize(mesh_->triangles.size());
        int next = 0;
        for (size_t t = 0; t < mesh_->triangles.size(); ++t) {
            const auto& tri = mesh_->triangles[t];
            const std::array<std::pair<int, int>, 3> local = {
                std::make_pair(tri[0], tri[1]), std::make_pair(tri[1], tri[2]),
                std::make_pair(tri[2], tri[0])};
            for (int le = 0; le < 3; ++le) {
                auto [a, b] = local[size_t(le)];
                const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
                auto [it, inserted] = edge_ids_.try_emplace(key, next);
                if (inserted) {
                    edges_.push_back(key);
                    ++next;
                }
                tri_edges_[t][size_t(le)] = it->second;
            }
        }
    }

    void build_nodes() {
        node_xy_ = mesh_->vertices;
        if (degree_ == 2) {
            node_xy_.reserve(node_xy_.size() + edges_.size());
            for (const auto& [a, b] : edges_)
                node_xy_.push_back(0.5 * (mesh_->vertices[size_t(a)] + mesh_->vertices[size_t(b)]));
        }
    }

    void build_tags() {
        node_tags_.assign(node_xy_.size(), 0);
        for (const auto& be : mesh_->boundary_edges) {
            const std::uint8_t bit = tag_bit(be.tag);
            node_tags_[size_t(be.a)] |= bit;
            node_tags_[size_t(be.b)] |= bit;
            if (degree_ == 2)
                node_tags_[size_t(n_vertices_ + edge_id(be.a, be.b))] |= bit;
        }
    }

    const TriMesh* mesh_;
    int degree_;
    int components_;
    int n_vertices_ = 0;
    std::map<std::pair<int, int>, int> edge_ids_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<Vec2> node_xy_;
    std::vector<std::uint8_t> node_tags_;
};

/// Dof-value vector bound to its space.
struct Field {
    const FESpace* space = nullptr;
    Eigen::VectorXd values;

    static Field zero(const FESpace& s) {
        return Field{&s, Eigen::VectorXd::Zero(s.n_dofs())};
    }
};

namespace shapes {

inline void eval(int degree, const std::array<double, 3>& L, double N[6]) {
    if (degree == 1) {
        N[0] = L[0];
        N[1] = L[1];
        N[2] = L[2];
        return;
    }
    N[0] = L[0] * (2.0 * L[0] - 1.0);
    N[1] = L[1] * (2.0 * L[1] - 1.0);
    N[2] = L[2] * (2.0 * L[2] - 1.0);
    N[3] = 4.0 * L[0] * L[1];
    N[4] = 4.0 * L[1] * L[2];
    N[5] = 4.0 * L[2] * L[0];
}

/// Gradients with respect to the reference coordinates (xi, eta) where
/// L = (1-xi-eta, xi, eta).
inline void grad_ref(int degree, const std::array<double, 3>& L, double G[6][2]) {
    static const double dL[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    if (degree == 1) {
        for (int i = 0; i < 3; ++i) {
            G[i][0] = dL[i][0];
            G[i][1] = dL[i][1];
        }
        return;
    }
    for (int i = 0; i < 3; ++i) {
        const double f = 4.0 * L[i] - 1.0;
        G[i][0] = f * dL[i][0];
        G[i][1] = f * dL[i][1];
    }
    const int ea[3] = {0, 1, 2};
    const int eb[3] = {1, 2, 0};
    for (int e = 0; e < 3; ++e) {
        G[3 + e][0] = 4.0 * (dL[ea[e]][0] * L[eb[e]] + L[ea[e]] * dL[eb[e]][0]);
        G[3 + e][1] = 4.0 * (dL[ea[e]][1] * L[eb[e]] + L[ea[e]] * dL[eb[e]][1]);
    }
}

/// P2 restricted to an edge is the 1D quadratic in the arclength parameter s.
inline void edge_eval(int degree, double s, double N[3]) {
    if (degree == 1) {
        N[0] = 1.0 - s;
        N[1] = s;
        N[2] = 0.0;
        return;
    }
    N[0] = (1.0 - s) * (1.0 - 2.0 * s);
    N[1] = s * (2.0 * s - 1.0);
    N[2] = 4.0 * s * (1.0 - s);
}

} // namespace shapes

/// Shape values, physical gradients, and mapped quadrature points of one
/// element; the workhorse of assembly and norm evaluation.
struct ElementData {
    std::array<int, 6> nodes;
    int n_loc = 0;
    double area = 0.0;
    double N[TriQuadrature::n][6];
    double G[TriQuadrature::n][6][2];
    Vec2 xq[TriQuadrature::n];
};

inline ElementData element_data(const FESpace& space, int t) {
    ElementData e;
    e.nodes = space.element_nodes(t);
    e.n_loc = space.nodes_per_element();
    const auto& tri = space.mesh().triangles[size_t(t)];
    const Vec2 p0 = space.mesh().vertices[size_t(tri[0])];
    const Vec2 p1 = space.mesh().vertices[size_t(tri[1])];
    const Vec2 p2 = space.mesh().vertices[size_t(tri[2])];
    const double j11 = p1.x - p0.x, j12 = p2.x - p0.x;
    const double j21 = p1.y - p0.y, j22 = p2.y - p0.y;
    const double det = j11 * j22 - j12 * j21;
    if (det <= 0.0)
        throw GeometryError("element_data: nonpositive Jacobian in triangle " + std::to_string(t));
    e.area = 0.5 * det;
    // inv(J)^T rows for mapping reference gradients to physical ones
    const double it11 = j22 / det, it12 = -j21 / det;
    const double it21 = -j12 / det, it22 = j11 / det;

    const auto& quad = tri_quadrature();
    for (int q = 0; q < TriQuadrature::n; ++q) {
        const auto& L = quad.bary[size_t(q)];
        shapes::eval(space.degree(), L, e.N[q]);
        double Gr[6][2];
        shapes::grad_ref(space.degree(), L, Gr);
        for (int i = 0; i < e.n_loc; ++i) {
            e.G[q][i][0] = it11 * Gr[i][0] + it12 * Gr[i][1];
            e.G[q][i][1] = it21 * Gr[i][0] + it22 * Gr[i][1];
        }
        e.xq[q] = {p0.x + j11 * L[1] + j12 * L[2], p0.y + j21 * L[1] + j22 * L[2]};
    }
    return e;
}

enum class FormKind {
    Mass,             // (u, v)
    Viscous,          // 2 mu (D(u), D(v))
    Divergence,       // ((div u), q), trial = vector velocity, test = scalar pressure
    Elasticity,       // 2 mu (D(u), D(v)) + lambda (div u, div v)
    InterfaceMass,    // <u, v> over interface-tagged boundary edges
    WeightedDiffusion // ((1 + tau) grad u, grad v) with per-element tau
};

struct Coefficients {
    std::optional<double> mu;
    std::optional<double> lambda;
    std::optional<std::vector<double>> per_element;  // tau for WeightedDiffusion
};

namespace detail {

inline void require_same_mesh(const FESpace& a, const FESpace& b) {
    if (&a.mesh() != &b.mesh())
        throw AssemblyError("assemble: trial and test spaces live on different meshes");
}

/// Shared kernel of Viscous and Elasticity: 2 mu (D:D) + lambda (div)(div).
inline SpMat assemble_elastic_like(const FESpace& space, double mu, double lambda) {
    if (space.components() != 2)
        throw AssemblyError("assemble: strain forms need a 2-component space");
    std::vector<Eigen::Triplet<double>> trip;
    const int nloc = space.nodes_per_element();
    trip.reserve(size_t(space.mesh().n_triangles()) * size_t(nloc * nloc * 4));
    for (int t = 0; t < space.mesh().n_triangles(); ++t) {
        const ElementData e = element_data(space, t);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * e.area;
            for (int i = 0; i < nloc; ++i) {
                for (int j = 0; j < nloc; ++j) {
                    const double gi[2] = {e.G[q][i][0], e.G[q][i][1]};
                    const double gj[2] = {e.G[q][j][0], e.G[q][j][1]};
                    // 2 mu D(phi_j e_b) : D(phi_i e_a) for components a,b
                    for (int a = 0; a < 2; ++a) {
                        for (int b = 0; b < 2; ++b) {
                            double v = mu * gi[b] * gj[a];
                            if (a == b)
                                v += mu * (gi[0] * gj[0] + gi[1] * gj[1]);
                            v += lambda * gi[a] * gj[b];
                            trip.emplace_back(space.dof_of(e.nodes[size_t(i)], a),
                                              space.dof_of(e.nodes[size_t(j)], b), w * v);
                        }
                    }
                }
            }
        }
    }
    SpMat A(space.n_dofs(), space.n_dofs());
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

inline SpMat assemble_mass(const FESpace& space) {
    std::vector<Eigen::Triplet<double>> trip;
    const int nloc = space.nodes_per_element();
    const int c = space.components();
    trip.reserve(size_t(space.mesh().n_triangles()) * size_t(nloc * nloc * c));
    for (int t = 0; t < space.mesh().n_triangles(); ++t) {
        const ElementData e = element_data(space, t);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * e.area;
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j) {
                    const double v = w * e.N[q][i] * e.N[q][j];
                    for (int a = 0; a < c; ++a)
                        trip.emplace_back(space.dof_of(e.nodes[size_t(i)], a),
                                          space.dof_of(e.nodes[size_t(j)], a), v);
                }
        }
    }
    SpMat A(space.n_dofs(), space.n_dofs());
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

inline SpMat assemble_divergence(const FESpace& trial_vel, const FESpace& test_pres) {
    require_same_mesh(trial_vel, test_pres);
    if (trial_vel.components() != 2 || test_pres.components() != 1)
        throw AssemblyError("assemble: Divergence expects vector trial and scalar test");
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < trial_vel.mesh().n_triangles(); ++t) {
        const ElementData eu = element_data(trial_vel, t);
        const ElementData ep = element_data(test_pres, t);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * eu.area;
            for (int i = 0; i < ep.n_loc; ++i)
                for (int j = 0; j < eu.n_loc; ++j)
                    for (int b = 0; b < 2; ++b)
                        trip.emplace_back(ep.nodes[size_t(i)],
                                          trial_vel.dof_of(eu.nodes[size_t(j)], b),
                                          w * ep.N[q][i] * eu.G[q][j][b]);
        }
    }
    SpMat B(test_pres.n_dofs(), trial_vel.n_dofs());
    B.setFromTriplets(trip.begin(), trip.end());
    return B;
}

inline SpMat assemble_interface_mass(const FESpace& space) {
    std::vector<Eigen::Triplet<double>> trip;
    const int c = space.components();
    for (const auto& be : space.mesh().boundary_edges) {
        if (be.tag != Boundary::Interface)
            continue;
        const auto nodes = space.boundary_edge_nodes(be);
        const int nloc = space.degree() == 2 ? 3 : 2;
        const double len = norm(space.mesh().vertices[size_t(be.b)] -
                                space.mesh().vertices[size_t(be.a)]);
        const auto& quad = edge_quadrature();
        for (int q = 0; q < EdgeQuadrature::n; ++q) {
            double N[3];
            shapes::edge_eval(space.degree(), quad.s[size_t(q)], N);
            const double w = quad.weight[size_t(q)] * len;
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j) {
                    const double v = w * N[i] * N[j];
                    for (int a = 0; a < c; ++a)
                        trip.emplace_back(space.dof_of(nodes[size_t(i)], a),
                                          space.dof_of(nodes[size_t(j)], a), v);
                }
        }
    }
    SpMat A(space.n_dofs(), space.n_dofs());
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

inline SpMat assemble_weighted_diffusion(const FESpace& space, const std::vector<double>& tau) {
    if (int(tau.size()) != space.mesh().n_triangles())
        throw ParameterError("assemble: per-element coefficient count " +
                             std::to_string(tau.size()) + " does not match element count " +
                             std::to_string(space.mesh().n_triangles()));
    std::vector<Eigen::Triplet<double>> trip;
    const int nloc = space.nodes_per_element();
    const int c = space.components();
    for (int t = 0; t < space.mesh().n_triangles(); ++t) {
        const ElementData e = element_data(space, t);
        const double coeff = 1.0 + tau[size_t(t)];
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * e.area * coeff;
            for (int i = 0; i < nloc; ++i)
                for (int j = 0; j < nloc; ++j) {
                    const double v = w * (e.G[q][i][0] * e.G[q][j][0] +
                                          e.G[q][i][1] * e.G[q][j][1]);
                    for (int a = 0; a < c; ++a)
                        trip.emplace_back(space.dof_of(e.nodes[size_t(i)], a),
                                          space.dof_of(e.nodes[size_t(j)], a), v);
                }
        }
    }
    SpMat A(space.n_dofs(), space.n_dofs());
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

} // namespace detail

/// Assemble the bilinear form `kind` over the spaces' shared triangulation.
inline SpMat assemble(FormKind kind, const FESpace& trial, const FESpace& test,
                      const Coefficients& coeff = {}) {
    detail::require_same_mesh(trial, test);
    switch (kind) {
    case FormKind::Mass:
        return detail::assemble_mass(trial);
    case FormKind::Viscous:
        if (!coeff.mu)
            throw ParameterError("assemble: Viscous requires coefficient mu");
        return detail::assemble_elastic_like(trial, *coeff.mu, 0.0);
    case FormKind::Divergence:
        return detail::assemble_divergence(trial, test);
    case FormKind::Elasticity:
        if (!coeff.mu || !coeff.lambda)
            throw ParameterError("assemble: Elasticity requires coefficients mu and lambda");
        return detail::assemble_elastic_like(trial, *coeff.mu, *coeff.lambda);
    case FormKind::InterfaceMass:
        return detail::assemble_interface_mass(trial);
    case FormKind::WeightedDiffusion:
        if (!coeff.per_element)
            throw ParameterError("assemble: WeightedDiffusion requires per-element coefficients");
        return detail::assemble_weighted_diffusion(trial, *coeff.per_element);
    }
    throw ParameterError("assemble: unknown form kind");
}

/// Nodal interpolant of an analytic function (one std::function per component
/// signature; the vector form covers 2-component spaces).
inline Field interpolate(const std::function<double(Vec2, double)>& f, const FESpace& space,
                         double t) {
    if (space.components() != 1)
        throw ParameterError("interpolate: scalar function on a non-scalar space");
    Field field = Field::zero(space);
    for (int n = 0; n < space.n_scalar_nodes(); ++n)
        field.values[n] = f(space.node_coord(n), t);
    return field;
}

inline Field interpolate(const std::function<Vec2(Vec2, double)>& f, const FESpace& space,
                         double t) {
    if (space.components() != 2)
        throw ParameterError("interpolate: vector function on a non-vector space");
    Field field = Field::zero(space);
    for (int n = 0; n < space.n_scalar_nodes(); ++n) {
        const Vec2 v = f(space.node_coord(n), t);
        field.values[space.dof_of(n, 0)] = v.x;
        field.values[space.dof_of(n, 1)] = v.y;
    }
    return field;
}

/// Precomputed element quadrature tables for right-hand-side assembly; the
/// shapes and points are constant while forcing functions change every step.
class LoadTable {
public:
    explicit LoadTable(const FESpace& space) : space_(&space) {
        elems_.reserve(size_t(space.mesh().n_triangles()));
        for (int t = 0; t < space.mesh().n_triangles(); ++t)
            elems_.push_back(element_data(space, t));
    }

    /// rhs[dof(i,c)] += integral of f_c * N_i over the domain.
    void add_vector_load(const std::function<Vec2(Vec2, double)>& f, double t,
                         Eigen::VectorXd& rhs) const {
        if (!f)
            return;
        const auto& quad = tri_quadrature();
        for (const ElementData& e : elems_) {
            for (int q = 0; q < TriQuadrature::n; ++q) {
                const double w = quad.weight[size_t(q)] * e.area;
                const Vec2 v = f(e.xq[q], t);
                for (int i = 0; i < e.n_loc; ++i) {
                    rhs[space_->dof_of(e.nodes[size_t(i)], 0)] += w * e.N[q][i] * v.x;
                    rhs[space_->dof_of(e.nodes[size_t(i)], 1)] += w * e.N[q][i] * v.y;
                }
            }
        }
    }

    void add_scalar_load(const std::function<double(Vec2, double)>& f, double t, double scale,
                         Eigen::VectorXd& rhs) const {
        if (!f)
            return;
        const auto& quad = tri_quadrature();
        for (const ElementData& e : elems_) {
            for (int q = 0; q < TriQuadrature::n; ++q) {
                const double w = scale * quad.weight[size_t(q)] * e.area * f(e.xq[q], t);
                for (int i = 0; i < e.n_loc; ++i)
                    rhs[space_->dof_of(e.nodes[size_t(i)], 0)] += w * e.N[q][i];
            }
        }
    }

private:
    const FESpace* space_;
    std::vector<ElementData> elems_;
};

enum class NormKind { L2Domain, L2Interface, Energy, SeminormD };

namespace detail {

inline double l2_domain_sq(const Field& f) {
    const FESpace& space = *f.space;
    const int c = space.components();
    double acc = 0.0;
    for (int t = 0; t < space.mesh().n_triangles(); ++t) {
        const ElementData e = element_data(space, t);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * e.area;
            for (int a = 0; a < c; ++a) {
                double v = 0.0;
                for (int i = 0; i < e.n_loc; ++i)
                    v += e.N[q][i] * f.values[space.dof_of(e.nodes[size_t(i)], a)];
                acc += w * v * v;
            }
        }
    }
    return acc;
}

inline double l2_interface_sq(const Field& f) {
    const FESpace& space = *f.space;
    const int c = space.components();
    double acc = 0.0;
    for (const auto& be : space.mesh().boundary_edges) {
        if (be.tag != Boundary::Interface)
            continue;
        const auto nodes = space.boundary_edge_nodes(be);
        const int nloc = space.degree() == 2 ? 3 : 2;
        const double len = norm(space.mesh().vertices[size_t(be.b)] -
                                space.mesh().vertices[size_t(be.a)]);
        const auto& quad = edge_quadrature();
        for (int q = 0; q < EdgeQuadrature::n; ++q) {
            double N[3];
            shapes::edge_eval(space.degree(), quad.s[size_t(q)], N);
            const double w = quad.weight[size_t(q)] * len;
            for (int a = 0; a < c; ++a) {
                double v = 0.0;
                for (int i = 0; i < nloc; ++i)
                    v += N[i] * f.values[space.dof_of(nodes[size_t(i)], a)];
                acc += w * v * v;
            }
        }
    }
    return acc;
}

/// integral of 2 mu |D(u)|^2 + lambda (div u)^2; SeminormD uses mu=1/2, lambda=0.
inline double strain_energy_sq(const Field& f, double mu, double lambda) {
    const FESpace& space = *f.space;
    if (space.components() != 2)
        throw ParameterError("norm: strain norms need a 2-component space");
    double acc = 0.0;
    for (int t = 0; t < space.mesh().n_triangles(); ++t) {
        const ElementData e = element_data(space, t);
        for (int q = 0; q < TriQuadrature::n; ++q) {
            const double w = tri_quadrature().weight[size_t(q)] * e.area;
            double g11 = 0.0, g12 = 0.0, g21 = 0.0, g22 = 0.0;
            for (int i = 0; i < e.n_loc; ++i) {
                const double ux = f.values[space.dof_of(e.nodes[size_t(i)], 0)];
                const double uy = f.values[space.dof_of(e.nodes[size_t(i)], 1)];
                g11 += e.G[q][i][0] * ux;
                g12 += e.G[q][i][1] * ux;
                g21 += e.G[q][i][0] * uy;
                g22 += e.G[q][i][1] * uy;
            }
            const double d12 = 0.5 * (g12 + g21);
            const double dd = g11 * g11 + g22 * g22 + 2.0 * d12 * d12;
            const double div = g11 + g22;
            acc += w * (2.0 * mu * dd + lambda * div * div);
        }
    }
    return acc;
}

} // namespace detail

/// L2/energy norms by exact quadrature (exact for the polynomial degrees of
/// every field the scheme produces).
inline double norm(const Field& f, NormKind kind, double mu = 1.0, double lambda = 1.0) {
    switch (kind) {
    case NormKind::L2Domain:
        return std::sqrt(detail::l2_domain_sq(f));
    case NormKind::L2Interface:
        return std::sqrt(detail::l2_interface_sq(f));
    case NormKind::Energy:
        return std::sqrt(detail::strain_energy_sq(f, mu, lambda));
    case NormKind::SeminormD:
        return std::sqrt(detail::strain_energy_sq(f, 0.5, 0.0));
    }
    throw ParameterError("norm: unknown kind");
}

} // namespace rrfsi
