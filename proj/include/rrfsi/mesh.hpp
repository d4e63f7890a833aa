#pragma once

#include "rrfsi/errors.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rrfsi {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Boundary classification of the layered fluid/structure domain.
enum class Boundary : std::uint8_t {
    Inlet = 0,
    Outlet = 1,
    Wall = 2,
    Interface = 3,
    StructureOuter = 4,
};

inline constexpr std::uint8_t tag_bit(Boundary b) { return std::uint8_t(1u << int(b)); }

inline const char* to_string(Boundary b) {
    switch (b) {
    case Boundary::Inlet: return "inlet";
    case Boundary::Outlet: return "outlet";
    case Boundary::Wall: return "wall";
    case Boundary::Interface: return "interface";
    case Boundary::StructureOuter: return "structure-outer";
    }
    return "?";
}

struct BoundaryEdge {
    int a = -1;       // vertex ids, oriented as in the adjacent triangle
    int b = -1;
    Boundary tag = Boundary::Wall;
};

/// One triangulated subdomain (the fluid layer or the structure layer).
struct TriMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW vertex triples
    std::vector<BoundaryEdge> boundary_edges;

    int n_vertices() const { return int(vertices.size()); }
    int n_triangles() const { return int(triangles.size()); }
};

/// Signed area of triangle t (positive for CCW orientation).
inline double signed_area(const TriMesh& mesh, int t) {
    const auto& tri = mesh.triangles[size_t(t)];
    const Vec2 p0 = mesh.vertices[size_t(tri[0])];
    const Vec2 p1 = mesh.vertices[size_t(tri[1])];
    const Vec2 p2 = mesh.vertices[size_t(tri[2])];
    return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

/// Outward unit normal of the boundary edge (a,b) of a CCW triangle:
/// rotate the edge direction clockwise by 90 degrees.
inline Vec2 outward_normal(const TriMesh& mesh, const BoundaryEdge& e) {
    const Vec2 pa = mesh.vertices[size_t(e.a)];
    const Vec2 pb = mesh.vertices[size_t(e.b)];
    const Vec2 d = pb - pa;
    const double len = norm(d);
    if (len <= 0.0)
        throw GeometryError("outward_normal: zero-length boundary edge");
    return {d.y / len, -d.x / len};
}

struct ElementAreaStats {
    double min_area = 0.0;
    double max_area = 0.0;
    std::vector<double> per_element;
};

/// Per-element areas plus their extremes. Throws on degenerate elements.
inline ElementAreaStats element_area_stats(const TriMesh& mesh) {
    if (mesh.triangles.empty())
        throw ParameterError("element_area_stats: empty triangulation");
    ElementAreaStats stats;
    stats.per_element.reserve(mesh.triangles.size());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double a = signed_area(mesh, t);
        if (a <= 0.0)
            throw GeometryError("element_area_stats: nonpositive area in triangle " +
                                std::to_string(t));
        stats.per_element.push_back(a);
    }
    stats.min_area = stats.per_element[0];
    stats.max_area = stats.per_element[0];
    for (double a : stats.per_element) {
        stats.min_area = std::min(stats.min_area, a);
        stats.max_area = std::max(stats.max_area, a);
    }
    return stats;
}

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

/// One conforming interface segment; vertex ids refer to the owning meshes.
struct InterfaceEdge {
    int fluid_a = -1, fluid_b = -1;          // fluid-side vertices
    int structure_a = -1, structure_b = -1;  // coincident structure-side vertices
    Vec2 n_f;                                // fluid outward normal, constant per edge
};

/// Two conforming triangulations sharing interface nodes. Immutable after
/// construction; both sub-solvers read it concurrently.
struct CoupledMesh {
    TriMesh fluid;
    TriMesh structure;
    std::vector<std::pair<int, int>> interface_pairs;  // (fluid vertex, structure vertex)
    std::vector<InterfaceEdge> interface_edges;
    Rect fluid_rect;
    Rect structure_rect;
    int nx = 0;
    int ny = 0;
};

namespace detail {

/// Structured layer: (nx+1)*(ny+1) vertices row-major bottom-to-top, each cell
/// split by the same diagonal into two CCW triangles.
inline TriMesh structured_layer(const Rect& r, int nx, int ny) {
    TriMesh m;
    const int npx = nx + 1;
    const int npy = ny + 1;
    m.vertices.reserve(size_t(npx) * size_t(npy));
    for (int j = 0; j < npy; ++j) {
        for (int i = 0; i < npx; ++i) {
            const double x = r.x0 + double(i) * r.width() / double(nx);
            const double y = r.y0 + double(j) * r.height() / double(ny);
            m.vertices.push_back({x, y});
        }
    }
    auto vid = [npx](int i, int j) { return j * npx + i; };
    m.triangles.reserve(2 * size_t(nx) * size_t(ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j);
            const int v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1);
            const int v11 = vid(i + 1, j + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }
    }
    return m;
}

inline void tag_layer_boundary(TriMesh& m, int nx, int ny, Boundary bottom, Boundary top,
                               Boundary left, Boundary right) {
    const int npx = nx + 1;
    auto vid = [npx](int i, int j) { return j * npx + i; };
    // Orientation follows the CCW boundary of the rectangle.
    for (int i = 0; i < nx; ++i)
        m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), bottom});
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), right});
    for (int i = nx; i > 0; --i)
        m.boundary_edges.push_back({vid(i, ny), vid(i - 1, ny), top});
    for (int j = ny; j > 0; --j)
        m.boundary_edges.push_back({vid(0, j), vid(0, j - 1), left});
}

inline void validate_coupled_mesh(const CoupledMesh& mesh) {
    for (const TriMesh* part : {&mesh.fluid, &mesh.structure})
        for (int t = 0; t < part->n_triangles(); ++t)
            if (signed_area(*part, t) <= 0.0)
                throw GeometryError("mesh generation produced a nonpositive-area triangle");
    for (const auto& [fv, sv] : mesh.interface_pairs) {
        const Vec2 d = mesh.fluid.vertices[size_t(fv)] - mesh.structure.vertices[size_t(sv)];
        if (std::abs(d.x) > 1e-12 || std::abs(d.y) > 1e-12)
            throw GeometryError("interface pair vertices do not coincide");
    }
}

} // namespace detail

/// Conforming layered mesh: fluid_rect stacked directly above structure_rect,
/// sharing one full horizontal edge. Interface nodes coincide exactly.
inline CoupledMesh build_layered_rect_mesh(const Rect& fluid_rect, Rect structure_rect,
                                           int nx, int ny) {
    if (nx < 1 || ny < 1)
        throw ParameterError("build_layered_rect_mesh: nx and ny must be >= 1, got nx=" +
                             std::to_string(nx) + " ny=" + std::to_string(ny));
    if (fluid_rect.width() <= 0.0 || fluid_rect.height() <= 0.0 ||
        structure_rect.width() <= 0.0 || structure_rect.height() <= 0.0)
        throw GeometryError("build_layered_rect_mesh: rectangles must have positive extent");

    const double scale = std::max({std::abs(fluid_rect.x0), std::abs(fluid_rect.x1),
                                   std::abs(fluid_rect.y1), std::abs(structure_rect.y0), 1.0});
    const bool adjacent = std::abs(structure_rect.y1 - fluid_rect.y0) <= 1e-12 * scale &&
                          std::abs(structure_rect.x0 - fluid_rect.x0) <= 1e-12 * scale &&
                          std::abs(structure_rect.x1 - fluid_rect.x1) <= 1e-12 * scale;
    if (!adjacent)
        throw GeometryError(
            "build_layered_rect_mesh: rectangles must share one full edge "
            "(structure directly below fluid)");

    // Snap the shared edge so interface coordinates agree bitwise.
    structure_rect.y1 = fluid_rect.y0;
    structure_rect.x0 = fluid_rect.x0;
    structure_rect.x1 = fluid_rect.x1;

    CoupledMesh mesh;
    mesh.fluid_rect = fluid_rect;
    mesh.structure_rect = structure_rect;
    mesh.nx = nx;
    mesh.ny = ny;
    mesh.fluid = detail::structured_layer(fluid_rect, nx, ny);
    mesh.structure = detail::structured_layer(structure_rect, nx, ny);
    detail::tag_layer_boundary(mesh.fluid, nx, ny, Boundary::Interface, Boundary::Wall,
                               Boundary::Inlet, Boundary::Outlet);
    detail::tag_layer_boundary(mesh.structure, nx, ny, Boundary::StructureOuter,
                               Boundary::Interface, Boundary::StructureOuter,
                               Boundary::StructureOuter);

    const int npx = nx + 1;
    const int structure_top_row = ny * npx;
    mesh.interface_pairs.reserve(size_t(npx));
    for (int i = 0; i <= nx; ++i)
        mesh.interface_pairs.emplace_back(i, structure_top_row + i);
    mesh.interface_edges.reserve(size_t(nx));
    for (int i = 0; i < nx; ++i) {
        InterfaceEdge e;
        e.fluid_a = i;
        e.fluid_b = i + 1;
        e.structure_a = structure_top_row + i;
        e.structure_b = structure_top_row + i + 1;
        e.n_f = {0.0, -1.0};  // fluid lies above the interface
        mesh.interface_edges.push_back(e);
    }

    detail::validate_coupled_mesh(mesh);
    return mesh;
}

} // namespace rrfsi
