#include "rrfsi/mesh.hpp"

#include <catch2/catch.hpp>

#include <map>
#include <set>

using namespace rrfsi;

namespace {

CoupledMesh unit_layered(int n) {
    return build_layered_rect_mesh({0.0, 0.0, 1.0, 1.0}, {0.0, -1.0, 1.0, 0.0}, n, n);
}

} // namespace

TEST_CASE("layered 2x2 mesh has the structured counts") {
    const CoupledMesh mesh = unit_layered(2);
    CHECK(mesh.fluid.n_vertices() == 9);
    CHECK(mesh.fluid.n_triangles() == 8);
    CHECK(mesh.structure.n_vertices() == 9);
    CHECK(mesh.structure.n_triangles() == 8);
    CHECK(mesh.interface_pairs.size() == 3);
    CHECK(mesh.interface_edges.size() == 2);
}

TEST_CASE("interface normal is the fluid outward normal (0,-1)") {
    const CoupledMesh mesh = unit_layered(5);
    for (const auto& ie : mesh.interface_edges) {
        CHECK(ie.n_f.x == 0.0);
        CHECK(ie.n_f.y == -1.0);
    }
    // n_f . n_s = -1 with n_s computed from the structure triangulation
    for (const auto& be : mesh.structure.boundary_edges) {
        if (be.tag != Boundary::Interface)
            continue;
        const Vec2 ns = outward_normal(mesh.structure, be);
        CHECK(dot(mesh.interface_edges[0].n_f, ns) == Approx(-1.0).margin(1e-14));
    }
}

TEST_CASE("uniform 64x64 fluid layer has equal element areas") {
    const CoupledMesh mesh = unit_layered(64);
    const ElementAreaStats stats = element_area_stats(mesh.fluid);
    const double expected = 1.0 / (64.0 * 64.0 * 2.0);
    CHECK(stats.min_area == Approx(expected).epsilon(1e-12));
    CHECK(stats.max_area == Approx(expected).epsilon(1e-12));
}

TEST_CASE("interface pairs coincide and count nx+1") {
    const CoupledMesh mesh = unit_layered(7);
    CHECK(mesh.interface_pairs.size() == 8);
    for (const auto& [fv, sv] : mesh.interface_pairs) {
        const Vec2 a = mesh.fluid.vertices[size_t(fv)];
        const Vec2 b = mesh.structure.vertices[size_t(sv)];
        CHECK(std::abs(a.x - b.x) <= 1e-12);
        CHECK(std::abs(a.y - b.y) <= 1e-12);
    }
}

TEST_CASE("all triangles are CCW with positive area and areas sum to the rectangle") {
    const CoupledMesh mesh = unit_layered(6);
    for (const TriMesh* part : {&mesh.fluid, &mesh.structure}) {
        double total = 0.0;
        for (int t = 0; t < part->n_triangles(); ++t) {
            const double a = signed_area(*part, t);
            CHECK(a > 0.0);
            total += a;
        }
        CHECK(total == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("boundary tags cover exactly the topological boundary") {
    const CoupledMesh mesh = unit_layered(4);
    for (const TriMesh* part : {&mesh.fluid, &mesh.structure}) {
        // edge -> number of adjacent triangles
        std::map<std::pair<int, int>, int> adjacency;
        for (const auto& tri : part->triangles) {
            for (int e = 0; e < 3; ++e) {
                int a = tri[size_t(e)], b = tri[size_t((e + 1) % 3)];
                if (a > b)
                    std::swap(a, b);
                ++adjacency[{a, b}];
            }
        }
        std::set<std::pair<int, int>> topological;
        for (const auto& [edge, c] : adjacency)
            if (c == 1)
                topological.insert(edge);
        std::set<std::pair<int, int>> tagged;
        for (const auto& be : part->boundary_edges) {
            int a = be.a, b = be.b;
            if (a > b)
                std::swap(a, b);
            tagged.insert({a, b});
        }
        CHECK(tagged == topological);
    }
}

TEST_CASE("mesh generation is deterministic") {
    const CoupledMesh a = unit_layered(9);
    const CoupledMesh b = unit_layered(9);
    REQUIRE(a.fluid.vertices.size() == b.fluid.vertices.size());
    for (size_t i = 0; i < a.fluid.vertices.size(); ++i) {
        CHECK(a.fluid.vertices[i].x == b.fluid.vertices[i].x);
        CHECK(a.fluid.vertices[i].y == b.fluid.vertices[i].y);
    }
    CHECK(a.fluid.triangles == b.fluid.triangles);
    CHECK(a.structure.triangles == b.structure.triangles);
}

TEST_CASE("element_area_stats on simple meshes") {
    SECTION("uniform 4x4 unit square: all areas 1/32") {
        const CoupledMesh mesh = unit_layered(4);
        const ElementAreaStats s = element_area_stats(mesh.fluid);
        CHECK(s.min_area == Approx(1.0 / 32.0).epsilon(1e-13));
        CHECK(s.max_area == Approx(1.0 / 32.0).epsilon(1e-13));
    }
    SECTION("two-triangle unit square: areas 1/2") {
        TriMesh m;
        m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        m.triangles = {{0, 1, 2}, {0, 2, 3}};
        const ElementAreaStats s = element_area_stats(m);
        CHECK(s.min_area == Approx(0.5).epsilon(1e-14));
        CHECK(s.max_area == Approx(0.5).epsilon(1e-14));
    }
    SECTION("one triangle refined once: min/max ratio 1/4") {
        // unit square as two triangles, the first split into four similar ones
        TriMesh m;
        m.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1},
                      {0.5, 0.0}, {1.0, 0.5}, {0.5, 0.5}};
        m.triangles = {{0, 2, 3},           // unrefined half, area 1/2
                       {0, 4, 6}, {4, 1, 5}, {4, 5, 6}, {6, 5, 2}};  // four of area 1/8
        const ElementAreaStats s = element_area_stats(m);
        CHECK(s.min_area / s.max_area == Approx(0.25).epsilon(1e-13));
    }
    SECTION("degenerate triangle throws a geometry error") {
        TriMesh m;
        m.vertices = {{0, 0}, {1, 0}, {2, 0}};
        m.triangles = {{0, 1, 2}};
        CHECK_THROWS_AS(element_area_stats(m), GeometryError);
    }
}

TEST_CASE("generator rejects bad input") {
    CHECK_THROWS_AS(build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, -0.5}, 2, 2),
                    GeometryError);
    CHECK_THROWS_AS(build_layered_rect_mesh({0, 0, 1, 1}, {0.5, -1, 1.5, 0}, 2, 2),
                    GeometryError);
    CHECK_THROWS_AS(build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, 0, 2),
                    ParameterError);
    CHECK_THROWS_AS(build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, 2, 0),
                    ParameterError);
}
