#include "rrfsi/ale.hpp"
#include "rrfsi/mesh.hpp"

#include <catch2/catch.hpp>

#include <algorithm>

using namespace rrfsi;

namespace {

/// Two columns of widths 1/3 and 2/3: element areas in ratio 1/2.
TriMesh two_column_mesh() {
    TriMesh m;
    m.vertices = {{0, 0}, {1.0 / 3.0, 0}, {1, 0}, {0, 1}, {1.0 / 3.0, 1}, {1, 1}};
    m.triangles = {{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4}};
    m.boundary_edges = {{0, 1, Boundary::Interface}, {1, 2, Boundary::Interface},
                        {2, 5, Boundary::Wall},      {5, 4, Boundary::Wall},
                        {4, 3, Boundary::Wall},      {3, 0, Boundary::Wall}};
    return m;
}

/// Rows thin out away from the bottom interface: heights 8:4:2:1 (scaled).
/// Smallest elements sit in the top row, largest in the bottom row.
TriMesh graded_strip_mesh(int nx = 4) {
    TriMesh m;
    const std::array<double, 5> ybreaks = {0.0, 8.0 / 15.0, 12.0 / 15.0, 14.0 / 15.0, 1.0};
    const int npx = nx + 1;
    for (double y : ybreaks)
        for (int i = 0; i < npx; ++i)
            m.vertices.push_back({double(i) / nx, y});
    auto vid = [npx](int i, int j) { return j * npx + i; };
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < nx; ++i) {
            m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    for (int i = 0; i < nx; ++i)
        m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), Boundary::Interface});
    for (int j = 0; j < 4; ++j) {
        m.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), Boundary::Wall});
        m.boundary_edges.push_back({vid(0, j + 1), vid(0, j), Boundary::Wall});
    }
    for (int i = nx; i > 0; --i)
        m.boundary_edges.push_back({vid(i, 4), vid(i - 1, 4), Boundary::Wall});
    return m;
}

/// Constant-per-element gradient magnitude of a P1 vector field.
double element_gradient_norm(const Field& f, int t) {
    const FESpace& space = *f.space;
    const ElementData e = element_data(space, t);
    double g[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < 3; ++i)
        for (int c = 0; c < 2; ++c) {
            g[c][0] += e.G[0][i][0] * f.values[space.dof_of(e.nodes[size_t(i)], c)];
            g[c][1] += e.G[0][i][1] * f.values[space.dof_of(e.nodes[size_t(i)], c)];
        }
    return std::sqrt(g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] +
                     g[1][1] * g[1][1]);
}

} // namespace

TEST_CASE("tau_m values") {
    SECTION("uniform mesh gives tau = 0 everywhere") {
        const CoupledMesh mesh = build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, 5, 5);
        for (double tau : compute_tau_m(mesh.fluid))
            CHECK(tau == 0.0);
    }
    SECTION("area ratio 1/2: smallest element gets 1, largest gets 1/2") {
        const TriMesh m = two_column_mesh();
        const ElementAreaStats stats = element_area_stats(m);
        REQUIRE(stats.min_area / stats.max_area == Approx(0.5).epsilon(1e-13));
        const std::vector<double> tau = compute_tau_m(m);
        for (size_t e = 0; e < tau.size(); ++e) {
            if (stats.per_element[e] == stats.min_area)
                CHECK(tau[e] == Approx(1.0).epsilon(1e-13));
            else
                CHECK(tau[e] == Approx(0.5).epsilon(1e-13));
        }
    }
    SECTION("degenerate element is a geometry error") {
        TriMesh m;
        m.vertices = {{0, 0}, {1, 0}, {2, 0}};
        m.triangles = {{0, 1, 2}};
        CHECK_THROWS_AS(compute_tau_m(m), GeometryError);
    }
}

TEST_CASE("extension basics") {
    const CoupledMesh mesh = build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, 6, 6);
    const AleExtension ale(mesh.fluid);

    SECTION("zero interface displacement extends to zero") {
        const Field f = ale.extend([](Vec2) { return Vec2{0.0, 0.0}; });
        CHECK(f.values.lpNorm<Eigen::Infinity>() == 0.0);
    }
    SECTION("linear boundary data reproduces the linear interpolant") {
        const Field f = ale.extend_with_boundary_data([](Vec2 p) { return Vec2{p.y, p.y}; });
        for (int n = 0; n < ale.space().n_scalar_nodes(); ++n) {
            CHECK(f.values[ale.space().dof_of(n, 0)] ==
                  Approx(ale.space().node_coord(n).y).margin(1e-11));
        }
    }
    SECTION("uniform interface pull obeys the discrete maximum principle") {
        // M-matrix verification on the structured mesh: no positive
        // off-diagonal entries in the free rows of the weighted-diffusion operator
        const SpMat& A = ale.scalar_system().matrix();
        std::vector<char> is_boundary(size_t(A.rows()), 0);
        for (int n : ale.boundary_nodes())
            is_boundary[size_t(n)] = 1;
        for (int k = 0; k < A.outerSize(); ++k)
            for (SpMat::InnerIterator it(A, k); it; ++it)
                if (!is_boundary[size_t(it.row())] && it.row() != it.col())
                    CHECK(it.value() <= 1e-14);

        const double d = 0.37;
        const Field f = ale.extend([d](Vec2) { return Vec2{0.0, d}; });
        double max_mag = 0.0;
        for (int n = 0; n < ale.space().n_scalar_nodes(); ++n)
            max_mag = std::max(max_mag, std::abs(f.values[ale.space().dof_of(n, 1)]));
        CHECK(max_mag <= d + 1e-12);
    }
    SECTION("extension is linear in the boundary data") {
        auto d1 = [](Vec2 p) { return Vec2{0.1 * std::sin(3.0 * p.x), 0.2 * p.x}; };
        auto d2 = [](Vec2 p) { return Vec2{-0.3, 0.05 * std::cos(2.0 * p.x)}; };
        const double a = 1.7, b = -0.6;
        const Field f1 = ale.extend(d1);
        const Field f2 = ale.extend(d2);
        const Field fc = ale.extend([&](Vec2 p) { return a * d1(p) + b * d2(p); });
        const Eigen::VectorXd combo = a * f1.values + b * f2.values;
        CHECK((fc.values - combo).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}

TEST_CASE("stiffened small elements deform less on the graded strip") {
    const TriMesh m = graded_strip_mesh();
    const AleExtension ale(m);
    const ElementAreaStats stats = element_area_stats(m);
    const Field f = ale.extend([](Vec2) { return Vec2{0.0, 0.1}; });

    const auto smallest = size_t(std::min_element(stats.per_element.begin(),
                                                  stats.per_element.end()) -
                                 stats.per_element.begin());
    const auto largest = size_t(std::max_element(stats.per_element.begin(),
                                                 stats.per_element.end()) -
                                stats.per_element.begin());
    const double grad_small = element_gradient_norm(f, int(smallest));
    const double grad_large = element_gradient_norm(f, int(largest));
    CHECK(grad_small < grad_large);
}

TEST_CASE("mesh quality report") {
    const CoupledMesh mesh = build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, 4, 4);
    const FESpace p1(mesh.fluid, 1, 2);

    SECTION("zero displacement and rigid translations keep areas") {
        const MeshQuality q0 = mesh_quality_report(mesh.fluid, Field::zero(p1));
        CHECK(q0.min_signed_area == Approx(1.0 / 32.0).epsilon(1e-13));

        Field rigid = Field::zero(p1);
        for (int n = 0; n < p1.n_scalar_nodes(); ++n) {
            rigid.values[p1.dof_of(n, 0)] = 5.0;
            rigid.values[p1.dof_of(n, 1)] = -3.0;
        }
        const MeshQuality q1 = mesh_quality_report(mesh.fluid, rigid);
        CHECK(q1.min_signed_area == Approx(1.0 / 32.0).epsilon(1e-13));
        CHECK(q1.worst_aspect == Approx(q0.worst_aspect).epsilon(1e-13));
    }
    SECTION("collapsing a vertex onto its neighbour reports a nonpositive area") {
        Field bad = Field::zero(p1);
        // move vertex 0 onto vertex 1 (a quarter cell to the right)
        bad.values[p1.dof_of(0, 0)] = 0.25;
        const MeshQuality q = mesh_quality_report(mesh.fluid, bad);
        CHECK(q.min_signed_area <= 0.0);
    }
}

TEST_CASE("mesh velocity of an extension time series") {
    const CoupledMesh mesh = build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, 4, 4);
    const AleExtension ale(mesh.fluid);
    const Field f0 = ale.extend([](Vec2) { return Vec2{0.0, 0.0}; });
    const Field f1 = ale.extend([](Vec2 p) { return Vec2{0.0, 0.02 * std::sin(3.1 * p.x)}; });
    const Field w = mesh_velocity(f0, f1, 0.1);
    CHECK((w.values - 10.0 * f1.values).lpNorm<Eigen::Infinity>() <= 1e-12);
}
