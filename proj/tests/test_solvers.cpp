#include "rrfsi/fluid_solver.hpp"
#include "rrfsi/harness.hpp"
#include "rrfsi/manufactured.hpp"
#include "rrfsi/orchestrator.hpp"
#include "rrfsi/structure_solver.hpp"

#include <catch2/catch.hpp>

#include <random>

using namespace rrfsi;

namespace {

struct SolverFixture {
    CoupledMesh mesh;
    FESpace vel, pres, disp;
    TraceSpace trace;

    explicit SolverFixture(int n)
        : mesh(build_layered_rect_mesh({0, 0, 1, 1}, {0, -1, 1, 0}, n, n)),
          vel(mesh.fluid, 2, 2), pres(mesh.fluid, 1, 1), disp(mesh.structure, 2, 2),
          trace(mesh, vel, disp) {}
};

} // namespace

TEST_CASE("zero data produces the zero step") {
    SolverFixture fx(3);
    const FluidStepSystem fluid(fx.vel, fx.pres, fx.trace, FluidParams{1, 1, 1, 0.1});
    const auto fr = fluid.step(Field::zero(fx.vel), fx.trace.zero(), nullptr, nullptr, nullptr,
                               0.1);
    CHECK(fr.u.values.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(fr.p.values.lpNorm<Eigen::Infinity>() == 0.0);

    const StructureStepSystem structure(fx.disp, fx.trace, StructureParams{1, 1, 1, 1, 0.1});
    const auto sr = structure.step(Field::zero(fx.disp), Field::zero(fx.disp), fx.trace.zero(),
                                   nullptr, nullptr, 0.1);
    CHECK(sr.xi.values.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(sr.eta.values.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("a rigid translation with free boundaries does not move") {
    SolverFixture fx(3);
    const StructureStepSystem structure(fx.disp, fx.trace, StructureParams{1, 1, 1, 1, 0.1},
                                        /*dirichlet_mask=*/0);
    const Field rigid = interpolate(
        std::function<Vec2(Vec2, double)>([](Vec2, double) { return Vec2{0.3, -0.7}; }),
        fx.disp, 0.0);
    const auto r = structure.step(rigid, Field::zero(fx.disp), fx.trace.zero(), nullptr,
                                  nullptr, 0.1);
    CHECK(r.xi.values.lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((r.eta.values - rigid.values).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("structure system invariants") {
    SolverFixture fx(2);
    const StructureStepSystem structure(fx.disp, fx.trace, StructureParams{1, 1, 1, 1, 0.05});

    SECTION("K annihilates rigid translations") {
        const Field rigid = interpolate(
            std::function<Vec2(Vec2, double)>([](Vec2, double) { return Vec2{1.0, 1.0}; }),
            fx.disp, 0.0);
        CHECK((structure.elasticity() * rigid.values).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
    SECTION("constrained operator is symmetric positive definite") {
        const Eigen::MatrixXd A = Eigen::MatrixXd(structure.system().constrained_matrix());
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        CHECK(llt.info() == Eigen::Success);
    }
    SECTION("the displacement update is the defining expression, bitwise") {
        std::mt19937 rng(3);
        Field eta_prev = Field::zero(fx.disp), xi_prev = Field::zero(fx.disp);
        for (int i = 0; i < eta_prev.values.size(); ++i) {
            eta_prev.values[i] = 2.0 * (double(rng()) / 4294967295.0) - 1.0;
            xi_prev.values[i] = 2.0 * (double(rng()) / 4294967295.0) - 1.0;
        }
        const auto r = structure.step(eta_prev, xi_prev, fx.trace.zero(), nullptr, nullptr,
                                      0.05);
        const Eigen::VectorXd recomputed = eta_prev.values + 0.05 * r.xi.values;
        REQUIRE(std::memcmp(recomputed.data(), r.eta.values.data(),
                            size_t(recomputed.size()) * sizeof(double)) == 0);
    }
}

TEST_CASE("manufactured fluid step: strong Dirichlet, divergence residual, solver residual") {
    SolverFixture fx(4);
    const double dt = 0.025;
    const FluidStepSystem fluid(fx.vel, fx.pres, fx.trace, FluidParams{1, 1, 1, dt});
    const ManufacturedCase mcase;

    const Field u0 = interpolate(std::function<Vec2(Vec2, double)>([&](Vec2 x, double t) {
                                     return mcase.velocity(x, t);
                                 }),
                                 fx.vel, 0.0);
    // exact tractions vanish on Gamma for unit parameters, so the exact-data
    // Robin datum at t0 is L1/2 (u + xi) on the trace
    TractionLedger ledger = TractionLedger::zero(fx.trace);
    ledger.u_trace = fx.trace.gather(u0);
    ledger.xi_trace = ledger.u_trace;
    const Eigen::VectorXd rf = robin_rhs_fluid(ledger, 1.0);

    auto body = [&](Vec2 x, double t) { return mcase.fluid_body_force(x, t); };
    auto fm = [&](Vec2 x, double t) { return mcase.mass_source(x, t); };
    auto dir = [&](Vec2 x, double t) { return mcase.velocity(x, t); };
    const auto r = fluid.step(u0, rf, body, fm, dir, dt);

    SECTION("Dirichlet dofs carry the data exactly") {
        for (int dof : fluid.system().dirichlet_dofs()) {
            const Vec2 g = mcase.velocity(fx.vel.dof_coord(dof), dt);
            const double expect = fx.vel.dof_component(dof) == 0 ? g.x : g.y;
            CHECK(r.u.values[dof] == expect);
        }
    }
    SECTION("discrete divergence equals the mass source to solver tolerance") {
        LoadTable ptable(fx.pres);
        Eigen::VectorXd fm_load = Eigen::VectorXd::Zero(fx.pres.n_dofs());
        ptable.add_scalar_load(fm, dt, 1.0, fm_load);
        const Eigen::VectorXd resid = fluid.divergence() * r.u.values - fm_load;
        CHECK(resid.lpNorm<Eigen::Infinity>() <= 1e-8);
    }
    SECTION("solver residual within tolerance") {
        CHECK(r.residual <= 1e-9);
    }
}

TEST_CASE("fluid solve is independent of dof ordering") {
    SolverFixture fx(2);
    const FluidStepSystem fluid(fx.vel, fx.pres, fx.trace, FluidParams{1, 1, 1, 0.1});
    const SpMat& A = fluid.system().constrained_matrix();
    const int n = int(A.rows());
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i)
        b[i] = std::sin(0.2 * double(i));
    for (int dof : fluid.system().dirichlet_dofs())
        b[dof] = 0.0;

    Eigen::SparseLU<SpMat> direct(A);
    const Eigen::VectorXd x = direct.solve(b);

    std::mt19937 rng(5);
    Eigen::VectorXi perm_idx = Eigen::VectorXi::LinSpaced(n, 0, n - 1);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm_idx[i], perm_idx[int(rng() % unsigned(i + 1))]);
    const Eigen::PermutationMatrix<Eigen::Dynamic> P(perm_idx);
    const SpMat Ap = SpMat(P * A * P.transpose());
    Eigen::SparseLU<SpMat> permuted(Ap);
    const Eigen::VectorXd xp = P.transpose() * Eigen::VectorXd(permuted.solve(
                                   Eigen::VectorXd(P * b)));
    CHECK((xp - x).lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, x.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("quadratic-form residual of the solved fluid system vanishes") {
    SolverFixture fx(3);
    const double dt = 0.05;
    const FluidStepSystem fluid(fx.vel, fx.pres, fx.trace, FluidParams{1, 1, 1, dt});
    std::mt19937 rng(17);
    Field u0 = Field::zero(fx.vel);
    for (int i = 0; i < u0.values.size(); ++i)
        u0.values[i] = 2.0 * (double(rng()) / 4294967295.0) - 1.0;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(fx.vel.n_dofs() + fx.pres.n_dofs());
    rhs.head(fx.vel.n_dofs()) = (1.0 / dt) * (fluid.velocity_mass() * u0.values);
    const Eigen::VectorXd values = Eigen::VectorXd::Zero(rhs.size());
    const Eigen::VectorXd x = fluid.system().solve(rhs, values);
    const Eigen::VectorXd b = fluid.system().constrained_rhs(rhs, values);
    const double qres = std::abs(x.dot(fluid.system().constrained_matrix() * x) - x.dot(b));
    CHECK(qres <= 1e-9 * std::max(1.0, std::abs(x.dot(b))));
}
