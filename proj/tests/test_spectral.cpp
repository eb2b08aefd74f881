#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qcl/errors.hpp"
#include "qcl/kernels.hpp"
#include "qcl/spectral.hpp"

using namespace qcl;

TEST_CASE("ground_energy on a diagonal operator") {
    auto op = diagonal_op({3.0, 1.0, 2.0});
    auto r = ground_energy(op);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.residual <= 1e-9);
    CHECK(std::abs(kern::nrm2(r.vector) - 1.0) < 1e-10);
}

TEST_CASE("lanczos matches dense diagonalization on the dirichlet laplacian") {
    SpatialGrid grid(1, 2.0, 300, Boundary::Dirichlet);
    ParticleModel pm{1, {}, ""};
    auto h0 = assemble_h0(grid, pm);
    LanczosOptions opts;
    opts.tol = 1e-9;
    auto r = ground_energy(h0, opts);
    CHECK(std::abs(r.value - test::dense_ground(h0)) < 1e-8);
}

TEST_CASE("lanczos is deterministic for a fixed seed") {
    SpatialGrid grid(1, 4.0, 120, Boundary::Dirichlet);
    ParticleModel pm{1, harmonic_potential(grid, 1, 1.0), ""};
    auto h0 = assemble_h0(grid, pm);
    auto a = ground_energy(h0);
    auto b = ground_energy(h0);
    CHECK(a.value == b.value);
    CHECK(a.vector == b.vector);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("non-convergence carries the best estimate") {
    SpatialGrid grid(1, 4.0, 200, Boundary::Dirichlet);
    ParticleModel pm{1, {}, ""};
    auto h0 = assemble_h0(grid, pm);
    LanczosOptions opts;
    opts.tol = 1e-14;
    opts.max_iter = 8;
    opts.basis_cap = 4;
    try {
        ground_energy(h0, opts);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.residual > 0.0);
    }
}

TEST_CASE("resolvent_apply") {
    SUBCASE("zero operator with unit shift is the identity") {
        auto z = SparseOp::from_triplets(4, {});
        std::vector<cplx> v{1.0, 2.0, cplx(0.0, 1.0), -1.0};
        auto w = resolvent_apply(z, 1.0, v);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(w[i] - v[i]) < 1e-10);
    }
    SUBCASE("diagonal fixture inverts entrywise") {
        auto d = diagonal_op({1.0, 2.0, 3.0});
        std::vector<cplx> v{1.0, 1.0, 1.0};
        auto w = resolvent_apply(d, 0.5, v);
        for (std::size_t i = 0; i < v.size(); ++i)
            CHECK(std::abs(w[i] - 1.0 / (1.5 + static_cast<double>(i))) < 1e-9);
    }
    SUBCASE("residual consistency on a nontrivial operator") {
        SpatialGrid grid(1, 3.0, 64, Boundary::Dirichlet);
        ParticleModel pm{1, harmonic_potential(grid, 1, 1.0), ""};
        auto h0 = assemble_h0(grid, pm);
        auto v = gaussian_probes(h0.dim(), 1, 3)[0];
        auto w = resolvent_apply(h0, 2.0, v, 1e-9);
        std::vector<cplx> aw;
        kern::spmv(h0, w, aw);
        kern::axpy(cplx(2.0), w.data(), aw.data(), aw.size());
        kern::axpy(cplx(-1.0), v.data(), aw.data(), aw.size());
        CHECK(kern::nrm2(aw) <= 1e-7 * kern::nrm2(v));
    }
    SUBCASE("indefinite shift is a precondition error") {
        auto d = diagonal_op({1.0, 5.0});
        std::vector<cplx> v{1.0, 1.0};
        CHECK_THROWS_AS(resolvent_apply(d, -3.0, v), ConfigError);
    }
}

TEST_CASE("resolvent_distance") {
    auto a = diagonal_op({1.0, 2.0, 3.0, 4.0});
    auto b = diagonal_op({1.5, 2.0, 3.0, 4.0});
    auto c = diagonal_op({1.5, 2.5, 3.0, 4.0});
    auto probes = gaussian_probes(4, 8, 11);
    SUBCASE("identical operators have zero distance") {
        CHECK(resolvent_distance(a, a, 1.0, probes) == 0.0);
    }
    SUBCASE("triangle inequality on the probe set") {
        const double dab = resolvent_distance(a, b, 1.0, probes, 1e-10);
        const double dbc = resolvent_distance(b, c, 1.0, probes, 1e-10);
        const double dac = resolvent_distance(a, c, 1.0, probes, 1e-10);
        CHECK(dac <= dab + dbc + 1e-10);
    }
}

namespace {

struct Fixture {
    SpatialGrid grid{1, 5.0, 96, Boundary::Dirichlet};
    ParticleModel pm;
    ModeSet modes = ModeSet::discrete(1, {{{1.0}, 1.0, cplx(0.3)}, {{2.0}, 2.0, cplx(0.2)}});
    Fixture() { pm = {1, harmonic_potential(grid, 1, 1.0), ""}; }
};

}  // namespace

TEST_CASE("pekar minimization") {
    Fixture fx;
    GseOptions opts;
    opts.eig.tol = 1e-10;

    SUBCASE("zero coupling gives the free ground state") {
        ModeSet free_modes = ModeSet::discrete(1, {{{1.0}, 1.0, cplx(0.0)}});
        auto r = pekar_minimize(fx.grid, fx.pm, free_modes, opts);
        CHECK(std::abs(r.z[0]) < 1e-14);
        auto h0 = assemble_h0(fx.grid, fx.pm);
        CHECK(std::abs(r.energy - ground_energy(h0, opts.eig).value) < 1e-9);
    }
    SUBCASE("energy trace is non-increasing") {
        auto r = pekar_minimize(fx.grid, fx.pm, fx.modes, opts);
        for (std::size_t i = 1; i < r.energy_trace.size(); ++i)
            CHECK(r.energy_trace[i] <= r.energy_trace[i - 1] + 1e-8);
        CHECK(r.energy < ground_energy(assemble_h0(fx.grid, fx.pm), opts.eig).value);
    }
    SUBCASE("an exhausted iteration budget reports the energy trace") {
        GseOptions tight = opts;
        tight.alt_max_iter = 1;
        tight.alt_tol = 0.0;
        CHECK_THROWS_WITH_AS(pekar_minimize(fx.grid, fx.pm, fx.modes, tight),
                             doctest::Contains("trace"), SolverError);
    }
}

TEST_CASE("minimize_gse invariants on a small sweep") {
    Fixture fx;
    GseOptions opts;
    opts.eig.tol = 1e-9;
    auto res = minimize_gse(fx.grid, fx.pm, fx.modes, {0.5, 0.25}, opts);
    CHECK(res.sweep.size() == 2);
    CHECK(res.classical_infimum >= res.lower_bound_floor - 1e-9);
    for (const auto& pt : res.sweep) {
        CHECK(pt.quantum_energy >= res.lower_bound_floor - 1e-9);
        CHECK(pt.quantum_energy <= res.classical_infimum + 1e-6);
    }
    // the deflated second-eigenvalue solve matches the dense oracle
    auto dense = test::dense_eigenvalues(assemble_h0(fx.grid, fx.pm));
    CHECK(std::abs(res.h0_gap - (dense[1] - dense[0])) < 1e-8);
}

TEST_CASE("massless modes in the gse path are pinned, not fatal") {
    Fixture fx;
    ModeSet massless =
        ModeSet::discrete(1, {{{0.0}, 0.0, cplx(0.3)}, {{1.0}, 1.0, cplx(0.2)}});
    GseOptions opts;
    opts.eig.tol = 1e-9;
    auto r = pekar_minimize(fx.grid, fx.pm, massless, opts);
    CHECK(std::abs(r.z[0]) == 0.0);
    CHECK(std::abs(r.z[1]) > 0.0);
    auto res = minimize_gse(fx.grid, fx.pm, massless, {0.5}, opts);
    CHECK(std::isnan(res.lower_bound_floor));
}

TEST_CASE("multi-atom refinement does not beat the single-atom optimum here") {
    Fixture fx;
    GseOptions opts;
    opts.eig.tol = 1e-9;
    opts.refine_multi_atom = true;
    opts.refine_evals = 60;
    auto base = pekar_minimize(fx.grid, fx.pm, fx.modes, opts);
    auto res = minimize_gse(fx.grid, fx.pm, fx.modes, {0.5}, opts);
    CHECK(res.classical_infimum >= base.energy - 1e-6);
    CHECK(res.classical_infimum <= base.energy + 1e-9);
}
