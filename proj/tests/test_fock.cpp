#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qcl/errors.hpp"
#include "qcl/fock.hpp"
#include "qcl/kernels.hpp"

using namespace qcl;

namespace {

ModeSet two_modes() {
    return ModeSet::discrete(1, {{{1.0}, 1.0, cplx(0.3)}, {{2.0}, 2.0, cplx(0.2, 0.1)}});
}

FockState random_fock_state(const FockSpacePtr& space, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    FockState st{space, std::vector<cplx>(space->dim())};
    for (auto& c : st.coeffs) c = cplx(g(rng), g(rng));
    st.normalize();
    return st;
}

}  // namespace

TEST_CASE("basis indexing is a bijection, mode 0 fastest") {
    FockSpace space(two_modes(), 0.5, {3, 2});
    CHECK(space.dim() == 12);
    CHECK(space.stride(0) == 1);
    CHECK(space.stride(1) == 4);
    for (std::int64_t i = 0; i < space.dim(); ++i)
        CHECK(space.index_of(space.occupations(i)) == i);
    CHECK(space.occupation(5, 0) == 1);
    CHECK(space.occupation(5, 1) == 1);
    CHECK_THROWS_AS(space.index_of({4, 0}), ArgumentError);
}

TEST_CASE("ladder matrix elements") {
    ModeSet one = ModeSet::discrete(1, {{{1.0}, 1.0, cplx(0.3)}});

    SUBCASE("eps = 1 standard ladder") {
        FockSpace space(one, 1.0, {2});
        auto a = annihilation(space, 0);
        CHECK(a.entry(0, 1) == cplx(1.0));
        CHECK(std::abs(a.entry(1, 2) - cplx(std::sqrt(2.0))) < 1e-15);
        CHECK(a.entry(1, 0) == cplx(0.0));
    }
    SUBCASE("eps = 0.25 scales the eps = 1 ladder by sqrt(eps)") {
        FockSpace space(one, 0.25, {2});
        FockSpace unit(one, 1.0, {2});
        auto a = annihilation(space, 0);
        CHECK(std::abs(a.entry(0, 1) - cplx(0.5)) < 1e-15);
        CHECK(std::abs(a.entry(1, 2) - cplx(std::sqrt(0.5))) < 1e-15);
        auto b = annihilation(unit, 0);
        for (std::int64_t r = 0; r < 3; ++r)
            for (std::int64_t c = 0; c < 3; ++c)
                CHECK(std::abs(a.entry(r, c) - 0.5 * b.entry(r, c)) < 1e-15);
    }
    SUBCASE("creation is the conjugate transpose") {
        FockSpace space(two_modes(), 0.5, {3, 3});
        for (int n = 0; n < 2; ++n) {
            auto a = annihilation(space, n);
            auto ad = creation(space, n);
            for (std::int64_t r = 0; r < space.dim(); ++r)
                for (std::int64_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
                    CHECK(ad.entry(a.cols()[k], r) == std::conj(a.vals()[k]));
        }
    }
    SUBCASE("mode index out of range") {
        FockSpace space(one, 1.0, {2});
        CHECK_THROWS_AS(annihilation(space, 1), ArgumentError);
        CHECK_THROWS_AS(creation(space, -1), ArgumentError);
    }
}

TEST_CASE("commutator equals eps below the truncation boundary") {
    const double eps = 0.3;
    FockSpace space(two_modes(), eps, {4, 3});
    for (int n = 0; n < 2; ++n) {
        auto a = annihilation(space, n);
        auto ad = creation(space, n);
        std::vector<cplx> e(space.dim(), 0.0), t1, t2, t3;
        for (std::int64_t f = 0; f < space.dim(); ++f) {
            e.assign(space.dim(), 0.0);
            e[f] = 1.0;
            kern::spmv(ad, e, t1);
            kern::spmv(a, t1, t2);
            kern::spmv(a, e, t1);
            kern::spmv(ad, t1, t3);
            const bool boundary = space.occupation(f, n) == space.cutoffs()[n];
            for (std::int64_t i = 0; i < space.dim(); ++i) {
                const cplx comm = t2[i] - t3[i];
                if (!boundary) {
                    CHECK(std::abs(comm - (i == f ? cplx(eps) : cplx(0.0))) < 1e-15);
                } else if (i == f) {
                    // truncated a a+ vanishes on the top level
                    CHECK(std::abs(comm + eps * space.cutoffs()[n]) < 1e-13);
                }
            }
        }
    }
}

TEST_CASE("dgamma") {
    ModeSet one = ModeSet::discrete(1, {{{1.0}, 2.0, cplx(0.3)}});
    FockSpace space(one, 0.5, {5});
    SUBCASE("vacuum expectation vanishes") {
        FockState vac{std::make_shared<const FockSpace>(space), std::vector<cplx>(6, 0.0)};
        vac.coeffs[0] = 1.0;
        CHECK(std::abs(field_expectation(vac, field_energy(space))) == 0.0);
    }
    SUBCASE("number state m = 3 with omega = 2, eps = 0.5") {
        FockState st{std::make_shared<const FockSpace>(space), std::vector<cplx>(6, 0.0)};
        st.coeffs[3] = 1.0;
        CHECK(field_expectation(st, field_energy(space)).real() == doctest::Approx(3.0));
    }
    SUBCASE("negative weight rejected") {
        CHECK_THROWS_AS(dgamma(space, {-1.0}), ArgumentError);
        CHECK_THROWS_AS(dgamma(space, {1.0, 1.0}), ArgumentError);
    }
}

TEST_CASE("poisson tail and adequate cutoff") {
    CHECK(poisson_tail(0.0, 3) == 0.0);
    CHECK(poisson_tail(1.0, -1) == 1.0);
    // P(X > 2) for mean 1: 1 - e^{-1}(1 + 1 + 1/2)
    CHECK(poisson_tail(1.0, 2) == doctest::Approx(1.0 - std::exp(-1.0) * 2.5).epsilon(1e-12));
    for (double mean : {0.4, 3.0, 25.0, 400.0}) {
        const int m = adequate_cutoff(mean, 1e-8);
        CHECK(poisson_tail(mean, m) <= 1e-8);
        if (m > 0) CHECK(poisson_tail(mean, m - 1) > 1e-8);
    }
}

TEST_CASE("coherent state") {
    ModeSet one = ModeSet::discrete(1, {{{1.0}, 1.0, cplx(0.3)}});

    SUBCASE("zero displacement is the vacuum") {
        auto space = std::make_shared<const FockSpace>(one, 0.5, std::vector<int>{6});
        auto xi = coherent_state(space, {cplx(0.0)});
        CHECK(std::abs(xi.coeffs[0] - cplx(1.0)) < 1e-15);
        CHECK(xi.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("f = 0.6 at eps = 0.25: <a> = f and <dGamma(1)> = |f|^2") {
        auto space = std::make_shared<const FockSpace>(one, 0.25, std::vector<int>{40});
        auto xi = coherent_state(space, {cplx(0.6)}, 1e-10);
        auto a = annihilation(*space, 0);
        std::vector<cplx> y;
        kern::spmv(a, xi.coeffs, y);
        CHECK(std::abs(kern::dot(xi.coeffs, y) - cplx(0.6)) < 1e-6);
        CHECK(std::abs(field_expectation(xi, number_operator(*space)).real() - 0.36) < 1e-6);
    }
    SUBCASE("matches the Weyl displacement oracle") {
        auto space = std::make_shared<const FockSpace>(two_modes(), 0.25,
                                                       std::vector<int>{28, 24});
        const std::vector<cplx> f{cplx(0.4, 0.2), cplx(-0.3, 0.1)};
        auto direct = coherent_state(space, f, 1e-10);
        auto weyl = test::displaced_vacuum(space, f);
        const cplx ov = kern::dot(weyl.coeffs, direct.coeffs);
        CHECK(std::abs(ov - cplx(1.0)) < 1e-9);
    }
    SUBCASE("inadequate cutoff names the offending mode") {
        auto space = std::make_shared<const FockSpace>(one, 0.01, std::vector<int>{1});
        CHECK_THROWS_WITH_AS(coherent_state(space, {cplx(0.6)}),
                             doctest::Contains("mode 0"), ConfigError);
    }
}

TEST_CASE("coherent overlap formula matches the truncated inner product") {
    auto modes = two_modes();
    const std::vector<cplx> z1{cplx(0.5, 0.1), cplx(-0.2, 0.3)};
    const std::vector<cplx> z2{cplx(-0.3, 0.2), cplx(0.4, -0.1)};
    for (double eps : {1.0, 0.25}) {
        std::vector<int> cutoffs(2);
        for (int n = 0; n < 2; ++n) {
            const double peak = std::max(std::norm(z1[n]), std::norm(z2[n]));
            cutoffs[n] = adequate_cutoff(peak / eps, 1e-12) + 2;
        }
        auto space = std::make_shared<const FockSpace>(modes, eps, cutoffs);
        auto xi1 = coherent_state(space, z1, 1e-10);
        auto xi2 = coherent_state(space, z2, 1e-10);
        const cplx direct = kern::dot(xi1.coeffs, xi2.coeffs);
        const cplx formula = coherent_overlap_formula(z1, z2, eps);
        CHECK(std::abs(direct - formula) < 1e-8);
    }
}

TEST_CASE("number identity: <dGamma(1)> = ||f||^2 uniformly in eps") {
    auto modes = two_modes();
    const std::vector<cplx> f{cplx(0.5, 0.2), cplx(-0.3, 0.1)};
    const double f2 = std::norm(f[0]) + std::norm(f[1]);
    double prev_mean_occ = 0.0;
    for (double eps : {1.0, 0.5, 0.25, 0.125}) {
        std::vector<int> cutoffs(2);
        for (int n = 0; n < 2; ++n) cutoffs[n] = adequate_cutoff(std::norm(f[n]) / eps, 1e-12) + 2;
        auto space = std::make_shared<const FockSpace>(modes, eps, cutoffs);
        auto xi = coherent_state(space, f, 1e-10);
        const double ng = field_expectation(xi, number_operator(*space)).real();
        CHECK(std::abs(ng - f2) < 1e-8);
        // the standard (unscaled) occupation |f|^2/eps diverges as eps -> 0
        const double mean_occ = ng / eps;
        CHECK(mean_occ > prev_mean_occ);
        prev_mean_occ = mean_occ;
    }
}

TEST_CASE("norm identity with the eps-scaled commutator") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    const double eps = 0.5;
    auto space = std::make_shared<const FockSpace>(two_modes(), eps, std::vector<int>{5, 4});
    for (int trial = 0; trial < 50; ++trial) {
        auto psi = random_fock_state(space, rng);
        // restrict strictly below the cutoff
        for (std::int64_t i = 0; i < space->dim(); ++i)
            for (int n = 0; n < 2; ++n)
                if (space->occupation(i, n) == space->cutoffs()[n]) psi.coeffs[i] = 0.0;
        psi.normalize();
        std::vector<cplx> gv{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
        const double g2 = std::norm(gv[0]) + std::norm(gv[1]);
        std::vector<cplx> y;
        kern::spmv(smeared_creation(*space, gv), psi.coeffs, y);
        const double lhs = kern::nrm2(y);
        kern::spmv(smeared_annihilation(*space, gv), psi.coeffs, y);
        const double rhs = kern::nrm2(y);
        CHECK(std::abs(lhs * lhs - rhs * rhs - eps * g2) < 1e-10 * (1.0 + lhs * lhs));
    }
}

TEST_CASE("a(g) is bounded by the field energy (massive modes)") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g(0.0, 1.0);
    auto space = std::make_shared<const FockSpace>(two_modes(), 0.25, std::vector<int>{5, 5});
    const std::vector<double> w{1.0, 2.0};
    const auto dg = dgamma(*space, w);
    for (int trial = 0; trial < 200; ++trial) {
        auto psi = random_fock_state(space, rng);
        std::vector<cplx> gv{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
        const double gw2 = std::norm(gv[0]) / w[0] + std::norm(gv[1]) / w[1];
        std::vector<cplx> y;
        kern::spmv(smeared_annihilation(*space, gv), psi.coeffs, y);
        const double lhs = kern::nrm2(y);
        const double rhs = std::sqrt(gw2) * std::sqrt(field_expectation(psi, dg).real());
        CHECK(lhs <= rhs + 1e-12 * (1.0 + rhs));
    }
}

TEST_CASE("field_expectation") {
    std::mt19937_64 rng(17);
    auto space = std::make_shared<const FockSpace>(two_modes(), 0.5, std::vector<int>{4, 4});
    auto psi = random_fock_state(space, rng);
    SUBCASE("identity on a normalized state") {
        std::vector<Triplet> ts;
        for (std::int64_t i = 0; i < space->dim(); ++i) ts.push_back({i, i, cplx(1.0)});
        CHECK(std::abs(field_expectation(psi, SparseOp::from_triplets(space->dim(), std::move(ts)))
                       - cplx(1.0)) < 1e-12);
    }
    SUBCASE("hermitian operator gives a real value") {
        auto h = creation(*space, 0) + annihilation(*space, 0);
        CHECK(std::abs(field_expectation(psi, h).imag()) < 1e-12);
    }
    SUBCASE("dimension mismatch") {
        auto other = FockSpace(two_modes(), 0.5, {2, 2});
        CHECK_THROWS_AS(field_expectation(psi, number_operator(other)), ArgumentError);
    }
}

TEST_CASE("product coherent state matches the dense representation") {
    auto modes = two_modes();
    const double eps = 0.25;
    const std::vector<cplx> f{cplx(0.4, -0.1), cplx(0.2, 0.3)};
    std::vector<int> cutoffs{24, 24};
    auto space = std::make_shared<const FockSpace>(modes, eps, cutoffs);
    auto dense = coherent_state(space, f, 1e-10);
    ProductCoherentState pcs(modes, eps, f, cutoffs, 1e-10);
    const auto moments = mode_annihilation_expectations(dense);
    for (int n = 0; n < 2; ++n)
        CHECK(std::abs(moments[n] - pcs.annihilation_expectation(n)) < 1e-12);
    std::vector<double> w{1.0, 2.0};
    CHECK(field_expectation(dense, dgamma(*space, w)).real() ==
          doctest::Approx(pcs.dgamma_expectation(w)).epsilon(1e-12));
}

TEST_CASE("mode set validation") {
    CHECK_THROWS_AS(ModeSet::discrete(1, {{{1.0}, -0.5, cplx(0.1)}}), ArgumentError);
    CHECK_THROWS_AS(ModeSet::discrete(2, {{{1.0}, 1.0, cplx(0.1)}}), ArgumentError);
    CHECK_THROWS_AS(ModeSet::polaron_uniform(1, 8, 4.0), ArgumentError);
    auto pol = ModeSet::polaron_uniform(2, 6, 3.0);
    CHECK(pol.count() == 36);
    for (int n = 0; n < pol.count(); ++n) {
        CHECK(pol.abs_k(n) > 0.0);
        CHECK(pol.mode(n).omega == 1.0);
        // |lambda|^2 = |k|^{1-d} * cell
        CHECK(std::norm(pol.mode(n).lambda) ==
              doctest::Approx(pol.cell_volume() / pol.abs_k(n)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(FockSpace(two_modes(), 0.0, {2, 2}), ArgumentError);
    CHECK_THROWS_AS(FockSpace(two_modes(), 1.0, {2}), ArgumentError);
    CHECK_THROWS_AS(FockSpace(two_modes(), 1.0, {-1, 2}), ArgumentError);
}
