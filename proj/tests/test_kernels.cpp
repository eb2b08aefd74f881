#include <doctest.h>

#include <random>

#include "qcl/kernels.hpp"
#include "qcl/sparse.hpp"

using namespace qcl;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(g(rng), g(rng));
    return v;
}

SparseOp random_hermitian(std::int64_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> idx(0, dim - 1);
    std::vector<Triplet> ts;
    for (int e = 0; e < 6 * dim; ++e) {
        const auto i = idx(rng), j = idx(rng);
        const cplx v(g(rng), g(rng));
        ts.push_back({i, j, v});
        ts.push_back({j, i, std::conj(v)});
    }
    return SparseOp::from_triplets(dim, std::move(ts));
}

}  // namespace

TEST_CASE("blocked dot matches naive sum and is exec-invariant") {
    const auto a = random_vec(1537, 1);
    const auto b = random_vec(1537, 2);
    cplx naive = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) naive += std::conj(a[i]) * b[i];
    const cplx ds = kern::dot(a.data(), b.data(), a.size(), kern::Exec::Serial);
    const cplx dp = kern::dot(a.data(), b.data(), a.size(), kern::Exec::Parallel);
    CHECK(ds == dp);  // bit-identical by construction
    CHECK(std::abs(ds - naive) < 1e-10 * std::abs(naive));
    CHECK(kern::nrm2(a.data(), a.size(), kern::Exec::Serial) ==
          kern::nrm2(a.data(), a.size(), kern::Exec::Parallel));
}

TEST_CASE("spmv serial and parallel agree bitwise") {
    const auto op = random_hermitian(211, 7);
    const auto x = random_vec(211, 3);
    std::vector<cplx> ys(x.size()), yp(x.size());
    kern::spmv(op, x.data(), ys.data(), kern::Exec::Serial);
    kern::spmv(op, x.data(), yp.data(), kern::Exec::Parallel);
    CHECK(ys == yp);
}

TEST_CASE("spmv matches dense multiplication") {
    const auto op = random_hermitian(64, 9);
    const auto x = random_vec(64, 4);
    std::vector<cplx> y(x.size());
    kern::spmv(op, x.data(), y.data(), kern::Exec::Serial);
    for (std::int64_t r = 0; r < op.dim(); ++r) {
        cplx acc = 0.0;
        for (std::int64_t c = 0; c < op.dim(); ++c) acc += op.entry(r, c) * x[c];
        CHECK(std::abs(acc - y[r]) < 1e-12);
    }
}

TEST_CASE("axpy and scal") {
    auto x = random_vec(97, 5);
    auto y = random_vec(97, 6);
    const auto y0 = y;
    kern::axpy(cplx(2.0, -1.0), x.data(), y.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[i] - (y0[i] + cplx(2.0, -1.0) * x[i])) < 1e-14);
    kern::scal(cplx(0.5), y.data(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[i] - 0.5 * (y0[i] + cplx(2.0, -1.0) * x[i])) < 1e-14);
}
