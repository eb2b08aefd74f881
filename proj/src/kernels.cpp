#include "qcl/kernels.hpp"

#include <cmath>

namespace qcl::kern {

namespace {
Exec g_default = Exec::Parallel;

// Fixed reduction block count, independent of the thread count, so that
// serial and parallel sums associate identically.
constexpr std::size_t kBlocks = 64;
}  // namespace

Exec default_exec() { return g_default; }
void set_default_exec(Exec e) { g_default = e; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, Exec ex) {
    if (ex == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
        f(static_cast<std::size_t>(i));
}

void spmv(const SparseOp& a, const cplx* x, cplx* y, Exec ex) {
    const auto& rp = a.row_ptr();
    const auto& col = a.cols();
    const auto& val = a.vals();
    const std::int64_t n = a.dim();
    if (ex == Exec::Serial) {
        for (std::int64_t r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (std::int64_t k = rp[r]; k < rp[r + 1]; ++k) acc += val[k] * x[col[k]];
            y[r] = acc;
        }
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
        cplx acc = 0.0;
        for (std::int64_t k = rp[r]; k < rp[r + 1]; ++k) acc += val[k] * x[col[k]];
        y[r] = acc;
    }
}

namespace {

template <typename F>
cplx blocked_reduce(std::size_t n, Exec ex, F block_sum) {
    cplx partial[kBlocks];
    const std::size_t nb = n < kBlocks ? (n == 0 ? 1 : n) : kBlocks;
    auto run = [&](std::size_t b) {
        const std::size_t lo = b * n / nb;
        const std::size_t hi = (b + 1) * n / nb;
        partial[b] = block_sum(lo, hi);
    };
    if (ex == Exec::Serial) {
        for (std::size_t b = 0; b < nb; ++b) run(b);
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(nb); ++b)
            run(static_cast<std::size_t>(b));
    }
    cplx total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) total += partial[b];
    return total;
}

}  // namespace

cplx dot(const cplx* a, const cplx* b, std::size_t n, Exec ex) {
    return blocked_reduce(n, ex, [&](std::size_t lo, std::size_t hi) {
        cplx s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
        return s;
    });
}

double nrm2(const cplx* a, std::size_t n, Exec ex) {
    cplx s = blocked_reduce(n, ex, [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += std::norm(a[i]);
        return cplx(acc, 0.0);
    });
    return std::sqrt(s.real());
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n, Exec ex) {
    parallel_for(n, [&](std::size_t i) { y[i] += alpha * x[i]; }, ex);
}

void scal(cplx alpha, cplx* x, std::size_t n, Exec ex) {
    parallel_for(n, [&](std::size_t i) { x[i] *= alpha; }, ex);
}

}  // namespace qcl::kern
