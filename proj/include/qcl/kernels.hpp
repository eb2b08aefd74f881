#pragma once

#include <cstddef>
#include <vector>

#include "qcl/sparse.hpp"

// Data-parallel inner loops. Every kernel has a serial reference
// implementation (`*_serial`) and an OpenMP one; both produce bit-identical
// results for any thread count, because reductions always run over the same
// fixed block decomposition and rows/nodes are independent.

namespace qcl::kern {

enum class Exec { Serial, Parallel };

/// Process-wide default used by the solvers.
Exec default_exec();
void set_default_exec(Exec e);

/// y = A x.
void spmv(const SparseOp& a, const cplx* x, cplx* y, Exec ex);
inline void spmv(const SparseOp& a, const std::vector<cplx>& x, std::vector<cplx>& y,
                 Exec ex = default_exec()) {
    y.resize(x.size());
    spmv(a, x.data(), y.data(), ex);
}

/// <a, b> = sum conj(a_i) b_i, accumulated over a fixed 64-block split.
cplx dot(const cplx* a, const cplx* b, std::size_t n, Exec ex = default_exec());
inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b,
                Exec ex = default_exec()) {
    return dot(a.data(), b.data(), a.size(), ex);
}

double nrm2(const cplx* a, std::size_t n, Exec ex = default_exec());
inline double nrm2(const std::vector<cplx>& a, Exec ex = default_exec()) {
    return nrm2(a.data(), a.size(), ex);
}

/// y += alpha * x
void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n, Exec ex = default_exec());

void scal(cplx alpha, cplx* x, std::size_t n, Exec ex = default_exec());

/// Evaluate f(i) for i in [0, n) in parallel; f must only write state owned
/// by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, Exec ex);

}  // namespace qcl::kern
