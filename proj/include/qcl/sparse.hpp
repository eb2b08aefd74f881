#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace qcl {

using cplx = std::complex<double>;

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    cplx val;
};

/// Sparse operator in compressed-row form. All operators in this project are
/// Hermitian; assembly routines are responsible for emitting both triangles.
/// Immutable after construction and safe to share across threads.
class SparseOp {
public:
    SparseOp() = default;
    SparseOp(std::int64_t dim, std::vector<std::int64_t> row_ptr,
             std::vector<std::int64_t> col, std::vector<cplx> val);

    /// Build from an unsorted triplet list; duplicates are summed.
    static SparseOp from_triplets(std::int64_t dim, std::vector<Triplet> triplets);

    std::int64_t dim() const { return dim_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(val_.size()); }

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int64_t>& cols() const { return col_; }
    const std::vector<cplx>& vals() const { return val_; }

    /// max |A_ij - conj(A_ji)| over stored entries (0 for an exactly Hermitian matrix).
    double hermiticity_defect() const;

    /// min_i (Re A_ii - sum_{j != i} |A_ij|); a rigorous lower bound on the
    /// spectrum of a Hermitian matrix (Gershgorin).
    double gershgorin_lower_bound() const;

    cplx entry(std::int64_t i, std::int64_t j) const;

    /// A + B (dimensions must match).
    friend SparseOp operator+(const SparseOp& a, const SparseOp& b);
    /// A + s*I on the diagonal.
    SparseOp shifted(double s) const;

    std::vector<Triplet> to_triplets() const;

private:
    std::int64_t dim_ = 0;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int64_t> col_;
    std::vector<cplx> val_;
};

/// Callback-based row assembly. `row_fn(i, emit)` must emit the entries of
/// row i through `emit(col, val)`; entries may repeat and need not be sorted.
/// The result is identical for serial and parallel execution: each row is
/// generated independently and sorted, so no cross-row reduction exists.
using RowEmit = std::function<void(std::int64_t, cplx)>;
using RowFn = std::function<void(std::int64_t, const RowEmit&)>;

SparseOp assemble_rows(std::int64_t dim, const RowFn& row_fn);

/// Diagonal operator from real samples.
SparseOp diagonal_op(const std::vector<double>& diag);

/// Text dump: header "dim nnz", then one "row col re im" line per entry.
void dump_operator(std::ostream& os, const SparseOp& op);
SparseOp load_operator(std::istream& is);

}  // namespace qcl
