#include "qcl/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "qcl/errors.hpp"
#include "qcl/kernels.hpp"

namespace qcl {

SparseOp::SparseOp(std::int64_t dim, std::vector<std::int64_t> row_ptr,
                   std::vector<std::int64_t> col, std::vector<cplx> val)
    : dim_(dim), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val)) {
    if (static_cast<std::int64_t>(row_ptr_.size()) != dim_ + 1)
        throw ArgumentError("SparseOp: row_ptr size mismatch");
}

SparseOp SparseOp::from_triplets(std::int64_t dim, std::vector<Triplet> ts) {
    for (const auto& t : ts) {
        if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim)
            throw ArgumentError("SparseOp::from_triplets: index out of range");
    }
    std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::int64_t> row_ptr(dim + 1, 0);
    std::vector<std::int64_t> col;
    std::vector<cplx> val;
    col.reserve(ts.size());
    val.reserve(ts.size());
    std::size_t i = 0;
    for (std::int64_t r = 0; r < dim; ++r) {
        row_ptr[r] = static_cast<std::int64_t>(col.size());
        while (i < ts.size() && ts[i].row == r) {
            std::int64_t c = ts[i].col;
            cplx v = 0.0;
            while (i < ts.size() && ts[i].row == r && ts[i].col == c) {
                v += ts[i].val;
                ++i;
            }
            col.push_back(c);
            val.push_back(v);
        }
    }
    row_ptr[dim] = static_cast<std::int64_t>(col.size());
    return SparseOp(dim, std::move(row_ptr), std::move(col), std::move(val));
}

double SparseOp::hermiticity_defect() const {
    double worst = 0.0;
    for (std::int64_t r = 0; r < dim_; ++r) {
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            cplx d = val_[k] - std::conj(entry(col_[k], r));
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

double SparseOp::gershgorin_lower_bound() const {
    double lo = 0.0;
    bool first = true;
    for (std::int64_t r = 0; r < dim_; ++r) {
        double diag = 0.0, off = 0.0;
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_[k] == r)
                diag += val_[k].real();
            else
                off += std::abs(val_[k]);
        }
        double b = diag - off;
        lo = first ? b : std::min(lo, b);
        first = false;
    }
    return lo;
}

cplx SparseOp::entry(std::int64_t i, std::int64_t j) const {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_[k] == j) return val_[k];
    return 0.0;
}

SparseOp operator+(const SparseOp& a, const SparseOp& b) {
    if (a.dim() != b.dim()) throw ArgumentError("SparseOp: dimension mismatch in +");
    auto ts = a.to_triplets();
    auto tb = b.to_triplets();
    ts.insert(ts.end(), tb.begin(), tb.end());
    return SparseOp::from_triplets(a.dim(), std::move(ts));
}

SparseOp SparseOp::shifted(double s) const {
    auto ts = to_triplets();
    for (std::int64_t i = 0; i < dim_; ++i) ts.push_back({i, i, cplx(s, 0.0)});
    return from_triplets(dim_, std::move(ts));
}

std::vector<Triplet> SparseOp::to_triplets() const {
    std::vector<Triplet> ts;
    ts.reserve(val_.size());
    for (std::int64_t r = 0; r < dim_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            ts.push_back({r, col_[k], val_[k]});
    return ts;
}

SparseOp assemble_rows(std::int64_t dim, const RowFn& row_fn) {
    std::vector<std::vector<std::pair<std::int64_t, cplx>>> rows(dim);
    kern::parallel_for(static_cast<std::size_t>(dim), [&](std::size_t r) {
        auto& row = rows[r];
        RowEmit emit = [&row](std::int64_t c, cplx v) { row.emplace_back(c, v); };
        row_fn(static_cast<std::int64_t>(r), emit);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        // merge duplicates in place
        std::size_t w = 0;
        for (std::size_t i = 0; i < row.size();) {
            std::int64_t c = row[i].first;
            cplx v = 0.0;
            while (i < row.size() && row[i].first == c) v += row[i++].second;
            row[w++] = {c, v};
        }
        row.resize(w);
    }, kern::default_exec());

    std::vector<std::int64_t> row_ptr(dim + 1, 0);
    for (std::int64_t r = 0; r < dim; ++r)
        row_ptr[r + 1] = row_ptr[r] + static_cast<std::int64_t>(rows[r].size());
    std::vector<std::int64_t> col(row_ptr[dim]);
    std::vector<cplx> val(row_ptr[dim]);
    kern::parallel_for(static_cast<std::size_t>(dim), [&](std::size_t r) {
        std::int64_t k = row_ptr[r];
        for (const auto& [c, v] : rows[r]) {
            col[k] = c;
            val[k] = v;
            ++k;
        }
    }, kern::default_exec());
    return SparseOp(dim, std::move(row_ptr), std::move(col), std::move(val));
}

SparseOp diagonal_op(const std::vector<double>& diag) {
    const auto dim = static_cast<std::int64_t>(diag.size());
    std::vector<std::int64_t> row_ptr(dim + 1);
    std::vector<std::int64_t> col(dim);
    std::vector<cplx> val(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
        if (!std::isfinite(diag[i])) throw DataError("diagonal_op: non-finite sample");
        row_ptr[i] = i;
        col[i] = i;
        val[i] = diag[i];
    }
    row_ptr[dim] = dim;
    return SparseOp(dim, std::move(row_ptr), std::move(col), std::move(val));
}

void dump_operator(std::ostream& os, const SparseOp& op) {
    os << op.dim() << " " << op.nnz() << "\n";
    char buf[96];
    for (std::int64_t r = 0; r < op.dim(); ++r) {
        for (std::int64_t k = op.row_ptr()[r]; k < op.row_ptr()[r + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%lld %lld %.17g %.17g\n",
                          static_cast<long long>(r), static_cast<long long>(op.cols()[k]),
                          op.vals()[k].real(), op.vals()[k].imag());
            os << buf;
        }
    }
}

SparseOp load_operator(std::istream& is) {
    std::int64_t dim = 0, nnz = 0;
    if (!(is >> dim >> nnz)) throw DataError("load_operator: bad header");
    std::vector<Triplet> ts;
    ts.reserve(nnz);
    for (std::int64_t i = 0; i < nnz; ++i) {
        std::int64_t r, c;
        double re, im;
        if (!(is >> r >> c >> re >> im)) throw DataError("load_operator: truncated file");
        ts.push_back({r, c, cplx(re, im)});
    }
    return SparseOp::from_triplets(dim, std::move(ts));
}

}  // namespace qcl
