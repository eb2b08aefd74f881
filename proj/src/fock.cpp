#include "qcl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcl/errors.hpp"
#include "qcl/kernels.hpp"

namespace qcl {

namespace {

double abs_k_of(const Mode& m) {
    double s = 0.0;
    for (double c : m.k) s += c * c;
    return std::sqrt(s);
}

// Cartesian product of per-axis k values.
void cartesian_k(const std::vector<double>& axis, int dim_d,
                 const std::function<void(const std::vector<double>&)>& visit) {
    std::vector<double> k(dim_d, 0.0);
    std::vector<int> idx(dim_d, 0);
    const int n = static_cast<int>(axis.size());
    while (true) {
        for (int a = 0; a < dim_d; ++a) k[a] = axis[idx[a]];
        visit(k);
        int a = 0;
        while (a < dim_d && ++idx[a] == n) idx[a++] = 0;
        if (a == dim_d) break;
    }
}

}  // namespace

ModeSet::ModeSet(int dim_d, ModeFamily family, std::vector<Mode> modes, double cell_volume)
    : dim_d_(dim_d), family_(family), modes_(std::move(modes)), cell_volume_(cell_volume) {
    if (dim_d_ < 1 || dim_d_ > 3) throw ArgumentError("ModeSet: dim_d must be 1, 2 or 3");
    if (cell_volume_ <= 0.0) throw ArgumentError("ModeSet: cell_volume must be positive");
    for (std::size_t n = 0; n < modes_.size(); ++n) {
        const Mode& m = modes_[n];
        if (static_cast<int>(m.k.size()) != dim_d_)
            throw ArgumentError("ModeSet: wave vector dimension mismatch");
        if (!(m.omega >= 0.0)) throw ArgumentError("ModeSet: omega must be >= 0");
        if (family_ == ModeFamily::Polaron) {
            if (abs_k_of(m) <= 0.0)
                throw ArgumentError("ModeSet: polaron mode with k = 0");
            if (m.omega != 1.0)
                throw ArgumentError("ModeSet: polaron requires omega = 1");
        }
    }
}

ModeSet ModeSet::discrete(int dim_d, std::vector<Mode> modes) {
    return ModeSet(dim_d, ModeFamily::Discrete, std::move(modes), 1.0);
}

ModeSet ModeSet::nelson_uniform(int dim_d, int points_per_axis, double k_max,
                                const std::function<double(double)>& lambda_of_absk,
                                const std::function<double(double)>& omega_of_absk) {
    if (points_per_axis < 2) throw ArgumentError("ModeSet: need >= 2 points per axis");
    const double dk = 2.0 * k_max / (points_per_axis - 1);
    std::vector<double> axis(points_per_axis);
    for (int i = 0; i < points_per_axis; ++i) axis[i] = -k_max + i * dk;
    double cell = std::pow(dk, dim_d);
    std::vector<Mode> modes;
    cartesian_k(axis, dim_d, [&](const std::vector<double>& k) {
        double a = 0.0;
        for (double c : k) a += c * c;
        a = std::sqrt(a);
        modes.push_back({k, omega_of_absk(a), lambda_of_absk(a) * std::sqrt(cell)});
    });
    return ModeSet(dim_d, ModeFamily::NelsonCutoff, std::move(modes), cell);
}

ModeSet ModeSet::polaron_uniform(int dim_d, int points_per_axis, double k_max) {
    if (dim_d < 2)
        throw ArgumentError("ModeSet: the polaron family requires d >= 2 "
                            "(1d polaron-like sets must be built as Discrete and "
                            "flagged non-standard by the caller)");
    if (points_per_axis < 2) throw ArgumentError("ModeSet: need >= 2 points per axis");
    const double dk = 2.0 * k_max / points_per_axis;
    std::vector<double> axis(points_per_axis);
    for (int i = 0; i < points_per_axis; ++i)
        axis[i] = (i - 0.5 * points_per_axis + 0.5) * dk;  // half-cell offset, no zero
    double cell = std::pow(dk, dim_d);
    std::vector<Mode> modes;
    cartesian_k(axis, dim_d, [&](const std::vector<double>& k) {
        double a = 0.0;
        for (double c : k) a += c * c;
        a = std::sqrt(a);
        double lam = std::pow(a, -0.5 * (dim_d - 1)) * std::sqrt(cell);
        modes.push_back({k, 1.0, lam});
    });
    return ModeSet(dim_d, ModeFamily::Polaron, std::move(modes), cell);
}

double ModeSet::abs_k(int n) const { return abs_k_of(modes_.at(n)); }

double ModeSet::lambda_norm2() const {
    double s = 0.0;
    for (const auto& m : modes_) s += std::norm(m.lambda);
    return s;
}

double ModeSet::lambda_over_sqrt_omega_norm2() const {
    double s = 0.0;
    for (const auto& m : modes_) {
        if (m.omega <= 0.0)
            throw ArgumentError("ModeSet: ||omega^{-1/2} lambda|| undefined for omega = 0");
        s += std::norm(m.lambda) / m.omega;
    }
    return s;
}

FockSpace::FockSpace(ModeSet modes, double eps, std::vector<int> cutoffs)
    : modes_(std::move(modes)), eps_(eps), cutoffs_(std::move(cutoffs)) {
    if (!(eps_ > 0.0)) throw ArgumentError("FockSpace: eps must be > 0");
    if (static_cast<int>(cutoffs_.size()) != modes_.count())
        throw ArgumentError("FockSpace: one cutoff per mode required");
    strides_.resize(cutoffs_.size());
    std::int64_t dim = 1;
    for (std::size_t n = 0; n < cutoffs_.size(); ++n) {
        if (cutoffs_[n] < 0) throw ArgumentError("FockSpace: negative cutoff");
        strides_[n] = dim;
        dim *= static_cast<std::int64_t>(cutoffs_[n]) + 1;
        if (dim > (std::int64_t{1} << 33))
            throw ResourceError("FockSpace: truncated basis too large to enumerate");
    }
    dim_ = dim;
}

int FockSpace::occupation(std::int64_t index, int mode) const {
    return static_cast<int>((index / strides_[mode]) % (cutoffs_[mode] + 1));
}

std::vector<int> FockSpace::occupations(std::int64_t index) const {
    std::vector<int> occ(cutoffs_.size());
    for (std::size_t n = 0; n < cutoffs_.size(); ++n)
        occ[n] = occupation(index, static_cast<int>(n));
    return occ;
}

std::int64_t FockSpace::index_of(const std::vector<int>& occ) const {
    if (occ.size() != cutoffs_.size()) throw ArgumentError("FockSpace: occupation size mismatch");
    std::int64_t idx = 0;
    for (std::size_t n = 0; n < occ.size(); ++n) {
        if (occ[n] < 0 || occ[n] > cutoffs_[n])
            throw ArgumentError("FockSpace: occupation out of range");
        idx += occ[n] * strides_[n];
    }
    return idx;
}

double FockState::norm() const { return kern::nrm2(coeffs); }

void FockState::normalize() {
    double n = norm();
    if (n == 0.0) throw ArgumentError("FockState: cannot normalize the zero vector");
    kern::scal(1.0 / n, coeffs.data(), coeffs.size());
}

SparseOp annihilation(const FockSpace& space, int n) {
    if (n < 0 || n >= space.n_modes()) throw ArgumentError("annihilation: mode index out of range");
    const double eps = space.eps();
    const int cutoff = space.cutoffs()[n];
    const std::int64_t stride = space.stride(n);
    return assemble_rows(space.dim(), [&, n](std::int64_t row, const RowEmit& emit) {
        const int m = space.occupation(row, n);
        if (m < cutoff) emit(row + stride, std::sqrt(eps * (m + 1)));
    });
}

SparseOp creation(const FockSpace& space, int n) {
    if (n < 0 || n >= space.n_modes()) throw ArgumentError("creation: mode index out of range");
    const double eps = space.eps();
    const std::int64_t stride = space.stride(n);
    return assemble_rows(space.dim(), [&, n](std::int64_t row, const RowEmit& emit) {
        const int m = space.occupation(row, n);
        if (m >= 1) emit(row - stride, std::sqrt(eps * m));
    });
}

SparseOp dgamma(const FockSpace& space, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != space.n_modes())
        throw ArgumentError("dgamma: one weight per mode required");
    for (double w : weights)
        if (!(w >= 0.0)) throw ArgumentError("dgamma: negative weight");
    const double eps = space.eps();
    std::vector<double> diag(space.dim());
    kern::parallel_for(static_cast<std::size_t>(space.dim()), [&](std::size_t i) {
        double s = 0.0;
        for (int n = 0; n < space.n_modes(); ++n)
            s += weights[n] * space.occupation(static_cast<std::int64_t>(i), n);
        diag[i] = eps * s;
    }, kern::default_exec());
    return diagonal_op(diag);
}

SparseOp number_operator(const FockSpace& space) {
    return dgamma(space, std::vector<double>(space.n_modes(), 1.0));
}

SparseOp field_energy(const FockSpace& space) {
    std::vector<double> w(space.n_modes());
    for (int n = 0; n < space.n_modes(); ++n) w[n] = space.modes().mode(n).omega;
    return dgamma(space, w);
}

SparseOp smeared_annihilation(const FockSpace& space, const std::vector<cplx>& g) {
    if (static_cast<int>(g.size()) != space.n_modes())
        throw ArgumentError("smeared_annihilation: amplitude size mismatch");
    const double eps = space.eps();
    return assemble_rows(space.dim(), [&](std::int64_t row, const RowEmit& emit) {
        for (int n = 0; n < space.n_modes(); ++n) {
            const int m = space.occupation(row, n);
            if (m < space.cutoffs()[n])
                emit(row + space.stride(n), std::conj(g[n]) * std::sqrt(eps * (m + 1)));
        }
    });
}

SparseOp smeared_creation(const FockSpace& space, const std::vector<cplx>& g) {
    if (static_cast<int>(g.size()) != space.n_modes())
        throw ArgumentError("smeared_creation: amplitude size mismatch");
    const double eps = space.eps();
    return assemble_rows(space.dim(), [&](std::int64_t row, const RowEmit& emit) {
        for (int n = 0; n < space.n_modes(); ++n) {
            const int m = space.occupation(row, n);
            if (m >= 1) emit(row - space.stride(n), g[n] * std::sqrt(eps * m));
        }
    });
}

double poisson_tail(double mean, int m) {
    if (mean <= 0.0) return 0.0;
    if (m < 0) return 1.0;
    // Sum the upper tail directly, starting from the first excluded term, so
    // small tails are not lost to cancellation.
    const int k0 = m + 1;
    double log_p = k0 * std::log(mean) - mean - std::lgamma(static_cast<double>(k0) + 1.0);
    double p = std::exp(log_p);
    double tail = 0.0;
    double term = p;
    for (int k = k0; k < k0 + 8 * (static_cast<int>(std::sqrt(mean)) + 8) + 64; ++k) {
        tail += term;
        term *= mean / (k + 1);
        if (term < tail * 1e-18 && term < 1e-300) break;
    }
    return std::min(tail, 1.0);
}

int adequate_cutoff(double mean, double tau) {
    if (mean <= 0.0) return 0;
    int m = static_cast<int>(mean);
    while (poisson_tail(mean, m) > tau) ++m;
    while (m > 0 && poisson_tail(mean, m - 1) <= tau) --m;
    return m;
}

namespace {

// Renormalized truncated Poisson coefficients for one mode, assembled in
// log magnitude so large mean occupations |beta|^2 do not underflow.
std::vector<cplx> mode_coherent_coeffs(cplx beta, int cutoff) {
    std::vector<cplx> c(cutoff + 1);
    const double nu = std::norm(beta);
    if (nu == 0.0) {
        c[0] = 1.0;
        return c;
    }
    const double log_abs_beta = 0.5 * std::log(nu);
    const double phase = std::arg(beta);
    std::vector<double> logmag(cutoff + 1);
    double shift = -0.5 * nu;
    for (int m = 0; m <= cutoff; ++m) {
        logmag[m] = m * log_abs_beta - 0.5 * nu - 0.5 * std::lgamma(static_cast<double>(m) + 1.0);
        shift = std::max(shift, logmag[m]);
    }
    double norm2 = 0.0;
    for (int m = 0; m <= cutoff; ++m) {
        const double mag = std::exp(logmag[m] - shift);
        c[m] = std::polar(mag, phase * m);
        norm2 += mag * mag;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : c) v *= inv;
    return c;
}

void check_mode_adequacy(const std::vector<cplx>& f, double eps, const std::vector<int>& cutoffs,
                         double tau_trunc) {
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double mean = std::norm(f[n]) / eps;
        const double tail = poisson_tail(mean, cutoffs[n]);
        if (tail > tau_trunc) {
            std::ostringstream os;
            os << "coherent_state: cutoff too small for mode " << n << " (cutoff "
               << cutoffs[n] << ", Poisson tail " << tail << " > " << tau_trunc
               << "); need M_n >= " << adequate_cutoff(mean, tau_trunc);
            throw ConfigError(os.str());
        }
    }
}

}  // namespace

FockState coherent_state(const FockSpacePtr& space, const std::vector<cplx>& f,
                         double tau_trunc) {
    if (static_cast<int>(f.size()) != space->n_modes())
        throw ArgumentError("coherent_state: amplitude size mismatch");
    check_mode_adequacy(f, space->eps(), space->cutoffs(), tau_trunc);
    const double sqrt_eps = std::sqrt(space->eps());
    std::vector<std::vector<cplx>> per_mode(f.size());
    for (std::size_t n = 0; n < f.size(); ++n)
        per_mode[n] = mode_coherent_coeffs(f[n] / sqrt_eps, space->cutoffs()[n]);

    FockState state{space, std::vector<cplx>(space->dim())};
    kern::parallel_for(static_cast<std::size_t>(space->dim()), [&](std::size_t i) {
        cplx v = 1.0;
        for (int n = 0; n < space->n_modes(); ++n)
            v *= per_mode[n][space->occupation(static_cast<std::int64_t>(i), n)];
        state.coeffs[i] = v;
    }, kern::default_exec());
    return state;
}

cplx coherent_overlap_formula(const std::vector<cplx>& z1, const std::vector<cplx>& z2,
                              double eps) {
    if (z1.size() != z2.size()) throw ArgumentError("coherent_overlap_formula: size mismatch");
    double dist2 = 0.0;
    cplx inner = 0.0;
    for (std::size_t n = 0; n < z1.size(); ++n) {
        dist2 += std::norm(z1[n] - z2[n]);
        inner += std::conj(z1[n]) * z2[n];
    }
    return std::exp(cplx(-0.5 * dist2 / eps, inner.imag() / eps));
}

ProductCoherentState::ProductCoherentState(const ModeSet& modes, double eps, std::vector<cplx> f,
                                           std::vector<int> cutoffs, double tau_trunc)
    : eps_(eps), f_(std::move(f)), cutoffs_(std::move(cutoffs)) {
    if (static_cast<int>(f_.size()) != modes.count() || cutoffs_.size() != f_.size())
        throw ArgumentError("ProductCoherentState: size mismatch");
    if (!(eps_ > 0.0)) throw ArgumentError("ProductCoherentState: eps must be > 0");
    check_mode_adequacy(f_, eps_, cutoffs_, tau_trunc);
    const double sqrt_eps = std::sqrt(eps_);
    mode_coeffs_.resize(f_.size());
    for (std::size_t n = 0; n < f_.size(); ++n)
        mode_coeffs_[n] = mode_coherent_coeffs(f_[n] / sqrt_eps, cutoffs_[n]);
}

ProductCoherentState ProductCoherentState::with_adequate_cutoffs(const ModeSet& modes, double eps,
                                                                 std::vector<cplx> f,
                                                                 double tau_trunc) {
    std::vector<int> cutoffs(f.size());
    for (std::size_t n = 0; n < f.size(); ++n)
        cutoffs[n] = adequate_cutoff(std::norm(f[n]) / eps, tau_trunc);
    return ProductCoherentState(modes, eps, std::move(f), std::move(cutoffs), tau_trunc);
}

cplx ProductCoherentState::annihilation_expectation(int n) const {
    const auto& c = mode_coeffs_.at(n);
    cplx s = 0.0;
    for (std::size_t m = 1; m < c.size(); ++m)
        s += std::conj(c[m - 1]) * c[m] * std::sqrt(static_cast<double>(m));
    return std::sqrt(eps_) * s;
}

double ProductCoherentState::dgamma_expectation(const std::vector<double>& weights) const {
    if (weights.size() != f_.size())
        throw ArgumentError("ProductCoherentState: weight size mismatch");
    double total = 0.0;
    for (std::size_t n = 0; n < f_.size(); ++n) {
        if (!(weights[n] >= 0.0)) throw ArgumentError("ProductCoherentState: negative weight");
        double occ = 0.0;
        for (std::size_t m = 1; m < mode_coeffs_[n].size(); ++m)
            occ += static_cast<double>(m) * std::norm(mode_coeffs_[n][m]);
        total += weights[n] * eps_ * occ;
    }
    return total;
}

double ProductCoherentState::number_expectation() const {
    return dgamma_expectation(std::vector<double>(f_.size(), 1.0));
}

cplx field_expectation(const FockState& state, const SparseOp& op) {
    if (op.dim() != static_cast<std::int64_t>(state.coeffs.size()))
        throw ArgumentError("field_expectation: dimension mismatch");
    std::vector<cplx> y;
    kern::spmv(op, state.coeffs, y);
    return kern::dot(state.coeffs, y);
}

std::vector<cplx> mode_annihilation_expectations(const FockState& state) {
    const FockSpace& sp = *state.space;
    const double eps = sp.eps();
    std::vector<cplx> out(sp.n_modes());
    std::vector<cplx> y(sp.dim());
    for (int n = 0; n < sp.n_modes(); ++n) {
        const std::int64_t stride = sp.stride(n);
        const int cutoff = sp.cutoffs()[n];
        kern::parallel_for(static_cast<std::size_t>(sp.dim()), [&](std::size_t i) {
            const auto row = static_cast<std::int64_t>(i);
            const int m = sp.occupation(row, n);
            y[i] = m < cutoff ? std::sqrt(eps * (m + 1)) * state.coeffs[row + stride] : 0.0;
        }, kern::default_exec());
        out[n] = kern::dot(state.coeffs, y);
    }
    return out;
}

}  // namespace qcl
