#pragma once

#include <memory>
#include <vector>

#include "qcl/sparse.hpp"

namespace qcl {

enum class ModeFamily { Discrete, NelsonCutoff, Polaron };

struct Mode {
    std::vector<double> k;  // wave vector, size dim_d
    double omega = 0.0;     // frequency, >= 0
    cplx lambda = 0.0;      // coupling; continuum families carry sqrt(cell_volume) inside
};

/// The field's mode grid. For the continuum families the momentum integral
/// \int dk is a Riemann sum over the modes with weight `cell_volume`, and the
/// weight's square root is baked into lambda (and into any amplitude vector
/// living on the set), so discrete and continuum models share one assembly
/// and expectation path.
class ModeSet {
public:
    ModeSet(int dim_d, ModeFamily family, std::vector<Mode> modes, double cell_volume = 1.0);

    static ModeSet discrete(int dim_d, std::vector<Mode> modes);

    /// Uniform symmetric k-grid (k = 0 included), lambda/omega sampled from
    /// the given profiles; per-mode coupling = lambda(k) * sqrt(cell volume).
    static ModeSet nelson_uniform(int dim_d, int points_per_axis, double k_max,
                                  const std::function<double(double)>& lambda_of_absk,
                                  const std::function<double(double)>& omega_of_absk);

    /// Polaron grid: uniform symmetric with half-cell offset so k = 0 is
    /// excluded; omega = 1 and coupling |k|^{-(d-1)/2} * sqrt(cell volume).
    static ModeSet polaron_uniform(int dim_d, int points_per_axis, double k_max);

    int dim_d() const { return dim_d_; }
    ModeFamily family() const { return family_; }
    double cell_volume() const { return cell_volume_; }
    int count() const { return static_cast<int>(modes_.size()); }
    const Mode& mode(int n) const { return modes_.at(n); }
    const std::vector<Mode>& modes() const { return modes_; }

    double abs_k(int n) const;
    /// sum_n |lambda_n|^2 (the discrete ||lambda||^2, quadrature weight included).
    double lambda_norm2() const;
    /// sum_n |lambda_n|^2 / omega_n; throws if some omega_n = 0.
    double lambda_over_sqrt_omega_norm2() const;

private:
    int dim_d_;
    ModeFamily family_;
    std::vector<Mode> modes_;
    double cell_volume_;
};

/// Truncated occupation-number basis with the semiclassical parameter eps.
/// Flat index = mixed-radix encoding of the occupation tuple, mode 0 fastest.
class FockSpace {
public:
    FockSpace(ModeSet modes, double eps, std::vector<int> cutoffs);

    const ModeSet& modes() const { return modes_; }
    double eps() const { return eps_; }
    int n_modes() const { return modes_.count(); }
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    std::int64_t dim() const { return dim_; }

    int occupation(std::int64_t index, int mode) const;
    std::int64_t stride(int mode) const { return strides_[mode]; }
    std::vector<int> occupations(std::int64_t index) const;
    std::int64_t index_of(const std::vector<int>& occ) const;

private:
    ModeSet modes_;
    double eps_;
    std::vector<int> cutoffs_;
    std::vector<std::int64_t> strides_;
    std::int64_t dim_;
};

using FockSpacePtr = std::shared_ptr<const FockSpace>;

/// Coefficient vector on a truncated Fock basis.
struct FockState {
    FockSpacePtr space;
    std::vector<cplx> coeffs;

    double norm() const;
    void normalize();
};

// --- operators on the truncated basis -------------------------------------

/// a_n with the eps-scaled matrix elements: a |..., m, ...> = sqrt(eps m) |..., m-1, ...>.
SparseOp annihilation(const FockSpace& space, int n);
/// a_n^dagger = annihilation(space, n)^H.
SparseOp creation(const FockSpace& space, int n);

/// dGamma(w): diagonal with entry sum_n w_n * eps * m_n. Weights must be >= 0.
SparseOp dgamma(const FockSpace& space, const std::vector<double>& weights);
/// dGamma(1), the number operator.
SparseOp number_operator(const FockSpace& space);
/// dGamma(omega), the field energy.
SparseOp field_energy(const FockSpace& space);

/// Smeared annihilator a(g) = sum_n conj(g_n) a_n (antilinear in g), so
/// [a(f), a^dagger(g)] = eps <f, g> with the inner product antilinear in the
/// first slot, and a_n Xi(f) = f_n Xi(f) for coherent states.
SparseOp smeared_annihilation(const FockSpace& space, const std::vector<cplx>& g);
SparseOp smeared_creation(const FockSpace& space, const std::vector<cplx>& g);

// --- coherent states -------------------------------------------------------

/// P(X > m) for X ~ Poisson(mean).
double poisson_tail(double mean, int m);
/// Smallest cutoff M with poisson_tail(mean, M) <= tau.
int adequate_cutoff(double mean, double tau);

/// Truncated coherent state Xi(f), built per mode by direct Poisson-series
/// synthesis with beta_n = f_n / sqrt(eps) and renormalized after truncation.
/// Throws ConfigError ("cutoff too small") naming the first offending mode if
/// the Poisson tail beyond the cutoff exceeds tau_trunc.
FockState coherent_state(const FockSpacePtr& space, const std::vector<cplx>& f,
                         double tau_trunc = 1e-8);

/// Closed-form overlap <Xi(z1) | Xi(z2)> =
///   exp(-||z1 - z2||^2 / (2 eps) + (i/eps) Im<z1, z2>),  <a,b> = sum conj(a) b.
cplx coherent_overlap_formula(const std::vector<cplx>& z1, const std::vector<cplx>& z2,
                              double eps);

/// Product coherent state kept per mode (never materialized on the tensor
/// basis), for mode sets far too large for a dense FockState. Expectations
/// are truncated single-mode sums, so cutoff tails enter exactly as in the
/// dense representation.
class ProductCoherentState {
public:
    ProductCoherentState(const ModeSet& modes, double eps, std::vector<cplx> f,
                         std::vector<int> cutoffs, double tau_trunc = 1e-8);

    /// Cutoffs from the adequacy rule at tolerance tau for each mode.
    static ProductCoherentState with_adequate_cutoffs(const ModeSet& modes, double eps,
                                                      std::vector<cplx> f,
                                                      double tau_trunc = 1e-8);

    int n_modes() const { return static_cast<int>(f_.size()); }
    double eps() const { return eps_; }
    const std::vector<cplx>& amplitude() const { return f_; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }

    /// <a_n> on the truncated state.
    cplx annihilation_expectation(int n) const;
    /// <dGamma(w)> = sum_n w_n eps <m_n>.
    double dgamma_expectation(const std::vector<double>& weights) const;
    double number_expectation() const;

private:
    double eps_;
    std::vector<cplx> f_;
    std::vector<int> cutoffs_;
    std::vector<std::vector<cplx>> mode_coeffs_;  // renormalized per mode
};

// --- expectations ----------------------------------------------------------

/// <psi | op | psi>; real to ~1e-12 when op is Hermitian.
cplx field_expectation(const FockState& state, const SparseOp& op);

/// <psi | a_n | psi> for every mode, computed without materializing a_n.
std::vector<cplx> mode_annihilation_expectations(const FockState& state);

}  // namespace qcl
