#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcl/fock.hpp"
#include "qcl/grid.hpp"

namespace qcl {

/// Finite convex combination of Dirac masses on mode-amplitude vectors.
struct MeasureAtom {
    double weight = 1.0;
    std::vector<cplx> z;
};

struct ClassicalMeasure {
    std::vector<MeasureAtom> atoms;

    /// Checks sum of weights = 1 (to 1e-12), positivity, consistent sizes.
    void validate(int n_modes) const;
    /// c(mu) = sum_i alpha_i sum_n omega_n |z_{i,n}|^2.
    double field_energy(const ModeSet& modes) const;

    static ClassicalMeasure dirac(std::vector<cplx> z);
};

/// Lines "alpha; re:im,re:im,..." in mode order.
void save_measure(std::ostream& os, const ClassicalMeasure& mu);
ClassicalMeasure load_measure(std::istream& is);

struct EffectivePotential {
    SpatialGrid grid;            // single-particle axis
    std::vector<double> samples; // one value per grid site
    std::string provenance;

    double sup_norm() const;
};

double sup_distance(const EffectivePotential& a, const EffectivePotential& b);

struct PartialTraceResult {
    EffectivePotential potential;
    double c_eps = 0.0;  // <Psi| dGamma(omega) |Psi>
};

/// V(x) = <Psi| A(x) |Psi> per grid node and the mean field energy c_eps.
/// Requires |  ||Psi||^2 - 1 | <= 1e-10.
PartialTraceResult partial_trace_potential(const FockState& state, const SpatialGrid& grid);

/// Same for a product coherent state on a possibly very large mode set.
PartialTraceResult partial_trace_potential(const ProductCoherentState& state,
                                           const SpatialGrid& grid, const ModeSet& modes);

/// V_mu(x) = 2 Re sum_i alpha_i sum_n conj(lambda_n) z_{i,n} e^{i k_n . x}.
EffectivePotential classical_potential(const ClassicalMeasure& mu, const SpatialGrid& grid,
                                       const ModeSet& modes);

struct HamiltonianSpec;  // model.hpp

/// H0 + sum_j diag V_{eps,Psi}(x_j): the particle operator whose quadratic
/// form satisfies <psi (x) Psi | H | psi (x) Psi> = <psi|H_eff|psi> +
/// c_eps ||psi||^2 exactly on the truncated spaces.
struct EffectiveHamiltonian {
    SparseOp op;
    EffectivePotential potential;
    double c_eps = 0.0;
};
EffectiveHamiltonian effective_hamiltonian(const HamiltonianSpec& spec, const FockState& state);

/// The shared evaluation kernel: 2 Re sum_n conj(lambda_n) moment_n e^{i k_n . x}
/// over grid nodes (parallel over nodes, deterministic).
std::vector<double> potential_from_moments(const SpatialGrid& grid, const ModeSet& modes,
                                           const std::vector<cplx>& moments);

struct AlmostPeriodicResult {
    EffectivePotential potential;
    std::vector<cplx> amplitude;  // f_n = conj(b_n) / (2 conj(lambda_n))
};

/// V_b(x) = sum_n [Re b_n cos(k_n . x) + Im b_n sin(k_n . x)] together with
/// the squeezed amplitude generating it; classical_potential(dirac(f))
/// reproduces V_b identically.
AlmostPeriodicResult almost_periodic_potential(const std::vector<cplx>& b,
                                               const SpatialGrid& grid, const ModeSet& modes);

// --- mollifier -------------------------------------------------------------

/// The standard bump c * exp(-1/(1-y^2)) on |y| < 1, normalized numerically
/// to unit mass on a dense tabulation.
class Mollifier {
public:
    Mollifier();
    double value(double y) const;          // normalized bump
    double second_moment() const { return m2_; }

private:
    double norm_const_;
    double m2_;
};

/// (phi_eps * w) on a uniform grid with spacing dx, where
/// phi_eps(x) = phi(x/eps)/eps. The input is extended by edge clamping, so
/// only values further than eps from the ends are exact. Preconditions: at
/// least 8 samples across the support of phi_eps and discrete unit mass of
/// the kernel to 1e-8.
std::vector<double> mollify(const std::vector<double>& w, double dx, double eps,
                            const Mollifier& phi);

/// (phi_eps * w)(x) for callable w via quadrature in the mollifier variable;
/// exact boundary behavior since w can be evaluated anywhere.
double mollify_at(const std::function<double(double)>& w, double x, double eps,
                  const Mollifier& phi, int quad_points = 512);

// --- discrete Fourier transforms, symmetric normalization -------------------
// forward: g^(k) = (2 pi)^{-d/2} * dx^d * sum_j e^{-i k . x_j} g_j
// inverse: g~(x) = (2 pi)^{-d/2} * dk^d * sum_n e^{+i k_n . x} g^_n

std::vector<cplx> dft_forward(const SpatialGrid& grid, const std::vector<cplx>& samples,
                              const std::vector<std::vector<double>>& kpoints);
std::vector<cplx> dft_inverse(const SpatialGrid& grid, const ModeSet& modes,
                              const std::vector<cplx>& khat);

/// Mode grid dual to a 1d spatial grid: G consecutive k's spaced
/// dk = 2 pi / (G h), centered at zero, with couplings/frequencies sampled
/// from the given profiles (coupling carries sqrt(dk)). The duality makes the
/// discrete Fourier round trip on grid nodes exact.
ModeSet trap_mode_set(const SpatialGrid& grid,
                      const std::function<double(double)>& lambda_of_absk,
                      const std::function<double(double)>& omega_of_absk);

struct TrapAmplitude {
    std::vector<cplx> f;            // per-mode amplitude (weighted convention)
    std::vector<double> mollified;  // (phi_eps * W) on the grid nodes
    double f_norm2 = 0.0;           // ||f||^2, diverges as eps -> 0 for W not in L^2
    double field_energy = 0.0;      // ||sqrt(omega) f||^2 = c_eps of Xi(f)
};

/// f_{W,eps}(k_n) = (phi_eps * W)^(k_n) / (2 (2 pi)^{d/2} conj(lambda(k_n))),
/// in the weighted per-mode convention. Requires lambda_n != 0 on all modes
/// and spectral coverage: the mollified target's energy in the outer 10% of
/// the k-window must be below coverage_tol.
TrapAmplitude trap_coherent_amplitude(const std::function<double(double)>& w_target, double eps,
                                      const Mollifier& phi, const SpatialGrid& grid,
                                      const ModeSet& modes, double coverage_tol = 0.01);

// --- polaron IR/UV splitting ------------------------------------------------

struct PolaronSplit {
    std::vector<cplx> w_less;     // low-frequency part on grid nodes
    std::vector<cplx> w_greater;  // high-frequency part on grid nodes
    // gradient-commutator representation of the high part: per axis samples
    // of the real field S with W^> = [S, i grad]
    std::vector<std::vector<double>> s_field;
    double c_less = 0.0;          // integral_{|k| <= rho} |k|^{1-d} dk (grid quadrature)
    double c_greater = 0.0;       // integral_{|k| >= rho} |k|^{1-d} dk
    double c_greater_grad = 0.0;  // integral_{|k| >= rho} |k|^{-d-1} dk
};

/// Split W_z = (2 pi)^{-d/2} sum_n lambda_n z_n e^{i k_n . x} at |k| = rho.
/// Requires a polaron mode set and rho above the smallest |k_n|.
PolaronSplit polaron_split(const std::vector<cplx>& z, double rho, const ModeSet& modes,
                           const SpatialGrid& grid);

}  // namespace qcl
