#pragma once

#include <cstdint>
#include <vector>

#include "qcl/effective.hpp"
#include "qcl/model.hpp"
#include "qcl/sparse.hpp"

namespace qcl {

struct EigenResult {
    double value = 0.0;
    std::vector<cplx> vector;
    double residual = 0.0;
    int iterations = 0;
};

struct LanczosOptions {
    double tol = 1e-9;        // absolute residual ||(H - theta) v||
    int max_iter = 4000;      // total matvec budget across restarts
    int basis_cap = 200;      // Krylov basis size per restart cycle
    std::uint64_t seed = 1;   // start-vector seed
    // Full reorthogonalization below this dimension, selective above.
    std::int64_t full_reorth_dim = 10000;
};

/// Smallest eigenvalue of a Hermitian operator by restarted Lanczos with a
/// seeded start vector. Deterministic for fixed options and thread count.
/// Throws SolverError (carrying the best estimate) on non-convergence.
EigenResult ground_energy(const SparseOp& op, const LanczosOptions& opts = {});

/// Solve (op + zeta) w = v by conjugate gradients to the given relative
/// residual. Requires op + zeta positive definite; an indefinite shift is
/// reported as a precondition error.
std::vector<cplx> resolvent_apply(const SparseOp& op, double zeta, const std::vector<cplx>& v,
                                  double rel_tol = 1e-8, int max_iter = 0);

/// max over probes of ||(A+zeta)^{-1} v - (B+zeta)^{-1} v|| / ||v||: a probe
/// lower bound on the resolvent-difference norm, used as the convergence
/// diagnostic throughout.
double resolvent_distance(const SparseOp& a, const SparseOp& b, double zeta,
                          const std::vector<std::vector<cplx>>& probes, double rel_tol = 1e-8);

/// Seeded Gaussian probe vectors.
std::vector<std::vector<cplx>> gaussian_probes(std::int64_t dim, int count, std::uint64_t seed);

// --- ground-state energy sweep ---------------------------------------------

struct GsePoint {
    double eps = 0.0;
    double quantum_energy = 0.0;
    double gap = 0.0;  // classical_infimum - quantum_energy
    int iterations = 0;
};

struct GseResult {
    std::vector<GsePoint> sweep;
    double classical_infimum = 0.0;
    ClassicalMeasure minimizer;
    std::vector<double> energy_trace;  // alternating-minimization energies
    double lower_bound_floor = 0.0;    // sigma(H0) - N^2 ||omega^{-1/2} lambda||^2
    double h0_ground = 0.0;
    double h0_gap = 0.0;               // spectral gap of H0 (first excited - ground)
};

struct GseOptions {
    LanczosOptions eig;
    double alt_tol = 1e-10;       // energy stagnation threshold
    int alt_max_iter = 200;
    double cutoff_tau = 1e-8;     // coherent-adequacy tolerance for cutoffs
    int min_cutoff = 4;
    bool refine_multi_atom = false;
    int refine_atoms = 2;
    int refine_evals = 240;
    std::size_t memory_budget_bytes = 0;  // 0 = unlimited
};

/// Alternating minimization of sigma(H0 + V_{delta_z}) + ||sqrt(omega) z||^2
/// over single-atom measures: the exact optimal amplitude at fixed psi is
/// z_n = -lambda_n conj(m_n(psi)) / omega_n with m_n = sum_j <psi| e^{i k_n x_j} |psi>,
/// alternated with the Schrodinger ground state at fixed z.
struct PekarResult {
    std::vector<cplx> z;
    double energy = 0.0;               // classical infimum estimate
    std::vector<double> energy_trace;  // one entry per full step
    std::vector<cplx> psi;
};

PekarResult pekar_minimize(const SpatialGrid& grid, const ParticleModel& particles,
                           const ModeSet& modes, const GseOptions& opts);

/// Full sweep: quantum sigma(H_eps) per eps versus the classical infimum.
GseResult minimize_gse(const SpatialGrid& grid, const ParticleModel& particles,
                       const ModeSet& modes, const std::vector<double>& eps_list,
                       const GseOptions& opts);

}  // namespace qcl
