#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcl/fock.hpp"
#include "qcl/grid.hpp"
#include "qcl/sparse.hpp"

namespace qcl {

/// External + interparticle potential sampled on the N-particle grid.
/// The Kato decomposition tag is declarative metadata and never verified.
struct ParticleModel {
    int n_particles = 1;
    std::vector<double> u_samples;  // size = site_count^N, may be empty for U = 0
    std::string u_split_tag;        // e.g. "U+ = harmonic, U<< = 0"
};

struct HamiltonianSpec {
    SpatialGrid grid;
    ParticleModel particles;
    FockSpacePtr field;
};

/// Sample U(x_1, ..., x_N) on the N-particle grid from a callable taking the
/// concatenated coordinates (dN values).
std::vector<double> sample_potential(const SpatialGrid& grid, int n_particles,
                                     const std::function<double(const std::vector<double>&)>& u);

// Built-in single-particle profiles, applied additively per particle.
std::vector<double> harmonic_potential(const SpatialGrid& grid, int n_particles, double alpha);
std::vector<double> power_potential(const SpatialGrid& grid, int n_particles, double alpha,
                                    double exponent);
std::vector<double> cosine_potential(const SpatialGrid& grid, int n_particles, double alpha,
                                     double wavenumber);

/// H0 = -Laplacian + U on the N-particle grid: second-order central
/// differences, boundary per grid; real symmetric.
SparseOp assemble_h0(const SpatialGrid& grid, const ParticleModel& particles);

/// A(x_j) on grid (x) Fock: sum_n [ lambda_n e^{-i k_n . x_j} (x) a_n^dag + h.c. ],
/// with the spatial phase evaluated at grid nodes. Quadrature weights ride
/// inside lambda_n (ModeSet contract).
SparseOp assemble_interaction(const HamiltonianSpec& spec, int particle);

/// H = H0 (x) I + I (x) dGamma(omega) + sum_j A(x_j). Throws ResourceError if
/// the estimated storage exceeds `memory_budget_bytes` (0 = unlimited).
SparseOp assemble_full(const HamiltonianSpec& spec, std::size_t memory_budget_bytes = 0);

/// Diagonal of sum_j V(x_j) on the N-particle grid from single-particle
/// samples V (size = site_count).
std::vector<double> per_particle_sum(const SpatialGrid& grid, int n_particles,
                                     const std::vector<double>& v_single);

}  // namespace qcl
