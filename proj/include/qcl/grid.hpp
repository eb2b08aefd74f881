#pragma once

#include <cstdint>
#include <vector>

namespace qcl {

enum class Boundary { Dirichlet, Periodic };

/// Uniform single-particle grid on [-L, L]^d (natural units, hbar = 1,
/// mass 1/2, so the kinetic term is -Laplacian).
///
/// Dirichlet: G nodes strictly inside the box, x_i = -L + (i+1) h with
/// h = 2L/(G+1); the wavefunction vanishes at +-L exactly, so the box length
/// is 2L independent of G. Periodic: x_i = -L + i h with h = 2L/G.
class SpatialGrid {
public:
    SpatialGrid(int dim_d, double extent, int points_per_axis, Boundary boundary);

    int dim_d() const { return dim_d_; }
    double extent() const { return extent_; }
    int points_per_axis() const { return g_; }
    Boundary boundary() const { return boundary_; }
    double spacing() const { return h_; }

    double axis_node(int i) const;
    /// Nodes along one axis (all axes are identical).
    std::vector<double> axis_nodes() const;

    /// Number of nodes of the d-dimensional single-particle grid, G^d.
    std::int64_t site_count() const;
    /// Coordinates of flat site index (axis 0 fastest).
    std::vector<double> site_coords(std::int64_t site) const;

private:
    int dim_d_;
    double extent_;
    int g_;
    Boundary boundary_;
    double h_;
};

/// Flat indexing for N distinguishable particles on a shared grid:
/// index = sum_j site_j * (G^d)^j, particle 0 fastest.
class ParticleIndexer {
public:
    ParticleIndexer(const SpatialGrid& grid, int n_particles);

    std::int64_t dim() const { return dim_; }
    int n_particles() const { return n_; }
    std::int64_t site_of(std::int64_t index, int particle) const;
    std::int64_t with_site(std::int64_t index, int particle, std::int64_t site) const;

    /// Axis index of one coordinate axis (particle j, axis a), axis 0 fastest
    /// within the particle block.
    int axis_index(std::int64_t index, int particle, int axis) const;
    std::int64_t axis_stride(int particle, int axis) const;

private:
    int n_;
    int g_;
    int d_;
    std::int64_t sites_;
    std::int64_t dim_;
};

}  // namespace qcl
