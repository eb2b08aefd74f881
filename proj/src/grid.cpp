#include "qcl/grid.hpp"

#include "qcl/errors.hpp"

namespace qcl {

SpatialGrid::SpatialGrid(int dim_d, double extent, int points_per_axis, Boundary boundary)
    : dim_d_(dim_d), extent_(extent), g_(points_per_axis), boundary_(boundary) {
    if (dim_d_ < 1 || dim_d_ > 3) throw ArgumentError("SpatialGrid: dim_d must be 1, 2 or 3");
    if (!(extent_ > 0.0)) throw ArgumentError("SpatialGrid: extent must be > 0");
    if (g_ < 8) throw ArgumentError("SpatialGrid: need at least 8 points per axis");
    h_ = boundary_ == Boundary::Dirichlet ? 2.0 * extent_ / (g_ + 1) : 2.0 * extent_ / g_;
}

double SpatialGrid::axis_node(int i) const {
    return boundary_ == Boundary::Dirichlet ? -extent_ + (i + 1) * h_ : -extent_ + i * h_;
}

std::vector<double> SpatialGrid::axis_nodes() const {
    std::vector<double> x(g_);
    for (int i = 0; i < g_; ++i) x[i] = axis_node(i);
    return x;
}

std::int64_t SpatialGrid::site_count() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim_d_; ++a) n *= g_;
    return n;
}

std::vector<double> SpatialGrid::site_coords(std::int64_t site) const {
    std::vector<double> x(dim_d_);
    for (int a = 0; a < dim_d_; ++a) {
        x[a] = axis_node(static_cast<int>(site % g_));
        site /= g_;
    }
    return x;
}

ParticleIndexer::ParticleIndexer(const SpatialGrid& grid, int n_particles)
    : n_(n_particles), g_(grid.points_per_axis()), d_(grid.dim_d()) {
    if (n_ < 1) throw ArgumentError("ParticleIndexer: need at least one particle");
    sites_ = grid.site_count();
    dim_ = 1;
    for (int j = 0; j < n_; ++j) {
        dim_ *= sites_;
        if (dim_ > (std::int64_t{1} << 40))
            throw ResourceError("ParticleIndexer: configuration grid too large");
    }
}

std::int64_t ParticleIndexer::site_of(std::int64_t index, int particle) const {
    for (int j = 0; j < particle; ++j) index /= sites_;
    return index % sites_;
}

std::int64_t ParticleIndexer::with_site(std::int64_t index, int particle, std::int64_t site) const {
    std::int64_t stride = 1;
    for (int j = 0; j < particle; ++j) stride *= sites_;
    const std::int64_t old = site_of(index, particle);
    return index + (site - old) * stride;
}

int ParticleIndexer::axis_index(std::int64_t index, int particle, int axis) const {
    std::int64_t site = site_of(index, particle);
    for (int a = 0; a < axis; ++a) site /= g_;
    return static_cast<int>(site % g_);
}

std::int64_t ParticleIndexer::axis_stride(int particle, int axis) const {
    std::int64_t stride = 1;
    for (int j = 0; j < particle; ++j) stride *= sites_;
    for (int a = 0; a < axis; ++a) stride *= g_;
    return stride;
}

}  // namespace qcl
