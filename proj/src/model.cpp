#include "qcl/model.hpp"

#include <cmath>
#include <sstream>

#include "qcl/errors.hpp"
#include "qcl/kernels.hpp"

namespace qcl {

std::vector<double> sample_potential(const SpatialGrid& grid, int n_particles,
                                     const std::function<double(const std::vector<double>&)>& u) {
    ParticleIndexer idx(grid, n_particles);
    const int d = grid.dim_d();
    std::vector<double> samples(idx.dim());
    kern::parallel_for(static_cast<std::size_t>(idx.dim()), [&](std::size_t i) {
        std::vector<double> x(d * n_particles);
        for (int j = 0; j < n_particles; ++j) {
            auto xs = grid.site_coords(idx.site_of(static_cast<std::int64_t>(i), j));
            for (int a = 0; a < d; ++a) x[j * d + a] = xs[a];
        }
        samples[i] = u(x);
    }, kern::default_exec());
    return samples;
}

namespace {

std::vector<double> per_particle_profile(const SpatialGrid& grid, int n_particles,
                                         const std::function<double(double)>& of_abs_x) {
    const int d = grid.dim_d();
    return sample_potential(grid, n_particles, [&](const std::vector<double>& x) {
        double u = 0.0;
        for (int j = 0; j < n_particles; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) r2 += x[j * d + a] * x[j * d + a];
            u += of_abs_x(std::sqrt(r2));
        }
        return u;
    });
}

}  // namespace

std::vector<double> harmonic_potential(const SpatialGrid& grid, int n_particles, double alpha) {
    return per_particle_profile(grid, n_particles, [alpha](double r) { return alpha * r * r; });
}

std::vector<double> power_potential(const SpatialGrid& grid, int n_particles, double alpha,
                                    double exponent) {
    return per_particle_profile(grid, n_particles,
                                [=](double r) { return alpha * std::pow(r, exponent); });
}

std::vector<double> cosine_potential(const SpatialGrid& grid, int n_particles, double alpha,
                                     double wavenumber) {
    const int d = grid.dim_d();
    return sample_potential(grid, n_particles, [&](const std::vector<double>& x) {
        double u = 0.0;
        for (int j = 0; j < n_particles; ++j)
            for (int a = 0; a < d; ++a) u += alpha * std::cos(wavenumber * x[j * d + a]);
        return u;
    });
}

SparseOp assemble_h0(const SpatialGrid& grid, const ParticleModel& particles) {
    ParticleIndexer idx(grid, particles.n_particles);
    const std::int64_t dim = idx.dim();
    const bool have_u = !particles.u_samples.empty();
    if (have_u && static_cast<std::int64_t>(particles.u_samples.size()) != dim)
        throw ArgumentError("assemble_h0: U samples do not match the N-particle grid");
    if (have_u)
        for (double u : particles.u_samples)
            if (!std::isfinite(u)) throw DataError("assemble_h0: non-finite U sample");

    const int d = grid.dim_d();
    const int np = particles.n_particles;
    const int g = grid.points_per_axis();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    const bool periodic = grid.boundary() == Boundary::Periodic;

    return assemble_rows(dim, [&, d, np, g, inv_h2, periodic](std::int64_t row,
                                                              const RowEmit& emit) {
        double diag = have_u ? particles.u_samples[row] : 0.0;
        for (int j = 0; j < np; ++j) {
            for (int a = 0; a < d; ++a) {
                diag += 2.0 * inv_h2;
                const int i = idx.axis_index(row, j, a);
                const std::int64_t stride = idx.axis_stride(j, a);
                if (i > 0)
                    emit(row - stride, -inv_h2);
                else if (periodic)
                    emit(row + static_cast<std::int64_t>(g - 1) * stride, -inv_h2);
                if (i < g - 1)
                    emit(row + stride, -inv_h2);
                else if (periodic)
                    emit(row - static_cast<std::int64_t>(g - 1) * stride, -inv_h2);
            }
        }
        emit(row, diag);
    });
}

namespace {

// e^{-i k_n . x} per (mode, single-particle site).
std::vector<std::vector<cplx>> mode_phases(const SpatialGrid& grid, const ModeSet& modes) {
    const std::int64_t sites = grid.site_count();
    std::vector<std::vector<cplx>> ph(modes.count(), std::vector<cplx>(sites));
    for (int n = 0; n < modes.count(); ++n) {
        const auto& k = modes.mode(n).k;
        kern::parallel_for(static_cast<std::size_t>(sites), [&](std::size_t s) {
            auto x = grid.site_coords(static_cast<std::int64_t>(s));
            double kx = 0.0;
            for (int a = 0; a < grid.dim_d(); ++a) kx += k[a] * x[a];
            ph[n][s] = std::exp(cplx(0.0, -kx));
        }, kern::default_exec());
    }
    return ph;
}

void check_polaron_modes(const ModeSet& modes) {
    if (modes.family() != ModeFamily::Polaron) return;
    for (int n = 0; n < modes.count(); ++n)
        if (modes.abs_k(n) == 0.0)
            throw ConfigError("assemble_interaction: polaron mode set contains k = 0");
}

}  // namespace

SparseOp assemble_interaction(const HamiltonianSpec& spec, int particle) {
    const ParticleIndexer idx(spec.grid, spec.particles.n_particles);
    if (particle < 0 || particle >= spec.particles.n_particles)
        throw ArgumentError("assemble_interaction: particle index out of range");
    if (spec.field->modes().dim_d() != spec.grid.dim_d())
        throw ArgumentError("assemble_interaction: mode/grid dimension mismatch");
    check_polaron_modes(spec.field->modes());

    const FockSpace& fs = *spec.field;
    const ModeSet& modes = fs.modes();
    const auto phases = mode_phases(spec.grid, modes);
    const std::int64_t fdim = fs.dim();
    const double eps = fs.eps();

    return assemble_rows(idx.dim() * fdim, [&, particle](std::int64_t row, const RowEmit& emit) {
        const std::int64_t g = row / fdim;
        const std::int64_t f = row % fdim;
        const std::int64_t site = idx.site_of(g, particle);
        for (int n = 0; n < modes.count(); ++n) {
            const cplx lam = modes.mode(n).lambda;
            const cplx ph = phases[n][site];
            const int m = fs.occupation(f, n);
            if (m >= 1)
                emit(row - fs.stride(n), lam * ph * std::sqrt(eps * m));
            if (m < fs.cutoffs()[n])
                emit(row + fs.stride(n), std::conj(lam * ph) * std::sqrt(eps * (m + 1)));
        }
    });
}

SparseOp assemble_full(const HamiltonianSpec& spec, std::size_t memory_budget_bytes) {
    const ParticleIndexer idx(spec.grid, spec.particles.n_particles);
    const FockSpace& fs = *spec.field;
    if (fs.modes().dim_d() != spec.grid.dim_d())
        throw ArgumentError("assemble_full: mode/grid dimension mismatch");
    check_polaron_modes(fs.modes());

    const std::int64_t fdim = fs.dim();
    const std::int64_t dim = idx.dim() * fdim;
    const int stencil = 2 * spec.grid.dim_d() * spec.particles.n_particles;
    const std::int64_t nnz_est = dim * (1 + stencil + 2 * fs.n_modes());
    const std::size_t bytes_est = static_cast<std::size_t>(nnz_est) * 24 + dim * 8;
    if (memory_budget_bytes != 0 && bytes_est > memory_budget_bytes) {
        std::ostringstream os;
        os << "assemble_full: dimension " << dim << " (about " << bytes_est
           << " bytes) exceeds the memory budget of " << memory_budget_bytes << " bytes";
        throw ResourceError(os.str());
    }

    const ParticleModel& pm = spec.particles;
    const bool have_u = !pm.u_samples.empty();
    if (have_u && static_cast<std::int64_t>(pm.u_samples.size()) != idx.dim())
        throw ArgumentError("assemble_full: U samples do not match the N-particle grid");

    const int d = spec.grid.dim_d();
    const int np = pm.n_particles;
    const int g = spec.grid.points_per_axis();
    const double inv_h2 = 1.0 / (spec.grid.spacing() * spec.grid.spacing());
    const bool periodic = spec.grid.boundary() == Boundary::Periodic;
    const ModeSet& modes = fs.modes();
    const auto phases = mode_phases(spec.grid, modes);
    const double eps = fs.eps();

    return assemble_rows(dim, [&](std::int64_t row, const RowEmit& emit) {
        const std::int64_t gc = row / fdim;
        const std::int64_t f = row % fdim;

        // particle part
        double diag = have_u ? pm.u_samples[gc] : 0.0;
        for (int j = 0; j < np; ++j) {
            for (int a = 0; a < d; ++a) {
                diag += 2.0 * inv_h2;
                const int i = idx.axis_index(gc, j, a);
                const std::int64_t stride = idx.axis_stride(j, a) * fdim;
                if (i > 0)
                    emit(row - stride, -inv_h2);
                else if (periodic)
                    emit(row + static_cast<std::int64_t>(g - 1) * stride, -inv_h2);
                if (i < g - 1)
                    emit(row + stride, -inv_h2);
                else if (periodic)
                    emit(row - static_cast<std::int64_t>(g - 1) * stride, -inv_h2);
            }
        }

        // field energy
        for (int n = 0; n < fs.n_modes(); ++n)
            diag += modes.mode(n).omega * eps * fs.occupation(f, n);
        emit(row, diag);

        // interaction, one term per particle
        for (int j = 0; j < np; ++j) {
            const std::int64_t site = idx.site_of(gc, j);
            for (int n = 0; n < fs.n_modes(); ++n) {
                const cplx lam = modes.mode(n).lambda;
                const cplx ph = phases[n][site];
                const int m = fs.occupation(f, n);
                if (m >= 1)
                    emit(row - fs.stride(n), lam * ph * std::sqrt(eps * m));
                if (m < fs.cutoffs()[n])
                    emit(row + fs.stride(n), std::conj(lam * ph) * std::sqrt(eps * (m + 1)));
            }
        }
    });
}

std::vector<double> per_particle_sum(const SpatialGrid& grid, int n_particles,
                                     const std::vector<double>& v_single) {
    ParticleIndexer idx(grid, n_particles);
    if (static_cast<std::int64_t>(v_single.size()) != grid.site_count())
        throw ArgumentError("per_particle_sum: single-particle sample size mismatch");
    std::vector<double> out(idx.dim());
    kern::parallel_for(static_cast<std::size_t>(idx.dim()), [&](std::size_t i) {
        double s = 0.0;
        for (int j = 0; j < n_particles; ++j)
            s += v_single[idx.site_of(static_cast<std::int64_t>(i), j)];
        out[i] = s;
    }, kern::default_exec());
    return out;
}

}  // namespace qcl
