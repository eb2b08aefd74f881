// Benchmark of the OpenMP kernels against the serial reference on a
// representative tensor-product operator. Also verifies that the parallel
// results are bit-identical to the serial ones.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "qcl/effective.hpp"
#include "qcl/kernels.hpp"
#include "qcl/model.hpp"
#include "qcl/spectral.hpp"

using namespace qcl;
using clk = std::chrono::high_resolution_clock;

namespace {

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

bool bit_equal(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

}  // namespace

int main() {
    const SpatialGrid grid(1, 8.0, 256, Boundary::Dirichlet);
    ParticleModel particles{1, harmonic_potential(grid, 1, 1.0), ""};
    ModeSet modes = ModeSet::discrete(
        1, {{{1.0}, 1.0, cplx(0.3)}, {{2.0}, 2.0, cplx(0.2)}, {{3.0}, 3.0, cplx(0.1)}});
    auto space = std::make_shared<const FockSpace>(modes, 0.25, std::vector<int>{8, 8, 8});
    HamiltonianSpec spec{grid, particles, space};

    std::printf("tensor dimension: %lld\n",
                static_cast<long long>(grid.site_count() * space->dim()));

    kern::set_default_exec(kern::Exec::Serial);
    auto t0 = clk::now();
    const SparseOp h_serial = assemble_full(spec);
    const double t_asm_serial = ms_since(t0);

    kern::set_default_exec(kern::Exec::Parallel);
    t0 = clk::now();
    const SparseOp h_parallel = assemble_full(spec);
    const double t_asm_parallel = ms_since(t0);

    const bool asm_match = h_serial.vals() == h_parallel.vals() &&
                           h_serial.cols() == h_parallel.cols() &&
                           h_serial.row_ptr() == h_parallel.row_ptr();

    auto x = gaussian_probes(h_serial.dim(), 1, 42)[0];
    std::vector<cplx> ys(x.size()), yp(x.size());
    const int reps = 50;

    t0 = clk::now();
    for (int r = 0; r < reps; ++r) kern::spmv(h_serial, x.data(), ys.data(), kern::Exec::Serial);
    const double t_mv_serial = ms_since(t0);

    t0 = clk::now();
    for (int r = 0; r < reps; ++r) kern::spmv(h_parallel, x.data(), yp.data(), kern::Exec::Parallel);
    const double t_mv_parallel = ms_since(t0);

    const cplx ds = kern::dot(x.data(), ys.data(), x.size(), kern::Exec::Serial);
    const cplx dp = kern::dot(x.data(), yp.data(), x.size(), kern::Exec::Parallel);

    // potential evaluation kernel over grid nodes
    std::vector<cplx> moments(modes.count(), cplx(0.2, 0.1));
    kern::set_default_exec(kern::Exec::Serial);
    t0 = clk::now();
    std::vector<double> vs, vp;
    for (int r = 0; r < 400; ++r) vs = potential_from_moments(grid, modes, moments);
    const double t_pot_serial = ms_since(t0);
    kern::set_default_exec(kern::Exec::Parallel);
    t0 = clk::now();
    for (int r = 0; r < 400; ++r) vp = potential_from_moments(grid, modes, moments);
    const double t_pot_parallel = ms_since(t0);

    std::printf("%-28s %12s %12s %10s %8s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup",
                "match");
    std::printf("%-28s %12.2f %12.2f %10.2f %8s\n", "assemble_full", t_asm_serial, t_asm_parallel,
                t_asm_serial / t_asm_parallel, asm_match ? "bit" : "DIFF");
    std::printf("%-28s %12.2f %12.2f %10.2f %8s\n", "spmv x50", t_mv_serial, t_mv_parallel,
                t_mv_serial / t_mv_parallel, bit_equal(ys, yp) ? "bit" : "DIFF");
    std::printf("%-28s %12.2f %12.2f %10.2f %8s\n", "potential_eval x400", t_pot_serial,
                t_pot_parallel, t_pot_serial / t_pot_parallel, vs == vp ? "bit" : "DIFF");
    std::printf("%-28s %12s %12s %10s %8s\n", "blocked dot", "-", "-", "-",
                ds == dp ? "bit" : "DIFF");

    kern::set_default_exec(kern::Exec::Parallel);
    return (asm_match && bit_equal(ys, yp) && vs == vp && ds == dp) ? 0 : 1;
}
