#include "qcl/effective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qcl/errors.hpp"
#include "qcl/kernels.hpp"
#include "qcl/model.hpp"

namespace qcl {

void ClassicalMeasure::validate(int n_modes) const {
    if (atoms.empty()) throw ArgumentError("ClassicalMeasure: no atoms");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0)) throw ArgumentError("ClassicalMeasure: weights must be positive");
        if (static_cast<int>(a.z.size()) != n_modes)
            throw ArgumentError("ClassicalMeasure: atom size does not match mode count");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ArgumentError("ClassicalMeasure: weights must sum to 1");
}

double ClassicalMeasure::field_energy(const ModeSet& modes) const {
    double c = 0.0;
    for (const auto& a : atoms)
        for (int n = 0; n < modes.count(); ++n)
            c += a.weight * modes.mode(n).omega * std::norm(a.z[n]);
    return c;
}

ClassicalMeasure ClassicalMeasure::dirac(std::vector<cplx> z) {
    return ClassicalMeasure{{MeasureAtom{1.0, std::move(z)}}};
}

void save_measure(std::ostream& os, const ClassicalMeasure& mu) {
    char buf[64];
    for (const auto& a : mu.atoms) {
        std::snprintf(buf, sizeof(buf), "%.17g; ", a.weight);
        os << buf;
        for (std::size_t n = 0; n < a.z.size(); ++n) {
            std::snprintf(buf, sizeof(buf), "%.17g:%.17g", a.z[n].real(), a.z[n].imag());
            os << buf << (n + 1 < a.z.size() ? "," : "");
        }
        os << "\n";
    }
}

ClassicalMeasure load_measure(std::istream& is) {
    ClassicalMeasure mu;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto semi = line.find(';');
        if (semi == std::string::npos) throw DataError("load_measure: missing ';'");
        MeasureAtom atom;
        atom.weight = std::stod(line.substr(0, semi));
        std::stringstream rest(line.substr(semi + 1));
        std::string tok;
        while (std::getline(rest, tok, ',')) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) throw DataError("load_measure: expected re:im");
            atom.z.emplace_back(std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1)));
        }
        mu.atoms.push_back(std::move(atom));
    }
    return mu;
}

double EffectivePotential::sup_norm() const {
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
}

double sup_distance(const EffectivePotential& a, const EffectivePotential& b) {
    if (a.samples.size() != b.samples.size())
        throw ArgumentError("sup_distance: sample count mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
    return m;
}

std::vector<double> potential_from_moments(const SpatialGrid& grid, const ModeSet& modes,
                                           const std::vector<cplx>& moments) {
    if (static_cast<int>(moments.size()) != modes.count())
        throw ArgumentError("potential_from_moments: one moment per mode required");
    if (modes.dim_d() != grid.dim_d())
        throw ArgumentError("potential_from_moments: mode/grid dimension mismatch");
    const std::int64_t sites = grid.site_count();
    std::vector<double> v(sites);
    kern::parallel_for(static_cast<std::size_t>(sites), [&](std::size_t s) {
        const auto x = grid.site_coords(static_cast<std::int64_t>(s));
        cplx acc = 0.0;
        for (int n = 0; n < modes.count(); ++n) {
            double kx = 0.0;
            for (int a = 0; a < grid.dim_d(); ++a) kx += modes.mode(n).k[a] * x[a];
            acc += std::conj(modes.mode(n).lambda) * moments[n] * std::exp(cplx(0.0, kx));
        }
        v[s] = 2.0 * acc.real();
    }, kern::default_exec());
    return v;
}

PartialTraceResult partial_trace_potential(const FockState& state, const SpatialGrid& grid) {
    const double n2 = state.norm() * state.norm();
    if (std::abs(n2 - 1.0) > 1e-10)
        throw ConfigError("partial_trace_potential: state not normalized");
    const ModeSet& modes = state.space->modes();
    auto moments = mode_annihilation_expectations(state);
    char tag[48];
    std::snprintf(tag, sizeof(tag), "partial_trace(eps=%g)", state.space->eps());
    EffectivePotential pot{grid, potential_from_moments(grid, modes, moments), tag};
    std::vector<double> w(modes.count());
    for (int n = 0; n < modes.count(); ++n) w[n] = modes.mode(n).omega;
    const double c_eps = field_expectation(state, dgamma(*state.space, w)).real();
    return {std::move(pot), c_eps};
}

PartialTraceResult partial_trace_potential(const ProductCoherentState& state,
                                           const SpatialGrid& grid, const ModeSet& modes) {
    if (modes.count() != state.n_modes())
        throw ArgumentError("partial_trace_potential: mode count mismatch");
    std::vector<cplx> moments(modes.count());
    for (int n = 0; n < modes.count(); ++n) moments[n] = state.annihilation_expectation(n);
    char tag[48];
    std::snprintf(tag, sizeof(tag), "partial_trace(eps=%g)", state.eps());
    EffectivePotential pot{grid, potential_from_moments(grid, modes, moments), tag};
    std::vector<double> w(modes.count());
    for (int n = 0; n < modes.count(); ++n) w[n] = modes.mode(n).omega;
    return {std::move(pot), state.dgamma_expectation(w)};
}

EffectivePotential classical_potential(const ClassicalMeasure& mu, const SpatialGrid& grid,
                                       const ModeSet& modes) {
    mu.validate(modes.count());
    std::vector<cplx> moments(modes.count(), 0.0);
    for (const auto& a : mu.atoms)
        for (int n = 0; n < modes.count(); ++n) moments[n] += a.weight * a.z[n];
    return {grid, potential_from_moments(grid, modes, moments), "classical"};
}

EffectiveHamiltonian effective_hamiltonian(const HamiltonianSpec& spec, const FockState& state) {
    if (state.space.get() != spec.field.get())
        throw ArgumentError("effective_hamiltonian: state does not live on the spec's field space");
    auto traced = partial_trace_potential(state, spec.grid);
    auto h0 = assemble_h0(spec.grid, spec.particles);
    auto vsum = per_particle_sum(spec.grid, spec.particles.n_particles, traced.potential.samples);
    return {h0 + diagonal_op(vsum), std::move(traced.potential), traced.c_eps};
}

AlmostPeriodicResult almost_periodic_potential(const std::vector<cplx>& b,
                                               const SpatialGrid& grid, const ModeSet& modes) {
    if (static_cast<int>(b.size()) != modes.count())
        throw ArgumentError("almost_periodic_potential: one coefficient per mode required");
    std::vector<cplx> f(b.size(), 0.0);
    for (int n = 0; n < modes.count(); ++n) {
        if (b[n] == cplx(0.0)) continue;
        const cplx lam = modes.mode(n).lambda;
        if (lam == cplx(0.0)) {
            std::ostringstream os;
            os << "almost_periodic_potential: unreachable potential, mode " << n
               << " has b != 0 but lambda = 0 (the mode does not couple)";
            throw ConfigError(os.str());
        }
        f[n] = std::conj(b[n]) / (2.0 * std::conj(lam));
    }
    const std::int64_t sites = grid.site_count();
    std::vector<double> v(sites);
    kern::parallel_for(static_cast<std::size_t>(sites), [&](std::size_t s) {
        const auto x = grid.site_coords(static_cast<std::int64_t>(s));
        double acc = 0.0;
        for (int n = 0; n < modes.count(); ++n) {
            double kx = 0.0;
            for (int a = 0; a < grid.dim_d(); ++a) kx += modes.mode(n).k[a] * x[a];
            acc += b[n].real() * std::cos(kx) + b[n].imag() * std::sin(kx);
        }
        v[s] = acc;
    }, kern::default_exec());
    return {EffectivePotential{grid, std::move(v), "almost_periodic"}, std::move(f)};
}

// --- mollifier ---------------------------------------------------------------

namespace {
double raw_bump(double y) {
    const double y2 = y * y;
    return y2 < 1.0 ? std::exp(-1.0 / (1.0 - y2)) : 0.0;
}
}  // namespace

namespace {
double bump_quadrature(int n, double& m2) {
    const double dy = 2.0 / (n - 1);
    double mass = 0.0;
    m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = -1.0 + i * dy;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        mass += w * raw_bump(y) * dy;
        m2 += w * y * y * raw_bump(y) * dy;
    }
    return mass;
}
}  // namespace

Mollifier::Mollifier() {
    // trapezoid on a dense tabulation; the bump is smooth with all
    // derivatives vanishing at the endpoints, so this converges beyond any
    // polynomial order
    double m2 = 0.0, m2_check = 0.0;
    const double mass = bump_quadrature(40001, m2);
    const double check = bump_quadrature(80001, m2_check);
    if (std::abs(mass - check) > 1e-10 * mass)
        throw AssertionError("Mollifier: normalization quadrature did not converge");
    norm_const_ = 1.0 / mass;
    m2_ = m2 / mass;
}

double Mollifier::value(double y) const { return norm_const_ * raw_bump(y); }

std::vector<double> mollify(const std::vector<double>& w, double dx, double eps,
                            const Mollifier& phi) {
    if (!(eps > 0.0) || !(dx > 0.0)) throw ArgumentError("mollify: eps and dx must be > 0");
    const int half = static_cast<int>(std::floor(eps / dx));
    if (2 * half < 8) {
        std::ostringstream os;
        os << "mollify: grid does not resolve the mollifier (support 2*eps = " << 2 * eps
           << " spans " << 2 * half << " samples, need >= 8; require dx <= " << eps / 4.0 << ")";
        throw ConfigError(os.str());
    }
    // the discrete kernel is renormalized to unit mass so constants are
    // exact fixed points; the >= 8 samples precondition keeps its shape
    // faithful to phi
    std::vector<double> kernel(2 * half + 1);
    double mass = 0.0;
    for (int m = -half; m <= half; ++m) {
        kernel[m + half] = phi.value(m * dx / eps) / eps * dx;
        mass += kernel[m + half];
    }
    for (double& kv : kernel) kv /= mass;

    const auto n = static_cast<std::int64_t>(w.size());
    std::vector<double> out(w.size());
    kern::parallel_for(w.size(), [&](std::size_t j) {
        double acc = 0.0;
        for (int m = -half; m <= half; ++m) {
            std::int64_t l = static_cast<std::int64_t>(j) + m;
            l = std::clamp<std::int64_t>(l, 0, n - 1);
            acc += kernel[m + half] * w[l];
        }
        out[j] = acc;
    }, kern::default_exec());
    return out;
}

double mollify_at(const std::function<double(double)>& w, double x, double eps,
                  const Mollifier& phi, int quad_points) {
    // int phi(y) w(x - eps y) dy on [-1, 1], trapezoid
    const int n = quad_points | 1;
    const double dy = 2.0 / (n - 1);
    double acc = 0.0, mass = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = -1.0 + i * dy;
        const double ww = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double pv = phi.value(y) * ww * dy;
        acc += pv * w(x - eps * y);
        mass += pv;
    }
    return acc / mass;
}

// --- Fourier -----------------------------------------------------------------

std::vector<cplx> dft_forward(const SpatialGrid& grid, const std::vector<cplx>& samples,
                              const std::vector<std::vector<double>>& kpoints) {
    if (static_cast<std::int64_t>(samples.size()) != grid.site_count())
        throw ArgumentError("dft_forward: sample count mismatch");
    const int d = grid.dim_d();
    const double cell = std::pow(grid.spacing(), d);
    const double norm = cell / std::pow(2.0 * std::numbers::pi, 0.5 * d);
    std::vector<cplx> out(kpoints.size());
    kern::parallel_for(kpoints.size(), [&](std::size_t n) {
        cplx acc = 0.0;
        for (std::int64_t s = 0; s < grid.site_count(); ++s) {
            const auto x = grid.site_coords(s);
            double kx = 0.0;
            for (int a = 0; a < d; ++a) kx += kpoints[n][a] * x[a];
            acc += samples[s] * std::exp(cplx(0.0, -kx));
        }
        out[n] = norm * acc;
    }, kern::default_exec());
    return out;
}

std::vector<cplx> dft_inverse(const SpatialGrid& grid, const ModeSet& modes,
                              const std::vector<cplx>& khat) {
    if (static_cast<int>(khat.size()) != modes.count())
        throw ArgumentError("dft_inverse: value count mismatch");
    const int d = grid.dim_d();
    const double norm = modes.cell_volume() / std::pow(2.0 * std::numbers::pi, 0.5 * d);
    std::vector<cplx> out(grid.site_count());
    kern::parallel_for(static_cast<std::size_t>(grid.site_count()), [&](std::size_t s) {
        const auto x = grid.site_coords(static_cast<std::int64_t>(s));
        cplx acc = 0.0;
        for (int n = 0; n < modes.count(); ++n) {
            double kx = 0.0;
            for (int a = 0; a < d; ++a) kx += modes.mode(n).k[a] * x[a];
            acc += khat[n] * std::exp(cplx(0.0, kx));
        }
        out[s] = norm * acc;
    }, kern::default_exec());
    return out;
}

ModeSet trap_mode_set(const SpatialGrid& grid,
                      const std::function<double(double)>& lambda_of_absk,
                      const std::function<double(double)>& omega_of_absk) {
    if (grid.dim_d() != 1) throw ArgumentError("trap_mode_set: implemented for d = 1");
    const int g = grid.points_per_axis();
    const double dk = 2.0 * std::numbers::pi / (g * grid.spacing());
    std::vector<Mode> modes(g);
    for (int n = 0; n < g; ++n) {
        const double k = (n - g / 2) * dk;
        const double lam = lambda_of_absk(std::abs(k));
        if (lam == 0.0)
            throw ConfigError("trap_mode_set: lambda vanishes on a dual mode; "
                              "the trap inversion needs lambda != 0 everywhere");
        modes[n] = {{k}, omega_of_absk(std::abs(k)), lam * std::sqrt(dk)};
    }
    return ModeSet(1, ModeFamily::NelsonCutoff, std::move(modes), dk);
}

TrapAmplitude trap_coherent_amplitude(const std::function<double(double)>& w_target, double eps,
                                      const Mollifier& phi, const SpatialGrid& grid,
                                      const ModeSet& modes, double coverage_tol) {
    if (grid.dim_d() != 1 || modes.dim_d() != 1)
        throw ArgumentError("trap_coherent_amplitude: implemented for d = 1");
    if (modes.count() != grid.points_per_axis())
        throw ArgumentError("trap_coherent_amplitude: modes must be the grid's dual set");
    if (grid.spacing() > eps / 4.0) {
        std::ostringstream os;
        os << "trap_coherent_amplitude: grid does not resolve the mollifier at eps = " << eps
           << " (need spacing <= " << eps / 4.0 << ", have " << grid.spacing() << ")";
        throw ConfigError(os.str());
    }

    // The represented object is the target restricted to the box: on the
    // Dirichlet domain multiplication by W and by W 1_{|x| <= L} agree, and
    // the restriction is square integrable, so the coherent amplitude below
    // is a genuine field state. Its energy grows as eps shrinks (the
    // mollifier admits more and more of the restricted target's spectrum).
    const double box = grid.extent();
    auto w_boxed = [&](double x) { return std::abs(x) <= box ? w_target(x) : 0.0; };

    TrapAmplitude result;
    result.mollified.resize(grid.site_count());
    for (std::int64_t s = 0; s < grid.site_count(); ++s)
        result.mollified[s] = mollify_at(w_boxed, grid.axis_node(static_cast<int>(s)), eps, phi);

    std::vector<cplx> gc(result.mollified.begin(), result.mollified.end());
    std::vector<std::vector<double>> kpts(modes.count());
    for (int n = 0; n < modes.count(); ++n) kpts[n] = modes.mode(n).k;
    const auto ghat = dft_forward(grid, gc, kpts);

    // spectral coverage: energy in the outermost 10% of |k| must be small
    double kmax = 0.0;
    for (int n = 0; n < modes.count(); ++n) kmax = std::max(kmax, modes.abs_k(n));
    double total = 0.0, outer = 0.0;
    for (int n = 0; n < modes.count(); ++n) {
        const double m = std::norm(ghat[n]);
        total += m;
        if (modes.abs_k(n) > 0.9 * kmax) outer += m;
    }
    if (total > 0.0 && outer > coverage_tol * total) {
        std::ostringstream os;
        os << "trap_coherent_amplitude: mode grid too coarse to carry the trap's spectrum ("
           << 100.0 * outer / total << "% of the energy sits in the outer 10% of the k-window)";
        throw ConfigError(os.str());
    }

    const double front = 2.0 * std::sqrt(2.0 * std::numbers::pi);
    result.f.resize(modes.count());
    for (int n = 0; n < modes.count(); ++n) {
        const cplx lam = modes.mode(n).lambda;
        result.f[n] = ghat[n] * modes.cell_volume() / (front * std::conj(lam));
        result.f_norm2 += std::norm(result.f[n]);
        result.field_energy += modes.mode(n).omega * std::norm(result.f[n]);
    }
    return result;
}

// --- polaron -----------------------------------------------------------------

PolaronSplit polaron_split(const std::vector<cplx>& z, double rho, const ModeSet& modes,
                           const SpatialGrid& grid) {
    if (modes.family() != ModeFamily::Polaron)
        throw ArgumentError("polaron_split: requires the polaron family");
    if (static_cast<int>(z.size()) != modes.count())
        throw ArgumentError("polaron_split: amplitude size mismatch");
    double kmin = modes.abs_k(0);
    for (int n = 1; n < modes.count(); ++n) kmin = std::min(kmin, modes.abs_k(n));
    if (!(rho > kmin))
        throw ArgumentError("polaron_split: rho must exceed the smallest |k| on the grid");

    const int d = modes.dim_d();
    const double front = std::pow(2.0 * std::numbers::pi, -0.5 * d);
    const std::int64_t sites = grid.site_count();

    PolaronSplit out;
    out.w_less.assign(sites, 0.0);
    out.w_greater.assign(sites, 0.0);
    out.s_field.assign(d, std::vector<double>(sites, 0.0));

    for (int n = 0; n < modes.count(); ++n) {
        const double absk = modes.abs_k(n);
        const double l2 = std::norm(modes.mode(n).lambda);  // = |k|^{1-d} dk
        if (absk <= rho)
            out.c_less += l2;
        else
            out.c_greater += l2;
        if (absk >= rho) out.c_greater_grad += l2 / (absk * absk);
    }

    kern::parallel_for(static_cast<std::size_t>(sites), [&](std::size_t s) {
        const auto x = grid.site_coords(static_cast<std::int64_t>(s));
        cplx less = 0.0, greater = 0.0;
        std::vector<cplx> sf(d, 0.0);
        for (int n = 0; n < modes.count(); ++n) {
            const Mode& m = modes.mode(n);
            double kx = 0.0;
            for (int a = 0; a < d; ++a) kx += m.k[a] * x[a];
            const cplx term = m.lambda * z[n] * std::exp(cplx(0.0, kx));
            if (modes.abs_k(n) <= rho) {
                less += term;
            } else {
                greater += term;
                const double inv_k2 = 1.0 / (modes.abs_k(n) * modes.abs_k(n));
                for (int a = 0; a < d; ++a)
                    sf[a] += m.k[a] * inv_k2 * m.lambda * z[n] * std::exp(cplx(0.0, -kx));
            }
        }
        out.w_less[s] = front * less;
        out.w_greater[s] = front * greater;
        for (int a = 0; a < d; ++a) out.s_field[a][s] = 2.0 * front * sf[a].real();
    }, kern::default_exec());
    return out;
}

}  // namespace qcl
