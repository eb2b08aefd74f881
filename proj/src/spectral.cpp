#include "qcl/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qcl/errors.hpp"
#include "qcl/kernels.hpp"

namespace qcl {

namespace {

std::vector<cplx> seeded_gaussian(std::int64_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> v(dim);
    for (auto& x : v) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        x = cplx(re, im);
    }
    return v;
}

void normalize(std::vector<cplx>& v) {
    const double n = kern::nrm2(v);
    if (n == 0.0) throw SolverError("lanczos: zero start vector", 0.0, 0.0);
    kern::scal(1.0 / n, v.data(), v.size());
}

void orthogonalize_against(std::vector<cplx>& w, const std::vector<std::vector<cplx>>& basis) {
    for (const auto& u : basis) {
        const cplx c = kern::dot(u, w);
        kern::axpy(-c, u.data(), w.data(), w.size());
    }
}

struct RitzPair {
    double theta;
    Eigen::VectorXd s;
};

RitzPair smallest_ritz(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < k) {
            t(i, i + 1) = beta[i];
            t(i + 1, i) = beta[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

EigenResult lanczos_impl(const SparseOp& op, const LanczosOptions& opts,
                         const std::vector<cplx>* deflate) {
    const std::int64_t dim = op.dim();
    if (dim == 0) throw ArgumentError("ground_energy: empty operator");
    if (dim == 1) {
        return {op.entry(0, 0).real(), {cplx(1.0, 0.0)}, 0.0, 0};
    }

    std::mt19937_64 rng(opts.seed);
    std::vector<cplx> v0 = seeded_gaussian(dim, rng);
    if (deflate) {
        const cplx c = kern::dot(*deflate, v0);
        kern::axpy(-c, deflate->data(), v0.data(), v0.size());
    }
    normalize(v0);

    const bool full_reorth = dim <= opts.full_reorth_dim;
    const int basis_cap = static_cast<int>(std::min<std::int64_t>(opts.basis_cap, dim));

    int matvecs = 0;
    double best_theta = 0.0, best_resid = std::numeric_limits<double>::infinity();
    std::vector<cplx> best_vec;

    while (matvecs < opts.max_iter) {
        std::vector<std::vector<cplx>> basis;
        basis.push_back(v0);
        std::vector<double> alpha, beta;
        std::vector<cplx> w(dim);

        for (int j = 0; j < basis_cap && matvecs < opts.max_iter; ++j) {
            kern::spmv(op, basis[j], w);
            ++matvecs;
            if (j > 0) kern::axpy(-beta[j - 1], basis[j - 1].data(), w.data(), w.size());
            const double a = kern::dot(basis[j], w).real();
            alpha.push_back(a);
            kern::axpy(cplx(-a), basis[j].data(), w.data(), w.size());
            if (deflate) {
                const cplx c = kern::dot(*deflate, w);
                kern::axpy(-c, deflate->data(), w.data(), w.size());
            }
            // one MGS pass keeps the basis workable; the second pass below the
            // dimension threshold restores orthogonality to machine precision
            orthogonalize_against(w, basis);
            if (full_reorth) orthogonalize_against(w, basis);
            const double b = kern::nrm2(w);
            if (b < 1e-13 * std::max(1.0, std::abs(a))) break;  // invariant subspace
            beta.push_back(b);
            kern::scal(1.0 / b, w.data(), w.size());
            basis.push_back(w);
        }
        const auto ritz = smallest_ritz(alpha, beta);
        std::vector<cplx> x(dim, 0.0);
        for (std::size_t i = 0; i < alpha.size(); ++i)
            kern::axpy(cplx(ritz.s(static_cast<int>(i))), basis[i].data(), x.data(), x.size());
        normalize(x);

        kern::spmv(op, x, w);
        ++matvecs;
        kern::axpy(cplx(-ritz.theta), x.data(), w.data(), w.size());
        const double resid = kern::nrm2(w);
        if (resid < best_resid) {
            best_resid = resid;
            best_theta = ritz.theta;
            best_vec = x;
        }
        if (resid <= opts.tol) return {ritz.theta, std::move(x), resid, matvecs};
        v0 = std::move(x);
    }
    std::ostringstream os;
    os << "ground_energy: no convergence after " << matvecs << " matvecs (best residual "
       << best_resid << ", estimate " << best_theta << ")";
    throw SolverError(os.str(), best_theta, best_resid);
}

}  // namespace

EigenResult ground_energy(const SparseOp& op, const LanczosOptions& opts) {
    return lanczos_impl(op, opts, nullptr);
}

std::vector<cplx> resolvent_apply(const SparseOp& op, double zeta, const std::vector<cplx>& v,
                                  double rel_tol, int max_iter) {
    if (op.dim() != static_cast<std::int64_t>(v.size()))
        throw ArgumentError("resolvent_apply: dimension mismatch");
    const std::size_t n = v.size();
    if (max_iter <= 0) max_iter = static_cast<int>(std::min<std::int64_t>(200000, 40 * op.dim() + 1000));

    const double vnorm = kern::nrm2(v);
    if (vnorm == 0.0) return std::vector<cplx>(n, 0.0);

    std::vector<cplx> x(n, 0.0), r = v, p = v, ap(n);
    double rr = kern::dot(r, r).real();
    for (int it = 0; it < max_iter; ++it) {
        kern::spmv(op, p, ap);
        kern::axpy(cplx(zeta), p.data(), ap.data(), n);
        const double pap = kern::dot(p, ap).real();
        if (!(pap > 0.0))
            throw ConfigError("resolvent_apply: shift is not in the resolvent set "
                              "(op + zeta is not positive definite)");
        const double a = rr / pap;
        kern::axpy(cplx(a), p.data(), x.data(), n);
        kern::axpy(cplx(-a), ap.data(), r.data(), n);
        const double rr_new = kern::dot(r, r).real();
        if (std::sqrt(rr_new) <= rel_tol * vnorm) return x;
        const double b = rr_new / rr;
        rr = rr_new;
        kern::scal(cplx(b), p.data(), n);
        kern::axpy(cplx(1.0), r.data(), p.data(), n);
    }
    throw SolverError("resolvent_apply: CG did not converge", 0.0, std::sqrt(rr) / vnorm);
}

double resolvent_distance(const SparseOp& a, const SparseOp& b, double zeta,
                          const std::vector<std::vector<cplx>>& probes, double rel_tol) {
    if (a.dim() != b.dim()) throw ArgumentError("resolvent_distance: dimension mismatch");
    double worst = 0.0;
    for (const auto& v : probes) {
        const double vn = kern::nrm2(v);
        if (vn == 0.0) continue;
        auto wa = resolvent_apply(a, zeta, v, rel_tol);
        auto wb = resolvent_apply(b, zeta, v, rel_tol);
        kern::axpy(cplx(-1.0), wb.data(), wa.data(), wa.size());
        worst = std::max(worst, kern::nrm2(wa) / vn);
    }
    return worst;
}

std::vector<std::vector<cplx>> gaussian_probes(std::int64_t dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<cplx>> probes(count);
    for (auto& p : probes) p = seeded_gaussian(dim, rng);
    return probes;
}

// --- GSE ----------------------------------------------------------------------

namespace {

// m_n = sum_j <psi| e^{i k_n . x_j} |psi> on the configuration lattice.
std::vector<cplx> mode_moments(const SpatialGrid& grid, int n_particles, const ModeSet& modes,
                               const std::vector<cplx>& psi) {
    ParticleIndexer idx(grid, n_particles);
    if (static_cast<std::int64_t>(psi.size()) != idx.dim())
        throw ArgumentError("mode_moments: psi does not live on the configuration grid");
    std::vector<cplx> m(modes.count(), 0.0);
    for (int n = 0; n < modes.count(); ++n) {
        const auto& k = modes.mode(n).k;
        cplx acc = 0.0;
        for (std::int64_t c = 0; c < idx.dim(); ++c) {
            const double rho = std::norm(psi[c]);
            if (rho == 0.0) continue;
            for (int j = 0; j < n_particles; ++j) {
                const auto x = grid.site_coords(idx.site_of(c, j));
                double kx = 0.0;
                for (int a = 0; a < grid.dim_d(); ++a) kx += k[a] * x[a];
                acc += rho * std::exp(cplx(0.0, kx));
            }
        }
        m[n] = acc;
    }
    return m;
}

double classical_energy(const SpatialGrid& grid, const ParticleModel& particles,
                        const ModeSet& modes, const SparseOp& h0, const ClassicalMeasure& mu,
                        const LanczosOptions& eig_opts) {
    const auto vmu = classical_potential(mu, grid, modes);
    const auto vsum = per_particle_sum(grid, particles.n_particles, vmu.samples);
    const auto h_eff = h0 + diagonal_op(vsum);
    return ground_energy(h_eff, eig_opts).value + mu.field_energy(modes);
}

// Nelder-Mead over packed (weight logit, atom components); small and bounded.
struct NelderMead {
    std::function<double(const std::vector<double>&)> f;
    int max_evals = 200;

    double minimize(std::vector<double>& x) {
        const int n = static_cast<int>(x.size());
        std::vector<std::vector<double>> simplex(n + 1, x);
        std::vector<double> fv(n + 1);
        for (int i = 0; i < n; ++i) simplex[i + 1][i] += (x[i] != 0.0 ? 0.1 * std::abs(x[i]) : 0.05);
        int evals = 0;
        for (int i = 0; i <= n; ++i) fv[i] = f(simplex[i]), ++evals;
        while (evals < max_evals) {
            std::vector<int> order(n + 1);
            for (int i = 0; i <= n; ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
            const int lo = order[0], hi = order[n], second_hi = order[n - 1];
            std::vector<double> centroid(n, 0.0);
            for (int i = 0; i <= n; ++i)
                if (i != hi)
                    for (int d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;
            auto blend = [&](double t) {
                std::vector<double> p(n);
                for (int d = 0; d < n; ++d) p[d] = centroid[d] + t * (centroid[d] - simplex[hi][d]);
                return p;
            };
            auto refl = blend(1.0);
            double fr = f(refl);
            ++evals;
            if (fr < fv[lo]) {
                auto exp_p = blend(2.0);
                double fe = f(exp_p);
                ++evals;
                if (fe < fr) {
                    simplex[hi] = exp_p;
                    fv[hi] = fe;
                } else {
                    simplex[hi] = refl;
                    fv[hi] = fr;
                }
            } else if (fr < fv[second_hi]) {
                simplex[hi] = refl;
                fv[hi] = fr;
            } else {
                auto con = blend(-0.5);
                double fc = f(con);
                ++evals;
                if (fc < fv[hi]) {
                    simplex[hi] = con;
                    fv[hi] = fc;
                } else {
                    for (int i = 0; i <= n; ++i) {
                        if (i == lo) continue;
                        for (int d = 0; d < n; ++d)
                            simplex[i][d] = 0.5 * (simplex[i][d] + simplex[lo][d]);
                        fv[i] = f(simplex[i]);
                        ++evals;
                    }
                }
            }
            if (std::abs(fv[order[0]] - fv[order[n]]) < 1e-12) break;
        }
        int best = 0;
        for (int i = 1; i <= n; ++i)
            if (fv[i] < fv[best]) best = i;
        x = simplex[best];
        return fv[best];
    }
};

}  // namespace

PekarResult pekar_minimize(const SpatialGrid& grid, const ParticleModel& particles,
                           const ModeSet& modes, const GseOptions& opts) {
    const SparseOp h0 = assemble_h0(grid, particles);
    auto eig = ground_energy(h0, opts.eig);

    PekarResult result;
    result.z.assign(modes.count(), 0.0);
    double e_prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.alt_max_iter; ++it) {
        const auto m = mode_moments(grid, particles.n_particles, modes, eig.vector);
        double field = 0.0;
        for (int n = 0; n < modes.count(); ++n) {
            const Mode& md = modes.mode(n);
            // massless modes are pinned at zero amplitude: the quadratic
            // z-update needs 1/omega and the limit statement assumes a mass gap
            result.z[n] = md.omega > 0.0 ? -md.lambda * std::conj(m[n]) / md.omega : 0.0;
            field += md.omega * std::norm(result.z[n]);
        }
        const auto mu = ClassicalMeasure::dirac(result.z);
        const auto vz = classical_potential(mu, grid, modes);
        const auto vsum = per_particle_sum(grid, particles.n_particles, vz.samples);
        eig = ground_energy(h0 + diagonal_op(vsum), opts.eig);
        const double e = eig.value + field;
        if (!result.energy_trace.empty() && e > e_prev + 100.0 * opts.eig.tol) {
            std::ostringstream os;
            os << "pekar_minimize: energy increased from " << e_prev << " to " << e
               << " at step " << it << "; trace:";
            for (double t : result.energy_trace) os << " " << t;
            throw SolverError(os.str(), e_prev, e - e_prev);
        }
        result.energy_trace.push_back(e);
        if (std::abs(e - e_prev) < opts.alt_tol * (1.0 + std::abs(e))) {
            e_prev = e;
            break;
        }
        e_prev = e;
        if (it + 1 == opts.alt_max_iter) {
            std::ostringstream os;
            os << "pekar_minimize: no stagnation after " << opts.alt_max_iter << " steps; trace:";
            for (double t : result.energy_trace) os << " " << t;
            throw SolverError(os.str(), e, std::abs(e - e_prev));
        }
    }
    result.energy = e_prev;
    result.psi = eig.vector;

    // canonical global phase, applied only when it is an exact symmetry of
    // the potential (reporting convention for golden outputs)
    for (int n = 0; n < modes.count(); ++n) {
        if (std::abs(result.z[n]) > 1e-12) {
            const cplx phase = std::exp(cplx(0.0, -std::arg(result.z[n])));
            std::vector<cplx> rotated(result.z.size());
            for (std::size_t i = 0; i < result.z.size(); ++i) rotated[i] = phase * result.z[i];
            const auto v0 = classical_potential(ClassicalMeasure::dirac(result.z), grid, modes);
            const auto v1 = classical_potential(ClassicalMeasure::dirac(rotated), grid, modes);
            if (sup_distance(v0, v1) <= 1e-12 * (1.0 + v0.sup_norm())) result.z = rotated;
            break;
        }
    }
    return result;
}

GseResult minimize_gse(const SpatialGrid& grid, const ParticleModel& particles,
                       const ModeSet& modes, const std::vector<double>& eps_list,
                       const GseOptions& opts) {
    GseResult out;
    const SparseOp h0 = assemble_h0(grid, particles);
    auto h0_ground = ground_energy(h0, opts.eig);
    out.h0_ground = h0_ground.value;
    auto h0_first = lanczos_impl(h0, opts.eig, &h0_ground.vector);
    out.h0_gap = h0_first.value - h0_ground.value;
    bool massive = true;
    for (int n = 0; n < modes.count(); ++n) massive = massive && modes.mode(n).omega > 0.0;
    out.lower_bound_floor =
        massive ? out.h0_ground - particles.n_particles * particles.n_particles *
                                      modes.lambda_over_sqrt_omega_norm2()
                : std::numeric_limits<double>::quiet_NaN();

    auto pekar = pekar_minimize(grid, particles, modes, opts);
    out.energy_trace = pekar.energy_trace;
    out.classical_infimum = pekar.energy;
    out.minimizer = ClassicalMeasure::dirac(pekar.z);

    if (opts.refine_multi_atom && opts.refine_atoms >= 2) {
        const int nm = modes.count();
        const int atoms = opts.refine_atoms;
        // pack: (atoms-1) weight logits, then re/im per mode per atom
        auto unpack = [&](const std::vector<double>& p) {
            ClassicalMeasure mu;
            // softmax weights with the last logit pinned to zero
            std::vector<double> w(atoms, 1.0);
            for (int i = 0; i + 1 < atoms; ++i) w[i] = std::exp(p[i]);
            double norm = 0.0;
            for (int i = 0; i < atoms; ++i) norm += w[i];
            for (int i = 0; i < atoms; ++i) {
                MeasureAtom a;
                a.weight = w[i] / norm;
                a.z.resize(nm);
                for (int n = 0; n < nm; ++n) {
                    const int base = (atoms - 1) + 2 * (i * nm + n);
                    a.z[n] = cplx(p[base], p[base + 1]);
                }
                mu.atoms.push_back(std::move(a));
            }
            return mu;
        };
        std::vector<double> p(static_cast<std::size_t>(atoms - 1) + 2 * atoms * nm, 0.0);
        for (int i = 0; i < atoms; ++i)
            for (int n = 0; n < nm; ++n) {
                const int base = (atoms - 1) + 2 * (i * nm + n);
                const double jitter = 1.0 + 0.05 * (i + 1);
                p[base] = pekar.z[n].real() * jitter;
                p[base + 1] = pekar.z[n].imag() * jitter;
            }
        NelderMead nm_opt{[&](const std::vector<double>& q) {
                              return classical_energy(grid, particles, modes, h0, unpack(q),
                                                      opts.eig);
                          },
                          opts.refine_evals};
        const double refined = nm_opt.minimize(p);
        if (refined < out.classical_infimum) {
            out.classical_infimum = refined;
            out.minimizer = unpack(p);
        }
    }

    for (double eps : eps_list) {
        std::vector<int> cutoffs(modes.count());
        for (int n = 0; n < modes.count(); ++n) {
            const double mean = std::norm(pekar.z[n]) / eps;
            cutoffs[n] = std::max(opts.min_cutoff,
                                  adequate_cutoff(mean, opts.cutoff_tau) +
                                      static_cast<int>(std::ceil(4.0 * std::sqrt(mean + 1.0))));
        }
        auto space = std::make_shared<const FockSpace>(modes, eps, cutoffs);
        HamiltonianSpec spec{grid, particles, space};
        const SparseOp h = assemble_full(spec, opts.memory_budget_bytes);
        auto eig = ground_energy(h, opts.eig);
        GsePoint pt;
        pt.eps = eps;
        pt.quantum_energy = eig.value;
        pt.gap = out.classical_infimum - eig.value;
        pt.iterations = eig.iterations;
        out.sweep.push_back(pt);
    }
    return out;
}

}  // namespace qcl
