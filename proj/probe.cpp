// Scratch numerical probes; not part of the build.
#include <cstdio>
#include <cmath>
#include "qclab/grid.hpp"
#include "qclab/moments.hpp"
#include "qclab/propagator.hpp"
#include "qclab/perturbation.hpp"
#include "qclab/multipole.hpp"

using namespace qclab;

int main() {
    // --- Gaussian moments ---
    auto grid = Grid1D::make(-20.0, 20.0, 1024);
    auto psi = make_gaussian({0.0, 5.0, 1.0, 1.0}, grid);
    auto st = moments(psi, PotentialSpec::free(), 1.0);
    std::printf("gauss: mean_p=%.9f sx=%.9f sp=%.9f prod=%.12f norm=%.12f\n", st.mean_p,
                st.sigma_x, st.sigma_p, st.uncertainty_product(), st.norm);

    // --- free spread vs analytic ---
    {
        auto g = Grid1D::make(-32.0, 32.0, 4096);
        auto p0 = make_gaussian({0.0, 0.0, 1.0, 1.0}, g);
        EvolutionConfig cfg;
        cfg.dt = 2.598 / 600.0;
        cfg.n_steps = 600;
        cfg.record_every = 60;
        auto [pf, traj] = evolve(p0, PotentialSpec::free(), 1.0, cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            double ana = 0.5 * asymptotic_spread(1.0, 1.0, traj.times[i]).width;
            worst = std::max(worst, std::abs(traj.stats[i].sigma_x - ana) / ana);
        }
        std::printf("free spread worst rel err = %.3e, leak=%.3e\n", worst, traj.max_leakage);
    }

    // --- eigensolver: harmonic spectrum ---
    {
        auto g = Grid1D::make(-14.0, 14.0, 8192);
        auto spec = solve_spectrum(PotentialSpec::harmonic(1.0, 1.0), 1.0, g, 16);
        double worst = 0.0;
        for (std::size_t k = 0; k <= 10; ++k) {
            double exact = (double(k) + 0.5);
            worst = std::max(worst, std::abs(spec.eigenvalues[k] - exact) / exact);
        }
        std::printf("harmonic E_k worst rel err (k<=10) = %.3e, gap_min=%.6f\n", worst,
                    spec.gap_min);
        // orthonormality
        double worst_ortho = 0.0;
        double dx = g.dx();
        for (std::size_t a = 0; a < 16; ++a)
            for (std::size_t b = a; b < 16; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < g.n_points; ++i)
                    s += spec.eigenvectors[a][i] * spec.eigenvectors[b][i];
                s *= dx;
                worst_ortho = std::max(worst_ortho, std::abs(s - (a == b ? 1.0 : 0.0)));
            }
        std::printf("gram worst dev = %.3e\n", worst_ortho);
    }

    // --- perturbation: harmonic + lambda x ---
    {
        auto g = Grid1D::make(-12.0, 12.0, 1024);
        auto spec = solve_spectrum(PotentialSpec::harmonic(1.0, 1.0), 1.0, g, 64);
        auto v0 = PotentialSpec::harmonic(1.0, 1.0);
        auto vp = PotentialSpec::linear(1.0);
        auto series = build_series(spec, 0, v0, vp, 2);
        std::printf("eps1=%.3e eps2=%.9f (exact -0.5)\n", series.epsilons[0], series.epsilons[1]);
        std::printf("F0=%.3e F1 terms: %.6f %.6f %.6f total %.3e F2=%.3e\n", series.forces[0],
                    series.f1.dvprime_term, series.f1.dv0_cross_right, series.f1.dv0_cross_left,
                    series.forces[1], series.forces[2]);
        auto orc = oracle_exact(v0, vp, 0.01, 0, g, 1.0);
        std::printf("oracle E(0.01)=%.12f (exact %.12f) force=%.3e overlap=%.6f\n", orc.energy,
                    0.5 - 0.01 * 0.01 / 2.0, orc.force, orc.overlap);
    }

    // --- criterion-6 style slope probe: anharmonic V0, scaled-x V' ---
    {
        auto g = Grid1D::make(-8.0, 8.0, 512);
        auto v0 = PotentialSpec::polynomial({0.0, 0.0, 0.5, 0.3, 0.25});
        auto vp = PotentialSpec::linear(25.0);
        auto spec = solve_spectrum(v0, 1.0, g, 64);
        auto series = build_series(spec, 0, v0, vp, 2);
        std::printf("anharm: eps1=%.6f eps2=%.6f F0=%.3e F1=%.3e F2=%.3e tail=%.2e,%.2e\n",
                    series.epsilons[0], series.epsilons[1], series.forces[0], series.forces[1],
                    series.forces[2], series.tail_share[0], series.tail_share[1]);
        for (double lam : {1e-3, 2e-3, 4e-3, 1e-2}) {
            auto orc = oracle_exact(v0, vp, lam, 0, g, 1.0);
            double s = series.force(lam);
            std::printf("  lam=%.0e  F_or=%.12e F_series=%.12e R=%.3e\n", lam, orc.force, s,
                        std::abs(orc.force - s));
        }
    }

    // --- tidal toy probe ---
    {
        BodyModel body;
        body.masses = {1.0, 1.0};
        body.positions = {Vec3{60.0, 0.0, 0.5}, Vec3{60.0, 0.0, -0.5}};
        body.spring_stiffness = 4.0;
        GravitySource src{2.16e6, Vec3{}}; // lam0 = -G M0 mu / d^3 = -5
        auto g = Grid1D::make(-12.0, 12.0, 512);
        auto toy = make_tidal_toy(body, src, g, 48);
        std::printf("toy: mu=%.3f omega=%.6f coupling=%.6f\n", toy.reduced_mass, toy.omega,
                    toy.coupling);
        auto sweep = tidal_force_correction(toy, {1e-3, 2e-3, 4e-3, 1e-2});
        for (std::size_t i = 0; i < sweep.lambdas.size(); ++i)
            std::printf("  u=%.0e series=%.9e oracle=%.9e R=%.3e\n", sweep.lambdas[i],
                        sweep.series_force[i], sweep.oracle_force[i],
                        std::abs(sweep.series_force[i] - sweep.oracle_force[i]));
        std::printf("  f1 parity: %.2e %.2e %.2e ; f0=%.2e ; eps1=%.6f eps2=%.6f\n",
                    sweep.engine_f1.dvprime_term, sweep.engine_f1.dv0_cross_right,
                    sweep.engine_f1.dv0_cross_left, sweep.engine_f0, sweep.eps_shape[0],
                    sweep.eps_shape[1]);
        auto def = deformation_profile(toy, 1e-3);
        std::printf("  deformation(1e-3) = %.6e\n", def.r2_shift);
    }
    return 0;
}
