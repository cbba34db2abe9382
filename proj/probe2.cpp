// Scratch probes, round 2.
#include <cstdio>
#include <cmath>
#include "qclab/grid.hpp"
#include "qclab/moments.hpp"
#include "qclab/propagator.hpp"
#include "qclab/perturbation.hpp"
#include "qclab/classical.hpp"
#include "qclab/ehrenfest.hpp"

using namespace qclab;

int main() {
    // --- tilted box: walls carry force, F(lambda) genuinely nonzero ---
    {
        auto g = Grid1D::make(-4.0, 4.0, 512);
        auto v0 = PotentialSpec::linear(1.0);             // tilt inside hard box
        auto vp = PotentialSpec::polynomial({0.0, 0.0, 1.0}); // x^2
        auto spec = solve_spectrum(v0, 1.0, g, 64);
        auto series = build_series(spec, 0, v0, vp, 2);
        std::printf("box: E0=%.6f eps1=%.6f eps2=%.6f\n", spec.eigenvalues[0], series.epsilons[0],
                    series.epsilons[1]);
        std::printf("box: F0=%.6f F1=%.6f F2=%.6f tails=%.1e,%.1e\n", series.forces[0],
                    series.forces[1], series.forces[2], series.tail_share[0],
                    series.tail_share[1]);
        for (double lam : {1e-3, 2e-3, 4e-3, 1e-2}) {
            auto orc = oracle_exact(v0, vp, lam, 0, g, 1.0);
            double r = std::abs(orc.force - series.force(lam));
            std::printf("  lam=%.0e F_or=%.9f F_series=%.9f R=%.3e\n", lam, orc.force,
                        series.force(lam), r);
        }
        // Hellmann-Feynman: dE/dlam vs <V'>
        double lam = 5e-3, h = 1e-4;
        auto ep = oracle_exact(v0, vp, lam + h, 0, g, 1.0);
        auto em = oracle_exact(v0, vp, lam - h, 0, g, 1.0);
        auto e0 = oracle_exact(v0, vp, lam, 0, g, 1.0);
        std::printf("  HF: dE/dlam=%.9f <V'>=%.9f\n", (ep.energy - em.energy) / (2 * h),
                    e0.vprime_expectation);
    }

    // --- Kepler pair: circular orbit, 20 periods ---
    {
        // G=1, m1=m2=1, separation 2 => mu=0.5, M=2, omega^2 = GM/r^3 = 2/8
        ManyBodySystem sys;
        sys.masses = {1.0, 1.0};
        sys.pair.kind = PairPotential::Kind::gravity;
        sys.pair.g_const = 1.0;
        ClassicalState s;
        s.masses = sys.masses;
        s.positions = {Vec3{1.0, 0, 0}, Vec3{-1.0, 0, 0}};
        const double v = std::sqrt(1.0 / 4.0); // v of each body: mv^2/r = Gm^2/(2r)^2
        s.momenta = {Vec3{0, v, 0}, Vec3{0, -v, 0}};
        const double period = 2 * std::numbers::pi / (v / 1.0);
        const double dt = period / 20000.0;
        auto n = static_cast<std::size_t>(20.0 * period / dt);
        auto traj = canonical_many_body(sys, s, dt, n, 1000);
        double e0 = traj.energies.front(), worst_e = 0.0, worst_l = 0.0, worst_p = 0.0;
        const double l0 = traj.angular_momenta.front().norm();
        for (std::size_t i = 0; i < traj.energies.size(); ++i) {
            worst_e = std::max(worst_e, std::abs(traj.energies[i] - e0) / std::abs(e0));
            worst_l = std::max(worst_l, std::abs(traj.angular_momenta[i].norm() - l0) / l0);
            worst_p = std::max(worst_p, traj.total_momenta[i].norm());
        }
        std::printf("kepler: dE=%.3e dL=%.3e dP=%.3e steps=%zu\n", worst_e, worst_l, worst_p, n);
    }

    // --- Boris gyration ---
    {
        auto chk = lorentz_step_check(1.0, Vec3{0, 0, 1.0}, Vec3{1.0, 0, 0}, 1.0, 1.0);
        std::printf("boris: freq=%.9f radius=%.9f speed_drift=%.3e\n", chk.cyclotron_freq,
                    chk.radius, chk.max_speed_drift);
    }

    // --- harmonic correspondence: quantum vs classical, 5 periods ---
    {
        auto g = Grid1D::make(-20.0, 20.0, 512);
        const double x0 = 2.0, omega = 1.0, m = 1.0;
        const double a = std::sqrt(2.0 * 1.0 / (m * omega)); // coherent width
        auto psi = make_gaussian({x0, 0.0, a, m}, g);
        EvolutionConfig cfg;
        const double period = 2 * std::numbers::pi;
        cfg.dt = 1e-3;
        cfg.n_steps = static_cast<std::size_t>(5 * period / cfg.dt) / 100 * 100;
        cfg.record_every = 100;
        auto v = PotentialSpec::harmonic(m, omega);
        auto [pf, qt] = evolve(psi, v, m, cfg);

        ClassicalState cs;
        cs.masses = {m};
        cs.positions = {Vec3{x0, 0, 0}};
        cs.momenta = {Vec3{}};
        auto ct = integrate(cs, ForceField::harmonic(omega), cfg.dt, cfg.n_steps, cfg.record_every);
        auto rep = compare_to_newton(qt, ct, v, m);
        std::printf("harmonic: max|x_q-x_cl|=%.3e (span frac %.3e) max res1=%.3e\n",
                    rep.max_deviation_x, rep.max_deviation_x / g.span(),
                    *std::max_element(rep.ehrenfest1_residual.begin(),
                                      rep.ehrenfest1_residual.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); }));
        // also vs exact cos
        double worst_exact = 0.0;
        for (std::size_t i = 0; i < qt.times.size(); ++i)
            worst_exact = std::max(worst_exact,
                                   std::abs(qt.stats[i].mean_x - x0 * std::cos(qt.times[i])));
        std::printf("harmonic: max|x_q - x0 cos t| = %.3e, energy drift=%.3e\n", worst_exact,
                    std::abs(qt.stats.back().energy - qt.stats.front().energy));
    }

    // --- uniform gravity correspondence ---
    {
        auto g = Grid1D::make(-26.0, 26.0, 512);
        const double mass = 20.0, grav = 0.044;
        auto psi = make_gaussian({10.0, 0.0, 1.0, mass}, g);
        EvolutionConfig cfg;
        cfg.dt = 2e-3;
        cfg.n_steps = 15000;
        cfg.record_every = 100;
        auto v = PotentialSpec::gravity_uniform(mass, grav);
        auto [pf, qt] = evolve(psi, v, mass, cfg);
        ClassicalState cs;
        cs.masses = {mass};
        cs.positions = {Vec3{0, 0, 10.0}};
        cs.momenta = {Vec3{}};
        auto ct = integrate(cs, ForceField::uniform_gravity(grav), cfg.dt, cfg.n_steps,
                            cfg.record_every);
        auto rep = compare_to_newton(qt, ct, v, mass, 2);
        std::printf("gravity: max|x_q-x_cl|=%.3e (span frac %.3e) final x=%.4f leak=%.2e\n",
                    rep.max_deviation_x, rep.max_deviation_x / g.span(), qt.stats.back().mean_x,
                    qt.max_leakage);
    }

    // --- softened coulomb, broad packet: deviation demo ---
    {
        auto g = Grid1D::make(-30.0, 30.0, 1024);
        const double m = 1.0;
        auto psi = make_gaussian({3.0, 0.0, 2.0, m}, g);
        auto v = PotentialSpec::softened_coulomb(5.0, 1.0, 0.0);
        EvolutionConfig cfg;
        cfg.dt = 1e-3;
        cfg.n_steps = 20000;
        cfg.record_every = 200;
        auto [pf, qt] = evolve(psi, v, m, cfg);
        ClassicalState cs;
        cs.masses = {m};
        cs.positions = {Vec3{3.0, 0, 0}};
        cs.momenta = {Vec3{}};
        // classical force along x: -dV/dx of the same 1D potential
        auto ct = integrate(cs, ForceField::potential_1d(v), cfg.dt, cfg.n_steps,
                            cfg.record_every);
        auto rep = compare_to_newton(qt, ct, v, m, 0);
        std::printf("coulomb: max dev = %.4f (span frac %.4f) leak=%.2e\n", rep.max_deviation_x,
                    rep.max_deviation_x / g.span(), qt.max_leakage);
    }

    // --- CN cross check on harmonic ---
    {
        auto g = Grid1D::make(-16.0, 16.0, 256);
        const double m = 1.0;
        auto psi = make_gaussian({1.0, 0.0, std::sqrt(2.0), m}, g);
        auto v = PotentialSpec::harmonic(m, 1.0);
        EvolutionConfig cfg;
        cfg.dt = 0.5 * m * g.dx() * g.dx(); // CN margin
        cfg.n_steps = 4000;
        cfg.record_every = 4000;
        cfg.method = Method::crank_nicolson;
        auto [pf, qt] = evolve(psi, v, m, cfg);
        cfg.method = Method::split_step;
        auto [pf2, qt2] = evolve(psi, v, m, cfg);
        std::printf("CN vs SS at t=%.3f: x_cn=%.6f x_ss=%.6f diff=%.2e norm_cn=%.12f\n",
                    qt.times.back(), qt.stats.back().mean_x, qt2.stats.back().mean_x,
                    std::abs(qt.stats.back().mean_x - qt2.stats.back().mean_x),
                    qt.stats.back().norm);
    }
    return 0;
}
