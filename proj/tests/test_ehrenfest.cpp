#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qclab/classical.hpp"
#include "qclab/ehrenfest.hpp"
#include "qclab/grid.hpp"
#include "qclab/propagator.hpp"

using namespace qclab;

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

QuantumTrajectory run(const PotentialSpec& v, const GaussianPacketSpec& packet,
                      const Grid1D& grid, double dt, double t_final) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.n_steps = static_cast<std::size_t>(std::llround(t_final / dt));
    cfg.record_every = 1;
    cfg.record_states = true;
    return evolve(make_gaussian(packet, grid), v, packet.mass, cfg).second;
}

} // namespace

TEST_CASE("residuals vanish at round-off for linear potentials") {
    const auto grid = Grid1D::make(-24.0, 24.0, 512);
    for (const auto& v : {PotentialSpec::free(), PotentialSpec::linear(0.5),
                          PotentialSpec::gravity_uniform(4.0, 0.2)}) {
        const auto traj = run(v, {-4.0, 2.0, 1.0, 4.0}, grid, 1e-3, 2.0);
        REQUIRE(max_abs(verify_ehrenfest1(traj, 4.0)) < 1e-9);
        REQUIRE(max_abs(verify_ehrenfest2(traj, v)) < 1e-9);
    }
}

TEST_CASE("residuals converge at second order for curved potentials") {
    const auto grid = Grid1D::make(-16.0, 16.0, 256);
    const auto v = PotentialSpec::harmonic(1.0, 1.0);
    std::vector<double> r1s, r2s;
    for (double dt : {4e-3, 1e-3}) {
        const auto traj = run(v, {1.5, 0.0, std::sqrt(2.0), 1.0}, grid, dt, 2.0);
        r1s.push_back(max_abs(verify_ehrenfest1(traj, 1.0)));
        r2s.push_back(max_abs(verify_ehrenfest2(traj, v)));
    }
    const double order1 = std::log(r1s[0] / r1s[1]) / std::log(4.0);
    const double order2 = std::log(r2s[0] / r2s[1]) / std::log(4.0);
    REQUIRE(order1 == Catch::Approx(2.0).margin(0.2));
    REQUIRE(order2 == Catch::Approx(2.0).margin(0.2));
}

TEST_CASE("soft-coulomb residuals stay small relative to the force scale") {
    const auto grid = Grid1D::make(-30.0, 30.0, 512);
    const auto v = PotentialSpec::softened_coulomb(5.0, 1.0, 0.0);
    const auto traj = run(v, {3.0, 0.0, 2.0, 1.0}, grid, 1e-3, 2.0);
    const auto r2 = verify_ehrenfest2(traj, v);
    // force scale along this run is order one
    REQUIRE(max_abs(r2) < 1e-5);
}

TEST_CASE("residual preconditions") {
    const auto grid = Grid1D::make(-24.0, 24.0, 256);
    const auto v = PotentialSpec::free();
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 2;
    cfg.record_states = true;
    const auto [pf, short_traj] = evolve(make_gaussian({0.0, 0.0, 1.0, 1.0}, grid), v, 1.0, cfg);
    // 3 records exist (0, 1, 2) -> ok; drop to 2 by slicing is not possible,
    // so test with n_steps = 1
    EvolutionConfig tiny = cfg;
    tiny.n_steps = 1;
    const auto [pf2, t2] = evolve(make_gaussian({0.0, 0.0, 1.0, 1.0}, grid), v, 1.0, tiny);
    REQUIRE_THROWS_AS(verify_ehrenfest1(t2, 1.0), config_error);

    // tabulated potential has no analytic derivative
    const auto vt = PotentialSpec::tabulated(std::vector<double>(grid.n_points, 0.0), grid);
    REQUIRE_THROWS_AS(verify_ehrenfest2(short_traj, vt), config_error);

    // trajectory recorded without states cannot audit the force side
    EvolutionConfig nostate = cfg;
    nostate.record_states = false;
    const auto [pf3, t3] = evolve(make_gaussian({0.0, 0.0, 1.0, 1.0}, grid), v, 1.0, nostate);
    REQUIRE_THROWS_AS(verify_ehrenfest2(t3, v), config_error);
}

TEST_CASE("classical comparison classifies and measures deviation") {
    const auto grid = Grid1D::make(-20.0, 20.0, 512);
    const double m = 1.0, x0 = 2.0;
    const auto v = PotentialSpec::harmonic(m, 1.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 6000;
    cfg.record_every = 50;
    cfg.record_states = true;
    const auto [pf, qt] = evolve(make_gaussian({x0, 0.0, std::sqrt(2.0), m}, grid), v, m, cfg);
    ClassicalState cs;
    cs.masses = {m};
    cs.positions = {{x0, 0, 0}};
    cs.momenta = {{}};
    const auto ct = integrate(cs, ForceField::potential_1d(v), cfg.dt, cfg.n_steps,
                              cfg.record_every);
    const auto rep = compare_to_newton(qt, ct, v, m);
    REQUIRE(rep.exactness_class);
    REQUIRE(rep.max_deviation_x / grid.span() < 1e-6);
    REQUIRE(rep.times.size() == rep.ehrenfest1_residual.size());
    REQUIRE(rep.v_expectation.size() == rep.times.size());
    // <V> differs from V(<x>) by the dispersion term m w^2 sigma_x^2/2
    const double gap = std::abs(rep.v_expectation.front() - rep.v_at_mean.front());
    REQUIRE(gap == Catch::Approx(0.25).margin(0.02)); // sigma_x^2 = 1/2 here

    SECTION("mismatched time grids are rejected") {
        auto bad = ct;
        bad.times.back() += 0.5;
        REQUIRE_THROWS_AS(compare_to_newton(qt, bad, v, m), config_error);
    }
}

TEST_CASE("broad packets in an anharmonic well drift off the classical path") {
    const auto grid = Grid1D::make(-40.0, 40.0, 1024);
    const double m = 1.0;
    const auto v = PotentialSpec::softened_coulomb(5.0, 1.0, 0.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 20000;
    cfg.record_every = 400;
    const auto [pf, qt] = evolve(make_gaussian({3.0, 0.0, 2.0, m}, grid), v, m, cfg);
    ClassicalState cs;
    cs.masses = {m};
    cs.positions = {{3.0, 0, 0}};
    cs.momenta = {{}};
    const auto ct = integrate(cs, ForceField::potential_1d(v), cfg.dt, cfg.n_steps,
                              cfg.record_every);
    const auto rep = compare_to_newton(qt, ct, v, m);
    REQUIRE_FALSE(rep.exactness_class);
    REQUIRE(rep.max_deviation_x / grid.span() > 1e-3);
}

TEST_CASE("narrow packets track smooth potentials better") {
    // Halving the width reduces the deviation roughly fourfold: the leading
    // error in the mean force is sigma_x^2 V''' / 2.
    auto deviation = [](double width, std::size_t n_points) {
        const auto grid = Grid1D::make(-40.0, 40.0, n_points);
        const double m = 1.0;
        const auto v = PotentialSpec::softened_coulomb(5.0, 1.5, 0.0);
        EvolutionConfig cfg;
        cfg.dt = 1e-3;
        cfg.n_steps = 3000;
        cfg.record_every = 100;
        const auto [pf, qt] = evolve(make_gaussian({4.0, 0.0, width, m}, grid), v, m, cfg);
        ClassicalState cs;
        cs.masses = {m};
        cs.positions = {{4.0, 0, 0}};
        cs.momenta = {{}};
        const auto ct = integrate(cs, ForceField::potential_1d(v), cfg.dt, cfg.n_steps,
                                  cfg.record_every);
        return compare_to_newton(qt, ct, v, m).max_deviation_x;
    };
    const double broad = deviation(1.6, 1024);
    const double narrow = deviation(0.8, 2048);
    REQUIRE(broad / narrow == Catch::Approx(4.0).margin(1.5));
}
