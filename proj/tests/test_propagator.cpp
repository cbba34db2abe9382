#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qclab/constants.hpp"
#include "qclab/grid.hpp"
#include "qclab/moments.hpp"
#include "qclab/propagator.hpp"

using namespace qclab;

namespace {

double max_rel_spread_err(const QuantumTrajectory& traj, double mass, double width) {
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double ana = 0.5 * asymptotic_spread(mass, width, traj.times[i]).width;
        worst = std::max(worst, std::abs(traj.stats[i].sigma_x - ana) / ana);
    }
    return worst;
}

} // namespace

TEST_CASE("free gaussian matches the analytic spread over three doubling times") {
    const auto grid = Grid1D::make(-32.0, 32.0, 4096);
    const auto psi = make_gaussian({0.0, 0.0, 1.0, 1.0}, grid);
    EvolutionConfig cfg;
    const double t_final = 3.0 * doubling_time(1.0, 1.0);
    cfg.n_steps = 600;
    cfg.dt = t_final / static_cast<double>(cfg.n_steps);
    cfg.record_every = 30;
    const auto [psi_f, traj] = evolve(psi, PotentialSpec::free(), 1.0, cfg);
    REQUIRE(max_rel_spread_err(traj, 1.0, 1.0) < 1e-4);
    REQUIRE(traj.max_leakage < 1e-6);
}

TEST_CASE("coherent packet oscillates classically in a harmonic trap") {
    const auto grid = Grid1D::make(-20.0, 20.0, 512);
    const double x0 = 2.0;
    const auto psi = make_gaussian({x0, 0.0, std::sqrt(2.0), 1.0}, grid);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = static_cast<std::size_t>(5.0 * 2.0 * std::numbers::pi / cfg.dt) / 100 * 100;
    cfg.record_every = 100;
    const auto [psi_f, traj] = evolve(psi, PotentialSpec::harmonic(1.0, 1.0), 1.0, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        worst = std::max(worst,
                         std::abs(traj.stats[i].mean_x - x0 * std::cos(traj.times[i])));
    REQUIRE(worst < 1e-5);
}

TEST_CASE("linear potential decelerates the mean momentum exactly") {
    const auto grid = Grid1D::make(-30.0, 30.0, 512);
    const double f0 = 0.7, p0 = 2.0;
    const auto psi = make_gaussian({-5.0, p0, 1.0, 4.0}, grid);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 5000;
    cfg.record_every = 500;
    const auto [psi_f, traj] = evolve(psi, PotentialSpec::linear(f0), 4.0, cfg);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        REQUIRE(std::abs(traj.stats[i].mean_p - (p0 - f0 * traj.times[i])) < 1e-6);
}

TEST_CASE("split step conserves the norm and the energy") {
    const auto grid = Grid1D::make(-16.0, 16.0, 256);
    const auto psi = make_gaussian({1.0, 0.0, std::sqrt(2.0), 1.0}, grid);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 10000;
    cfg.record_every = 1000;
    const auto [psi_f, traj] = evolve(psi, PotentialSpec::harmonic(1.0, 1.0), 1.0, cfg);
    REQUIRE(std::abs(traj.stats.back().norm - 1.0) < 1e-12 * static_cast<double>(cfg.n_steps));
    const double e0 = traj.stats.front().energy;
    for (const auto& st : traj.stats)
        REQUIRE(std::abs(st.energy - e0) < 1e-6 * std::abs(e0));
}

TEST_CASE("strang splitting converges at second order") {
    // The harmonic coherent state is the oracle; the free packet cannot be
    // used here because the splitting is exact for it.
    const auto grid = Grid1D::make(-16.0, 16.0, 256);
    const double x0 = 1.5;
    const auto psi = make_gaussian({x0, 0.0, std::sqrt(2.0), 1.0}, grid);
    auto worst_err = [&](double dt) {
        EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.n_steps = static_cast<std::size_t>(std::llround(2.0 / dt));
        cfg.record_every = cfg.n_steps;
        const auto [psi_f, traj] = evolve(psi, PotentialSpec::harmonic(1.0, 1.0), 1.0, cfg);
        return std::abs(traj.stats.back().mean_x - x0 * std::cos(traj.times.back()));
    };
    const double e1 = worst_err(4e-3), e2 = worst_err(2e-3);
    REQUIRE(e1 / e2 == Catch::Approx(4.0).margin(1.2));
}

TEST_CASE("free evolution commutes with spatial translation") {
    const auto grid = Grid1D::make(-32.0, 32.0, 1024);
    const double shift = 64.0 * grid.dx(); // exact grid translation
    EvolutionConfig cfg;
    cfg.dt = 2e-3;
    cfg.n_steps = 1000;
    cfg.record_every = 250;
    const auto [f1, t1] = evolve(make_gaussian({0.0, 1.0, 1.0, 2.0}, grid),
                                 PotentialSpec::free(), 2.0, cfg);
    const auto [f2, t2] = evolve(make_gaussian({shift, 1.0, 1.0, 2.0}, grid),
                                 PotentialSpec::free(), 2.0, cfg);
    for (std::size_t i = 0; i < t1.times.size(); ++i) {
        REQUIRE(std::abs(t2.stats[i].mean_x - t1.stats[i].mean_x - shift) < 1e-9);
        REQUIRE(std::abs(t2.stats[i].mean_p - t1.stats[i].mean_p) < 1e-9);
        REQUIRE(std::abs(t2.stats[i].sigma_x - t1.stats[i].sigma_x) < 1e-9);
        REQUIRE(std::abs(t2.stats[i].sigma_p - t1.stats[i].sigma_p) < 1e-9);
    }
}

TEST_CASE("crank-nicolson conserves the norm and tracks the split-step result") {
    const auto grid = Grid1D::make(-16.0, 16.0, 1024);
    const auto psi = make_gaussian({1.0, 0.0, std::sqrt(2.0), 1.0}, grid);
    EvolutionConfig cfg;
    cfg.dt = 4e-4; // inside the 0.5 m dx^2/hbar margin for this grid
    cfg.n_steps = 15700; // one period
    cfg.record_every = 15700;
    cfg.method = Method::crank_nicolson;
    const auto [cn_f, cn] = evolve(psi, PotentialSpec::harmonic(1.0, 1.0), 1.0, cfg);
    REQUIRE(std::abs(cn.stats.back().norm - 1.0) < 1e-10);

    cfg.method = Method::split_step;
    const auto [ss_f, ss] = evolve(psi, PotentialSpec::harmonic(1.0, 1.0), 1.0, cfg);
    REQUIRE(std::abs(cn.stats.back().mean_x - ss.stats.back().mean_x) < 5e-3);

    SECTION("accuracy margin on dt is enforced") {
        EvolutionConfig bad = cfg;
        bad.method = Method::crank_nicolson;
        bad.dt = 1.0;
        REQUIRE_THROWS_AS(evolve(psi, PotentialSpec::free(), 1.0, bad), config_error);
    }
}

TEST_CASE("boundary leakage raises an error") {
    const auto grid = Grid1D::make(-10.0, 10.0, 256);
    const auto psi = make_gaussian({-3.0, 6.0, 1.0, 1.0}, grid);
    EvolutionConfig cfg;
    cfg.dt = 5e-3;
    cfg.n_steps = 800; // packet reaches the edge well before this
    cfg.record_every = 10;
    REQUIRE_THROWS_AS(evolve(psi, PotentialSpec::free(), 1.0, cfg), numerical_error);
}

TEST_CASE("evolution configuration preconditions") {
    const auto grid = Grid1D::make(-10.0, 10.0, 128);
    const auto psi = make_gaussian({0.0, 0.0, 0.8, 1.0}, grid);
    EvolutionConfig cfg;
    cfg.dt = -1.0;
    cfg.n_steps = 10;
    REQUIRE_THROWS_AS(evolve(psi, PotentialSpec::free(), 1.0, cfg), config_error);
    cfg.dt = 1e-3;
    cfg.record_every = 3; // does not divide 10
    REQUIRE_THROWS_AS(evolve(psi, PotentialSpec::free(), 1.0, cfg), config_error);
    cfg.record_every = 1;
    auto unnormalized = psi;
    for (auto& a : unnormalized.amplitudes) a *= 2.0;
    REQUIRE_THROWS_AS(evolve(unnormalized, PotentialSpec::free(), 1.0, cfg), config_error);
}

TEST_CASE("doubling time formula and cited magnitudes") {
    REQUIRE(doubling_time(1.0, 1.0) ==
            Catch::Approx(0.5 * std::sqrt(3.0)).epsilon(1e-14));

    struct Case {
        double mass, width, reference;
    };
    // electron, hydrogen atom, one-gram body; cited one-figure values
    const Case cases[] = {{9.109e-31, 1e-6, 1e-8}, {1.6735e-27, 1e-6, 1e-5}, {1e-3, 1e-6, 1e19}};
    for (const auto& c : cases) {
        const double t = doubling_time(c.mass, c.width, si::hbar);
        const double factor = t > c.reference ? t / c.reference : c.reference / t;
        REQUIRE(factor < 2.0);
    }
    REQUIRE_THROWS_AS(doubling_time(-1.0, 1.0), config_error);
}

TEST_CASE("doubling time scales linearly in mass, quadratically in width") {
    const double base = doubling_time(1e-30, 1e-6, si::hbar);
    for (int decade = 1; decade <= 6; ++decade) {
        const double f = std::pow(10.0, decade);
        REQUIRE(doubling_time(1e-30 * f, 1e-6, si::hbar) ==
                Catch::Approx(base * f).epsilon(1e-12));
        REQUIRE(doubling_time(1e-30, 1e-6 * f, si::hbar) ==
                Catch::Approx(base * f * f).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic spread") {
    REQUIRE(asymptotic_spread(1.0, 2.0, 0.0).width == Catch::Approx(2.0));
    // electron packet of 1 um after one second: a couple hundred meters
    const auto r = asymptotic_spread(9.109e-31, 1e-6, 1.0, si::hbar);
    REQUIRE(r.asymptotic_branch);
    REQUIRE(std::abs(r.width / 100.0) < 3.0);
    REQUIRE(std::abs(r.width / 100.0) > 1.0);
    REQUIRE(r.width == Catch::Approx(231.54).epsilon(1e-3));
    // infinite-mass freeze-out
    REQUIRE(asymptotic_spread(1e12, 1.0, 1e3).width - 1.0 < 1e-12);
    REQUIRE_FALSE(asymptotic_spread(1.0, 1.0, 1e-3).asymptotic_branch);
}
