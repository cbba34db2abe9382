#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qclab/classical.hpp"

using namespace qclab;

namespace {

ClassicalState single_body(Vec3 r, Vec3 p, double m) {
    ClassicalState s;
    s.positions = {r};
    s.momenta = {p};
    s.masses = {m};
    return s;
}

} // namespace

TEST_CASE("uniform gravity drop is exact for the verlet update") {
    const double g = 9.8, z0 = 100.0;
    const auto traj = integrate(single_body({0, 0, z0}, {}, 2.0),
                                ForceField::uniform_gravity(g), 1e-2, 300, 30);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double expected = z0 - 0.5 * g * t * t;
        REQUIRE(std::abs(traj.states[i].positions[0].z - expected) <=
                1e-10 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("harmonic oscillator against the closed form") {
    // Leapfrog carries a frequency error omega^3 dt^2/24, so over 10 periods
    // at dt = 1e-3 the phase drift bounds the deviation near 2.6e-6.
    auto worst = [](double dt) {
        const double t_final = 10.0 * 2.0 * std::numbers::pi;
        const auto n = static_cast<std::size_t>(t_final / dt);
        const auto traj = integrate(single_body({1.0, 0, 0}, {}, 1.0),
                                    ForceField::harmonic(1.0), dt, n, 100);
        double w = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            w = std::max(w, std::abs(traj.states[i].positions[0].x - std::cos(traj.times[i])));
        return w;
    };
    REQUIRE(worst(1e-3) < 3e-6);
    REQUIRE(worst(5e-4) < 7.5e-7); // second-order shrink
}

TEST_CASE("circular orbit around a point mass holds radius and angular momentum") {
    // GM0 = 1, r = 1 circular speed 1, period 2 pi.
    const auto field = ForceField::point_mass(1.0, Vec3{});
    const double period = 2.0 * std::numbers::pi;
    const double dt = period / 20000.0;
    const auto n = static_cast<std::size_t>(20.0 * period / dt);
    const auto traj = integrate(single_body({1.0, 0, 0}, {0, 1.0, 0}, 1.0), field, dt, n, 2000);
    const double l0 = traj.angular_momenta.front().norm();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        REQUIRE(std::abs(traj.states[i].positions[0].norm() - 1.0) < 1e-8);
        REQUIRE(std::abs(traj.angular_momenta[i].norm() - l0) < 1e-8 * l0);
    }
}

TEST_CASE("verlet energy error is bounded and oscillatory") {
    auto max_drift = [](double dt, std::size_t n) {
        const auto traj = integrate(single_body({1.0, 0, 0}, {}, 1.0),
                                    ForceField::harmonic(1.0), dt, n,
                                    std::max<std::size_t>(1, n / 5000));
        const double e0 = traj.energies.front();
        double w = 0.0;
        for (double e : traj.energies) w = std::max(w, std::abs(e - e0) / std::abs(e0));
        return w;
    };
    const double c1 = max_drift(2e-3, 100000) / (2e-3 * 2e-3);
    const double c2 = max_drift(1e-3, 200000) / (1e-3 * 1e-3);
    REQUIRE(c1 / c2 == Catch::Approx(1.0).margin(0.5)); // stable constant under halving
    // no secular drift: a 1e6-step run stays within the same bound
    REQUIRE(max_drift(1e-3, 1000000) < 2.0 * c2 * 1e-6);
}

TEST_CASE("boris rotation: unit cyclotron parameters") {
    const auto chk = lorentz_step_check(1.0, {0, 0, 1.0}, {1.0, 0, 0}, 1.0, 1.0);
    REQUIRE(std::abs(chk.cyclotron_freq - 1.0) < 1e-6);
    REQUIRE(std::abs(chk.radius - 1.0) < 1e-6);
    REQUIRE(chk.max_speed_drift < 1e-12);
}

TEST_CASE("doubling the field halves the gyration radius") {
    const auto a = lorentz_step_check(1.0, {0, 0, 1.0}, {1.0, 0, 0}, 1.0, 1.0);
    const auto b = lorentz_step_check(1.0, {0, 0, 2.0}, {1.0, 0, 0}, 1.0, 1.0);
    REQUIRE(b.radius / a.radius == Catch::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("velocity along the field gives straight-line motion") {
    ClassicalState s = single_body({0, 0, 0}, {0, 0, 3.0}, 1.5);
    const auto traj = integrate(s, ForceField::uniform_magnetic(1.0, {0, 0, 1.0}), 1e-3, 1000, 100);
    for (const auto& st : traj.states) {
        REQUIRE(std::abs(st.positions[0].x) < 1e-12);
        REQUIRE(std::abs(st.positions[0].y) < 1e-12);
        REQUIRE(std::abs(st.momenta[0].z - 3.0) < 1e-12);
    }
}

TEST_CASE("gaussian-units speed of light enters the gyration frequency") {
    const double c = 137.0;
    const auto chk = lorentz_step_check(2.0, {0, 0, 3.0}, {1.0, 0, 0}, 4.0, c);
    REQUIRE(std::abs(chk.cyclotron_freq / (2.0 * 3.0 / (4.0 * c)) - 1.0) < 1e-6);
}

TEST_CASE("magnetic moment force") {
    SECTION("uniform field gives zero force") {
        BFieldMap map;
        map.field = [](const Vec3&) { return Vec3{0.2, -0.4, 0.9}; };
        REQUIRE(magnetic_moment_force({1.0, 2.0, 3.0}, map, {0.5, 0.5, 0.5}).norm() < 1e-9);
    }
    SECTION("linear field gives the constant gradient force") {
        const double b = 0.9, mu_z = 0.6;
        BFieldMap map;
        map.field = [b](const Vec3& r) { return Vec3{0.0, 0.0, b * r.z}; };
        map.jacobian = [b](const Vec3&, Vec3 out[3]) {
            out[0] = {};
            out[1] = {};
            out[2] = {0.0, 0.0, b};
        };
        const auto f = magnetic_moment_force({0.0, 0.0, mu_z}, map, {0.1, 0.2, 0.3});
        REQUIRE(std::abs(f.z - (-mu_z * b)) < 1e-12);
        REQUIRE(std::abs(f.x) < 1e-12);
        // central-difference fallback agrees
        const auto f_fd = magnetic_moment_force({0.0, 0.0, mu_z},
                                                BFieldMap{map.field, nullptr}, {0.1, 0.2, 0.3});
        REQUIRE((f_fd - f).norm() < 1e-9);
    }
    SECTION("moment perpendicular to the field feels nothing") {
        BFieldMap map;
        map.field = [](const Vec3& r) { return Vec3{0.0, 0.0, 1.0 + 0.5 * r.z}; };
        REQUIRE(magnetic_moment_force({0.7, 0.0, 0.0}, map, {0.0, 0.0, 1.0}).norm() < 1e-9);
    }
    SECTION("missing field map is a configuration error") {
        REQUIRE_THROWS_AS(magnetic_moment_force({1, 0, 0}, BFieldMap{}, {}), config_error);
    }
}

TEST_CASE("singularity approach rejects the step") {
    const auto field = ForceField::point_mass(1.0, Vec3{}, 0.1);
    // starting inside ten softening lengths
    REQUIRE_THROWS_AS(integrate(single_body({0.5, 0, 0}, {}, 1.0), field, 1e-3, 10),
                      numerical_error);
    // plunge orbit reaching 1e-9 of the initial separation
    const auto bare = ForceField::point_mass(1.0, Vec3{});
    REQUIRE_THROWS_AS(integrate(single_body({1.0, 0, 0}, {}, 1.0), bare, 1e-2, 100000),
                      numerical_error);
}

TEST_CASE("canonical two-body gravitational pair") {
    ManyBodySystem sys;
    sys.masses = {1.0, 1.0};
    sys.pair.kind = PairPotential::Kind::gravity;
    sys.pair.g_const = 1.0;
    ClassicalState s;
    s.masses = sys.masses;
    s.positions = {{1.0, 0, 0}, {-1.0, 0, 0}};
    s.momenta = {{0, 0.5, 0}, {0, -0.5, 0}};
    const double period = 4.0 * std::numbers::pi;
    const double dt = period / 20000.0;
    const auto n = static_cast<std::size_t>(10.0 * period / dt);
    const auto traj = canonical_many_body(sys, s, dt, n, 2000);
    const double e0 = traj.energies.front();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        REQUIRE((traj.total_momenta[i] - traj.total_momenta.front()).norm() < 1e-12);
        REQUIRE(std::abs(traj.energies[i] - e0) < 1e-8 * std::abs(e0));
    }
}

TEST_CASE("single free body moves on a straight line") {
    ManyBodySystem sys;
    sys.masses = {2.0};
    sys.pair.kind = PairPotential::Kind::spring;
    sys.pair.stiffness = 1.0;
    ClassicalState s = single_body({0.0, 0, 0}, {1.0, 0.5, 0}, 2.0);
    const auto traj = canonical_many_body(sys, s, 1e-2, 1000, 100);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        REQUIRE(std::abs(traj.states[i].positions[0].x - 0.5 * t) < 1e-12 * (1.0 + t));
        REQUIRE((traj.states[i].momenta[0] - Vec3{1.0, 0.5, 0}).norm() == 0.0);
    }
}

TEST_CASE("three spring-bound bodies: the center of mass moves uniformly") {
    ManyBodySystem sys;
    sys.masses = {1.0, 2.0, 3.0};
    sys.pair.kind = PairPotential::Kind::spring;
    sys.pair.stiffness = 0.7;
    ClassicalState s;
    s.masses = sys.masses;
    s.positions = {{1.0, 0, 0}, {-0.5, 0.8, 0}, {0, -0.6, 0.4}};
    s.momenta = {{0.3, 0.1, 0}, {-0.2, 0.2, 0.1}, {0.1, -0.3, 0}};
    const auto traj = canonical_many_body(sys, s, 1e-3, 20000, 1000);
    const Vec3 cm0 = traj.states.front().center_of_mass();
    const Vec3 v_cm = traj.total_momenta.front() / 6.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Vec3 expect = cm0 + v_cm * traj.times[i];
        REQUIRE((traj.states[i].center_of_mass() - expect).norm() < 1e-10);
        REQUIRE((traj.total_momenta[i] - traj.total_momenta.front()).norm() < 1e-13);
    }
}

TEST_CASE("symplectic time reversal returns to the start") {
    auto reverse = [](ClassicalTrajectory traj, const ForceField& field, double dt,
                      std::size_t n) {
        ClassicalState end = traj.states.back();
        for (auto& p : end.momenta) p = -p;
        auto back = integrate(end, field, dt, n, n);
        ClassicalState s = back.states.back();
        for (auto& p : s.momenta) p = -p;
        return s;
    };
    const auto field = ForceField::harmonic(1.0);
    const auto s0 = single_body({1.0, 0.3, 0}, {0.2, -0.1, 0}, 1.0);
    const auto fwd = integrate(s0, field, 1e-3, 5000, 5000);
    const auto returned = reverse(fwd, field, 1e-3, 5000);
    REQUIRE((returned.positions[0] - s0.positions[0]).norm() < 1e-9);
    REQUIRE((returned.momenta[0] - s0.momenta[0]).norm() < 1e-9);
}

TEST_CASE("state validation") {
    ClassicalState s;
    s.positions = {{0, 0, 0}};
    s.momenta = {};
    s.masses = {1.0};
    REQUIRE_THROWS_AS(s.validate(), config_error);
    s.momenta = {{0, 0, 0}};
    s.masses = {-1.0};
    REQUIRE_THROWS_AS(s.validate(), config_error);
    REQUIRE_THROWS_AS(ForceField::uniform_magnetic(1.0, Vec3{}), config_error);
    REQUIRE_THROWS_AS(lorentz_step_check(1.0, Vec3{}, {1, 0, 0}, 1.0), config_error);
}
