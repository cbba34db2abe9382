#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qclab/boundary.hpp"

using namespace qclab;

TEST_CASE("boundary temperature tracks the cited systems") {
    // micromechanical drum: ~0.1 K quoted, estimate within a factor 2.1
    const auto drum = boundary_temperature(1e9, 0.1);
    REQUIRE(drum.t0_k == Catch::Approx(4.8e-2).epsilon(2e-4));
    REQUIRE(drum.ratio_to_reference > 1.0 / 2.1);
    // nanomechanical resonator: within 4% of 1 mK
    const auto nano = boundary_temperature(2e7, 1e-3);
    REQUIRE(std::abs(nano.ratio_to_reference - 1.0) < 0.04);
    // fullerene beam: ~3000 K quoted, factor ~1.6
    const auto c70 = boundary_temperature(1e14, 3000.0);
    REQUIRE(c70.t0_k == Catch::Approx(4.8e3).epsilon(2e-4));
    REQUIRE(c70.ratio_to_reference > 1.0 / 2.1);
    REQUIRE(c70.ratio_to_reference < 2.1);
}

TEST_CASE("estimate is linear in the frequency") {
    const double base = boundary_temperature(1.0).t0_k;
    for (double c : {3.0, 1e6, 2.5e13})
        REQUIRE(std::abs(boundary_temperature(c).t0_k - c * base) <= 1e-12 * c * base);
}

TEST_CASE("one kelvin corresponds to about 2.08e10 Hz") {
    const double nu = 1.0 / si::planck_over_boltzmann;
    REQUIRE(nu == Catch::Approx(2.08e10).epsilon(2e-3));
    REQUIRE(boundary_temperature(nu).t0_k == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("table report flags the pendulum row as the one anomaly") {
    const auto rows = table_report(builtin_card_deck());
    REQUIRE(rows.size() == 4);
    std::size_t within = 0, anomalies = 0;
    for (const auto& r : rows) {
        const double ratio = r.estimate.ratio_to_reference;
        const double factor = ratio >= 1.0 ? ratio : 1.0 / ratio;
        if (factor <= 2.1) ++within;
        if (r.anomalous) {
            ++anomalies;
            REQUIRE(r.card.name == "macro-pendulum-ligo");
            // both numbers carried: the linear estimate and the quoted value
            REQUIRE(r.estimate.t0_k == Catch::Approx(4.8e-9).epsilon(2e-4));
            REQUIRE(r.card.reference_temperature_k == Catch::Approx(1.4e-6));
        }
    }
    REQUIRE(within == 3);
    REQUIRE(anomalies == 1);
}

TEST_CASE("empty card list gives an empty table") {
    REQUIRE(table_report({}).empty());
}

TEST_CASE("validation") {
    REQUIRE_THROWS_AS(boundary_temperature(0.0), config_error);
    REQUIRE_THROWS_AS(boundary_temperature(-5.0), config_error);
    SystemCard c{"x", 1.0, "", 0.5, 0.0};
    REQUIRE_THROWS_AS(c.validate(), config_error);
}
