#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "tullock/best_response.hpp"

using namespace tullock;

TEST_CASE("best_response closed form") {
    CHECK(best_response(1.0, 1.0, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(best_response(1.0, 1.0, 2.0) == 0.0);
    CHECK(best_response(4.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("zero opponent total returns the minimal positive sentinel") {
        CHECK(best_response(1.0, 1.0, 0.0) == 1e-12);
        CHECK(best_response(3.0, 0.5, 0.0) == doctest::Approx(6e-12).epsilon(1e-12));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(best_response(0.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(best_response(1.0, -1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(best_response(1.0, 1.0, -0.5), std::invalid_argument);
    }
}

TEST_CASE("best_response beats a payoff grid") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    const auto payoff = [](double v, double c, double s, double x) {
        return v * x / (x + s) - c * x;
    };
    for (int trial = 0; trial < 200; ++trial) {
        const double v = dist(rng);
        const double c = dist(rng);
        const double s = dist(rng);
        const double br = best_response(v, c, s);
        const double br_value = payoff(v, c, s, br);
        for (int g = 0; g <= 100; ++g) {
            const double x = (v / c) * static_cast<double>(g) / 100.0;
            CHECK(br_value >= payoff(v, c, s, x) - 1e-12);
        }
    }
}

TEST_CASE("br_fixed_point reaches the known fixed points") {
    SUBCASE("symmetric two players") {
        ContestInstance inst({{1.0, 1.0}, {1.0, 1.0}});
        std::vector<double> init = {1.0, 1.0};
        const auto bids = br_fixed_point(inst, init, 1e-10, 100000);
        CHECK(std::abs(bids[0] - 0.25) <= 1e-9);
        CHECK(std::abs(bids[1] - 0.25) <= 1e-9);
    }
    SUBCASE("heterogeneous three players") {
        ContestInstance inst({{1.0, 9.0}, {1.0, 10.0}, {1.0, 3.0}});
        std::vector<double> init = {0.1, 0.1, 0.1};
        const auto bids = br_fixed_point(inst, init, 1e-10, 100000);
        CHECK(std::abs(bids[0] - 2.0 / 121.0) <= 1e-8);
        CHECK(std::abs(bids[1] - 1.0 / 121.0) <= 1e-8);
        CHECK(std::abs(bids[2] - 8.0 / 121.0) <= 1e-8);
    }
    SUBCASE("abstention reproduced by clipping") {
        ContestInstance inst({{1.0, 10.0}, {1.0, 1.0}, {1.0, 1.0}});
        std::vector<double> init = {1.0, 1.0, 1.0};
        const auto bids = br_fixed_point(inst, init, 1e-10, 100000);
        CHECK(bids[0] <= 1e-12);
        CHECK(std::abs(bids[1] - 0.25) <= 1e-8);
        CHECK(std::abs(bids[2] - 0.25) <= 1e-8);
    }
    SUBCASE("sweep budget exhaustion is an error carrying the last iterate") {
        ContestInstance inst({{1.0, 9.0}, {1.0, 10.0}, {1.0, 3.0}});
        std::vector<double> init = {1.0, 1.0, 1.0};
        CHECK_THROWS_AS(br_fixed_point(inst, init, 1e-10, 1), ConvergenceError);
        try {
            br_fixed_point(inst, init, 1e-10, 1);
        } catch (const ConvergenceError& e) {
            CHECK(e.code() == "no-convergence");
            CHECK(e.last_bids().size() == 3);
        }
    }
    SUBCASE("input validation") {
        ContestInstance inst({{1.0, 1.0}, {1.0, 1.0}});
        std::vector<double> bad = {1.0, 0.0};
        CHECK_THROWS_AS(br_fixed_point(inst, bad, 1e-10, 10), ContestError);
        std::vector<double> ok = {1.0, 1.0};
        CHECK_THROWS_AS(br_fixed_point(inst, ok, 0.0, 10), std::invalid_argument);
    }
}

TEST_CASE("verify_nash classifies profiles") {
    SUBCASE("equilibria pass at 1e-8") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 25; ++trial) {
            const ContestInstance inst = testsupport::random_instance(rng);
            const Equilibrium eq = equilibrium(inst);
            const NashReport report = verify_nash(inst, eq.bids, 1e-8);
            CHECK(report.is_nash);
            CHECK(report.max_deviation_gain <= 1e-8);
            for (double gain : report.per_player_gain) {
                CHECK(gain >= -1e-8);
            }
        }
    }
    SUBCASE("a non-equilibrium profile is flagged with the gain") {
        ContestInstance inst({{1.0, 1.0}, {1.0, 1.0}});
        std::vector<double> bids = {0.5, 0.25};
        const NashReport report = verify_nash(inst, bids, 1e-8);
        CHECK_FALSE(report.is_nash);
        // Best response to 0.25 is 0.25; the gain is 1/4 - 1/6.
        CHECK(report.per_player_gain[0] ==
              doctest::Approx(1.0 / 12.0).epsilon(1e-10));
        CHECK(report.max_deviation_gain > 0.0);
    }
    SUBCASE("perturbing an active bid breaks the equilibrium") {
        ContestInstance inst({{1.0, 9.0}, {1.0, 10.0}, {1.0, 3.0}});
        Equilibrium eq = equilibrium(inst);
        eq.bids[2] += 0.1;
        const NashReport report = verify_nash(inst, eq.bids, 1e-8);
        CHECK_FALSE(report.is_nash);
    }
    SUBCASE("the all-zero profile is rejected") {
        ContestInstance inst({{1.0, 1.0}, {1.0, 1.0}});
        std::vector<double> zeros = {0.0, 0.0};
        CHECK_THROWS_AS(verify_nash(inst, zeros, 1e-8), ContestError);
    }
}
