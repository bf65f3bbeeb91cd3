#include <doctest.h>

#include <cmath>
#include <random>

#include "lipnav/heading.hpp"
#include "lipnav/lip_model.hpp"
#include "lipnav/rng.hpp"

using namespace lipnav;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kOmegaMax = 0.156 * kPi;  // 0.49008845396000775
}  // namespace

TEST_CASE("target heading is the goal bearing") {
    CHECK(heading::target_heading({0, 0}, {10, 10}) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(heading::target_heading({0, 0}, {-1, 0}) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(heading::target_heading({3, 4}, {3, 9}) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK_THROWS_AS(heading::target_heading({1, 1}, {1, 1}), heading::AtGoal);
    CHECK_THROWS_AS(heading::target_heading({1, 1}, {1 + 1e-12, 1}), heading::AtGoal);
}

TEST_CASE("turn toward pi/4 saturates the rate") {
    const auto s = heading::precompute_turning_rates(0.0, kPi / 4, 3, 0.4, kOmegaMax);
    REQUIRE(s.rates.size() == 3);
    REQUIRE(s.headings.size() == 3);
    // Raw rate (pi/4) / 1.2 = 0.654498... clamps to 0.156 pi.
    for (const double r : s.rates) {
        CHECK(r == doctest::Approx(0.490088453960007745).epsilon(1e-15));
    }
    CHECK(s.headings[2] == doctest::Approx(0.588106144752009294).epsilon(1e-14));
    CHECK(s.heading_at(0) == 0.0);
    CHECK(s.heading_at(3) == s.headings[2]);
}

TEST_CASE("aligned heading produces zero rates") {
    const auto s = heading::precompute_turning_rates(0.7, 0.7, 3, 0.4, kOmegaMax);
    for (const double r : s.rates) {
        CHECK(r == 0.0);
    }
    for (const double h : s.headings) {
        CHECK(h == doctest::Approx(0.7).epsilon(1e-15));
    }
}

TEST_CASE("turn from 3 to -3 goes the short way through pi") {
    // wrap(-3 - 3) = 2 pi - 6 = +0.283185..., so all rates are positive.
    const auto s = heading::precompute_turning_rates(3.0, -3.0, 3, 0.4, kOmegaMax);
    const double rate = (2.0 * kPi - 6.0) / 1.2;
    for (const double r : s.rates) {
        CHECK(r == doctest::Approx(rate).epsilon(1e-14));
        CHECK(r > 0.0);
    }
    // The schedule crosses pi and wraps into the negative range.
    CHECK(s.headings[2] == doctest::Approx(lip::wrap_angle(3.0 + 2.0 * kPi - 6.0)).epsilon(1e-13));
    CHECK(s.headings[2] < 0.0);
}

TEST_CASE("rates respect the clamp and the shortest-arc sign") {
    std::mt19937_64 gen(23);
    for (int i = 0; i < 500; ++i) {
        const double theta0 = rng::uniform(gen, -kPi, kPi);
        const double target = rng::uniform(gen, -kPi, kPi);
        const auto s = heading::precompute_turning_rates(theta0, target, 3, 0.4, kOmegaMax);
        const double delta = lip::wrap_angle(target - theta0);
        CHECK(std::abs(delta) <= kPi + 1e-12);
        for (std::size_t k = 0; k < s.rates.size(); ++k) {
            CHECK(std::abs(s.rates[k]) <= kOmegaMax + 1e-15);
            if (delta > 1e-12) {
                CHECK(s.rates[k] > 0.0);
            } else if (delta < -1e-12) {
                CHECK(s.rates[k] < 0.0);
            } else {
                CHECK(s.rates[k] == doctest::Approx(0.0).epsilon(1e-12));
            }
            // headings[k] integrates the rates.
            double acc = theta0;
            for (std::size_t j = 0; j <= k; ++j) {
                acc += 0.4 * s.rates[j];
            }
            CHECK(s.headings[k] == doctest::Approx(lip::wrap_angle(acc)).epsilon(1e-13));
        }
    }
}

TEST_CASE("receding-horizon replanning converges to the target") {
    // Repeatedly walking the first planned step shrinks |target - theta|
    // monotonically to zero even from the far side of the circle.
    // Each unclamped replan walks one step of the three-step schedule, so
    // the error contracts by 2/3 per replan; 60 replans reach ~4e-11.
    double theta = -3.0;
    const double target = 2.5;
    double err = std::abs(lip::wrap_angle(target - theta));
    for (int replan = 0; replan < 60; ++replan) {
        const auto s = heading::precompute_turning_rates(theta, target, 3, 0.4, kOmegaMax);
        theta = lip::wrap_angle(theta + 0.4 * s.rates[0]);
        const double e = std::abs(lip::wrap_angle(target - theta));
        CHECK(e <= err + 1e-12);
        err = e;
    }
    CHECK(err < 1e-9);
}
