#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "lipnav/condensing.hpp"
#include "lipnav/rng.hpp"

using namespace lipnav;

namespace {

lip::LipState random_state(std::mt19937_64& gen) {
    return {rng::uniform(gen, -5.0, 5.0), rng::uniform(gen, -1.0, 1.0),
            rng::uniform(gen, -5.0, 5.0), rng::uniform(gen, -1.0, 1.0),
            rng::uniform(gen, -3.0, 3.0)};
}

heading::HeadingSchedule random_schedule(std::mt19937_64& gen, double theta0, int n) {
    const double target = rng::uniform(gen, -3.0, 3.0);
    return heading::precompute_turning_rates(theta0, target, n, 0.4, 0.49008845396000775);
}

}  // namespace

TEST_CASE("single-step map is exactly (A_d, B_d)") {
    const lip::LipState x0{0.5, 0.2, -1.0, -0.1, 0.3};
    const auto schedule = heading::precompute_turning_rates(0.3, 0.9, 1, 0.4, 0.49008845396000775);
    const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 1);
    const auto m = lip::step_matrices(1.0, 0.4);

    REQUIRE(map.n_steps == 1);
    const Eigen::MatrixXd pc = map.position_coeffs(1);
    const Eigen::MatrixXd vc = map.velocity_coeffs(1);
    CHECK(pc(0, 0) == doctest::Approx(m.b1).epsilon(1e-15));
    CHECK(pc(1, 1) == doctest::Approx(m.b1).epsilon(1e-15));
    CHECK(pc(0, 1) == 0.0);
    CHECK(pc(1, 0) == 0.0);
    CHECK(vc(0, 0) == doctest::Approx(m.b2).epsilon(1e-15));
    CHECK(vc(1, 1) == doctest::Approx(m.b2).epsilon(1e-15));

    const Eigen::Vector2d po = map.position_offset(1);
    const Eigen::Vector2d vo = map.velocity_offset(1);
    CHECK(po(0) == doctest::Approx(m.a11 * x0.p_x + m.a12 * x0.v_x).epsilon(1e-15));
    CHECK(po(1) == doctest::Approx(m.a11 * x0.p_y + m.a12 * x0.v_y).epsilon(1e-15));
    CHECK(vo(0) == doctest::Approx(m.a21 * x0.p_x + m.a22 * x0.v_x).epsilon(1e-15));
    CHECK(vo(1) == doctest::Approx(m.a21 * x0.p_y + m.a22 * x0.v_y).epsilon(1e-15));
}

TEST_CASE("later footsteps cannot influence earlier states") {
    std::mt19937_64 gen(31);
    const lip::LipState x0 = random_state(gen);
    const auto schedule = random_schedule(gen, x0.theta, 3);
    const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 3);
    for (int k = 1; k <= 3; ++k) {
        const Eigen::MatrixXd c = map.coeffs[static_cast<std::size_t>(k - 1)];
        for (int j = k; j < 3; ++j) {
            CHECK(c.col(2 * j).cwiseAbs().maxCoeff() == 0.0);
            CHECK(c.col(2 * j + 1).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    // p(0) is a pure constant equal to the start position.
    CHECK(map.position_coeffs(0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(map.position_offset(0)(0) == x0.p_x);
    CHECK(map.position_offset(0)(1) == x0.p_y);
}

TEST_CASE("map evaluation equals chained step-to-step rollouts") {
    std::mt19937_64 gen(37);
    for (int trial = 0; trial < 100; ++trial) {
        const lip::LipState x0 = random_state(gen);
        const auto schedule = random_schedule(gen, x0.theta, 3);
        const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 3);

        Eigen::VectorXd u(6);
        for (int i = 0; i < 6; ++i) {
            u(i) = rng::uniform(gen, -5.0, 5.0);
        }

        lip::LipState x = x0;
        for (int k = 0; k < 3; ++k) {
            const lip::LipControl c{u(2 * k), u(2 * k + 1), schedule.rates[static_cast<std::size_t>(k)]};
            x = lip::step_to_step(x, c, 1.0, 0.4);
            const Eigen::Vector2d p = map.position_coeffs(k + 1) * u + map.position_offset(k + 1);
            const Eigen::Vector2d v = map.velocity_coeffs(k + 1) * u + map.velocity_offset(k + 1);
            CHECK(std::abs(p(0) - x.p_x) < 1e-10);
            CHECK(std::abs(p(1) - x.p_y) < 1e-10);
            CHECK(std::abs(v(0) - x.v_x) < 1e-10);
            CHECK(std::abs(v(1) - x.v_y) < 1e-10);
            CHECK(map.thetas[static_cast<std::size_t>(k)] ==
                  doctest::Approx(x.theta).epsilon(1e-13));
        }

        // evaluate() agrees with the per-channel maps.
        const auto states = map.evaluate(u);
        REQUIRE(states.size() == 3);
        CHECK(std::abs(states[2].p_x - x.p_x) < 1e-10);
        CHECK(std::abs(states[2].v_y - x.v_y) < 1e-10);
    }
}

TEST_CASE("stacked position map is invertible") {
    // Block lower-triangular with diagonal blocks (1 - cosh(beta T)) I, so
    // the condensed goal cost is strictly convex.
    std::mt19937_64 gen(41);
    const lip::LipState x0 = random_state(gen);
    const auto schedule = random_schedule(gen, x0.theta, 3);
    const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 3);
    const auto m = lip::step_matrices(1.0, 0.4);

    Eigen::MatrixXd stacked(6, 6);
    for (int k = 1; k <= 3; ++k) {
        stacked.middleRows(2 * (k - 1), 2) = map.position_coeffs(k);
    }
    for (int k = 0; k < 3; ++k) {
        CHECK(stacked(2 * k, 2 * k) == doctest::Approx(m.b1).epsilon(1e-15));
        CHECK(stacked(2 * k + 1, 2 * k + 1) == doctest::Approx(m.b1).epsilon(1e-15));
        for (int j = k + 1; j < 3; ++j) {
            CHECK(stacked.block(2 * k, 2 * j, 2, 2).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked);
    CHECK(lu.isInvertible());
}
