#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "lipnav/mpc.hpp"
#include "lipnav/rng.hpp"

using namespace lipnav;
using constraints::Foot;

namespace {

double dist(geom::Point2 a, geom::Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

lip::LipState advance(const lip::LipState& x, const lip::LipControl& c) {
    return lip::step_to_step(x, c, 1.0, 0.4);
}

geom::ConvexPolygon box(double x0, double y0, double x1, double y1) {
    return geom::convex_hull({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

}  // namespace

TEST_CASE("build_cost matches the goal-distance objective") {
    const lip::LipState x0{0.2, 0.1, -0.3, 0.2, 0.7};
    const geom::Point2 goal{4.0, -1.0};

    SUBCASE("single-step hessian is the squared input map") {
        const auto schedule = heading::precompute_turning_rates(x0.theta, 0.7, 1, 0.4,
                                                                0.49008845396000775);
        const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 1);
        const auto [hessian, gradient] = mpc::build_cost(map, goal);
        const auto sm = lip::step_matrices(1.0, 0.4);
        // p(1) = b1 * f + const per axis, so H = 2 b1^2 I.
        CHECK((hessian - 2.0 * sm.b1 * sm.b1 * Eigen::MatrixXd::Identity(2, 2))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        const Eigen::Vector2d o = map.position_offset(1);
        const Eigen::Vector2d expected_g =
            2.0 * sm.b1 * Eigen::Vector2d(o(0) - goal.x, o(1) - goal.y);
        CHECK((gradient - expected_g).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("moving the goal only changes the gradient") {
        const auto schedule = heading::precompute_turning_rates(x0.theta, -1.0, 3, 0.4,
                                                                0.49008845396000775);
        const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 3);
        const auto [h1, g1] = mpc::build_cost(map, goal);
        const auto [h2, g2] = mpc::build_cost(map, {-2.0, 5.0});
        CHECK((h1 - h2).cwiseAbs().maxCoeff() == 0.0);
        CHECK((g1 - g2).cwiseAbs().maxCoeff() > 1.0);
    }
    SUBCASE("quadratic value plus dropped constant equals the rolled-out cost") {
        const auto schedule = heading::precompute_turning_rates(x0.theta, 2.0, 3, 0.4,
                                                                0.49008845396000775);
        const auto map = condensing::condense(x0, schedule, 1.0, 0.4, 3);
        const auto [hessian, gradient] = mpc::build_cost(map, goal);
        double constant = 0.0;
        for (int k = 1; k <= 3; ++k) {
            const Eigen::Vector2d o = map.position_offset(k);
            constant += (o(0) - goal.x) * (o(0) - goal.x) + (o(1) - goal.y) * (o(1) - goal.y);
        }
        std::mt19937_64 gen(307);
        for (int trial = 0; trial < 20; ++trial) {
            Eigen::VectorXd u(6);
            for (int i = 0; i < 6; ++i) {
                u(i) = rng::uniform(gen, -2.0, 2.0);
            }
            const double quad = 0.5 * u.dot(hessian * u) + gradient.dot(u) + constant;
            double direct = 0.0;
            for (const lip::LipState& s : map.evaluate(u)) {
                direct += (s.p_x - goal.x) * (s.p_x - goal.x) +
                          (s.p_y - goal.y) * (s.p_y - goal.y);
            }
            CHECK(quad == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("open-field plan satisfies every hard row and its own prediction") {
    mpc::Planner planner{mpc::MpcParams{}};
    const lip::LipState x0{0, 0, 0, 0, 0};
    const geom::Point2 goal{5.0, 0.0};
    const auto res = planner.plan(x0, Foot::Right, goal, {});

    REQUIRE(res.diagnostics.status == qp::Status::Optimal);
    REQUIRE(res.controls.size() == 3);
    REQUIRE(res.predicted_states.size() == 3);
    CHECK(res.diagnostics.half_spaces.empty());
    CHECK(res.diagnostics.active_obstacles.empty());
    CHECK(res.diagnostics.slacks.empty());
    CHECK(res.diagnostics.max_slack == 0.0);

    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(res.controls[k].omega == res.schedule.rates[k]);
    }
    for (const auto& m : res.diagnostics.margins) {
        CHECK(m.margin >= -1e-8);
    }

    // The prediction is the exact closed-form rollout of the commands.
    lip::LipState x = x0;
    for (std::size_t k = 0; k < 3; ++k) {
        x = advance(x, res.controls[k]);
        const lip::LipState& p = res.predicted_states[k];
        CHECK(std::abs(x.p_x - p.p_x) < 1e-8);
        CHECK(std::abs(x.v_x - p.v_x) < 1e-8);
        CHECK(std::abs(x.p_y - p.p_y) < 1e-8);
        CHECK(std::abs(x.v_y - p.v_y) < 1e-8);
        CHECK(std::abs(x.theta - p.theta) < 1e-8);
    }

    // Predicted velocities sit inside the body-frame bands.
    for (int k = 0; k < 3; ++k) {
        const double theta = res.schedule.heading_at(static_cast<std::size_t>(k));
        const lip::LipState& p = res.predicted_states[static_cast<std::size_t>(k)];
        const double lon = std::cos(theta) * p.v_x + std::sin(theta) * p.v_y;
        const double s_v = constraints::stance_at(Foot::Right, k) == Foot::Right ? 1.0 : -1.0;
        const double lat = s_v * (-std::sin(theta) * p.v_x + std::cos(theta) * p.v_y);
        CHECK(lon >= -0.1 - 1e-8);
        CHECK(lon <= 0.8 + 1e-8);
        CHECK(lat >= 0.1 - 1e-8);
        CHECK(lat <= 0.4 + 1e-8);
    }
}

TEST_CASE("closed-loop replanning walks to the goal in the open") {
    mpc::Planner planner{mpc::MpcParams{}};
    const geom::Point2 goal{5.0, 0.0};
    lip::LipState x{0, 0, 0, 0, 0};
    Foot stance = Foot::Right;
    std::vector<double> objectives;
    std::vector<double> dists{dist(x.position(), goal)};
    for (int step = 0; step < 30; ++step) {
        const auto res = planner.plan(x, stance, goal, {});
        objectives.push_back(res.diagnostics.objective);
        x = advance(x, res.controls[0]);
        stance = constraints::opposite(stance);
        dists.push_back(dist(x.position(), goal));
    }
    CHECK(dists.back() < 0.3);
    // Early on, both the receding-horizon objective and the distance to the
    // goal shrink every step; allow millimeter wobble from lateral sway.
    for (int r = 0; r + 1 < 10; ++r) {
        CHECK(objectives[static_cast<std::size_t>(r + 1)] <
              objectives[static_cast<std::size_t>(r)]);
    }
    for (std::size_t k = 3; k + 1 < dists.size(); ++k) {
        if (dists[k] < 0.3) {
            break;  // inside the goal tolerance the gait marches in place
        }
        CHECK(dists[k + 1] < dists[k] + 1e-3);
    }
}

TEST_CASE("standing on the goal keeps the robot parked there") {
    mpc::Planner planner{mpc::MpcParams{}};
    const geom::Point2 goal{1.0, 2.0};
    lip::LipState x{goal.x, 0, goal.y, 0, 0.6};
    Foot stance = Foot::Right;
    for (int step = 0; step < 10; ++step) {
        const auto res = planner.plan(x, stance, goal, {});
        REQUIRE(res.diagnostics.status == qp::Status::Optimal);
        // The heading target is undefined on the goal; the schedule holds.
        for (const double rate : res.schedule.rates) {
            CHECK(std::abs(rate) <= 0.49008845396000775 + 1e-12);
        }
        const geom::Point2 foot = res.controls[0].foot();
        CHECK(dist(foot, x.position()) <= 0.17320508075688773 * std::sqrt(2.0) + 1e-6);
        x = advance(x, res.controls[0]);
        stance = constraints::opposite(stance);
        CHECK(dist(x.position(), goal) < 0.3);
    }
}

TEST_CASE("an obstacle dead ahead bends the barrier rows into the plan") {
    mpc::Planner planner{mpc::MpcParams{}};
    const std::vector<geom::ConvexPolygon> world{box(1.0, -0.5, 2.0, 0.5)};
    const lip::LipState x0{0, 0.3, 0, 0.1, 0};
    const auto res = planner.plan(x0, Foot::Right, {4.0, 0.0}, world);

    REQUIRE(res.diagnostics.status == qp::Status::Optimal);
    REQUIRE(res.diagnostics.active_obstacles == std::vector<int>{0});
    REQUIRE(res.diagnostics.half_spaces.size() == 1);
    REQUIRE(res.diagnostics.slacks.size() == 3);

    // With a clean solve the barrier value obeys the geometric decay floor.
    REQUIRE(res.diagnostics.max_slack <= 1e-8);
    const auto& hs = res.diagnostics.half_spaces[0];
    const double h0 = ldcbf::h_value(hs, x0.position());
    REQUIRE(h0 > 0.0);
    for (int k = 1; k <= 3; ++k) {
        const double hk =
            ldcbf::h_value(hs, res.predicted_states[static_cast<std::size_t>(k - 1)].position());
        CHECK(hk >= std::pow(0.7, k) * h0 - 1e-6);
    }

    bool saw_dcbf = false;
    for (const auto& m : res.diagnostics.margins) {
        saw_dcbf = saw_dcbf || m.label.rfind("dcbf[0][", 0) == 0;
    }
    CHECK(saw_dcbf);
}

TEST_CASE("starting inside an obstacle is a safety fault") {
    mpc::Planner planner{mpc::MpcParams{}};
    const std::vector<geom::ConvexPolygon> world{box(-1.0, -1.0, 1.0, 1.0)};
    const lip::LipState x0{0, 0, 0, 0, 0};
    CHECK_THROWS_AS(planner.plan(x0, Foot::Right, {4.0, 0.0}, world), mpc::SafetyFault);
}

TEST_CASE("impossible hard rows are a solver fault") {
    mpc::Planner planner{mpc::MpcParams{}};
    // Lateral velocity far outside anything one step can recover.
    const lip::LipState x0{0, 0, 0, 5.0, 0};
    CHECK_THROWS_WITH_AS(planner.plan(x0, Foot::Right, {4.0, 0.0}, {}),
                         "hard constraint rows are infeasible", mpc::SolverFault);
}

TEST_CASE("warm-start memory never changes the answer") {
    mpc::Planner planner{mpc::MpcParams{}};
    const std::vector<geom::ConvexPolygon> world{box(2.0, -0.5, 3.0, 0.5)};
    const lip::LipState x0{0, 0.2, 0, 0.15, 0.1};
    const auto cold = planner.plan(x0, Foot::Right, {5.0, 1.0}, world);
    const auto warm = planner.plan(x0, Foot::Right, {5.0, 1.0}, world);  // reuses the active set
    REQUIRE(cold.diagnostics.status == qp::Status::Optimal);
    REQUIRE(warm.diagnostics.status == qp::Status::Optimal);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(cold.controls[k].f_x - warm.controls[k].f_x) <= 1e-9);
        CHECK(std::abs(cold.controls[k].f_y - warm.controls[k].f_y) <= 1e-9);
    }

    planner.reset();
    const auto fresh = planner.plan(x0, Foot::Right, {5.0, 1.0}, world);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(cold.controls[k].f_x - fresh.controls[k].f_x) <= 1e-9);
    }
}

TEST_CASE("footstep regularization pulls feet toward the CoM path") {
    const lip::LipState x0{0, 0.1, 0, 0.2, 0};
    const geom::Point2 goal{6.0, 0.0};
    mpc::MpcParams plain;
    mpc::MpcParams pulled;
    pulled.control_regularization = 1e3;
    const auto a = mpc::Planner{plain}.plan(x0, Foot::Right, goal, {});
    const auto b = mpc::Planner{pulled}.plan(x0, Foot::Right, goal, {});
    REQUIRE(a.diagnostics.status == qp::Status::Optimal);
    REQUIRE(b.diagnostics.status == qp::Status::Optimal);
    CHECK(dist(b.controls[0].foot(), x0.position()) <
          dist(a.controls[0].foot(), x0.position()));
}

TEST_CASE("planner parameters validate") {
    mpc::MpcParams p;
    p.n_steps = 0;
    CHECK_THROWS_AS(mpc::Planner{p}, std::invalid_argument);
    p = {};
    p.omega_max = 0.0;
    CHECK_THROWS_AS(mpc::Planner{p}, std::invalid_argument);
    p = {};
    p.slack_penalty = -1.0;
    CHECK_THROWS_AS(mpc::Planner{p}, std::invalid_argument);
    p = {};
    p.limits.v_y_min = -0.2;
    CHECK_THROWS_AS(mpc::Planner{p}, std::invalid_argument);
    p = {};
    p.barrier.gamma = 2.0;
    CHECK_THROWS_AS(mpc::Planner{p}, std::invalid_argument);
}
