#include "cogsim/learning.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace cogsim;

TEST_CASE("the action table is complete and partitioned as documented") {
    const auto& table = action_table();
    REQUIRE(table.size() == 17);
    for (int id = 1; id <= 17; ++id) CHECK(action_spec(id).id == id);

    CHECK(action_spec(1).kind == ActionKind::no_action);
    for (int id = 2; id <= 5; ++id) CHECK(action_spec(id).kind == ActionKind::motor_step);
    std::set<int> zones;
    for (int id = 6; id <= 10; ++id) {
        CHECK(action_spec(id).kind == ActionKind::fovea_move);
        CHECK(action_spec(id).group == ActionGroup::virt);
        zones.insert(action_spec(id).fovea_zone);
    }
    CHECK(zones == std::set<int>{1, 2, 3, 4, 5});
    for (int id = 11; id <= 14; ++id) {
        CHECK(action_spec(id).kind == ActionKind::attend_winner);
        CHECK(action_spec(id).group == ActionGroup::attentional);
    }
    CHECK(action_spec(15).emphasize == MapKind::color);
    CHECK(action_spec(16).emphasize == MapKind::dist);
    CHECK(action_spec(17).emphasize == MapKind::reg);

    CHECK(enabled_action_ids(1).size() == 10);
    CHECK(enabled_action_ids(2).size() == 10);
    CHECK(enabled_action_ids(3).size() == 17);
    CHECK(enabled_action_ids(2) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
}

TEST_CASE("epsilon schedule is linear from the start value to zero") {
    CHECK(epsilon_schedule(0, 200) == doctest::Approx(0.95));
    CHECK(epsilon_schedule(199, 200) == doctest::Approx(0.0));
    // midpoint episode (max-1)/2
    CHECK(epsilon_schedule(99, 199) == doctest::Approx(0.475));
    CHECK(epsilon_schedule(0, 1) == 0.0);
    CHECK(epsilon_schedule(50, 101, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("decide is a pure argmax when greedy") {
    Schema schema;
    schema.state = 9;
    schema.q = {0.1, 0.9, 0.3, 0.2};
    Rng rng(1);
    CHECK(decide(schema, nullptr, 0.0, rng) == 1);

    SUBCASE("ties break toward the lowest index") {
        schema.q = {0.4, 0.4, 0.4};
        CHECK(decide(schema, nullptr, 0.0, rng) == 0);
    }
    SUBCASE("argmax is invariant under positive rescaling") {
        Rng r2(2);
        Schema scaled = schema;
        for (double& v : scaled.q) v *= 7.5;
        CHECK(decide(schema, nullptr, 0.0, r2) == decide(scaled, nullptr, 0.0, r2));
    }
}

TEST_CASE("epsilon = 1 draws uniformly over the enabled actions") {
    Schema schema;
    schema.state = 0;
    schema.q = std::vector<double>(10, 0.0);
    schema.q[3] = 100.0; // must not matter at epsilon = 1
    Rng rng(42);
    const int draws = 10000;
    std::array<int, 10> counts{};
    for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(decide(schema, nullptr, 1.0, rng))];

    // Chi-square against uniform; 3-sigma bound for df = 9.
    const double expected = draws / 10.0;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 9.0 + 3.0 * std::sqrt(18.0));
}

TEST_CASE("curiosity bonus breaks ties toward untried actions") {
    Schema schema;
    schema.state = 77;
    schema.q = std::vector<double>(5, 0.5);
    MotivationState motivation(0.2);
    Rng rng(3);

    motivation.mark(77, 0);
    motivation.mark(77, 1);
    CHECK(decide(schema, &motivation, 0.0, rng) == 2);

    SUBCASE("exhaustion: all actions tried before any repeats") {
        MotivationState fresh(0.2);
        Rng r2(4);
        std::set<int> seen;
        for (int k = 0; k < 5; ++k) {
            const int a = decide(schema, &fresh, 0.0, r2);
            CHECK_FALSE(seen.contains(a));
            seen.insert(a);
            fresh.mark(77, a);
        }
        CHECK(seen.size() == 5);
    }
    SUBCASE("bonus does not override a clear value gap") {
        Schema strong = schema;
        strong.q[1] = 2.0;
        MotivationState fresh(0.2);
        fresh.mark(77, 1);
        Rng r2(5);
        CHECK(decide(strong, &fresh, 0.0, r2) == 1);
    }
    SUBCASE("clearing resets the tried set") {
        motivation.clear();
        Rng r2(6);
        CHECK(decide(schema, &motivation, 0.0, r2) == 0);
    }
}

TEST_CASE("compose_reward sums enabled bonuses and the penalty dominates") {
    RewardConfig substage1;
    CHECK(compose_reward({true, true, false, false}, substage1) == doctest::Approx(2.0));
    CHECK(compose_reward({false, false, false, false}, substage1) == 0.0);
    CHECK(compose_reward({true, true, true, true}, substage1) == doctest::Approx(-10.0));

    RewardConfig substage3;
    substage3.w_topdown = 1.0;
    CHECK(compose_reward({false, false, true, false}, substage3) == doctest::Approx(1.0));
    CHECK(compose_reward({true, true, true, false}, substage3) == doctest::Approx(3.0));

    SUBCASE("topdown weight is zero in the early substages") {
        CHECK(compose_reward({false, false, true, false}, substage1) == 0.0);
    }
    SUBCASE("per-step rewards live in {-10} union [0, 3]") {
        Rng rng(8);
        for (int i = 0; i < 1000; ++i) {
            TransitionContext ctx{rng.next_below(2) == 1, rng.next_below(2) == 1,
                                  rng.next_below(2) == 1, rng.next_below(2) == 1};
            const double r = compose_reward(ctx, substage3);
            const bool valid = r == -10.0 || (r >= 0.0 && r <= 3.0);
            REQUIRE(valid);
        }
    }
}

TEST_CASE("attend_direction picks the axis that most reduces the offset") {
    CHECK_FALSE(attend_direction(std::nullopt, 0.1).has_value());

    SUBCASE("winner right of center needs a rightward (negative) yaw step") {
        const auto delta = attend_direction(WinnerLocus{7, 14, 1.0}, 0.1);
        REQUIRE(delta.has_value());
        CHECK(delta->axis == Axis::yaw);
        CHECK(delta->step == doctest::Approx(-0.1));
    }
    SUBCASE("winner above center needs an upward pitch step") {
        const auto delta = attend_direction(WinnerLocus{1, 8, 1.0}, 0.1);
        REQUIRE(delta.has_value());
        CHECK(delta->axis == Axis::pitch);
        CHECK(delta->step == doctest::Approx(0.1));
    }
    SUBCASE("dominant axis wins") {
        const auto delta = attend_direction(WinnerLocus{9, 0, 1.0}, 0.1);
        REQUIRE(delta.has_value());
        CHECK(delta->axis == Axis::yaw);
        CHECK(delta->step == doctest::Approx(0.1)); // leftward
    }
}

TEST_CASE("sync_test rules") {
    const ActionSpec& yaw_right = action_spec(5);
    const ActionSpec& yaw_left = action_spec(4);
    const ActionSpec& pitch_up = action_spec(2);
    const ActionSpec& no_action = action_spec(1);
    const ActionSpec& fovea_center = action_spec(6);
    const ActionSpec& attend = action_spec(13);
    const ActionSpec& emphasize = action_spec(15);

    SUBCASE("no winner, no synchrony") {
        CHECK_FALSE(sync_test(WinnerLocus{8, 8, 1.0}, yaw_right, std::nullopt, 1));
    }
    SUBCASE("motor action toward the winner half") {
        CHECK(sync_test(std::nullopt, yaw_right, WinnerLocus{5, 12, 1.0}, 1));
        CHECK_FALSE(sync_test(std::nullopt, yaw_right, WinnerLocus{5, 3, 1.0}, 1));
        CHECK(sync_test(std::nullopt, yaw_left, WinnerLocus{5, 3, 1.0}, 1));
        CHECK(sync_test(std::nullopt, pitch_up, WinnerLocus{2, 9, 1.0}, 1));
        CHECK_FALSE(sync_test(std::nullopt, pitch_up, WinnerLocus{12, 9, 1.0}, 1));
    }
    SUBCASE("holding and fovea moves require the winner inside the zone") {
        CHECK(sync_test(std::nullopt, no_action, WinnerLocus{8, 8, 1.0}, 1));
        CHECK_FALSE(sync_test(std::nullopt, no_action, WinnerLocus{0, 0, 1.0}, 1));
        CHECK(sync_test(std::nullopt, fovea_center, WinnerLocus{1, 14, 1.0}, 3));
        CHECK_FALSE(sync_test(std::nullopt, fovea_center, WinnerLocus{1, 1, 1.0}, 3));
    }
    SUBCASE("attend actions use the direction derived from the previous winner") {
        // Previous winner far right: the move went rightward.
        CHECK(sync_test(WinnerLocus{8, 15, 1.0}, attend, WinnerLocus{8, 12, 1.0}, 1));
        CHECK_FALSE(sync_test(WinnerLocus{8, 15, 1.0}, attend, WinnerLocus{8, 2, 1.0}, 1));
        // No previous winner: falls back to the containment rule.
        CHECK(sync_test(std::nullopt, attend, WinnerLocus{8, 8, 1.0}, 1));
    }
    SUBCASE("emphasize actions never earn movement synchrony") {
        CHECK_FALSE(sync_test(std::nullopt, emphasize, WinnerLocus{8, 8, 1.0}, 1));
    }
}

TEST_CASE("volition emits the configured goal only in the third substage") {
    CHECK_FALSE(volition_emit(1, std::nullopt).has_value());
    CHECK_FALSE(volition_emit(2, std::nullopt).has_value());

    const auto fallback = volition_emit(3, std::nullopt);
    REQUIRE(fallback.has_value());
    REQUIRE(fallback->goal.target_color.has_value());
    CHECK(fallback->goal.target_color->r == doctest::Approx(1.0));

    GoalSpec region_goal;
    region_goal.target_region = 4;
    const auto custom = volition_emit(3, region_goal);
    REQUIRE(custom.has_value());
    CHECK(custom->goal.target_region == 4);
    CHECK_FALSE(custom->goal.target_color.has_value());
}

TEST_CASE("topdown_hit_test needs a winner on a strongly activated cell") {
    FeatureMap map;
    map.kind = MapKind::color;
    map.cells.at(4, 4) = 1.0;
    map.cells.at(5, 5) = 0.25;
    map.cells.at(6, 6) = 0.75;

    CHECK(topdown_hit_test(&map, WinnerLocus{4, 4, 1.0}));
    CHECK(topdown_hit_test(&map, WinnerLocus{6, 6, 1.0}));
    CHECK_FALSE(topdown_hit_test(&map, WinnerLocus{5, 5, 1.0}));
    CHECK_FALSE(topdown_hit_test(&map, std::nullopt));
    CHECK_FALSE(topdown_hit_test(nullptr, WinnerLocus{4, 4, 1.0}));
}
