#include "cogsim/learning.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace cogsim {

const std::array<ActionSpec, kActionCount>& action_table() {
    static const std::array<ActionSpec, kActionCount> table = [] {
        std::array<ActionSpec, kActionCount> t{};
        auto set = [&t](ActionSpec spec) { t[static_cast<std::size_t>(spec.id - 1)] = spec; };
        set({1, ActionGroup::motor, ActionKind::no_action, Axis::yaw, 0, 0, MapKind::color});
        set({2, ActionGroup::motor, ActionKind::motor_step, Axis::pitch, +1, 0, MapKind::color});
        set({3, ActionGroup::motor, ActionKind::motor_step, Axis::pitch, -1, 0, MapKind::color});
        set({4, ActionGroup::motor, ActionKind::motor_step, Axis::yaw, +1, 0, MapKind::color});
        set({5, ActionGroup::motor, ActionKind::motor_step, Axis::yaw, -1, 0, MapKind::color});
        for (int z = 1; z <= 5; ++z)
            set({5 + z, ActionGroup::virt, ActionKind::fovea_move, Axis::yaw, 0, z, MapKind::color});
        set({11, ActionGroup::attentional, ActionKind::attend_winner, Axis::pitch, +1, 0, MapKind::color});
        set({12, ActionGroup::attentional, ActionKind::attend_winner, Axis::pitch, -1, 0, MapKind::color});
        set({13, ActionGroup::attentional, ActionKind::attend_winner, Axis::yaw, +1, 0, MapKind::color});
        set({14, ActionGroup::attentional, ActionKind::attend_winner, Axis::yaw, -1, 0, MapKind::color});
        set({15, ActionGroup::attentional, ActionKind::emphasize, Axis::yaw, 0, 0, MapKind::color});
        set({16, ActionGroup::attentional, ActionKind::emphasize, Axis::yaw, 0, 0, MapKind::dist});
        set({17, ActionGroup::attentional, ActionKind::emphasize, Axis::yaw, 0, 0, MapKind::reg});
        return t;
    }();
    return table;
}

const ActionSpec& action_spec(int id) {
    assert(id >= 1 && id <= kActionCount);
    return action_table()[static_cast<std::size_t>(id - 1)];
}

std::vector<int> enabled_action_ids(int substage) {
    const int count = substage >= 3 ? 17 : 10;
    std::vector<int> ids(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) ids[static_cast<std::size_t>(i)] = i + 1;
    return ids;
}

double epsilon_schedule(int episode, int max_episodes, double start) {
    assert(episode >= 0 && episode < max_episodes);
    if (max_episodes <= 1) return 0.0;
    return start * (1.0 - static_cast<double>(episode) / (max_episodes - 1));
}

int decide(const Schema& schema, const MotivationState* motivation, double epsilon, Rng& rng) {
    assert(!schema.q.empty());
    const int n = static_cast<int>(schema.q.size());
    if (rng.uniform() < epsilon) return static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));

    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a) {
        double score = schema.q[static_cast<std::size_t>(a)];
        if (motivation && !motivation->tried(schema.state, a)) score += motivation->curiosity_weight();
        if (score > best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

double compose_reward(const TransitionContext& ctx, const RewardConfig& cfg) {
    if (ctx.catastrophic) return cfg.penalty_catastrophic;
    return cfg.w_new_schema * (ctx.new_schema ? 1.0 : 0.0) +
           cfg.w_sync * (ctx.sync ? 1.0 : 0.0) +
           cfg.w_topdown * (ctx.topdown_hit ? 1.0 : 0.0);
}

std::optional<MotorDelta> attend_direction(const std::optional<WinnerLocus>& winner, double step) {
    if (!winner) return std::nullopt;
    const double center = (kGridSize - 1) * 0.5;
    const double dr = winner->row - center; // positive = below center
    const double dc = winner->col - center; // positive = right of center
    if (dr == 0.0 && dc == 0.0) return std::nullopt;
    if (std::abs(dc) >= std::abs(dr)) {
        // Winner offset to the right needs a rightward (negative yaw) step.
        return MotorDelta{Axis::yaw, dc > 0 ? -step : step};
    }
    return MotorDelta{Axis::pitch, dr > 0 ? -step : step};
}

namespace {

bool winner_in_half(const WinnerLocus& winner, Axis axis, int direction) {
    const int half = kGridSize / 2;
    if (axis == Axis::pitch)
        return direction > 0 ? winner.row < half : winner.row >= half;
    // Positive yaw turns left; the matching stimuli sit in the left columns.
    return direction > 0 ? winner.col < half : winner.col >= half;
}

} // namespace

bool sync_test(const std::optional<WinnerLocus>& prev_winner, const ActionSpec& action,
               const std::optional<WinnerLocus>& new_winner, int fovea_zone_after) {
    if (!new_winner) return false;
    switch (action.kind) {
        case ActionKind::motor_step:
            return winner_in_half(*new_winner, action.axis, action.direction);
        case ActionKind::attend_winner: {
            // The executed direction is derived from the pre-action winner.
            const auto delta = attend_direction(prev_winner, 1.0);
            if (!delta) return cell_in_zone(new_winner->row, new_winner->col, fovea_zone_after);
            return winner_in_half(*new_winner, delta->axis, delta->step > 0 ? +1 : -1);
        }
        case ActionKind::no_action:
        case ActionKind::fovea_move:
            return cell_in_zone(new_winner->row, new_winner->col, fovea_zone_after);
        case ActionKind::emphasize:
            return false;
    }
    return false;
}

std::optional<GoalEmission> volition_emit(int substage, const std::optional<GoalSpec>& configured_goal) {
    if (substage < 3) return std::nullopt;
    if (configured_goal) return GoalEmission{*configured_goal};
    GoalSpec goal;
    goal.target_color = Color{1.0f, 0.1f, 0.1f};
    return GoalEmission{goal};
}

bool topdown_hit_test(const FeatureMap* active_top_down, const std::optional<WinnerLocus>& winner) {
    if (!active_top_down || !winner) return false;
    return active_top_down->cells.at(winner->row, winner->col) >= 0.75;
}

} // namespace cogsim
