#pragma once
#include "cogsim/attention.hpp"
#include "cogsim/memory.hpp"
#include "cogsim/world.hpp"

#include <array>
#include <optional>
#include <unordered_set>
#include <vector>

namespace cogsim {

inline constexpr int kActionCount = 17;

enum class ActionGroup { motor, virt, attentional };
enum class ActionKind { no_action, motor_step, fovea_move, attend_winner, emphasize };

// One row of the global action table. Motor steps carry a nominal axis and
// direction; the step magnitude (coarse or fine) comes from the active
// substage. Attend actions move one coarse step toward the current winner.
struct ActionSpec {
    int id = 0; // 1..17
    ActionGroup group = ActionGroup::motor;
    ActionKind kind = ActionKind::no_action;
    Axis axis = Axis::yaw;
    int direction = 0;            // +1 pitch-up / yaw-left, -1 pitch-down / yaw-right
    int fovea_zone = 0;           // fovea_move payload
    MapKind emphasize = MapKind::color; // emphasize payload
};

// Layout: 1 no-action; 2-5 pitch+/pitch-/yaw+/yaw-; 6-10 fovea to zones 1-5;
// 11-14 attend-to-winner (nominal pitch+/pitch-/yaw+/yaw-); 15-17 emphasize
// color/distance/region.
const std::array<ActionSpec, kActionCount>& action_table();
const ActionSpec& action_spec(int id);

// Substages 1-2 enable ids 1..10, substage 3 all 17.
std::vector<int> enabled_action_ids(int substage);

struct RewardConfig {
    double w_new_schema = 1.0;
    double w_sync = 1.0;
    double w_topdown = 0.0;
    double penalty_catastrophic = -10.0;
};

// Per-episode record of tried (state, action) pairs driving the curiosity
// bonus.
class MotivationState {
public:
    explicit MotivationState(double curiosity_weight = 0.2)
        : curiosity_weight_(curiosity_weight) {}

    double curiosity_weight() const { return curiosity_weight_; }
    void clear() { tried_.clear(); }
    bool tried(StateId s, int action_index) const {
        return tried_.contains(key(s, action_index));
    }
    void mark(StateId s, int action_index) { tried_.insert(key(s, action_index)); }

private:
    static std::uint32_t key(StateId s, int action_index) {
        return (static_cast<std::uint32_t>(s) << 8) | static_cast<std::uint32_t>(action_index);
    }
    double curiosity_weight_;
    std::unordered_set<std::uint32_t> tried_;
};

// Linear decay from `start` at episode 0 to exactly 0 in the last episode.
double epsilon_schedule(int episode, int max_episodes, double start = 0.95);

// Epsilon-greedy over the schema's q row. When motivation is given, greedy
// scores get +curiosity_weight for untried pairs. Returns the action INDEX
// into schema.q; ties break toward the lowest index (= lowest action id).
int decide(const Schema& schema, const MotivationState* motivation, double epsilon, Rng& rng);

struct TransitionContext {
    bool new_schema = false;
    bool sync = false;
    bool topdown_hit = false;
    bool catastrophic = false;
};

// Weighted sum of the bonus terms; a catastrophic event overrides everything
// with the penalty.
double compose_reward(const TransitionContext& ctx, const RewardConfig& cfg);

// The single motor step that most reduces the winner's offset from the grid
// center; nullopt when there is no winner or it is already centered.
std::optional<MotorDelta> attend_direction(const std::optional<WinnerLocus>& winner, double step);

// Space-time synchrony between the previous action and the new winner:
// directional actions require the winner in the matching half of the grid,
// holding/fovea actions require it inside the current fovea zone.
bool sync_test(const std::optional<WinnerLocus>& prev_winner, const ActionSpec& action,
               const std::optional<WinnerLocus>& new_winner, int fovea_zone_after);

struct GoalEmission {
    GoalSpec goal;
};

// Substage 3 turns the configured goal (default: attend to the distractor
// red) into an active top-down task; earlier substages emit nothing.
std::optional<GoalEmission> volition_emit(int substage, const std::optional<GoalSpec>& configured_goal);

// True when the winner lands on a cell the active top-down map rates >= 0.75.
bool topdown_hit_test(const FeatureMap* active_top_down, const std::optional<WinnerLocus>& winner);

} // namespace cogsim
