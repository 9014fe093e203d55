#pragma once
#include "cogsim/attention.hpp"
#include "cogsim/config.hpp"
#include "cogsim/learning.hpp"
#include "cogsim/memory.hpp"
#include "cogsim/world.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cogsim {

enum class Termination { max_steps, catastrophic, no_salience };

const char* to_string(Termination t);
std::optional<Termination> termination_from_string(const std::string& name);

// One executed action and the reward it eventually earned.
struct StepRecord {
    int step = 0;
    StateId state = 0;
    int action_id = 0;
    double reward = 0.0;
    std::optional<WinnerLocus> winner; // winner at decision time
    double pitch = 0.0, yaw = 0.0;     // pose at decision time
    int fovea_zone = 1;
    bool new_schema = false; // a new schema was credited to this action
    bool sync = false;
    bool topdown_hit = false;
    bool catastrophic = false;
    bool on_target = false; // decision-time winner back-projected onto the distractor
    std::vector<double> q_row; // filled only when tracing is enabled
};

struct EpisodeLog {
    int episode = 0;
    std::vector<StepRecord> steps;
    double total_reward = 0.0;
    int action_count = 0;
    Termination termination = Termination::max_steps;
    int assimilation_count = 0;
};

// Per-cycle view of the pipeline for debugging dumps.
struct CycleDebug {
    int episode = 0;
    int step = 0;
    const Observation* obs = nullptr;
    std::span<const FeatureMap> feature_maps;
    const Grid16* combined = nullptr;
    const AttentionalMap* attentional = nullptr;
    const SalienceMap* salience = nullptr;
    std::optional<WinnerLocus> winner;
};

using CycleSink = std::function<void(const CycleDebug&)>;

struct EpisodeOptions {
    double epsilon = 0.0;
    bool learn = true;
    int episode_index = 0;
    bool record_q = false;
    CycleSink sink;
};

// One full perception-decision-action episode. With learn=false the memory is
// never touched; unknown states fall back to a zero q-row (greedy picks the
// lowest enabled action id).
EpisodeLog run_episode(const SubstageConfig& cfg, ProceduralMemory& mem, WorldState& world,
                       const EpisodeOptions& options);

struct TrainResult {
    ProceduralMemory memory{0};
    std::vector<EpisodeLog> logs;
};

// Full training protocol for one substage: optional transfer from the prior
// memory, linear exploration decay, home pose + random distractor placement
// each episode.
TrainResult run_training(const SubstageConfig& cfg, const SceneSpec& scene,
                         const ProceduralMemory* prior, const CycleSink& sink = {},
                         bool record_q = false);

struct ValidationReport {
    std::string scenario;
    std::vector<EpisodeLog> episodes;
    double time_on_target_ratio = 0.0;
    double mean_reward = 0.0;
};

// Frozen-policy evaluation (epsilon = 0, no learning) over the scenario's
// episode count; the memory is left bit-identical.
ValidationReport run_validation(const ScenarioSpec& scenario, const SceneSpec& scene,
                                const ProceduralMemory& mem, const SubstageConfig& cfg);

// --- Metrics ---

std::string episodes_csv(std::span<const EpisodeLog> logs);
std::string steps_csv(std::span<const EpisodeLog> logs, int q_columns = 0);

struct EpisodeSummary {
    int episode = 0;
    double total_reward = 0.0;
    int action_count = 0;
    Termination termination = Termination::max_steps;
};

std::vector<EpisodeSummary> parse_episodes_csv(const std::string& text);

// Writes <prefix>_episodes.csv plus reward/actions line plots. An empty log
// list produces a header-only CSV and no plots.
void export_metrics(std::span<const EpisodeLog> logs, const std::filesystem::path& out_dir,
                    const std::string& prefix);

// Whether the winner cell's viewing ray passes within the distractor's
// angular radius (plus half a grid cell of slack).
bool winner_on_distractor(const WorldState& world, const HeadPose& head, const Camera& cam,
                          const WinnerLocus& winner);

} // namespace cogsim
