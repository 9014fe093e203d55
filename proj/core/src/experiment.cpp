#include "cogsim/experiment.hpp"

#include "cogsim/image_io.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace cogsim {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::max_steps: return "max_steps";
        case Termination::catastrophic: return "catastrophic";
        case Termination::no_salience: return "no_salience";
    }
    return "?";
}

std::optional<Termination> termination_from_string(const std::string& name) {
    if (name == "max_steps") return Termination::max_steps;
    if (name == "catastrophic") return Termination::catastrophic;
    if (name == "no_salience") return Termination::no_salience;
    return std::nullopt;
}

namespace {

// Independent named substreams of the run seed.
constexpr std::uint64_t kStreamEpisode = 0x01000000;
constexpr std::uint64_t kStreamPlacement = 0x02000000;
constexpr std::uint64_t kStreamTransfer = 0x03000000;
constexpr std::uint64_t kStreamSubstage = 0x10000000;

std::uint64_t episode_stream(int substage, int episode) {
    return kStreamSubstage * static_cast<std::uint64_t>(substage) + kStreamEpisode +
           static_cast<std::uint64_t>(episode);
}

class EpisodeRunner {
public:
    EpisodeRunner(const SubstageConfig& cfg, ProceduralMemory& mem, WorldState& world,
                  const EpisodeOptions& opt)
        : cfg_(cfg),
          mem_(mem),
          world_(world),
          opt_(opt),
          rng_(cfg.seed, episode_stream(cfg.substage, opt.episode_index)),
          camera_(cfg.camera()),
          motivation_(cfg.curiosity_weight),
          ior_{cfg.ior_floor, cfg.ior_cycles} {}

    EpisodeLog run() {
        EpisodeLog log;
        log.episode = opt_.episode_index;

        HeadPose head = home_pose();
        const std::optional<GoalEmission> goal = volition_emit(cfg_.substage, cfg_.goal);
        AttentionalMap att;
        std::optional<WinnerLocus> prev_winner;
        std::optional<MapKind> latched;
        SensoryMemory sensory;
        int no_salience_run = 0;

        struct Pending {
            StateId state;
            int action_index;
        };
        std::optional<Pending> pending;

        for (int cycle = 0;; ++cycle) {
            sensory.latest = render_rgbd(world_, head, camera_);
            const Observation& obs = sensory.latest;

            const FeatureMap* active_td = build_maps(obs, goal, latched);
            const Grid16 combined = combine_maps(maps_, weights_);
            update_attentional_map(att, prev_winner, ior_);
            const SalienceMap sal = salience(combined, att);
            const std::optional<WinnerLocus> winner = select_winner(sal, cfg_.winner_threshold);
            const StateId state = encode_state(sal, BinarizeParams{cfg_.binarize_floor});

            const Schema* schema = mem_.recall(state);
            bool new_schema = false;
            if (!schema && opt_.learn) {
                schema = &mem_.assimilate(state, opt_.episode_index, rng_);
                new_schema = true;
                ++log.assimilation_count;
            }

            if (opt_.sink) {
                opt_.sink(CycleDebug{log.episode, cycle, &obs, maps_, &combined, &att, &sal,
                                     winner});
            }

            // Reward the previous action against the winner that emerged now.
            if (pending) {
                StepRecord& rec = log.steps.back();
                rec.new_schema = new_schema;
                rec.sync = sync_test(prev_winner, action_spec(rec.action_id), winner,
                                     head.fovea_zone);
                rec.topdown_hit = topdown_hit_test(active_td, winner);
                rec.reward = compose_reward(
                    {rec.new_schema, rec.sync, rec.topdown_hit, false}, cfg_.reward);
                if (opt_.learn)
                    mem_.accommodate(pending->state, pending->action_index, rec.reward, state,
                                     cfg_.alpha, cfg_.gamma);
                log.total_reward += rec.reward;
                pending.reset();
            }

            if (log.action_count == cfg_.max_steps) {
                log.termination = Termination::max_steps;
                break;
            }

            // Unknown states in frozen mode get a zero row: greedy falls back
            // to the lowest enabled action id.
            Schema frozen_fallback;
            const Schema* decision_schema = schema;
            if (!decision_schema) {
                frozen_fallback.state = state;
                frozen_fallback.q.assign(cfg_.enabled_actions.size(), 0.0);
                decision_schema = &frozen_fallback;
            }
            const int action_index =
                decide(*decision_schema, cfg_.motivation_on ? &motivation_ : nullptr,
                       opt_.epsilon, rng_);
            const int action_id = cfg_.enabled_actions[static_cast<std::size_t>(action_index)];
            if (cfg_.motivation_on) motivation_.mark(state, action_index);

            StepRecord rec;
            rec.step = log.action_count;
            rec.state = state;
            rec.action_id = action_id;
            rec.winner = winner;
            rec.pitch = head.pitch;
            rec.yaw = head.yaw;
            rec.fovea_zone = head.fovea_zone;
            rec.on_target = winner && winner_on_distractor(world_, head, camera_, *winner);
            if (opt_.record_q) rec.q_row = decision_schema->q;
            log.steps.push_back(std::move(rec));

            const bool violation = execute(action_id, head, winner, latched, goal);
            ++log.action_count;

            if (violation) {
                finish_terminal(log, state, action_index, schema != nullptr);
                log.termination = Termination::catastrophic;
                break;
            }

            step_world(world_, cfg_.step_dt);

            if (!winner) {
                if (++no_salience_run >= cfg_.max_no_salience) {
                    finish_terminal(log, state, action_index, schema != nullptr);
                    log.termination = Termination::no_salience;
                    break;
                }
            } else {
                no_salience_run = 0;
            }

            prev_winner = winner;
            pending = Pending{state, action_index};
        }
        return log;
    }

private:
    HeadPose home_pose() {
        HeadPose head;
        head.pitch_limits = {-cfg_.pitch_limit, cfg_.pitch_limit};
        head.yaw_limits = {-cfg_.yaw_limit, cfg_.yaw_limit};
        head.pitch = rng_.uniform(-cfg_.start_jitter, cfg_.start_jitter);
        head.yaw = rng_.uniform(-cfg_.start_jitter, cfg_.start_jitter);
        return head;
    }

    // Fills maps_/weights_ with the enabled bottom-up maps plus the latched
    // top-down map; returns a pointer to the latter (or nullptr).
    const FeatureMap* build_maps(const Observation& obs, const std::optional<GoalEmission>& goal,
                                 const std::optional<MapKind>& latched) {
        maps_.clear();
        for (MapKind kind : cfg_.enabled_maps) {
            switch (kind) {
                case MapKind::red:
                    maps_.push_back(bottom_up_map(obs.r, obs.resolution, kind));
                    break;
                case MapKind::green:
                    maps_.push_back(bottom_up_map(obs.g, obs.resolution, kind));
                    break;
                case MapKind::blue:
                    maps_.push_back(bottom_up_map(obs.b, obs.resolution, kind));
                    break;
                case MapKind::depth:
                    maps_.push_back(bottom_up_map(obs.depth, obs.resolution, kind));
                    break;
                default:
                    break; // top-down maps enter only when latched
            }
        }
        bool have_td = false;
        if (latched && goal) {
            const GoalSpec& g = goal->goal;
            if (*latched == MapKind::color && g.target_color) {
                maps_.push_back(top_down_color_map(obs, g));
                have_td = true;
            } else if (*latched == MapKind::dist && g.target_distance) {
                maps_.push_back(top_down_distance_map(obs, g));
                have_td = true;
            } else if (*latched == MapKind::reg && g.target_region) {
                maps_.push_back(top_down_region_map(g));
                have_td = true;
            }
        }
        weights_.assign(maps_.size(), 1.0);
        return have_td ? &maps_.back() : nullptr;
    }

    // Returns true on a motor limit violation.
    bool execute(int action_id, HeadPose& head, const std::optional<WinnerLocus>& winner,
                 std::optional<MapKind>& latched, const std::optional<GoalEmission>& goal) {
        const ActionSpec& spec = action_spec(action_id);
        switch (spec.kind) {
            case ActionKind::no_action:
                return false;
            case ActionKind::motor_step: {
                const MotorDelta delta{spec.axis, cfg_.motor_step() * spec.direction};
                const auto next = apply_head_command(head, delta);
                if (!next) return true;
                head = *next;
                return false;
            }
            case ActionKind::fovea_move:
                head = move_fovea(head, spec.fovea_zone);
                return false;
            case ActionKind::attend_winner: {
                const auto delta = attend_direction(winner, cfg_.coarse_step);
                if (!delta) return false;
                const auto next = apply_head_command(head, *delta);
                if (!next) return true;
                head = *next;
                return false;
            }
            case ActionKind::emphasize: {
                if (!goal) return false;
                const bool enabled = std::find(cfg_.enabled_maps.begin(), cfg_.enabled_maps.end(),
                                               spec.emphasize) != cfg_.enabled_maps.end();
                const GoalSpec& g = goal->goal;
                const bool has_field =
                    (spec.emphasize == MapKind::color && g.target_color) ||
                    (spec.emphasize == MapKind::dist && g.target_distance) ||
                    (spec.emphasize == MapKind::reg && g.target_region);
                if (enabled && has_field) latched = spec.emphasize;
                return false;
            }
        }
        return false;
    }

    // Close the last record with the catastrophic penalty (no bootstrap).
    void finish_terminal(EpisodeLog& log, StateId state, int action_index, bool known_state) {
        StepRecord& rec = log.steps.back();
        rec.reward = cfg_.reward.penalty_catastrophic;
        rec.catastrophic = true;
        if (opt_.learn && known_state)
            mem_.accommodate_terminal(state, action_index, rec.reward, cfg_.alpha);
        log.total_reward += rec.reward;
    }

    const SubstageConfig& cfg_;
    ProceduralMemory& mem_;
    WorldState& world_;
    const EpisodeOptions& opt_;
    Rng rng_;
    Camera camera_;
    MotivationState motivation_;
    IorParams ior_;
    std::vector<FeatureMap> maps_;
    std::vector<double> weights_;
};

} // namespace

EpisodeLog run_episode(const SubstageConfig& cfg, ProceduralMemory& mem, WorldState& world,
                       const EpisodeOptions& options) {
    return EpisodeRunner(cfg, mem, world, options).run();
}

bool winner_on_distractor(const WorldState& world, const HeadPose& head, const Camera& cam,
                          const WinnerLocus& winner) {
    if (!world.distractor.present) return false;
    const Vec3 center = distractor_center(world);
    const Vec3 eye = camera_eye(world);
    const double dx = center.x - eye.x, dy = center.y - eye.y, dz = center.z - eye.z;
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (dist <= world.distractor.radius) return true;

    const double cell_px = static_cast<double>(cam.resolution) / kGridSize;
    const double px = (winner.col + 0.5) * cell_px - 0.5;
    const double py = (winner.row + 0.5) * cell_px - 0.5;
    const double angle = ray_point_angle(world, head, cam, px, py, center);
    const double object_radius = std::asin(std::min(1.0, world.distractor.radius / dist));
    const double cell_half_diag = 0.5 * std::sqrt(2.0) * (cam.hfov / kGridSize);
    return angle <= object_radius + cell_half_diag;
}

TrainResult run_training(const SubstageConfig& cfg, const SceneSpec& scene,
                         const ProceduralMemory* prior, const CycleSink& sink, bool record_q) {
    const int action_count = static_cast<int>(cfg.enabled_actions.size());
    Rng transfer_rng(cfg.seed, kStreamTransfer + static_cast<std::uint64_t>(cfg.substage));
    TrainResult result{
        prior ? transfer(*prior, action_count, transfer_rng) : ProceduralMemory(action_count),
        {}};
    result.logs.reserve(static_cast<std::size_t>(cfg.max_episodes));

    SceneSpec resolved = scene;
    if (resolved.blocks.empty()) resolved.blocks = generate_blocks(scene);

    for (int episode = 0; episode < cfg.max_episodes; ++episode) {
        WorldState world = make_world(resolved);
        // New episode: actuators home (jittered inside the runner), distractor
        // repositioned at random, blocks untouched.
        Rng placement(cfg.seed, kStreamSubstage * static_cast<std::uint64_t>(cfg.substage) +
                                    kStreamPlacement + static_cast<std::uint64_t>(episode));
        const double bound = world.arena_half_extent - world.distractor.radius - 0.05;
        world.distractor.position = {placement.uniform(-bound, bound),
                                     placement.uniform(-bound, bound)};
        world.distractor.heading = placement.uniform(-kPi, kPi);

        EpisodeOptions options;
        options.epsilon = epsilon_schedule(episode, cfg.max_episodes, cfg.exploration_start);
        options.learn = true;
        options.episode_index = episode;
        options.record_q = record_q;
        options.sink = sink;
        result.logs.push_back(run_episode(cfg, result.memory, world, options));
    }
    return result;
}

ValidationReport run_validation(const ScenarioSpec& scenario, const SceneSpec& scene,
                                const ProceduralMemory& mem, const SubstageConfig& cfg) {
    ValidationReport report;
    report.scenario = scenario.name;
    report.episodes.reserve(static_cast<std::size_t>(scenario.episodes));

    SubstageConfig frozen = cfg;
    frozen.seed = scenario.seed;

    SceneSpec resolved = scene;
    if (resolved.blocks.empty()) resolved.blocks = generate_blocks(scene);

    long on_target = 0, total_steps = 0;
    double reward_sum = 0.0;
    for (int episode = 0; episode < scenario.episodes; ++episode) {
        WorldState world = make_world(resolved);
        Rng placement(scenario.seed, kStreamPlacement + static_cast<std::uint64_t>(episode));
        const double jitter = radians(placement.uniform(-scenario.bearing_jitter_deg,
                                                        scenario.bearing_jitter_deg));
        const double bearing = radians(scenario.bearing_deg) + jitter;
        const double bound = world.arena_half_extent - world.distractor.radius - 0.01;
        Vec2 pos{world.camera.position.x + scenario.distance * std::cos(bearing),
                 world.camera.position.y + scenario.distance * std::sin(bearing)};
        pos.x = std::clamp(pos.x, -bound, bound);
        pos.y = std::clamp(pos.y, -bound, bound);
        world.distractor.position = pos;
        world.distractor.speed = scenario.speed;
        switch (scenario.motion) {
            case DistractorMotion::fixed:
                world.distractor.speed = 0.0;
                break;
            case DistractorMotion::wander:
                world.distractor.heading = placement.uniform(-kPi, kPi);
                break;
            case DistractorMotion::crossing:
                // Tangential start: the object drifts across and out of view.
                world.distractor.heading = wrap_angle(
                    bearing + (placement.next_below(2) ? kPi / 2.0 : -kPi / 2.0));
                break;
        }

        EpisodeOptions options;
        options.epsilon = 0.0;
        options.learn = false; // frozen policy, memory is never touched
        options.episode_index = episode;
        report.episodes.push_back(
            run_episode(frozen, const_cast<ProceduralMemory&>(mem), world, options));

        const EpisodeLog& log = report.episodes.back();
        for (const StepRecord& rec : log.steps) {
            on_target += rec.on_target ? 1 : 0;
            ++total_steps;
        }
        reward_sum += log.total_reward;
    }
    report.time_on_target_ratio =
        total_steps > 0 ? static_cast<double>(on_target) / static_cast<double>(total_steps) : 0.0;
    report.mean_reward =
        report.episodes.empty() ? 0.0 : reward_sum / static_cast<double>(report.episodes.size());
    return report;
}

std::string episodes_csv(std::span<const EpisodeLog> logs) {
    std::string out = "episode,total_reward,action_count,termination\n";
    for (const EpisodeLog& log : logs) {
        out += std::to_string(log.episode);
        out += ',';
        out += format_double(log.total_reward);
        out += ',';
        out += std::to_string(log.action_count);
        out += ',';
        out += to_string(log.termination);
        out += '\n';
    }
    return out;
}

std::string steps_csv(std::span<const EpisodeLog> logs, int q_columns) {
    std::string out =
        "episode,step,state,action,reward,winner_row,winner_col,pitch,yaw,fovea_zone,"
        "new_schema,sync,topdown_hit,catastrophic,on_target";
    for (int i = 0; i < q_columns; ++i) out += ",q_" + std::to_string(i);
    out += '\n';
    for (const EpisodeLog& log : logs) {
        for (const StepRecord& rec : log.steps) {
            out += std::to_string(log.episode);
            out += ',' + std::to_string(rec.step);
            out += ',' + std::to_string(rec.state);
            out += ',' + std::to_string(rec.action_id);
            out += ',' + format_double(rec.reward);
            out += ',' + std::to_string(rec.winner ? rec.winner->row : -1);
            out += ',' + std::to_string(rec.winner ? rec.winner->col : -1);
            out += ',' + format_double(rec.pitch);
            out += ',' + format_double(rec.yaw);
            out += ',' + std::to_string(rec.fovea_zone);
            out += rec.new_schema ? ",1" : ",0";
            out += rec.sync ? ",1" : ",0";
            out += rec.topdown_hit ? ",1" : ",0";
            out += rec.catastrophic ? ",1" : ",0";
            out += rec.on_target ? ",1" : ",0";
            for (int i = 0; i < q_columns; ++i) {
                const double q = i < static_cast<int>(rec.q_row.size())
                                     ? rec.q_row[static_cast<std::size_t>(i)]
                                     : 0.0;
                out += ',' + format_double(q);
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<EpisodeSummary> parse_episodes_csv(const std::string& text) {
    std::vector<EpisodeSummary> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (first) {
            first = false;
            if (line.rfind("episode,", 0) != 0)
                throw IoError("episodes csv: unexpected header '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string episode, reward, actions, termination;
        if (!std::getline(fields, episode, ',') || !std::getline(fields, reward, ',') ||
            !std::getline(fields, actions, ',') || !std::getline(fields, termination))
            throw IoError("episodes csv: malformed line " + std::to_string(line_no));
        EpisodeSummary summary;
        summary.episode = std::stoi(episode);
        summary.total_reward = std::stod(reward);
        summary.action_count = std::stoi(actions);
        const auto term = termination_from_string(termination);
        if (!term)
            throw IoError("episodes csv: unknown termination '" + termination + "' on line " +
                          std::to_string(line_no));
        summary.termination = *term;
        out.push_back(summary);
    }
    return out;
}

void export_metrics(std::span<const EpisodeLog> logs, const std::filesystem::path& out_dir,
                    const std::string& prefix) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir / "logs", ec);
    if (ec) throw IoError("cannot create " + (out_dir / "logs").string() + ": " + ec.message());
    write_text_file(out_dir / "logs" / (prefix + "_episodes.csv"), episodes_csv(logs));
    if (logs.empty()) return;

    fs::create_directories(out_dir / "plots", ec);
    if (ec) throw IoError("cannot create " + (out_dir / "plots").string() + ": " + ec.message());
    std::vector<double> reward, actions;
    reward.reserve(logs.size());
    actions.reserve(logs.size());
    for (const EpisodeLog& log : logs) {
        reward.push_back(log.total_reward);
        actions.push_back(static_cast<double>(log.action_count));
    }
    write_line_plot(out_dir / "plots" / (prefix + "_reward.png"), reward);
    write_line_plot(out_dir / "plots" / (prefix + "_actions.png"), actions);
}

} // namespace cogsim
