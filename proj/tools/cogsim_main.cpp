// Command-line front end: train substages, chain them incrementally, validate
// frozen policies against scenarios, inspect memories, render scene previews
// and export metrics.

#include "cogsim/config.hpp"
#include "cogsim/experiment.hpp"
#include "cogsim/image_io.hpp"
#include "cogsim/memory.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cogsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool fast = false;
    bool no_transfer = false;
    bool dump_maps = false;
    bool trace = false;
};

fs::path resolve_out_dir(const std::string& cli_value) {
    if (!cli_value.empty()) return cli_value;
    if (const char* env = std::getenv("COGSIM_OUTPUT_DIR"); env && *env) return env;
    return "out";
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string grid_csv(const Grid16& grid) {
    std::string out;
    for (int row = 0; row < kGridSize; ++row) {
        for (int col = 0; col < kGridSize; ++col) {
            if (col) out += ',';
            out += format_double(grid.at(row, col));
        }
        out += '\n';
    }
    return out;
}

// Per-cycle pipeline dumps (CSV grid + grayscale PNG per map). Kept to the
// first episode and first 200 cycles per run; enough to eyeball the dynamics
// without drowning the output directory.
CycleSink make_dump_sink(const fs::path& dir) {
    ensure_dir(dir);
    auto index_path = dir / "winners.csv";
    write_text_file(index_path, "episode,step,winner_row,winner_col,value\n");
    return [dir, index_path](const CycleDebug& dbg) {
        if (dbg.episode != 0 || dbg.step >= 200) return;
        char tag[32];
        std::snprintf(tag, sizeof(tag), "ep%03d_cy%03d", dbg.episode, dbg.step);
        auto dump = [&](const Grid16& grid, const std::string& name) {
            write_text_file(dir / (std::string(tag) + "_" + name + ".csv"), grid_csv(grid));
            const auto gray = grid_to_gray(grid);
            write_png_gray8(dir / (std::string(tag) + "_" + name + ".png"), kGridSize,
                            kGridSize, gray);
        };
        for (const FeatureMap& map : dbg.feature_maps) dump(map.cells, to_string(map.kind));
        dump(*dbg.combined, "combined");
        dump(dbg.attentional->cells, "attentional");
        dump(dbg.salience->cells, "salience");

        std::string line = std::to_string(dbg.episode) + "," + std::to_string(dbg.step);
        if (dbg.winner)
            line += "," + std::to_string(dbg.winner->row) + "," +
                    std::to_string(dbg.winner->col) + "," + format_double(dbg.winner->value);
        else
            line += ",-1,-1,0";
        std::ofstream index(index_path, std::ios::app);
        index << line << '\n';
    };
}

double last_n_mean_reward(const std::vector<EpisodeLog>& logs, std::size_t n) {
    if (logs.empty()) return 0.0;
    const std::size_t count = std::min(n, logs.size());
    double sum = 0.0;
    for (std::size_t i = logs.size() - count; i < logs.size(); ++i)
        sum += logs[i].total_reward;
    return sum / static_cast<double>(count);
}

ChainConfig load_chain(const CommonArgs& args) {
    ChainConfig chain;
    if (!args.config_path.empty())
        chain = load_chain_config(ConfigFile::parse_file(args.config_path));
    for (SubstageConfig& cfg : chain.substages) {
        if (args.seed) cfg.seed = *args.seed;
        if (args.fast) apply_fast_preset(cfg);
    }
    return chain;
}

InvocationInfo invocation_for(const std::string& verb, const CommonArgs& args,
                              std::uint64_t seed) {
    InvocationInfo info;
    info.verb = verb;
    info.seed = seed;
    info.fast = args.fast;
    info.no_transfer = args.no_transfer;
    info.dump_maps = args.dump_maps;
    info.trace = args.trace;
    return info;
}

ProceduralMemory train_one(const SubstageConfig& cfg, const SceneSpec& scene,
                           const ProceduralMemory* prior, const fs::path& out,
                           const std::string& prefix, const CommonArgs& args) {
    CycleSink sink;
    if (args.dump_maps) sink = make_dump_sink(out / "snapshots" / prefix);
    TrainResult result = run_training(cfg, scene, prior, sink, args.trace);

    export_metrics(result.logs, out, prefix);
    if (args.trace)
        write_text_file(out / "logs" / (prefix + "_steps.csv"),
                        steps_csv(result.logs, result.memory.action_count()));
    ensure_dir(out / "memory");
    save_file(result.memory, out / "memory" / (prefix + ".pmem"));
    write_text_file(out / "memory" / (prefix + ".csv"), memory_csv(result.memory));

    std::printf("%s: substage %d, %zu episodes, schemas %zu, last-20 mean reward %.2f\n",
                prefix.c_str(), cfg.substage, result.logs.size(), result.memory.size(),
                last_n_mean_reward(result.logs, 20));
    return std::move(result.memory);
}

int cmd_train(const CommonArgs& args, int substage, const std::string& memory_path) {
    const ChainConfig chain = load_chain(args);
    const SubstageConfig& cfg = chain.substages[substage - 1];
    const fs::path out = resolve_out_dir(args.out_dir);
    ensure_dir(out);
    write_text_file(out / "manifest.toml",
                    manifest_text(invocation_for("train", args, cfg.seed), chain));

    std::optional<ProceduralMemory> prior;
    if (!memory_path.empty() && !args.no_transfer) prior = load_file(memory_path);
    const std::string prefix = "s" + std::to_string(substage);
    train_one(cfg, chain.scene, prior ? &*prior : nullptr, out, prefix, args);
    return kExitOk;
}

int cmd_chain(const CommonArgs& args) {
    const ChainConfig chain = load_chain(args);
    const fs::path out = resolve_out_dir(args.out_dir);
    ensure_dir(out);
    write_text_file(out / "manifest.toml",
                    manifest_text(invocation_for("chain", args, chain.substages[0].seed), chain));

    std::optional<ProceduralMemory> carried;
    for (int substage = 1; substage <= 3; ++substage) {
        const SubstageConfig& cfg = chain.substages[substage - 1];
        const ProceduralMemory* prior =
            (args.no_transfer || !carried) ? nullptr : &*carried;
        carried = train_one(cfg, chain.scene, prior, out,
                            "s" + std::to_string(substage), args);
    }
    return kExitOk;
}

int cmd_validate(const CommonArgs& args, const std::string& memory_path,
                 const std::string& scenario_path) {
    const ScenarioSpec scenario = load_scenario_file(scenario_path);
    const ProceduralMemory memory = load_file(memory_path);

    ChainConfig chain;
    if (!args.config_path.empty())
        chain = load_chain_config(ConfigFile::parse_file(args.config_path));
    SubstageConfig cfg = chain.substages[scenario.substage - 1];
    if (args.seed) cfg.seed = *args.seed;

    if (static_cast<int>(cfg.enabled_actions.size()) != memory.action_count())
        throw ConfigError("memory has " + std::to_string(memory.action_count()) +
                          " actions but substage " + std::to_string(scenario.substage) +
                          " enables " + std::to_string(cfg.enabled_actions.size()));

    const fs::path out = resolve_out_dir(args.out_dir);
    ensure_dir(out);

    const ValidationReport report = run_validation(scenario, chain.scene, memory, cfg);

    std::string manifest = "[invocation]\n";
    manifest += "verb = \"validate\"\n";
    manifest += "artifact_version = \"" + std::string(kArtifactVersion) + "\"\n";
    manifest += "memory = \"" + memory_path + "\"\n";
    manifest += "scenario = \"" + scenario_path + "\"\n";
    manifest += "seed = " + std::to_string(scenario.seed) + "\n";
    write_text_file(out / ("manifest_validate_" + report.scenario + ".toml"), manifest);

    write_text_file(out / ("validation_" + report.scenario + ".csv"),
                    episodes_csv(report.episodes));
    std::string summary = "scenario,episodes,time_on_target_ratio,mean_reward\n";
    summary += report.scenario + "," + std::to_string(report.episodes.size()) + "," +
               format_double(report.time_on_target_ratio) + "," +
               format_double(report.mean_reward) + "\n";
    write_text_file(out / ("validation_" + report.scenario + "_summary.csv"), summary);

    std::printf("%s: %zu episodes, time-on-target %.3f, mean reward %.2f\n",
                report.scenario.c_str(), report.episodes.size(), report.time_on_target_ratio,
                report.mean_reward);
    return kExitOk;
}

int cmd_inspect(const CommonArgs& args, const std::string& memory_path) {
    const ProceduralMemory memory = load_file(memory_path);
    std::printf("memory: %s\n", memory_path.c_str());
    std::printf("  actions: %d (set version %d)\n", memory.action_count(),
                memory.action_set_version());
    std::printf("  schemas: %zu\n", memory.size());

    std::vector<const Schema*> by_visits;
    by_visits.reserve(memory.size());
    for (const auto& [state, schema] : memory.schemas()) by_visits.push_back(&schema);
    std::sort(by_visits.begin(), by_visits.end(), [](const Schema* a, const Schema* b) {
        if (a->visit_count != b->visit_count) return a->visit_count > b->visit_count;
        return a->state < b->state;
    });
    const std::size_t top = std::min<std::size_t>(5, by_visits.size());
    for (std::size_t i = 0; i < top; ++i) {
        const Schema* s = by_visits[i];
        double best = 0.0;
        int best_a = 0;
        for (std::size_t a = 0; a < s->q.size(); ++a)
            if (s->q[a] > best) { best = s->q[a]; best_a = static_cast<int>(a); }
        std::printf("  state %5u: visits %6d, best action id %d (q=%.3f)\n", s->state,
                    s->visit_count, best_a + 1, best);
    }

    if (!args.out_dir.empty()) {
        const fs::path out = args.out_dir;
        ensure_dir(out);
        const fs::path csv = out / (fs::path(memory_path).stem().string() + ".csv");
        write_text_file(csv, memory_csv(memory));
        std::printf("  csv export: %s\n", csv.string().c_str());
    }
    return kExitOk;
}

int cmd_render(const CommonArgs& args, const std::string& scene_path, int resolution,
               double pitch, double yaw, double hfov_deg, bool dump_feature_maps) {
    SceneSpec scene;
    if (!scene_path.empty()) scene = load_scene_file(scene_path);
    if (args.seed) scene.seed = *args.seed;
    WorldState world = make_world(scene);

    HeadPose head;
    head.pitch = pitch;
    head.yaw = yaw;
    const Camera cam{resolution, radians(hfov_deg)};

    const Observation obs = render_rgbd(world, head, cam);
    const fs::path out = resolve_out_dir(args.out_dir);
    ensure_dir(out);

    write_png_rgb8(out / "render_rgb.png", observation_to_image(obs));
    write_png_gray8(out / "render_r.png", resolution, resolution, channel_to_gray(obs.r));
    write_png_gray8(out / "render_g.png", resolution, resolution, channel_to_gray(obs.g));
    write_png_gray8(out / "render_b.png", resolution, resolution, channel_to_gray(obs.b));
    write_png_gray8(out / "render_depth.png", resolution, resolution,
                    channel_to_gray(obs.depth));

    if (dump_feature_maps) {
        const MapKind kinds[4] = {MapKind::red, MapKind::green, MapKind::blue, MapKind::depth};
        const std::vector<float>* channels[4] = {&obs.r, &obs.g, &obs.b, &obs.depth};
        for (int i = 0; i < 4; ++i) {
            const FeatureMap map = bottom_up_map(*channels[i], resolution, kinds[i]);
            const auto gray = grid_to_gray(map.cells);
            write_png_gray8(out / (std::string("map_") + to_string(kinds[i]) + ".png"),
                            kGridSize, kGridSize, gray);
            write_text_file(out / (std::string("map_") + to_string(kinds[i]) + ".csv"),
                            grid_csv(map.cells));
        }
    }
    std::printf("rendered %dx%d view to %s\n", resolution, resolution, out.string().c_str());
    return kExitOk;
}

int cmd_export(const CommonArgs& args, const std::string& episodes_path) {
    std::ifstream in(episodes_path);
    if (!in) throw IoError("cannot open: " + episodes_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::vector<EpisodeSummary> summaries = parse_episodes_csv(buffer.str());

    const fs::path out = resolve_out_dir(args.out_dir);
    ensure_dir(out);
    std::vector<double> reward, actions;
    for (const EpisodeSummary& s : summaries) {
        reward.push_back(s.total_reward);
        actions.push_back(static_cast<double>(s.action_count));
    }
    const std::string stem = fs::path(episodes_path).stem().string();
    if (!summaries.empty()) {
        write_line_plot(out / (stem + "_reward.png"), reward);
        write_line_plot(out / (stem + "_actions.png"), actions);
        std::printf("wrote %s_{reward,actions}.png under %s (%zu episodes)\n", stem.c_str(),
                    out.string().c_str(), summaries.size());
    } else {
        std::printf("no episodes in %s, nothing to plot\n", episodes_path.c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic attentional-agent simulator and trainer"};
    app.require_subcommand(1);

    CommonArgs args;
    int substage = 1;
    std::string memory_path, scenario_path, scene_path, episodes_path;
    int resolution = 256;
    double pitch = 0.0, yaw = 0.0, hfov_deg = 60.0;
    bool dump_feature_maps = false;
    std::uint64_t seed_value = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd, bool with_config = true) {
        if (with_config)
            cmd->add_option("--config", args.config_path, "Configuration file");
        cmd->add_option("-o,--out", args.out_dir,
                        "Output directory (default: $COGSIM_OUTPUT_DIR or ./out)");
        cmd->add_option("--seed", seed_value, "Seed override")
            ->each([&](const std::string&) { seed_set = true; });
    };

    CLI::App* train = app.add_subcommand("train", "Train a single substage");
    add_common(train);
    train->add_option("--substage", substage, "Substage to train (1-3)")
        ->check(CLI::Range(1, 3))
        ->required();
    train->add_option("--memory", memory_path, "Prior memory to transfer from (.pmem)");
    train->add_flag("--fast", args.fast, "Desk-scale preset (60 episodes, 150 steps)");
    train->add_flag("--no-transfer", args.no_transfer, "Ignore any prior memory");
    train->add_flag("--dump-maps", args.dump_maps, "Dump per-cycle pipeline maps");
    train->add_flag("--trace", args.trace, "Write the per-step decision trace CSV");

    CLI::App* chain = app.add_subcommand("chain", "Train substages 1-3 incrementally");
    add_common(chain);
    chain->add_flag("--fast", args.fast, "Desk-scale preset (60 episodes, 150 steps)");
    chain->add_flag("--no-transfer", args.no_transfer,
                    "Train each substage from scratch (comparison runs)");
    chain->add_flag("--dump-maps", args.dump_maps, "Dump per-cycle pipeline maps");
    chain->add_flag("--trace", args.trace, "Write the per-step decision trace CSV");

    CLI::App* validate = app.add_subcommand("validate", "Frozen-policy scenario evaluation");
    add_common(validate);
    validate->add_option("--memory", memory_path, "Trained memory (.pmem)")->required();
    validate->add_option("--scenario", scenario_path, "Scenario file")->required();

    CLI::App* inspect = app.add_subcommand("inspect", "Summarize a memory file");
    add_common(inspect, false);
    inspect->add_option("--memory", memory_path, "Memory file (.pmem)")->required();

    CLI::App* render = app.add_subcommand("render", "Render a scene preview to PNG");
    add_common(render, false);
    render->add_option("--scene", scene_path, "Scene file (default: built-in scene)");
    render->add_option("--resolution", resolution, "64, 128 or 256")
        ->check(CLI::IsMember({64, 128, 256}));
    render->add_option("--pitch", pitch, "Head pitch in radians");
    render->add_option("--yaw", yaw, "Head yaw in radians");
    render->add_option("--hfov", hfov_deg, "Horizontal field of view in degrees");
    render->add_flag("--maps", dump_feature_maps, "Also dump the bottom-up feature maps");

    CLI::App* export_cmd = app.add_subcommand("export", "Re-plot an episodes CSV");
    add_common(export_cmd, false);
    export_cmd->add_option("--episodes", episodes_path, "episodes CSV produced by train/chain")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }

    if (seed_set) args.seed = seed_value;

    try {
        if (train->parsed()) return cmd_train(args, substage, memory_path);
        if (chain->parsed()) return cmd_chain(args);
        if (validate->parsed()) return cmd_validate(args, memory_path, scenario_path);
        if (inspect->parsed()) return cmd_inspect(args, memory_path);
        if (render->parsed())
            return cmd_render(args, scene_path, resolution, pitch, yaw, hfov_deg,
                              dump_feature_maps);
        if (export_cmd->parsed()) return cmd_export(args, episodes_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const MalformedMemoryError& e) {
        std::cerr << "error: io: " << e.what() << " (offset " << e.offset << ")\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
