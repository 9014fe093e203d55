#pragma once
#include "cogsim/attention.hpp"
#include "cogsim/errors.hpp"
#include "cogsim/learning.hpp"
#include "cogsim/world.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cogsim {

// Minimal TOML-style reader: `[section]`, `[[repeated.section]]`,
// `key = value` with strings, numbers, booleans and flat arrays. Enough for
// every file format this project reads and writes.
class ConfigFile {
public:
    struct Value {
        enum class Kind { string, number, boolean, array };
        Kind kind = Kind::number;
        std::string str;
        double num = 0.0;
        bool flag = false;
        std::vector<std::string> arr_str;
        std::vector<double> arr_num;
        bool arr_is_num = true;
        int line = 0;
    };

    struct Section {
        std::string name; // "" for the top-level key space
        int line = 0;
        std::map<std::string, Value> values;

        bool has(const std::string& key) const { return values.contains(key); }
        double number(const ConfigFile& file, const std::string& key) const;
        double number_or(const ConfigFile& file, const std::string& key, double fallback) const;
        int integer(const ConfigFile& file, const std::string& key) const;
        int integer_or(const ConfigFile& file, const std::string& key, int fallback) const;
        bool boolean_or(const ConfigFile& file, const std::string& key, bool fallback) const;
        std::string string(const ConfigFile& file, const std::string& key) const;
        std::string string_or(const ConfigFile& file, const std::string& key,
                              const std::string& fallback) const;
        std::vector<double> numbers(const ConfigFile& file, const std::string& key) const;
        std::vector<std::string> strings(const ConfigFile& file, const std::string& key) const;
    };

    static ConfigFile parse_file(const std::filesystem::path& path);
    static ConfigFile parse_string(std::string text, std::string origin);

    const std::string& origin() const { return origin_; }

    // First section with this name, or nullptr.
    const Section* find(const std::string& name) const;
    // All sections with this name, in file order (for [[repeated]] tables).
    std::vector<const Section*> find_all(const std::string& name) const;

    [[noreturn]] void fail(int line, const std::string& message) const;

    // Throws when a present section holds a key outside `known`.
    void check_known_keys(const std::string& section,
                          const std::vector<std::string>& known) const;

    // Throws on sections whose name is not in `known`.
    void check_known_sections(const std::vector<std::string>& known) const;

private:
    std::string origin_;
    std::vector<Section> sections_;
};

// --- Substage configuration ---

struct SubstageConfig {
    int substage = 1;
    int resolution = 64;
    std::vector<int> enabled_actions; // ascending ids
    std::vector<MapKind> enabled_maps;
    bool motivation_on = false;
    RewardConfig reward;
    std::optional<GoalSpec> goal;
    int max_episodes = 200;
    int max_steps = 500;
    int max_no_salience = 5;
    double alpha = 0.9;
    double gamma = 0.99;
    double exploration_start = 0.95;
    double curiosity_weight = 0.2;
    double coarse_step = 0.10;
    double fine_step = 0.05;
    bool fine_motor = false;
    double hfov_deg = 60.0;
    double pitch_limit = 0.6;
    double yaw_limit = 1.2;
    double start_jitter = 0.05;
    double step_dt = 0.25;
    double winner_threshold = 0.01;
    double ior_floor = 0.2;
    int ior_cycles = 5;
    double binarize_floor = 0.01;
    std::uint64_t seed = 1;

    double motor_step() const { return fine_motor ? fine_step : coarse_step; }
    Camera camera() const { return Camera{resolution, radians(hfov_deg)}; }
};

// Built-in per-substage defaults (resolution, action set, maps, motivation,
// reward terms, field of view, motor discretization).
SubstageConfig substage_defaults(int substage);

struct ChainConfig {
    SubstageConfig substages[3] = {substage_defaults(1), substage_defaults(2),
                                   substage_defaults(3)};
    SceneSpec scene;
};

// Reads [common] plus [substageN] overrides; missing keys keep defaults.
SubstageConfig load_substage_config(const ConfigFile& file, int substage);
ChainConfig load_chain_config(const ConfigFile& file);

// Applies the desk-scale profile (60 episodes, 150 steps).
void apply_fast_preset(SubstageConfig& cfg);

// --- Scene files ---

SceneSpec load_scene(const ConfigFile& file);
SceneSpec load_scene_file(const std::filesystem::path& path);

// --- Validation scenarios ---

enum class DistractorMotion { fixed, wander, crossing };

struct ScenarioSpec {
    std::string name = "scenario";
    int substage = 1;
    double distance = 0.8;     // meters from the camera mount
    double bearing_deg = 0.0;  // relative to the home gaze
    double bearing_jitter_deg = 5.0;
    double speed = 0.0;
    DistractorMotion motion = DistractorMotion::fixed;
    int episodes = 100;
    std::uint64_t seed = 1;
};

ScenarioSpec load_scenario_file(const std::filesystem::path& path);

// --- Manifest ---

// Fully resolved invocation record. Re-running the recorded verb with the
// manifest as its config file reproduces the outputs byte for byte.
struct InvocationInfo {
    std::string verb;
    std::uint64_t seed = 1;
    bool fast = false;
    bool no_transfer = false;
    bool dump_maps = false;
    bool trace = false;
};

std::string manifest_text(const InvocationInfo& invocation, const ChainConfig& config);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string format_double(double v);

extern const char* const kArtifactVersion;

} // namespace cogsim
