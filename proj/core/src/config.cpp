#include "cogsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cogsim {

const char* const kArtifactVersion = "0.1.0";

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Cut a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        else if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

} // namespace

ConfigFile ConfigFile::parse_string(std::string text, std::string origin) {
    ConfigFile file;
    file.origin_ = std::move(origin);
    file.sections_.push_back(Section{"", 0, {}});
    Section* current = &file.sections_.front();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            bool repeated = line.size() > 1 && line[1] == '[';
            const std::string close = repeated ? "]]" : "]";
            if (!line.ends_with(close))
                file.fail(line_no, "malformed section header '" + line + "'");
            std::string name = trim(line.substr(repeated ? 2 : 1,
                                                line.size() - (repeated ? 4 : 2)));
            if (name.empty()) file.fail(line_no, "empty section name");
            file.sections_.push_back(Section{name, line_no, {}});
            current = &file.sections_.back();
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            file.fail(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string text_value = trim(line.substr(eq + 1));
        if (key.empty()) file.fail(line_no, "empty key");
        if (text_value.empty()) file.fail(line_no, "missing value for key '" + key + "'");
        if (current->values.contains(key))
            file.fail(line_no, "duplicate key '" + key + "'");

        Value value;
        value.line = line_no;
        if (text_value.front() == '"') {
            if (text_value.size() < 2 || !text_value.ends_with('"'))
                file.fail(line_no, "unterminated string for key '" + key + "'");
            value.kind = Value::Kind::string;
            value.str = text_value.substr(1, text_value.size() - 2);
        } else if (text_value == "true" || text_value == "false") {
            value.kind = Value::Kind::boolean;
            value.flag = text_value == "true";
        } else if (text_value.front() == '[') {
            if (!text_value.ends_with(']'))
                file.fail(line_no, "unterminated array for key '" + key + "'");
            value.kind = Value::Kind::array;
            std::string body = trim(text_value.substr(1, text_value.size() - 2));
            if (!body.empty()) {
                std::size_t start = 0;
                while (start <= body.size()) {
                    std::size_t comma = body.find(',', start);
                    std::string item = trim(comma == std::string::npos
                                                ? body.substr(start)
                                                : body.substr(start, comma - start));
                    if (item.empty())
                        file.fail(line_no, "empty array element for key '" + key + "'");
                    if (item.front() == '"') {
                        if (item.size() < 2 || !item.ends_with('"'))
                            file.fail(line_no, "unterminated string in array '" + key + "'");
                        value.arr_str.push_back(item.substr(1, item.size() - 2));
                        value.arr_is_num = false;
                    } else {
                        double num = 0.0;
                        if (!parse_number(item, num))
                            file.fail(line_no, "bad array element '" + item + "' for key '" + key + "'");
                        value.arr_num.push_back(num);
                        value.arr_str.push_back(item);
                    }
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                if (!value.arr_is_num && !value.arr_num.empty() &&
                    value.arr_num.size() != value.arr_str.size())
                    file.fail(line_no, "mixed string/number array for key '" + key + "'");
            }
        } else {
            double num = 0.0;
            if (!parse_number(text_value, num))
                file.fail(line_no, "bad value '" + text_value + "' for key '" + key + "'");
            value.kind = Value::Kind::number;
            value.num = num;
        }
        current->values.emplace(key, std::move(value));
    }
    return file;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path.string());
}

const ConfigFile::Section* ConfigFile::find(const std::string& name) const {
    for (const Section& s : sections_)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<const ConfigFile::Section*> ConfigFile::find_all(const std::string& name) const {
    std::vector<const Section*> out;
    for (const Section& s : sections_)
        if (s.name == name) out.push_back(&s);
    return out;
}

void ConfigFile::fail(int line, const std::string& message) const {
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + message);
}

void ConfigFile::check_known_sections(const std::vector<std::string>& known) const {
    for (const Section& s : sections_) {
        if (s.name.empty() && s.values.empty()) continue; // implicit top-level
        if (std::find(known.begin(), known.end(), s.name) == known.end())
            fail(s.line, "unknown section [" + s.name + "]");
    }
}

void ConfigFile::check_known_keys(const std::string& section,
                                  const std::vector<std::string>& known) const {
    for (const Section& s : sections_) {
        if (s.name != section) continue;
        for (const auto& [key, value] : s.values) {
            if (std::find(known.begin(), known.end(), key) == known.end())
                fail(value.line, "unknown key '" + key + "' in section [" +
                                     (section.empty() ? "(top)" : section) + "]");
        }
    }
}

namespace {

const ConfigFile::Value& require(const ConfigFile& file, const ConfigFile::Section& s,
                                 const std::string& key) {
    auto it = s.values.find(key);
    if (it == s.values.end())
        file.fail(s.line, "missing required key '" + key + "' in section [" + s.name + "]");
    return it->second;
}

} // namespace

double ConfigFile::Section::number(const ConfigFile& file, const std::string& key) const {
    const Value& v = require(file, *this, key);
    if (v.kind != Value::Kind::number)
        file.fail(v.line, "key '" + key + "' must be a number");
    return v.num;
}

double ConfigFile::Section::number_or(const ConfigFile& file, const std::string& key,
                                      double fallback) const {
    return has(key) ? number(file, key) : fallback;
}

int ConfigFile::Section::integer(const ConfigFile& file, const std::string& key) const {
    const double v = number(file, key);
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9)
        file.fail(values.at(key).line, "key '" + key + "' must be an integer");
    return static_cast<int>(rounded);
}

int ConfigFile::Section::integer_or(const ConfigFile& file, const std::string& key,
                                    int fallback) const {
    return has(key) ? integer(file, key) : fallback;
}

bool ConfigFile::Section::boolean_or(const ConfigFile& file, const std::string& key,
                                     bool fallback) const {
    if (!has(key)) return fallback;
    const Value& v = values.at(key);
    if (v.kind != Value::Kind::boolean)
        file.fail(v.line, "key '" + key + "' must be true or false");
    return v.flag;
}

std::string ConfigFile::Section::string(const ConfigFile& file, const std::string& key) const {
    const Value& v = require(file, *this, key);
    if (v.kind != Value::Kind::string)
        file.fail(v.line, "key '" + key + "' must be a quoted string");
    return v.str;
}

std::string ConfigFile::Section::string_or(const ConfigFile& file, const std::string& key,
                                           const std::string& fallback) const {
    return has(key) ? string(file, key) : fallback;
}

std::vector<double> ConfigFile::Section::numbers(const ConfigFile& file,
                                                 const std::string& key) const {
    const Value& v = require(file, *this, key);
    if (v.kind != Value::Kind::array || !v.arr_is_num)
        file.fail(v.line, "key '" + key + "' must be an array of numbers");
    return v.arr_num;
}

std::vector<std::string> ConfigFile::Section::strings(const ConfigFile& file,
                                                      const std::string& key) const {
    const Value& v = require(file, *this, key);
    if (v.kind != Value::Kind::array)
        file.fail(v.line, "key '" + key + "' must be an array");
    return v.arr_str;
}

// --- Substage configuration ---

SubstageConfig substage_defaults(int substage) {
    SubstageConfig cfg;
    cfg.substage = substage;
    cfg.enabled_actions = enabled_action_ids(substage);
    cfg.enabled_maps = {MapKind::red, MapKind::green, MapKind::blue, MapKind::depth};
    switch (substage) {
        case 1:
            break;
        case 2:
            cfg.resolution = 128;
            cfg.motivation_on = true;
            cfg.fine_motor = true;
            cfg.hfov_deg = 75.0;
            break;
        case 3:
            cfg.resolution = 256;
            cfg.motivation_on = true;
            cfg.fine_motor = true;
            cfg.hfov_deg = 75.0;
            cfg.reward.w_topdown = 1.0;
            cfg.enabled_maps.insert(cfg.enabled_maps.end(),
                                    {MapKind::color, MapKind::dist, MapKind::reg});
            break;
        default:
            throw ConfigError("substage must be 1, 2 or 3, got " + std::to_string(substage));
    }
    return cfg;
}

namespace {

const std::vector<std::string> kSubstageKeys = {
    "resolution",    "max_episodes",   "max_steps",        "max_no_salience",
    "alpha",         "gamma",          "exploration_start", "curiosity_weight",
    "coarse_step",   "fine_step",      "fine_motor",       "hfov_deg",
    "pitch_limit",   "yaw_limit",      "start_jitter",     "step_dt",
    "winner_threshold", "ior_floor",   "ior_cycles",       "binarize_floor",
    "seed",          "motivation",     "actions",          "maps",
    "w_new_schema",  "w_sync",         "w_topdown",        "penalty_catastrophic",
    "goal_color",    "goal_distance",  "goal_region",      "scene",
};

void apply_section(const ConfigFile& file, const ConfigFile::Section& s, SubstageConfig& cfg) {
    cfg.resolution = s.integer_or(file, "resolution", cfg.resolution);
    cfg.max_episodes = s.integer_or(file, "max_episodes", cfg.max_episodes);
    cfg.max_steps = s.integer_or(file, "max_steps", cfg.max_steps);
    cfg.max_no_salience = s.integer_or(file, "max_no_salience", cfg.max_no_salience);
    cfg.alpha = s.number_or(file, "alpha", cfg.alpha);
    cfg.gamma = s.number_or(file, "gamma", cfg.gamma);
    cfg.exploration_start = s.number_or(file, "exploration_start", cfg.exploration_start);
    cfg.curiosity_weight = s.number_or(file, "curiosity_weight", cfg.curiosity_weight);
    cfg.coarse_step = s.number_or(file, "coarse_step", cfg.coarse_step);
    cfg.fine_step = s.number_or(file, "fine_step", cfg.fine_step);
    cfg.fine_motor = s.boolean_or(file, "fine_motor", cfg.fine_motor);
    cfg.hfov_deg = s.number_or(file, "hfov_deg", cfg.hfov_deg);
    cfg.pitch_limit = s.number_or(file, "pitch_limit", cfg.pitch_limit);
    cfg.yaw_limit = s.number_or(file, "yaw_limit", cfg.yaw_limit);
    cfg.start_jitter = s.number_or(file, "start_jitter", cfg.start_jitter);
    cfg.step_dt = s.number_or(file, "step_dt", cfg.step_dt);
    cfg.winner_threshold = s.number_or(file, "winner_threshold", cfg.winner_threshold);
    cfg.ior_floor = s.number_or(file, "ior_floor", cfg.ior_floor);
    cfg.ior_cycles = s.integer_or(file, "ior_cycles", cfg.ior_cycles);
    cfg.binarize_floor = s.number_or(file, "binarize_floor", cfg.binarize_floor);
    cfg.motivation_on = s.boolean_or(file, "motivation", cfg.motivation_on);
    if (s.has("seed"))
        cfg.seed = static_cast<std::uint64_t>(s.number(file, "seed"));
    if (s.has("actions")) {
        cfg.enabled_actions.clear();
        for (double id : s.numbers(file, "actions")) {
            const int action = static_cast<int>(id);
            if (action < 1 || action > kActionCount)
                file.fail(s.values.at("actions").line,
                          "action id out of range: " + std::to_string(action));
            cfg.enabled_actions.push_back(action);
        }
        std::sort(cfg.enabled_actions.begin(), cfg.enabled_actions.end());
        cfg.enabled_actions.erase(
            std::unique(cfg.enabled_actions.begin(), cfg.enabled_actions.end()),
            cfg.enabled_actions.end());
        if (cfg.enabled_actions.empty())
            file.fail(s.values.at("actions").line, "empty action set");
    }
    if (s.has("maps")) {
        cfg.enabled_maps.clear();
        for (const std::string& name : s.strings(file, "maps")) {
            const auto kind = map_kind_from_string(name);
            if (!kind)
                file.fail(s.values.at("maps").line, "unknown map kind '" + name + "'");
            cfg.enabled_maps.push_back(*kind);
        }
    }
    cfg.reward.w_new_schema = s.number_or(file, "w_new_schema", cfg.reward.w_new_schema);
    cfg.reward.w_sync = s.number_or(file, "w_sync", cfg.reward.w_sync);
    cfg.reward.w_topdown = s.number_or(file, "w_topdown", cfg.reward.w_topdown);
    cfg.reward.penalty_catastrophic =
        s.number_or(file, "penalty_catastrophic", cfg.reward.penalty_catastrophic);
    if (s.has("goal_color")) {
        const auto rgb = s.numbers(file, "goal_color");
        if (rgb.size() != 3)
            file.fail(s.values.at("goal_color").line, "goal_color needs exactly [r, g, b]");
        if (!cfg.goal) cfg.goal.emplace();
        cfg.goal->target_color = Color{static_cast<float>(rgb[0]), static_cast<float>(rgb[1]),
                                       static_cast<float>(rgb[2])};
    }
    if (s.has("goal_distance")) {
        if (!cfg.goal) cfg.goal.emplace();
        cfg.goal->target_distance = s.number(file, "goal_distance");
    }
    if (s.has("goal_region")) {
        if (!cfg.goal) cfg.goal.emplace();
        const int zone = s.integer(file, "goal_region");
        if (zone < 1 || zone > kFoveaZoneCount)
            file.fail(s.values.at("goal_region").line, "goal_region must be in 1..5");
        cfg.goal->target_region = zone;
    }
}

void validate_substage(const SubstageConfig& cfg) {
    if (cfg.resolution != 64 && cfg.resolution != 128 && cfg.resolution != 256)
        throw ConfigError("resolution must be 64, 128 or 256, got " +
                          std::to_string(cfg.resolution));
    const bool has_bottom_up =
        std::any_of(cfg.enabled_maps.begin(), cfg.enabled_maps.end(),
                    [](MapKind kind) { return !is_top_down(kind); });
    if (!has_bottom_up)
        throw ConfigError("maps must include at least one bottom-up kind (R, G, B, D)");
    if (cfg.max_episodes < 1) throw ConfigError("max_episodes must be positive");
    if (cfg.max_steps < 1) throw ConfigError("max_steps must be positive");
    if (cfg.max_no_salience < 1) throw ConfigError("max_no_salience must be positive");
    if (cfg.step_dt <= 0.0) throw ConfigError("step_dt must be positive");
    if (cfg.ior_cycles < 1) throw ConfigError("ior_cycles must be positive");
    if (cfg.ior_floor <= 0.0 || cfg.ior_floor >= 1.0)
        throw ConfigError("ior_floor must lie strictly between 0 and 1");
}

} // namespace

SubstageConfig load_substage_config(const ConfigFile& file, int substage) {
    SubstageConfig cfg = substage_defaults(substage);
    file.check_known_keys("common", kSubstageKeys);
    for (int n = 1; n <= 3; ++n)
        file.check_known_keys("substage" + std::to_string(n), kSubstageKeys);
    if (const auto* common = file.find("common")) apply_section(file, *common, cfg);
    if (const auto* own = file.find("substage" + std::to_string(substage)))
        apply_section(file, *own, cfg);
    validate_substage(cfg);
    return cfg;
}

ChainConfig load_chain_config(const ConfigFile& file) {
    file.check_known_sections({"", "invocation", "common", "substage1", "substage2",
                               "substage3", "scene", "scene.camera", "scene.distractor",
                               "scene.block"});
    file.check_known_keys("invocation", {"verb", "artifact_version", "seed", "fast",
                                         "no_transfer", "dump_maps", "trace"});
    ChainConfig chain;
    for (int n = 1; n <= 3; ++n) chain.substages[n - 1] = load_substage_config(file, n);

    // Scene: external file, inline [scene] sections, or built-in defaults.
    const auto* common = file.find("common");
    if (common && common->has("scene")) {
        std::filesystem::path path = common->string(file, "scene");
        if (path.is_relative() && !file.origin().empty() && file.origin() != "<string>")
            path = std::filesystem::path(file.origin()).parent_path() / path;
        chain.scene = load_scene_file(path);
    } else if (file.find("scene")) {
        chain.scene = load_scene(file);
    }
    return chain;
}

void apply_fast_preset(SubstageConfig& cfg) {
    cfg.max_episodes = 60;
    cfg.max_steps = 150;
}

// --- Scene files ---

namespace {

Color color_from(const ConfigFile& file, const ConfigFile::Section& s, const std::string& key,
                 Color fallback) {
    if (!s.has(key)) return fallback;
    const auto rgb = s.numbers(file, key);
    if (rgb.size() != 3) file.fail(s.values.at(key).line, key + " needs exactly [r, g, b]");
    return Color{static_cast<float>(rgb[0]), static_cast<float>(rgb[1]),
                 static_cast<float>(rgb[2])};
}

SceneSpec load_scene_sections(const ConfigFile& file, const std::string& prefix) {
    SceneSpec scene;
    const std::string root = prefix.empty() ? "" : prefix;
    const std::string camera_name = prefix.empty() ? "camera" : prefix + ".camera";
    const std::string distractor_name = prefix.empty() ? "distractor" : prefix + ".distractor";
    const std::string block_name = prefix.empty() ? "block" : prefix + ".block";

    file.check_known_keys(root, {"arena_half_extent", "seed", "block_count"});
    file.check_known_keys(camera_name, {"x", "y", "height"});
    file.check_known_keys(distractor_name,
                          {"x", "y", "heading", "speed", "radius", "color", "present"});
    file.check_known_keys(block_name, {"x", "y", "radius", "color"});

    if (const auto* s = file.find(root)) {
        scene.arena_half_extent = s->number_or(file, "arena_half_extent", scene.arena_half_extent);
        if (s->has("seed")) scene.seed = static_cast<std::uint64_t>(s->number(file, "seed"));
        scene.block_count = s->integer_or(file, "block_count", scene.block_count);
    }
    if (const auto* s = file.find(camera_name)) {
        scene.camera.position.x = s->number_or(file, "x", scene.camera.position.x);
        scene.camera.position.y = s->number_or(file, "y", scene.camera.position.y);
        scene.camera.height = s->number_or(file, "height", scene.camera.height);
    }
    if (const auto* s = file.find(distractor_name)) {
        scene.distractor.position.x = s->number_or(file, "x", scene.distractor.position.x);
        scene.distractor.position.y = s->number_or(file, "y", scene.distractor.position.y);
        scene.distractor.heading = s->number_or(file, "heading", scene.distractor.heading);
        scene.distractor.speed = s->number_or(file, "speed", scene.distractor.speed);
        scene.distractor.radius = s->number_or(file, "radius", scene.distractor.radius);
        scene.distractor.color = color_from(file, *s, "color", scene.distractor.color);
        scene.distractor.present = s->boolean_or(file, "present", scene.distractor.present);
    }
    for (const auto* s : file.find_all(block_name)) {
        Block block;
        block.position.x = s->number(file, "x");
        block.position.y = s->number(file, "y");
        block.radius = s->number_or(file, "radius", block.radius);
        block.color = color_from(file, *s, "color", Color{0.1f, 0.25f, 1.0f});
        scene.blocks.push_back(block);
    }
    if (scene.arena_half_extent <= 0.0)
        throw ConfigError("arena_half_extent must be positive");
    return scene;
}

} // namespace

SceneSpec load_scene(const ConfigFile& file) { return load_scene_sections(file, "scene"); }

SceneSpec load_scene_file(const std::filesystem::path& path) {
    const ConfigFile file = ConfigFile::parse_file(path);
    file.check_known_sections({"", "camera", "distractor", "block"});
    return load_scene_sections(file, "");
}

// --- Validation scenarios ---

ScenarioSpec load_scenario_file(const std::filesystem::path& path) {
    const ConfigFile file = ConfigFile::parse_file(path);
    file.check_known_sections({"", "scenario"});
    file.check_known_keys("scenario", {"name", "substage", "distance", "bearing_deg",
                                       "bearing_jitter_deg", "speed", "motion", "episodes",
                                       "seed"});
    const auto* s = file.find("scenario");
    if (!s) throw ConfigError(path.string() + ": missing [scenario] section");

    ScenarioSpec spec;
    spec.name = s->string_or(file, "name", path.stem().string());
    spec.substage = s->integer_or(file, "substage", spec.substage);
    if (spec.substage < 1 || spec.substage > 3)
        file.fail(s->line, "substage must be 1, 2 or 3");
    spec.distance = s->number_or(file, "distance", spec.distance);
    spec.bearing_deg = s->number_or(file, "bearing_deg", spec.bearing_deg);
    spec.bearing_jitter_deg = s->number_or(file, "bearing_jitter_deg", spec.bearing_jitter_deg);
    spec.speed = s->number_or(file, "speed", spec.speed);
    spec.episodes = s->integer_or(file, "episodes", spec.episodes);
    if (s->has("seed")) spec.seed = static_cast<std::uint64_t>(s->number(file, "seed"));
    const std::string motion = s->string_or(file, "motion", "fixed");
    if (motion == "fixed") spec.motion = DistractorMotion::fixed;
    else if (motion == "wander") spec.motion = DistractorMotion::wander;
    else if (motion == "crossing") spec.motion = DistractorMotion::crossing;
    else file.fail(s->values.at("motion").line, "motion must be fixed, wander or crossing");
    return spec;
}

// --- Manifest ---

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void emit_substage(std::string& out, const SubstageConfig& cfg) {
    out += "[substage" + std::to_string(cfg.substage) + "]\n";
    out += "resolution = " + std::to_string(cfg.resolution) + "\n";
    out += "actions = [";
    for (std::size_t i = 0; i < cfg.enabled_actions.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(cfg.enabled_actions[i]);
    }
    out += "]\n";
    out += "maps = [";
    for (std::size_t i = 0; i < cfg.enabled_maps.size(); ++i) {
        if (i) out += ", ";
        out += std::string("\"") + to_string(cfg.enabled_maps[i]) + "\"";
    }
    out += "]\n";
    out += "motivation = " + std::string(cfg.motivation_on ? "true" : "false") + "\n";
    out += "max_episodes = " + std::to_string(cfg.max_episodes) + "\n";
    out += "max_steps = " + std::to_string(cfg.max_steps) + "\n";
    out += "max_no_salience = " + std::to_string(cfg.max_no_salience) + "\n";
    out += "alpha = " + format_double(cfg.alpha) + "\n";
    out += "gamma = " + format_double(cfg.gamma) + "\n";
    out += "exploration_start = " + format_double(cfg.exploration_start) + "\n";
    out += "curiosity_weight = " + format_double(cfg.curiosity_weight) + "\n";
    out += "coarse_step = " + format_double(cfg.coarse_step) + "\n";
    out += "fine_step = " + format_double(cfg.fine_step) + "\n";
    out += "fine_motor = " + std::string(cfg.fine_motor ? "true" : "false") + "\n";
    out += "hfov_deg = " + format_double(cfg.hfov_deg) + "\n";
    out += "pitch_limit = " + format_double(cfg.pitch_limit) + "\n";
    out += "yaw_limit = " + format_double(cfg.yaw_limit) + "\n";
    out += "start_jitter = " + format_double(cfg.start_jitter) + "\n";
    out += "step_dt = " + format_double(cfg.step_dt) + "\n";
    out += "winner_threshold = " + format_double(cfg.winner_threshold) + "\n";
    out += "ior_floor = " + format_double(cfg.ior_floor) + "\n";
    out += "ior_cycles = " + std::to_string(cfg.ior_cycles) + "\n";
    out += "binarize_floor = " + format_double(cfg.binarize_floor) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "w_new_schema = " + format_double(cfg.reward.w_new_schema) + "\n";
    out += "w_sync = " + format_double(cfg.reward.w_sync) + "\n";
    out += "w_topdown = " + format_double(cfg.reward.w_topdown) + "\n";
    out += "penalty_catastrophic = " + format_double(cfg.reward.penalty_catastrophic) + "\n";
    if (cfg.goal) {
        if (cfg.goal->target_color) {
            const Color& c = *cfg.goal->target_color;
            out += "goal_color = [" + format_double(c.r) + ", " + format_double(c.g) + ", " +
                   format_double(c.b) + "]\n";
        }
        if (cfg.goal->target_distance)
            out += "goal_distance = " + format_double(*cfg.goal->target_distance) + "\n";
        if (cfg.goal->target_region)
            out += "goal_region = " + std::to_string(*cfg.goal->target_region) + "\n";
    }
    out += "\n";
}

void emit_color(std::string& out, const char* key, const Color& c) {
    out += std::string(key) + " = [" + format_double(c.r) + ", " + format_double(c.g) + ", " +
           format_double(c.b) + "]\n";
}

} // namespace

std::string manifest_text(const InvocationInfo& invocation, const ChainConfig& config) {
    std::string out;
    out += "[invocation]\n";
    out += "verb = \"" + invocation.verb + "\"\n";
    out += "artifact_version = \"" + std::string(kArtifactVersion) + "\"\n";
    out += "seed = " + std::to_string(invocation.seed) + "\n";
    out += "fast = " + std::string(invocation.fast ? "true" : "false") + "\n";
    out += "no_transfer = " + std::string(invocation.no_transfer ? "true" : "false") + "\n";
    out += "dump_maps = " + std::string(invocation.dump_maps ? "true" : "false") + "\n";
    out += "trace = " + std::string(invocation.trace ? "true" : "false") + "\n\n";

    for (const SubstageConfig& cfg : config.substages) emit_substage(out, cfg);

    const SceneSpec& scene = config.scene;
    out += "[scene]\n";
    out += "arena_half_extent = " + format_double(scene.arena_half_extent) + "\n";
    out += "seed = " + std::to_string(scene.seed) + "\n";
    out += "block_count = " + std::to_string(scene.block_count) + "\n\n";
    out += "[scene.camera]\n";
    out += "x = " + format_double(scene.camera.position.x) + "\n";
    out += "y = " + format_double(scene.camera.position.y) + "\n";
    out += "height = " + format_double(scene.camera.height) + "\n\n";
    out += "[scene.distractor]\n";
    out += "x = " + format_double(scene.distractor.position.x) + "\n";
    out += "y = " + format_double(scene.distractor.position.y) + "\n";
    out += "heading = " + format_double(scene.distractor.heading) + "\n";
    out += "speed = " + format_double(scene.distractor.speed) + "\n";
    out += "radius = " + format_double(scene.distractor.radius) + "\n";
    emit_color(out, "color", scene.distractor.color);
    out += "present = " + std::string(scene.distractor.present ? "true" : "false") + "\n\n";

    // Blocks are written out fully resolved so the manifest is self-contained.
    const std::vector<Block> blocks =
        scene.blocks.empty() ? generate_blocks(scene) : scene.blocks;
    for (const Block& block : blocks) {
        out += "[[scene.block]]\n";
        out += "x = " + format_double(block.position.x) + "\n";
        out += "y = " + format_double(block.position.y) + "\n";
        out += "radius = " + format_double(block.radius) + "\n";
        emit_color(out, "color", block.color);
        out += "\n";
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace cogsim
