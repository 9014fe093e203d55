#include "cogsim/config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace cogsim;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::trunc);
    out << text;
    return path;
}

} // namespace

TEST_CASE("defaults match the protocol constants") {
    for (int substage : {1, 2, 3}) {
        const SubstageConfig cfg = substage_defaults(substage);
        CHECK(cfg.max_episodes == 200);
        CHECK(cfg.max_steps == 500);
        CHECK(cfg.max_no_salience == 5);
        CHECK(cfg.alpha == doctest::Approx(0.9));
        CHECK(cfg.gamma == doctest::Approx(0.99));
        CHECK(cfg.exploration_start == doctest::Approx(0.95));
    }
    const SubstageConfig s1 = substage_defaults(1);
    CHECK(s1.resolution == 64);
    CHECK(s1.enabled_actions.size() == 10);
    CHECK(s1.enabled_maps.size() == 4);
    CHECK_FALSE(s1.motivation_on);
    CHECK(s1.reward.w_topdown == 0.0);

    const SubstageConfig s2 = substage_defaults(2);
    CHECK(s2.resolution == 128);
    CHECK(s2.enabled_actions.size() == 10);
    CHECK(s2.motivation_on);
    CHECK(s2.fine_motor);
    CHECK(s2.reward.w_topdown == 0.0);

    const SubstageConfig s3 = substage_defaults(3);
    CHECK(s3.resolution == 256);
    CHECK(s3.enabled_actions.size() == 17);
    CHECK(s3.enabled_maps.size() == 7);
    CHECK(s3.motivation_on);
    CHECK(s3.reward.w_topdown == 1.0);
}

TEST_CASE("an empty config file parses to pure defaults") {
    const auto path = temp_file("cogsim_empty.toml", "# nothing here\n");
    const ConfigFile file = ConfigFile::parse_file(path);
    const ChainConfig chain = load_chain_config(file);
    CHECK(chain.substages[0].max_episodes == 200);
    CHECK(chain.substages[2].resolution == 256);
    CHECK(chain.scene.arena_half_extent == doctest::Approx(2.0));
}

TEST_CASE("overrides cascade from common to the substage section") {
    const auto path = temp_file("cogsim_override.toml",
                                "[common]\n"
                                "seed = 9\n"
                                "max_episodes = 50\n"
                                "[substage2]\n"
                                "max_episodes = 75\n"
                                "hfov_deg = 70\n");
    const ChainConfig chain = load_chain_config(ConfigFile::parse_file(path));
    CHECK(chain.substages[0].max_episodes == 50);
    CHECK(chain.substages[1].max_episodes == 75);
    CHECK(chain.substages[1].hfov_deg == doctest::Approx(70));
    CHECK(chain.substages[2].max_episodes == 50);
    for (const auto& cfg : chain.substages) CHECK(cfg.seed == 9);
}

TEST_CASE("schema violations carry the file name and line number") {
    SUBCASE("unknown key") {
        const auto path = temp_file("cogsim_badkey.toml", "[common]\nalpa = 0.9\n");
        try {
            load_chain_config(ConfigFile::parse_file(path));
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("cogsim_badkey.toml:2") != std::string::npos);
            CHECK(msg.find("alpa") != std::string::npos);
        }
    }
    SUBCASE("unknown section") {
        const auto path = temp_file("cogsim_badsec.toml", "[substges]\nseed = 2\n");
        CHECK_THROWS_AS(load_chain_config(ConfigFile::parse_file(path)), ConfigError);
    }
    SUBCASE("malformed line") {
        const auto path = temp_file("cogsim_badline.toml", "[common]\nno equals sign\n");
        CHECK_THROWS_AS(ConfigFile::parse_file(path), ConfigError);
    }
    SUBCASE("bad value") {
        const auto path = temp_file("cogsim_badval.toml", "[common]\nalpha = fast\n");
        CHECK_THROWS_AS(ConfigFile::parse_file(path), ConfigError);
    }
    SUBCASE("invalid resolution") {
        const auto path = temp_file("cogsim_badres.toml", "[substage1]\nresolution = 100\n");
        CHECK_THROWS_AS(load_chain_config(ConfigFile::parse_file(path)), ConfigError);
    }
    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(ConfigFile::parse_file("/nonexistent/cogsim.toml"), IoError);
    }
    SUBCASE("a map set without any bottom-up kind is rejected") {
        const auto path = temp_file("cogsim_badmaps.toml",
                                    "[substage3]\nmaps = [\"color\", \"reg\"]\n");
        CHECK_THROWS_AS(load_chain_config(ConfigFile::parse_file(path)), ConfigError);
    }
}

TEST_CASE("goal keys populate the goal spec") {
    const auto path = temp_file("cogsim_goal.toml",
                                "[substage3]\n"
                                "goal_color = [1.0, 0.2, 0.1]\n"
                                "goal_region = 2\n");
    const ChainConfig chain = load_chain_config(ConfigFile::parse_file(path));
    REQUIRE(chain.substages[2].goal.has_value());
    REQUIRE(chain.substages[2].goal->target_color.has_value());
    CHECK(chain.substages[2].goal->target_color->g == doctest::Approx(0.2f));
    CHECK(chain.substages[2].goal->target_region == 2);
    CHECK_FALSE(chain.substages[2].goal->target_distance.has_value());
}

TEST_CASE("fast preset rescales the episode budget") {
    SubstageConfig cfg = substage_defaults(1);
    apply_fast_preset(cfg);
    CHECK(cfg.max_episodes == 60);
    CHECK(cfg.max_steps == 150);
}

TEST_CASE("scene files parse with explicit blocks") {
    const auto path = temp_file("cogsim_scene.toml",
                                "arena_half_extent = 2.5\n"
                                "seed = 4\n"
                                "[camera]\n"
                                "x = -2.0\n"
                                "height = 0.3\n"
                                "[distractor]\n"
                                "x = -1.0\n"
                                "speed = 0.2\n"
                                "color = [0.9, 0.1, 0.1]\n"
                                "[[block]]\n"
                                "x = 0.5\n"
                                "y = -0.25\n"
                                "radius = 0.2\n"
                                "[[block]]\n"
                                "x = 1.0\n"
                                "y = 0.75\n");
    const SceneSpec scene = load_scene_file(path);
    CHECK(scene.arena_half_extent == doctest::Approx(2.5));
    CHECK(scene.camera.position.x == doctest::Approx(-2.0));
    CHECK(scene.camera.height == doctest::Approx(0.3));
    CHECK(scene.distractor.speed == doctest::Approx(0.2));
    REQUIRE(scene.blocks.size() == 2);
    CHECK(scene.blocks[0].radius == doctest::Approx(0.2));
    CHECK(scene.blocks[1].position.y == doctest::Approx(0.75));
}

TEST_CASE("scenario files parse and validate") {
    const auto path = temp_file("cogsim_scenario.toml",
                                "[scenario]\n"
                                "name = \"probe\"\n"
                                "substage = 2\n"
                                "distance = 1.6\n"
                                "speed = 0.1\n"
                                "motion = \"crossing\"\n"
                                "episodes = 25\n"
                                "seed = 5\n");
    const ScenarioSpec spec = load_scenario_file(path);
    CHECK(spec.name == "probe");
    CHECK(spec.substage == 2);
    CHECK(spec.distance == doctest::Approx(1.6));
    CHECK(spec.motion == DistractorMotion::crossing);
    CHECK(spec.episodes == 25);

    const auto bad = temp_file("cogsim_badmotion.toml",
                               "[scenario]\nmotion = \"backflip\"\n");
    CHECK_THROWS_AS(load_scenario_file(bad), ConfigError);
}

TEST_CASE("a manifest re-parses to the identical configuration") {
    ChainConfig chain;
    chain.substages[0].seed = 17;
    chain.substages[1].seed = 17;
    chain.substages[2].seed = 17;
    chain.substages[2].hfov_deg = 72.5;
    chain.scene.seed = 6;

    InvocationInfo invocation;
    invocation.verb = "chain";
    invocation.seed = 17;

    const std::string manifest = manifest_text(invocation, chain);
    const ConfigFile file = ConfigFile::parse_string(manifest, "manifest.toml");
    const ChainConfig reparsed = load_chain_config(file);

    for (int i = 0; i < 3; ++i) {
        CHECK(reparsed.substages[i].seed == 17);
        CHECK(reparsed.substages[i].resolution == chain.substages[i].resolution);
        CHECK(reparsed.substages[i].max_episodes == chain.substages[i].max_episodes);
        CHECK(reparsed.substages[i].hfov_deg ==
              doctest::Approx(chain.substages[i].hfov_deg));
        CHECK(reparsed.substages[i].enabled_actions == chain.substages[i].enabled_actions);
    }
    // Manifest blocks are fully resolved, so the reparsed scene pins them.
    REQUIRE(reparsed.scene.blocks.size() == generate_blocks(chain.scene).size());
    const auto expected_blocks = generate_blocks(chain.scene);
    for (std::size_t i = 0; i < expected_blocks.size(); ++i)
        CHECK(reparsed.scene.blocks[i].position.x ==
              doctest::Approx(expected_blocks[i].position.x).epsilon(1e-15));

    // And a second manifest generated from the reparsed config is stable
    // except for the now-explicit block list.
    const std::string again = manifest_text(invocation, reparsed);
    CHECK(again == manifest_text(invocation, reparsed));
}
