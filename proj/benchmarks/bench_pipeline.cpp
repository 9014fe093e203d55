#include "cogsim/attention.hpp"
#include "cogsim/config.hpp"
#include "cogsim/experiment.hpp"
#include "cogsim/memory.hpp"
#include "cogsim/world.hpp"

#include <benchmark/benchmark.h>

using namespace cogsim;

namespace {

void BM_RenderRgbd(benchmark::State& state) {
    const int resolution = static_cast<int>(state.range(0));
    WorldState world = make_world(SceneSpec{});
    HeadPose head;
    const Camera cam{resolution, radians(60)};
    for (auto _ : state) {
        Observation obs = render_rgbd(world, head, cam);
        benchmark::DoNotOptimize(obs.depth.data());
    }
}
BENCHMARK(BM_RenderRgbd)->Arg(64)->Arg(128)->Arg(256);

void BM_BottomUpMap(benchmark::State& state) {
    const int resolution = static_cast<int>(state.range(0));
    WorldState world = make_world(SceneSpec{});
    const Observation obs = render_rgbd(world, HeadPose{}, Camera{resolution, radians(60)});
    for (auto _ : state) {
        FeatureMap map = bottom_up_map(obs.r, resolution, MapKind::red);
        benchmark::DoNotOptimize(map.cells.cells.data());
    }
}
BENCHMARK(BM_BottomUpMap)->Arg(64)->Arg(256);

void BM_AttentionCycle(benchmark::State& state) {
    WorldState world = make_world(SceneSpec{});
    const Observation obs = render_rgbd(world, HeadPose{}, Camera{256, radians(75)});
    GoalSpec goal;
    goal.target_color = Color{1.0f, 0.1f, 0.1f};
    AttentionalMap att;
    std::optional<WinnerLocus> winner;
    for (auto _ : state) {
        const FeatureMap maps[5] = {
            bottom_up_map(obs.r, 256, MapKind::red),
            bottom_up_map(obs.g, 256, MapKind::green),
            bottom_up_map(obs.b, 256, MapKind::blue),
            bottom_up_map(obs.depth, 256, MapKind::depth),
            top_down_color_map(obs, goal),
        };
        const double weights[5] = {1, 1, 1, 1, 1};
        const Grid16 combined = combine_maps(maps, weights);
        update_attentional_map(att, winner);
        const SalienceMap sal = salience(combined, att);
        winner = select_winner(sal, 0.01);
        benchmark::DoNotOptimize(winner);
    }
}
BENCHMARK(BM_AttentionCycle);

void BM_EncodeState(benchmark::State& state) {
    Rng rng(5);
    SalienceMap sal;
    for (double& v : sal.cells.cells) v = rng.uniform();
    for (auto _ : state) {
        StateId id = encode_state(sal);
        benchmark::DoNotOptimize(id);
    }
}
BENCHMARK(BM_EncodeState);

void BM_Accommodate(benchmark::State& state) {
    Rng rng(6);
    ProceduralMemory mem(17);
    mem.assimilate(1, 0, rng);
    mem.assimilate(2, 0, rng);
    int action = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mem.accommodate(1, action, 1.0, 2, 0.9, 0.99));
        action = (action + 1) % 17;
    }
}
BENCHMARK(BM_Accommodate);

void BM_Episode(benchmark::State& state) {
    SubstageConfig cfg = substage_defaults(static_cast<int>(state.range(0)));
    cfg.max_steps = 50;
    cfg.seed = 9;
    const SceneSpec scene;
    for (auto _ : state) {
        ProceduralMemory mem(static_cast<int>(cfg.enabled_actions.size()));
        WorldState world = make_world(scene);
        EpisodeOptions options;
        options.epsilon = 0.5;
        EpisodeLog log = run_episode(cfg, mem, world, options);
        benchmark::DoNotOptimize(log.total_reward);
    }
}
BENCHMARK(BM_Episode)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
