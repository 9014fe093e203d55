#pragma once
#include "cogsim/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace cogsim {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double radians(double degrees) { return degrees * kPi / 180.0; }
constexpr double degrees(double rad) { return rad * 180.0 / kPi; }

// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

struct Color {
    float r = 0.0f, g = 0.0f, b = 0.0f;
    bool operator==(const Color&) const = default;
};

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

// Objects are spheres resting on the ground plane (center height = radius).
struct Block {
    Vec2 position;
    Color color;
    double radius = 0.12;
};

struct Distractor {
    Vec2 position{0.0, 0.0};
    double heading = 0.0;   // radians, world frame, counter-clockwise from +x
    double speed = 0.1;     // m/s, constant while moving
    Color color{1.0f, 0.1f, 0.1f};
    double radius = 0.18;
    bool present = true;
};

// Fixed mount of the head: planar position plus eye height. The default eye
// height matches the object height band, so stimuli sit near the vertical
// image center instead of piling into the lower half-grid.
struct CameraMount {
    Vec2 position{-1.9, 0.0};
    double height = 0.2;
};

struct WorldState {
    double arena_half_extent = 2.0;
    std::vector<Block> blocks;
    Distractor distractor;
    CameraMount camera;
    double sim_time = 0.0;
    Rng rng;

    // Used to normalize depth; nothing inside the arena is farther.
    double max_range() const { return 2.0 * arena_half_extent * std::sqrt(2.0); }
};

struct AngleInterval {
    double lo = 0.0, hi = 0.0;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

inline constexpr int kFoveaZoneCount = 5;

struct HeadPose {
    double pitch = 0.0; // radians, positive looks up
    double yaw = 0.0;   // radians, positive turns left (counter-clockwise)
    AngleInterval pitch_limits{-0.6, 0.6};
    AngleInterval yaw_limits{-1.2, 1.2};
    int fovea_zone = 1; // 1 = center, 2..5 = quadrants
};

enum class Axis { pitch, yaw };

struct MotorDelta {
    Axis axis = Axis::yaw;
    double step = 0.0; // signed radians
};

// Per-render projection parameters. The vertical field of view equals the
// horizontal one (square images).
struct Camera {
    int resolution = 64; // one of 64, 128, 256
    double hfov = radians(60.0);
};

// Pixels are sampled on a regular angular lattice, so a yaw change shifts the
// whole image by a constant pixel count.
inline constexpr int kCanonicalResolution = 256;

struct Observation {
    int resolution = 0;
    std::vector<float> r, g, b, depth; // row-major, values in [0, 1]

    std::size_t pixel_count() const { return r.size(); }
};

// --- Simulation ---

// Advance the distractor by speed*dt along its heading, reflecting off arena
// walls with a heading jitter in [-0.3, 0.3] rad per contact. Blocks never
// change; sim_time always advances.
void step_world(WorldState& world, double dt);

// Returns the new pose, or nullopt when the command would leave the limit
// interval (the catastrophic event for the learner).
std::optional<HeadPose> apply_head_command(const HeadPose& head, const MotorDelta& delta);

// Zone selection for the virtual actuator; motor angles are untouched.
HeadPose move_fovea(const HeadPose& head, int zone);

Observation render_rgbd(const WorldState& world, const HeadPose& head, const Camera& camera);

// --- Projection helpers (shared by the renderer, metrics and tests) ---

// View direction of the center of pixel (px, py); py grows downward.
Vec3 pixel_ray(const Camera& cam, const HeadPose& head, double px, double py);

// Continuous pixel coordinates of a world point (may fall outside the image).
struct PixelCoord {
    double x = 0.0, y = 0.0;
};
PixelCoord project_to_pixel(const Camera& cam, const HeadPose& head, const Vec3& point);

Vec3 camera_eye(const WorldState& world);
Vec3 distractor_center(const WorldState& world);

// Angle in radians between the ray through pixel (px, py) and the direction
// to a world point.
double ray_point_angle(const WorldState& world, const HeadPose& head, const Camera& cam,
                       double px, double py, const Vec3& point);

// --- Scene description ---

struct SceneSpec {
    double arena_half_extent = 2.0;
    CameraMount camera;
    Distractor distractor{{-1.1, 0.0}, 0.0, 0.1};
    std::vector<Block> blocks; // empty = generate `block_count` seeded blocks
    int block_count = 18;
    std::uint64_t seed = 1;
};

std::vector<Block> generate_blocks(const SceneSpec& scene);
WorldState make_world(const SceneSpec& scene);

} // namespace cogsim
