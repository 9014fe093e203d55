#include "cogsim/world.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace cogsim {

double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0) a += 2.0 * kPi;
    return a - kPi;
}

void step_world(WorldState& world, double dt) {
    assert(dt > 0.0);
    world.sim_time += dt;

    Distractor& d = world.distractor;
    if (!d.present || d.speed <= 0.0) return;

    const double bound = world.arena_half_extent - d.radius;
    double nx = d.position.x + std::cos(d.heading) * d.speed * dt;
    double ny = d.position.y + std::sin(d.heading) * d.speed * dt;

    // Reflect off walls; each wall contact also jitters the heading so the
    // wander never settles into a closed orbit.
    for (int pass = 0; pass < 8; ++pass) {
        bool contact = false;
        if (nx > bound) {
            nx = 2.0 * bound - nx;
            d.heading = wrap_angle(kPi - d.heading);
            contact = true;
        } else if (nx < -bound) {
            nx = -2.0 * bound - nx;
            d.heading = wrap_angle(kPi - d.heading);
            contact = true;
        }
        if (ny > bound) {
            ny = 2.0 * bound - ny;
            d.heading = wrap_angle(-d.heading);
            contact = true;
        } else if (ny < -bound) {
            ny = -2.0 * bound - ny;
            d.heading = wrap_angle(-d.heading);
            contact = true;
        }
        if (!contact) break;
        d.heading = wrap_angle(d.heading + world.rng.uniform(-0.3, 0.3));
    }

    // Strictly inside the arena even when a reflection lands exactly on a wall.
    const double eps = 1e-9;
    nx = std::clamp(nx, -bound + eps, bound - eps);
    ny = std::clamp(ny, -bound + eps, bound - eps);
    d.position = {nx, ny};
}

std::optional<HeadPose> apply_head_command(const HeadPose& head, const MotorDelta& delta) {
    HeadPose next = head;
    double& angle = (delta.axis == Axis::pitch) ? next.pitch : next.yaw;
    const AngleInterval& limits = (delta.axis == Axis::pitch) ? head.pitch_limits : head.yaw_limits;
    angle += delta.step;
    if (!limits.contains(angle)) return std::nullopt;
    return next;
}

HeadPose move_fovea(const HeadPose& head, int zone) {
    assert(zone >= 1 && zone <= kFoveaZoneCount);
    HeadPose next = head;
    next.fovea_zone = zone;
    return next;
}

Vec3 camera_eye(const WorldState& world) {
    return {world.camera.position.x, world.camera.position.y, world.camera.height};
}

Vec3 distractor_center(const WorldState& world) {
    return {world.distractor.position.x, world.distractor.position.y, world.distractor.radius};
}

Vec3 pixel_ray(const Camera& cam, const HeadPose& head, double px, double py) {
    const double step = cam.hfov / cam.resolution; // radians per pixel, both axes
    const double az = head.yaw + (cam.resolution * 0.5 - (px + 0.5)) * step;
    const double el = head.pitch + (cam.resolution * 0.5 - (py + 0.5)) * step;
    const double ce = std::cos(el);
    return {ce * std::cos(az), ce * std::sin(az), std::sin(el)};
}

PixelCoord project_to_pixel(const Camera& cam, const HeadPose& head, const Vec3& point) {
    // Inverse of pixel_ray for a point direction; azimuth wraps to (-pi, pi].
    const double az = std::atan2(point.y, point.x);
    const double el = std::atan2(point.z, std::hypot(point.x, point.y));
    const double per_px = cam.hfov / cam.resolution;
    PixelCoord p;
    p.x = cam.resolution * 0.5 - wrap_angle(az - head.yaw) / per_px - 0.5;
    p.y = cam.resolution * 0.5 - (el - head.pitch) / per_px - 0.5;
    return p;
}

double ray_point_angle(const WorldState& world, const HeadPose& head, const Camera& cam,
                       double px, double py, const Vec3& point) {
    const Vec3 eye = camera_eye(world);
    const Vec3 ray = pixel_ray(cam, head, px, py);
    const double dx = point.x - eye.x;
    const double dy = point.y - eye.y;
    const double dz = point.z - eye.z;
    const double len = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (len <= 0.0) return 0.0;
    double dot = (ray.x * dx + ray.y * dy + ray.z * dz) / len;
    dot = std::clamp(dot, -1.0, 1.0);
    return std::acos(dot);
}

namespace {

struct SphereObj {
    Vec3 center;
    double radius;
    Color color;
};

thread_local std::vector<float> tl_r, tl_g, tl_b, tl_d, tl_z;
thread_local std::vector<double> tl_cos_a, tl_sin_a;

void rasterize(const SphereObj& obj, const Vec3& eye, const HeadPose& head,
               double hfov, double max_range, int res) {
    const double dx = obj.center.x - eye.x;
    const double dy = obj.center.y - eye.y;
    const double dz = obj.center.z - eye.z;
    const double dist2 = dx * dx + dy * dy + dz * dz;
    const double dist = std::sqrt(dist2);
    if (dist <= obj.radius + 1e-9) return; // eye inside the sphere

    const double az = std::atan2(dy, dx);
    const double el = std::atan2(dz, std::hypot(dx, dy));
    const double da = wrap_angle(az - head.yaw);
    const double de = el - head.pitch;
    const double arad = std::asin(std::min(1.0, obj.radius / dist));
    const double half_fov = hfov * 0.5;
    if (std::abs(da) - arad > half_fov) return;
    if (std::abs(de) - arad > half_fov) return;

    const double per_px = hfov / res;
    const double cx = res * 0.5 - da / per_px - 0.5;
    const double cy = res * 0.5 - de / per_px - 0.5;
    const double rpx = arad / per_px + 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - rpx)));
    const int x1 = std::min(res - 1, static_cast<int>(std::ceil(cx + rpx)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - rpx)));
    const int y1 = std::min(res - 1, static_cast<int>(std::ceil(cy + rpx)));
    if (x0 > x1 || y0 > y1) return;

    tl_cos_a.resize(static_cast<std::size_t>(x1 - x0 + 1));
    tl_sin_a.resize(static_cast<std::size_t>(x1 - x0 + 1));
    for (int x = x0; x <= x1; ++x) {
        const double a = head.yaw + (res * 0.5 - (x + 0.5)) * per_px;
        tl_cos_a[static_cast<std::size_t>(x - x0)] = std::cos(a);
        tl_sin_a[static_cast<std::size_t>(x - x0)] = std::sin(a);
    }

    const double r2 = obj.radius * obj.radius;
    for (int y = y0; y <= y1; ++y) {
        const double e = head.pitch + (res * 0.5 - (y + 0.5)) * per_px;
        const double ce = std::cos(e);
        const double se = std::sin(e);
        const std::size_t row = static_cast<std::size_t>(y) * res;
        for (int x = x0; x <= x1; ++x) {
            const double rx = ce * tl_cos_a[static_cast<std::size_t>(x - x0)];
            const double ry = ce * tl_sin_a[static_cast<std::size_t>(x - x0)];
            const double t_ca = rx * dx + ry * dy + se * dz;
            if (t_ca <= 0.0) continue;
            const double m2 = dist2 - t_ca * t_ca;
            if (m2 > r2) continue;
            const double t = t_ca - std::sqrt(r2 - m2);
            const std::size_t i = row + static_cast<std::size_t>(x);
            if (t >= tl_z[i]) continue;
            tl_z[i] = static_cast<float>(t);
            tl_r[i] = obj.color.r;
            tl_g[i] = obj.color.g;
            tl_b[i] = obj.color.b;
            tl_d[i] = static_cast<float>(std::clamp(1.0 - t / max_range, 0.0, 1.0));
        }
    }
}

void box_downsample(const std::vector<float>& src, std::vector<float>& dst, int res, int factor) {
    const int canon = res * factor;
    const float inv = 1.0f / static_cast<float>(factor * factor);
    dst.assign(static_cast<std::size_t>(res) * res, 0.0f);
    for (int y = 0; y < res; ++y) {
        for (int x = 0; x < res; ++x) {
            float sum = 0.0f;
            for (int sy = 0; sy < factor; ++sy) {
                const std::size_t row = (static_cast<std::size_t>(y) * factor + sy) * canon
                                        + static_cast<std::size_t>(x) * factor;
                for (int sx = 0; sx < factor; ++sx) sum += src[row + sx];
            }
            dst[static_cast<std::size_t>(y) * res + x] = sum * inv;
        }
    }
}

} // namespace

Observation render_rgbd(const WorldState& world, const HeadPose& head, const Camera& camera) {
    assert(camera.resolution == 64 || camera.resolution == 128 || camera.resolution == 256);

    // Always sample on the canonical lattice and box-reduce to the requested
    // resolution: lower acuity is exactly a blurred view of the same scene.
    const int canon = kCanonicalResolution;
    const std::size_t n = static_cast<std::size_t>(canon) * canon;
    tl_r.assign(n, 0.0f);
    tl_g.assign(n, 0.0f);
    tl_b.assign(n, 0.0f);
    tl_d.assign(n, 0.0f);
    tl_z.assign(n, std::numeric_limits<float>::infinity());

    const Vec3 eye = camera_eye(world);
    const double max_range = world.max_range();

    for (const Block& blk : world.blocks) {
        rasterize({{blk.position.x, blk.position.y, blk.radius}, blk.radius, blk.color},
                  eye, head, camera.hfov, max_range, canon);
    }
    if (world.distractor.present) {
        const Distractor& d = world.distractor;
        rasterize({{d.position.x, d.position.y, d.radius}, d.radius, d.color},
                  eye, head, camera.hfov, max_range, canon);
    }

    Observation obs;
    obs.resolution = camera.resolution;
    const int factor = canon / camera.resolution;
    if (factor == 1) {
        obs.r = tl_r;
        obs.g = tl_g;
        obs.b = tl_b;
        obs.depth = tl_d;
    } else {
        box_downsample(tl_r, obs.r, camera.resolution, factor);
        box_downsample(tl_g, obs.g, camera.resolution, factor);
        box_downsample(tl_b, obs.b, camera.resolution, factor);
        box_downsample(tl_d, obs.depth, camera.resolution, factor);
    }
    return obs;
}

std::vector<Block> generate_blocks(const SceneSpec& scene) {
    Rng rng(scene.seed, 0xB70C);
    const Color palette[2] = {{0.1f, 0.25f, 1.0f}, {0.1f, 1.0f, 0.2f}};
    const double h = scene.arena_half_extent;
    const Vec2 cam = scene.camera.position;
    std::vector<Block> blocks;
    blocks.reserve(static_cast<std::size_t>(scene.block_count));

    auto place = [&](double bearing_deg, double dist, double radius, int index) {
        Block blk;
        const double bearing = radians(bearing_deg);
        blk.position.x = std::clamp(cam.x + dist * std::cos(bearing), -(h - 0.15), h - 0.15);
        blk.position.y = std::clamp(cam.y + dist * std::sin(bearing), -(h - 0.15), h - 0.15);
        blk.radius = radius;
        blk.color = palette[index % 2];
        blocks.push_back(blk);
    };

    // A few mid-size anchors flank the home gaze, then a spread of small
    // background blocks fills the reachable sector with varied views. The
    // wandering distractor stays the dominant stimulus.
    const double anchor_bearing[4] = {20.0, -30.0, 45.0, -50.0};
    const double anchor_dist[4] = {1.4, 1.8, 2.1, 1.3};
    const int anchors = std::min(scene.block_count, 4);
    for (int i = 0; i < anchors; ++i)
        place(anchor_bearing[i], anchor_dist[i], rng.uniform(0.05, 0.08), i);
    for (int i = anchors; i < scene.block_count; ++i)
        place(rng.uniform(-95.0, 95.0), rng.uniform(1.1, 3.4), rng.uniform(0.035, 0.055), i);
    return blocks;
}

WorldState make_world(const SceneSpec& scene) {
    WorldState world;
    world.arena_half_extent = scene.arena_half_extent;
    world.camera = scene.camera;
    world.distractor = scene.distractor;
    world.blocks = scene.blocks.empty() ? generate_blocks(scene) : scene.blocks;
    world.rng = Rng(scene.seed, 0xB01);
    return world;
}

} // namespace cogsim
