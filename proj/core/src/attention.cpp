#include "cogsim/attention.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace cogsim {

const char* to_string(MapKind kind) {
    switch (kind) {
        case MapKind::red: return "R";
        case MapKind::green: return "G";
        case MapKind::blue: return "B";
        case MapKind::depth: return "D";
        case MapKind::color: return "color";
        case MapKind::dist: return "dist";
        case MapKind::reg: return "reg";
    }
    return "?";
}

std::optional<MapKind> map_kind_from_string(const std::string& name) {
    if (name == "R") return MapKind::red;
    if (name == "G") return MapKind::green;
    if (name == "B") return MapKind::blue;
    if (name == "D") return MapKind::depth;
    if (name == "color") return MapKind::color;
    if (name == "dist") return MapKind::dist;
    if (name == "reg") return MapKind::reg;
    return std::nullopt;
}

bool is_top_down(MapKind kind) {
    return kind == MapKind::color || kind == MapKind::dist || kind == MapKind::reg;
}

int zone_of_cell(int row, int col) {
    const int half = kGridSize / 2;
    const int quarter = kGridSize / 4;
    if (row >= quarter && row < kGridSize - quarter && col >= quarter && col < kGridSize - quarter)
        return 1;
    if (row < half) return col < half ? 2 : 3;
    return col < half ? 4 : 5;
}

bool cell_in_zone(int row, int col, int zone) {
    const int half = kGridSize / 2;
    const int quarter = kGridSize / 4;
    switch (zone) {
        case 1:
            return row >= quarter && row < kGridSize - quarter &&
                   col >= quarter && col < kGridSize - quarter;
        case 2: return row < half && col < half;
        case 3: return row < half && col >= half;
        case 4: return row >= half && col < half;
        case 5: return row >= half && col >= half;
        default: return false;
    }
}

FeatureMap bottom_up_map(std::span<const float> channel, int resolution, MapKind kind) {
    assert(resolution == 64 || resolution == 128 || resolution == 256);
    assert(channel.size() == static_cast<std::size_t>(resolution) * resolution);

    const int kernel = resolution / kGridSize;
    FeatureMap map;
    map.kind = kind;

    double total = 0.0;
    for (int gy = 0; gy < kGridSize; ++gy) {
        for (int gx = 0; gx < kGridSize; ++gx) {
            double sum = 0.0;
            for (int sy = 0; sy < kernel; ++sy) {
                const std::size_t row = (static_cast<std::size_t>(gy) * kernel + sy) * resolution
                                        + static_cast<std::size_t>(gx) * kernel;
                for (int sx = 0; sx < kernel; ++sx) sum += channel[row + sx];
            }
            const double mean = sum / (kernel * kernel);
            map.cells.at(gy, gx) = mean;
            total += mean;
        }
    }
    const double global_mean = total / kGridCells;
    for (double& v : map.cells.cells) v -= global_mean;
    return map;
}

double proximity_band(double proximity) {
    if (proximity >= 0.8) return 1.0;
    if (proximity >= 0.6) return 0.75;
    if (proximity >= 0.4) return 0.5;
    if (proximity >= 0.2) return 0.25;
    return 0.0;
}

namespace {

// Reduce per-pixel activations to the grid by max, so a small goal-matching
// object still lights its cell.
template <typename PixelActivation>
FeatureMap reduce_by_max(int resolution, MapKind kind, PixelActivation&& activation) {
    const int kernel = resolution / kGridSize;
    FeatureMap map;
    map.kind = kind;
    for (int gy = 0; gy < kGridSize; ++gy) {
        for (int gx = 0; gx < kGridSize; ++gx) {
            double best = 0.0;
            for (int sy = 0; sy < kernel; ++sy) {
                const std::size_t row = (static_cast<std::size_t>(gy) * kernel + sy) * resolution
                                        + static_cast<std::size_t>(gx) * kernel;
                for (int sx = 0; sx < kernel; ++sx) {
                    best = std::max(best, activation(row + sx));
                    if (best >= 1.0) break;
                }
                if (best >= 1.0) break;
            }
            map.cells.at(gy, gx) = best;
        }
    }
    return map;
}

} // namespace

FeatureMap top_down_color_map(const Observation& obs, const GoalSpec& goal) {
    assert(goal.target_color.has_value());
    const Color target = *goal.target_color;
    return reduce_by_max(obs.resolution, MapKind::color, [&](std::size_t i) {
        const double l1 = std::abs(static_cast<double>(obs.r[i]) - target.r) +
                          std::abs(static_cast<double>(obs.g[i]) - target.g) +
                          std::abs(static_cast<double>(obs.b[i]) - target.b);
        return proximity_band(1.0 - l1 / 3.0);
    });
}

FeatureMap top_down_distance_map(const Observation& obs, const GoalSpec& goal) {
    assert(goal.target_distance.has_value());
    const double target = *goal.target_distance;
    return reduce_by_max(obs.resolution, MapKind::dist, [&](std::size_t i) {
        return proximity_band(1.0 - std::abs(static_cast<double>(obs.depth[i]) - target));
    });
}

FeatureMap top_down_region_map(const GoalSpec& goal) {
    assert(goal.target_region.has_value());
    const int zone = *goal.target_region;
    FeatureMap map;
    map.kind = MapKind::reg;
    for (int row = 0; row < kGridSize; ++row)
        for (int col = 0; col < kGridSize; ++col)
            map.cells.at(row, col) = cell_in_zone(row, col, zone) ? 1.0 : 0.0;
    return map;
}

Grid16 combine_maps(std::span<const FeatureMap> maps, std::span<const double> weights) {
    assert(!maps.empty());
    assert(maps.size() == weights.size());

    double weight_sum = 0.0;
    for (double w : weights) weight_sum += w;
    assert(weight_sum > 0.0);

    Grid16 combined;
    for (std::size_t m = 0; m < maps.size(); ++m) {
        const double w = weights[m];
        for (int i = 0; i < kGridCells; ++i)
            combined.cells[static_cast<std::size_t>(i)] += w * maps[m].cells.cells[static_cast<std::size_t>(i)];
    }
    for (double& v : combined.cells) v = std::max(0.0, v / weight_sum);
    return combined;
}

void update_attentional_map(AttentionalMap& att, const std::optional<WinnerLocus>& winner,
                            const IorParams& ior) {
    for (int i = 0; i < kGridCells; ++i) {
        int& age = att.ior_age[static_cast<std::size_t>(i)];
        if (age > 0) {
            --age;
            att.cells.cells[static_cast<std::size_t>(i)] =
                1.0 - (1.0 - ior.floor) * age / ior.cycles;
        }
    }
    if (!winner) return;
    for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
            const int row = winner->row + dr;
            const int col = winner->col + dc;
            if (row < 0 || row >= kGridSize || col < 0 || col >= kGridSize) continue;
            att.cells.at(row, col) = ior.floor;
            att.ior_age[static_cast<std::size_t>(row) * kGridSize + col] = ior.cycles;
        }
    }
}

SalienceMap salience(const Grid16& combined, const AttentionalMap& att) {
    SalienceMap sal;
    for (int i = 0; i < kGridCells; ++i)
        sal.cells.cells[static_cast<std::size_t>(i)] =
            combined.cells[static_cast<std::size_t>(i)] * att.cells.cells[static_cast<std::size_t>(i)];
    return sal;
}

std::optional<WinnerLocus> select_winner(const SalienceMap& sal, double threshold) {
    assert(threshold >= 0.0);
    int best = -1;
    double best_value = threshold;
    for (int i = 0; i < kGridCells; ++i) {
        const double v = sal.cells.cells[static_cast<std::size_t>(i)];
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best < 0) return std::nullopt;
    return WinnerLocus{best / kGridSize, best % kGridSize, best_value};
}

} // namespace cogsim
