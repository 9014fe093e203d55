#pragma once
#include "cogsim/grid.hpp"
#include "cogsim/world.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cogsim {

enum class MapKind { red, green, blue, depth, color, dist, reg };

const char* to_string(MapKind kind);
std::optional<MapKind> map_kind_from_string(const std::string& name);
bool is_top_down(MapKind kind);

struct FeatureMap {
    Grid16 cells;
    MapKind kind = MapKind::red;
};

// Multiplicative gain field implementing inhibition of return. Fresh maps are
// all ones; ior_age counts the remaining recovery cycles per cell.
struct AttentionalMap {
    Grid16 cells;
    std::array<int, kGridCells> ior_age{};

    AttentionalMap() { cells.cells.fill(1.0); }
};

struct SalienceMap {
    Grid16 cells;
};

struct WinnerLocus {
    int row = 0, col = 0;
    double value = 0.0;
    bool operator==(const WinnerLocus&) const = default;
};

struct GoalSpec {
    std::optional<Color> target_color;
    std::optional<double> target_distance;
    std::optional<int> target_region;
};

struct IorParams {
    double floor = 0.2;
    int cycles = 5;
};

// --- Region geometry (fovea zones mapped onto the 16x16 grid) ---
// Zone 1 is the central half-size rectangle, zones 2..5 the corner-anchored
// quadrants (2 top-left, 3 top-right, 4 bottom-left, 5 bottom-right). The
// quadrant regions overlap the center, so the five regions cover the grid.

// Exclusive assignment, center takes priority.
int zone_of_cell(int row, int col);
// Region membership (overlapping), used by the region map and containment tests.
bool cell_in_zone(int row, int col, int zone);

// --- Pipeline operations ---

// Average-pool one channel to 16x16 (kernel = stride = resolution/16) and
// subtract the whole-channel mean, highlighting discrepant regions.
FeatureMap bottom_up_map(std::span<const float> channel, int resolution, MapKind kind);

// Goal-proximity step function: >=0.8 -> 1, >=0.6 -> 0.75, >=0.4 -> 0.5,
// >=0.2 -> 0.25, else 0.
double proximity_band(double proximity);

FeatureMap top_down_color_map(const Observation& obs, const GoalSpec& goal);
FeatureMap top_down_distance_map(const Observation& obs, const GoalSpec& goal);
FeatureMap top_down_region_map(const GoalSpec& goal);

// Cell-wise weighted mean, clamped at zero (negative discrepancies do not
// attract attention).
Grid16 combine_maps(std::span<const FeatureMap> maps, std::span<const double> weights);

// Recover inhibited cells linearly toward 1 over ior.cycles updates, then
// inhibit the 3x3 neighborhood of the new winner (if any) down to ior.floor.
void update_attentional_map(AttentionalMap& att, const std::optional<WinnerLocus>& winner,
                            const IorParams& ior = {});

SalienceMap salience(const Grid16& combined, const AttentionalMap& att);

// None when no cell exceeds the threshold; ties break toward the smallest
// row-major index.
std::optional<WinnerLocus> select_winner(const SalienceMap& sal, double threshold);

} // namespace cogsim
