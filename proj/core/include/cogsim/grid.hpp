#pragma once
#include <array>
#include <cstddef>

namespace cogsim {

// Side length of every map in the attentional pipeline, independent of the
// sensor resolution feeding it.
inline constexpr int kGridSize = 16;
inline constexpr int kGridCells = kGridSize * kGridSize;

struct Grid16 {
    std::array<double, kGridCells> cells{};

    double& at(int row, int col) { return cells[static_cast<std::size_t>(row) * kGridSize + col]; }
    double at(int row, int col) const { return cells[static_cast<std::size_t>(row) * kGridSize + col]; }

    bool operator==(const Grid16&) const = default;
};

} // namespace cogsim
