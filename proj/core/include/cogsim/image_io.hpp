#pragma once
#include "cogsim/grid.hpp"
#include "cogsim/world.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace cogsim {

struct ImageRgb8 {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels; // 3 bytes per pixel, row-major

    ImageRgb8() = default;
    ImageRgb8(int w, int h) : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h * 3, 255) {}

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        if (x < 0 || x >= width || y < 0 || y >= height) return;
        std::uint8_t* p = &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
        p[0] = r; p[1] = g; p[2] = b;
    }
};

void write_png_rgb8(const std::filesystem::path& path, const ImageRgb8& image);
void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     std::span<const std::uint8_t> pixels);

// RGB composite of the three color channels.
ImageRgb8 observation_to_image(const Observation& obs);

// [0,1] channel to 8-bit grayscale.
std::vector<std::uint8_t> channel_to_gray(std::span<const float> channel);

// Min/max normalized grayscale rendering of a pipeline map.
std::vector<std::uint8_t> grid_to_gray(const Grid16& grid);

// Line chart of one value per episode with numeric extent labels.
void write_line_plot(const std::filesystem::path& path, std::span<const double> values);

} // namespace cogsim
