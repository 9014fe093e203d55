#include "cogsim/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cogsim {

namespace {

struct FileHandle {
    FILE* f = nullptr;
    explicit FileHandle(const std::filesystem::path& path)
        : f(std::fopen(path.string().c_str(), "wb")) {}
    ~FileHandle() { if (f) std::fclose(f); }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               std::span<const std::uint8_t> pixels, int bytes_per_pixel) {
    FileHandle file(path);
    if (!file.f) throw std::runtime_error("cannot open for writing: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png write failed: " + path.string());
    }
    png_init_io(png, file.f);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(
            pixels.data() + static_cast<std::size_t>(y) * width * bytes_per_pixel));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
}

} // namespace

void write_png_rgb8(const std::filesystem::path& path, const ImageRgb8& image) {
    write_png(path, image.width, image.height, PNG_COLOR_TYPE_RGB, image.pixels, 3);
}

void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     std::span<const std::uint8_t> pixels) {
    write_png(path, width, height, PNG_COLOR_TYPE_GRAY, pixels, 1);
}

ImageRgb8 observation_to_image(const Observation& obs) {
    ImageRgb8 image(obs.resolution, obs.resolution);
    for (std::size_t i = 0; i < obs.pixel_count(); ++i) {
        image.pixels[i * 3 + 0] = to_byte(obs.r[i]);
        image.pixels[i * 3 + 1] = to_byte(obs.g[i]);
        image.pixels[i * 3 + 2] = to_byte(obs.b[i]);
    }
    return image;
}

std::vector<std::uint8_t> channel_to_gray(std::span<const float> channel) {
    std::vector<std::uint8_t> out(channel.size());
    for (std::size_t i = 0; i < channel.size(); ++i) out[i] = to_byte(channel[i]);
    return out;
}

std::vector<std::uint8_t> grid_to_gray(const Grid16& grid) {
    double lo = grid.cells[0], hi = grid.cells[0];
    for (double v : grid.cells) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    std::vector<std::uint8_t> out(kGridCells);
    for (int i = 0; i < kGridCells; ++i) {
        const double v = grid.cells[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = span > 0.0 ? to_byte((v - lo) / span) : 0;
    }
    return out;
}

namespace {

// 3x5 glyphs for numeric labels, rows top to bottom, 3 low bits per row.
constexpr std::uint16_t glyph_bits(char c) {
    switch (c) {
        case '0': return 0b111'101'101'101'111;
        case '1': return 0b010'110'010'010'111;
        case '2': return 0b111'001'111'100'111;
        case '3': return 0b111'001'111'001'111;
        case '4': return 0b101'101'111'001'001;
        case '5': return 0b111'100'111'001'111;
        case '6': return 0b111'100'111'101'111;
        case '7': return 0b111'001'010'010'010;
        case '8': return 0b111'101'111'101'111;
        case '9': return 0b111'101'111'001'111;
        case '-': return 0b000'000'111'000'000;
        case '.': return 0b000'000'000'000'010;
        case '+': return 0b000'010'111'010'000;
        case 'e': return 0b000'111'110'100'111;
        default: return 0;
    }
}

void draw_text(ImageRgb8& img, int x, int y, const std::string& text, int scale) {
    for (char c : text) {
        const std::uint16_t bits = glyph_bits(c);
        for (int row = 0; row < 5; ++row) {
            for (int col = 0; col < 3; ++col) {
                if (!(bits >> ((4 - row) * 3 + (2 - col)) & 1)) continue;
                for (int sy = 0; sy < scale; ++sy)
                    for (int sx = 0; sx < scale; ++sx)
                        img.set(x + col * scale + sx, y + row * scale + sy, 40, 40, 40);
            }
        }
        x += 4 * scale;
    }
}

std::string label_value(double v) {
    char buf[32];
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-2)) {
        std::snprintf(buf, sizeof(buf), "%.2e", v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.5g", v);
    }
    return buf;
}

void draw_line(ImageRgb8& img, int x0, int y0, int x1, int y1,
               std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        img.set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
    }
}

} // namespace

void write_line_plot(const std::filesystem::path& path, std::span<const double> values) {
    const int width = 900, height = 560;
    const int left = 80, right = 20, top = 20, bottom = 44;
    ImageRgb8 img(width, height);

    double lo = 0.0, hi = 1.0;
    if (!values.empty()) {
        lo = hi = values[0];
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi - lo < 1e-12) { hi += 1.0; lo -= 1.0; }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const int x0 = left, x1 = width - right, y0 = height - bottom, y1 = top;
    draw_line(img, x0, y0, x1, y0, 40, 40, 40);
    draw_line(img, x0, y0, x0, y1, 40, 40, 40);

    auto ypix = [&](double v) {
        return y0 + static_cast<int>(std::lround((v - lo) / (hi - lo) * (y1 - y0)));
    };
    auto xpix = [&](std::size_t i) {
        const std::size_t n = std::max<std::size_t>(values.size(), 2);
        return x0 + static_cast<int>(std::lround(
            static_cast<double>(i) / static_cast<double>(n - 1) * (x1 - x0)));
    };

    // Zero reference when it lies in range.
    if (lo < 0.0 && hi > 0.0) draw_line(img, x0, ypix(0.0), x1, ypix(0.0), 210, 210, 210);

    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        draw_line(img, xpix(i), ypix(values[i]), xpix(i + 1), ypix(values[i + 1]), 30, 80, 200);
    if (values.size() == 1) img.set(xpix(0), ypix(values[0]), 30, 80, 200);

    draw_text(img, 6, y1 - 5, label_value(hi), 2);
    draw_text(img, 6, y0 - 10, label_value(lo), 2);
    draw_text(img, x0 - 4, y0 + 12, "0", 2);
    if (!values.empty())
        draw_text(img, x1 - 40, y0 + 12, label_value(static_cast<double>(values.size() - 1)), 2);

    write_png_rgb8(path, img);
}

} // namespace cogsim
