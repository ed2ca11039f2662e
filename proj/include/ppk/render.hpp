#pragma once

#include "ppk/box.hpp"
#include "ppk/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ppk {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

/// Row-major 8-bit RGB image.
struct RasterImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    RasterImage() = default;
    RasterImage(std::size_t w, std::size_t h, Rgb fill = {})
        : width(w), height(h), pixels(w * h * 3)
    {
        for (std::size_t i = 0; i < w * h; ++i) {
            pixels[3 * i] = fill.r;
            pixels[3 * i + 1] = fill.g;
            pixels[3 * i + 2] = fill.b;
        }
    }

    Rgb at(std::size_t x, std::size_t y) const
    {
        const std::size_t o = 3 * (y * width + x);
        return {pixels[o], pixels[o + 1], pixels[o + 2]};
    }

    void set(std::size_t x, std::size_t y, Rgb c)
    {
        const std::size_t o = 3 * (y * width + x);
        pixels[o] = c.r;
        pixels[o + 1] = c.g;
        pixels[o + 2] = c.b;
    }

    bool operator==(const RasterImage&) const = default;
};

/// Dot appearance for keypoint rendering.
///
/// Dot radius is max(min_px, round(fraction_of_long_side * max(width, height)))
/// of the image being drawn on.
struct RenderStyle {
    std::array<Rgb, kNumKeypoints> palette;
    int min_px = 2;
    double fraction_of_long_side = 0.01;
    double conf_thresh = 0.3;

    /// Throws ConfigError when the palette repeats a color or the radius rule is out of range.
    void check() const;

    bool operator==(const RenderStyle&) const = default;
};

/// Nose white; left-side joints on a green-to-violet ramp, right-side joints on a
/// red-to-yellow ramp, so mirrored limbs never share a hue.
const std::array<Rgb, kNumKeypoints>& default_palette();

RenderStyle default_render_style();

/// Integer pixel window [x0, x1) x [y0, y1).
struct PixelRect {
    std::size_t x0 = 0;
    std::size_t y0 = 0;
    std::size_t x1 = 0;
    std::size_t y1 = 0;

    bool operator==(const PixelRect&) const = default;
};

/// floor(x1), floor(y1), ceil(x2), ceil(y2), clamped to the image.
/// Throws EmptyCropError when nothing of the box lies inside the image.
PixelRect crop_window(std::size_t width, std::size_t height, const BoundingBox& box);

RasterImage crop(const RasterImage& image, const BoundingBox& box);

int dot_radius(const RasterImage& image, const RenderStyle& style);

/// Draws a filled disk per confident keypoint whose center lies inside the image.
/// Pixel (px, py) is covered when (px - x)^2 + (py - y)^2 <= r^2. Disks are drawn
/// in keypoint order, so later keypoints overdraw earlier ones.
RasterImage render_keypoints(const RasterImage& crop_img, const PoseKeypoints& kp_in_crop_coords,
                             const RenderStyle& style);

/// Binary portable pixmap (P6, maxval 255).
std::string encode_ppm(const RasterImage& image);
RasterImage decode_ppm(std::string_view bytes);
RasterImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RasterImage& image);

}  // namespace ppk
