#include "ppk/render.hpp"

#include "ppk/errors.hpp"
#include "ppk/fsutil.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ppk {

const std::array<Rgb, kNumKeypoints>& default_palette()
{
    // Order follows kKeypointNames.
    static const std::array<Rgb, kNumKeypoints> palette = {{
        {255, 255, 255},  // nose
        {0, 255, 0},      // left_eye
        {255, 0, 0},      // right_eye
        {0, 255, 85},     // left_ear
        {255, 64, 0},     // right_ear
        {0, 255, 170},    // left_shoulder
        {255, 128, 0},    // right_shoulder
        {0, 255, 255},    // left_elbow
        {255, 192, 0},    // right_elbow
        {0, 170, 255},    // left_wrist
        {255, 255, 0},    // right_wrist
        {0, 85, 255},     // left_hip
        {255, 0, 128},    // right_hip
        {0, 0, 255},      // left_knee
        {255, 0, 255},    // right_knee
        {85, 0, 255},     // left_ankle
        {192, 0, 128},    // right_ankle
    }};
    return palette;
}

RenderStyle default_render_style()
{
    RenderStyle s;
    s.palette = default_palette();
    return s;
}

void RenderStyle::check() const
{
    for (std::size_t i = 0; i < palette.size(); ++i) {
        for (std::size_t j = i + 1; j < palette.size(); ++j) {
            if (palette[i] == palette[j])
                throw ConfigError("render.palette", "colors " + std::to_string(i) + " and " +
                                                        std::to_string(j) + " are identical");
        }
    }
    if (min_px < 1)
        throw ConfigError("render.min_px", "must be >= 1");
    if (!(fraction_of_long_side > 0.0 && fraction_of_long_side < 1.0))
        throw ConfigError("render.fraction_of_long_side", "must lie in (0, 1)");
    if (!(conf_thresh >= 0.0 && conf_thresh <= 1.0))
        throw ConfigError("render.conf_thresh", "must lie in [0, 1]");
}

PixelRect crop_window(std::size_t width, std::size_t height, const BoundingBox& box)
{
    const double w = static_cast<double>(width);
    const double h = static_cast<double>(height);
    const double x0 = std::clamp(std::floor(box.x1), 0.0, w);
    const double y0 = std::clamp(std::floor(box.y1), 0.0, h);
    const double x1 = std::clamp(std::ceil(box.x2), 0.0, w);
    const double y1 = std::clamp(std::ceil(box.y2), 0.0, h);
    if (!(x1 > x0 && y1 > y0))
        throw EmptyCropError("crop box does not intersect the image");
    return {static_cast<std::size_t>(x0), static_cast<std::size_t>(y0), static_cast<std::size_t>(x1),
            static_cast<std::size_t>(y1)};
}

RasterImage crop(const RasterImage& image, const BoundingBox& box)
{
    const PixelRect win = crop_window(image.width, image.height, box);
    RasterImage out(win.x1 - win.x0, win.y1 - win.y0);
    const std::size_t row_bytes = out.width * 3;
    for (std::size_t y = 0; y < out.height; ++y) {
        const auto src = image.pixels.begin() + static_cast<std::ptrdiff_t>(3 * ((win.y0 + y) * image.width + win.x0));
        std::copy(src, src + static_cast<std::ptrdiff_t>(row_bytes),
                  out.pixels.begin() + static_cast<std::ptrdiff_t>(y * row_bytes));
    }
    return out;
}

int dot_radius(const RasterImage& image, const RenderStyle& style)
{
    const double long_side = static_cast<double>(std::max(image.width, image.height));
    const auto scaled = static_cast<int>(std::lround(style.fraction_of_long_side * long_side));
    return std::max(style.min_px, scaled);
}

RasterImage render_keypoints(const RasterImage& crop_img, const PoseKeypoints& kp, const RenderStyle& style)
{
    RasterImage out = crop_img;
    const int r = dot_radius(crop_img, style);
    const double r2 = static_cast<double>(r) * r;
    const double w = static_cast<double>(crop_img.width);
    const double h = static_cast<double>(crop_img.height);

    for (std::size_t i = 0; i < kNumKeypoints; ++i) {
        const Keypoint& k = kp.points[i];
        if (!(k.confidence >= style.conf_thresh))
            continue;
        if (!(k.x >= 0.0 && k.x < w && k.y >= 0.0 && k.y < h))
            continue;
        const auto lo_x = static_cast<std::size_t>(std::max(0.0, std::floor(k.x - r)));
        const auto lo_y = static_cast<std::size_t>(std::max(0.0, std::floor(k.y - r)));
        const auto hi_x = static_cast<std::size_t>(std::min(w - 1.0, std::ceil(k.x + r)));
        const auto hi_y = static_cast<std::size_t>(std::min(h - 1.0, std::ceil(k.y + r)));
        for (std::size_t py = lo_y; py <= hi_y; ++py) {
            const double dy = static_cast<double>(py) - k.y;
            for (std::size_t px = lo_x; px <= hi_x; ++px) {
                const double dx = static_cast<double>(px) - k.x;
                if (dx * dx + dy * dy <= r2)
                    out.set(px, py, style.palette[i]);
            }
        }
    }
    return out;
}

std::string encode_ppm(const RasterImage& image)
{
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
    return out;
}

namespace {

class PpmHeaderReader {
public:
    explicit PpmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t number(const char* field)
    {
        skip_space_and_comments();
        std::size_t v = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (v > (1u << 24))
                throw SchemaError("ppm header", std::string(field) + " too large");
            ++pos_;
            ++digits;
        }
        if (digits == 0)
            throw SchemaError("ppm header", std::string("expected ") + field);
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

RasterImage decode_ppm(std::string_view bytes)
{
    if (bytes.substr(0, 2) != "P6")
        throw SchemaError("ppm header", "not a binary portable pixmap (P6)");
    PpmHeaderReader reader(bytes);
    reader.advance(2);
    const std::size_t width = reader.number("width");
    const std::size_t height = reader.number("height");
    const std::size_t maxval = reader.number("maxval");
    if (maxval != 255)
        throw SchemaError("ppm header", "only maxval 255 is supported");
    if (reader.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[reader.pos()])))
        throw SchemaError("ppm header", "missing whitespace after maxval");
    reader.advance(1);
    const std::size_t expected = width * height * 3;
    if (bytes.size() - reader.pos() != expected)
        throw SchemaError("ppm data", "expected " + std::to_string(expected) + " pixel bytes, got " +
                                          std::to_string(bytes.size() - reader.pos()));
    RasterImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(reader.pos()), bytes.end());
    return img;
}

RasterImage read_ppm(const std::filesystem::path& path)
{
    return decode_ppm(read_file(path));
}

void write_ppm(const std::filesystem::path& path, const RasterImage& image)
{
    write_file_atomic(path, encode_ppm(image));
}

}  // namespace ppk
