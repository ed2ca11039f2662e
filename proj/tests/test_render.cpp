#include "doctest.h"

#include "ppk/errors.hpp"
#include "ppk/pose_io.hpp"
#include "ppk/render.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <random>
#include <string>

using namespace ppk;

#ifndef PPK_GOLDEN_DIR
#error "PPK_GOLDEN_DIR must point at tests/golden"
#endif

namespace {

RasterImage pattern(std::size_t w, std::size_t h)
{
    RasterImage img(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            img.set(x, y, {static_cast<std::uint8_t>(x * 7), static_cast<std::uint8_t>(y * 11),
                           static_cast<std::uint8_t>(x + y)});
    return img;
}

PoseKeypoints silent()
{
    PoseKeypoints kp;
    for (auto& k : kp.points)
        k = {1, 1, 0.0};
    return kp;
}

}  // namespace

TEST_CASE("crop examples")
{
    const auto img = pattern(4, 4);
    CHECK(crop(img, {0, 0, 4, 4}) == img);

    const auto tl = crop(img, {0, 0, 2, 2});
    REQUIRE(tl.width == 2);
    REQUIRE(tl.height == 2);
    for (std::size_t y = 0; y < 2; ++y)
        for (std::size_t x = 0; x < 2; ++x)
            CHECK(tl.at(x, y) == img.at(x, y));

    CHECK(crop_window(4, 4, {0.4, 0.4, 2.6, 2.6}) == PixelRect{0, 0, 3, 3});
    const auto frac = crop(img, {0.4, 0.4, 2.6, 2.6});
    CHECK(frac.width == 3);
    CHECK(frac.height == 3);
    CHECK(frac.at(2, 2) == img.at(2, 2));
}

TEST_CASE("crop clamps and rejects empty windows")
{
    CHECK(crop_window(10, 8, {-5, -5, 3.2, 100}) == PixelRect{0, 0, 4, 8});
    CHECK_THROWS_AS(crop_window(10, 8, {20, 0, 30, 5}), EmptyCropError);
    CHECK_THROWS_AS(crop_window(10, 8, {3, 3, 3, 3}), EmptyCropError);
}

TEST_CASE("nothing confident means nothing drawn")
{
    const auto img = pattern(30, 20);
    CHECK(render_keypoints(img, silent(), default_render_style()) == img);
}

TEST_CASE("single dot in a 100x100 crop matches the disk oracle")
{
    const RasterImage img(100, 100, {10, 20, 30});
    const RenderStyle style = default_render_style();
    CHECK(dot_radius(img, style) == 2);
    auto kp = silent();
    kp.points[0] = {50, 50, 1.0};
    const auto out = render_keypoints(img, kp, style);
    const auto disk = oracle::disk_pixels(100, 100, 50, 50, 2);
    CHECK(disk.size() == 13);
    for (std::size_t y = 0; y < 100; ++y)
        for (std::size_t x = 0; x < 100; ++x)
            CHECK((out.at(x, y) == style.palette[0]) == (disk.count({x, y}) == 1));
}

TEST_CASE("radius follows the long side")
{
    RenderStyle s = default_render_style();
    CHECK(dot_radius(RasterImage(100, 40), s) == 2);
    CHECK(dot_radius(RasterImage(350, 10), s) == 4);  // 3.5 rounds away from zero
    CHECK(dot_radius(RasterImage(10, 640), s) == 6);
    s.min_px = 9;
    CHECK(dot_radius(RasterImage(640, 10), s) == 9);
}

TEST_CASE("keypoints outside the crop are skipped")
{
    const auto img = pattern(20, 20);
    auto kp = silent();
    kp.points[1] = {-0.5, 5, 1.0};
    kp.points[2] = {20, 5, 1.0};
    kp.points[3] = {5, 20.0, 1.0};
    CHECK(render_keypoints(img, kp, default_render_style()) == img);
    kp.points[4] = {0, 0, 1.0};
    CHECK(!(render_keypoints(img, kp, default_render_style()) == img));
}

TEST_CASE("later keypoints overdraw earlier ones")
{
    const RasterImage img(20, 20);
    auto kp = silent();
    kp.points[5] = {10, 10, 1.0};
    kp.points[6] = {10, 10, 1.0};
    const auto out = render_keypoints(img, kp, default_render_style());
    CHECK(out.at(10, 10) == default_palette()[6]);
}

TEST_CASE("default style is valid and distinct")
{
    CHECK_NOTHROW(default_render_style().check());
    RenderStyle s = default_render_style();
    s.palette[3] = s.palette[4];
    CHECK_THROWS_AS(s.check(), ConfigError);
    s = default_render_style();
    s.fraction_of_long_side = 1.0;
    CHECK_THROWS_AS(s.check(), ConfigError);
}

TEST_CASE("ppm round trip and strict decoding")
{
    const auto img = pattern(7, 5);
    const std::string bytes = encode_ppm(img);
    CHECK(bytes.rfind("P6\n7 5\n255\n", 0) == 0);
    CHECK(decode_ppm(bytes) == img);
    CHECK(decode_ppm("P6\n# comment\n7 5\n255\n" + bytes.substr(11)) == img);
    CHECK_THROWS_AS(decode_ppm(bytes.substr(0, bytes.size() - 1)), SchemaError);
    CHECK_THROWS_AS(decode_ppm("P3\n1 1\n255\n0 0 0\n"), SchemaError);
    CHECK_THROWS_AS(decode_ppm("P6\n1 1\n65535\n\0\0\0\0\0\0"), SchemaError);
}

TEST_CASE("golden renderings")
{
    const std::filesystem::path dir = PPK_GOLDEN_DIR;
    for (int i = 0; i < 3; ++i) {
        CAPTURE(i);
        const std::string n = std::to_string(i);
        const auto img = read_ppm(dir / ("crop_" + n + ".ppm"));
        const auto kp = load_keypoints(dir / ("kp_" + n + ".json"));
        const std::string got = encode_ppm(render_keypoints(img, kp, default_render_style()));
        CHECK(got == testutil::slurp(dir / ("expected_" + n + ".ppm")));
    }
}

TEST_CASE("changed pixels lie inside drawn disks")
{
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> side(5, 90);
    std::uniform_real_distribution<double> u(-0.2, 1.2);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t w = side(rng), h = side(rng);
        const auto img = pattern(w, h);
        PoseKeypoints kp;
        for (auto& k : kp.points)
            k = {u(rng) * static_cast<double>(w), u(rng) * static_cast<double>(h), std::clamp(u(rng), 0.0, 1.0)};
        const RenderStyle style = default_render_style();
        const auto out = render_keypoints(img, kp, style);
        const int r = dot_radius(img, style);
        std::set<std::pair<std::size_t, std::size_t>> allowed;
        for (const auto& k : kp.points) {
            if (k.confidence < style.conf_thresh || k.x < 0 || k.y < 0 || k.x >= double(w) || k.y >= double(h))
                continue;
            const auto d = oracle::disk_pixels(w, h, k.x, k.y, r);
            allowed.insert(d.begin(), d.end());
        }
        for (std::size_t y = 0; y < h; ++y)
            for (std::size_t x = 0; x < w; ++x)
                if (!(out.at(x, y) == img.at(x, y)))
                    CHECK(allowed.count({x, y}) == 1);
    }
}
