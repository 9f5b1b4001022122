#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "claritas/colorspace.hpp"
#include "claritas/error.hpp"
#include "test_util.hpp"

using namespace claritas;

namespace {

// One-pixel plane set; convenient for spot values.
ColorPlanes triple(Space space, double a, double b, double c) {
    ColorPlanes p;
    p.space = space;
    p.c0 = FloatPlane(1, 1);
    p.c1 = FloatPlane(1, 1);
    p.c2 = FloatPlane(1, 1);
    p.c0.data[0] = a;
    p.c1.data[0] = b;
    p.c2.data[0] = c;
    return p;
}

ColorPlanes random_rgb_planes(int n, std::mt19937& rng) {
    ColorPlanes p;
    p.space = Space::Rgb;
    p.c0 = FloatPlane(n, 1);
    p.c1 = FloatPlane(n, 1);
    p.c2 = FloatPlane(n, 1);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        p.c0.data[i] = dist(rng);
        p.c1.data[i] = dist(rng);
        p.c2.data[i] = dist(rng);
    }
    return p;
}

double max_component_error(const ColorPlanes& a, const ColorPlanes& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.c0.data.size(); ++i) {
        worst = std::max(worst, std::abs(a.c0.data[i] - b.c0.data[i]));
        worst = std::max(worst, std::abs(a.c1.data[i] - b.c1.data[i]));
        worst = std::max(worst, std::abs(a.c2.data[i] - b.c2.data[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("rgb_planes normalizes and promotes grayscale") {
    RasterImage rgb(1, 1, 3);
    rgb.data = {255, 0, 51};
    const ColorPlanes p = rgb_planes(rgb);
    CHECK(p.c0.data[0] == doctest::Approx(1.0));
    CHECK(p.c1.data[0] == doctest::Approx(0.0));
    CHECK(p.c2.data[0] == doctest::Approx(0.2));

    RasterImage gray(1, 1, 1);
    gray.data = {128};
    const ColorPlanes g = rgb_planes(gray);
    CHECK(g.c0.data[0] == g.c1.data[0]);
    CHECK(g.c1.data[0] == g.c2.data[0]);
}

TEST_CASE("HSV spot values") {
    SUBCASE("pure red") {
        const ColorPlanes hsv = rgb_to_hsv(triple(Space::Rgb, 1, 0, 0));
        CHECK(hsv.c0.data[0] == doctest::Approx(0.0));
        CHECK(hsv.c1.data[0] == doctest::Approx(1.0));
        CHECK(hsv.c2.data[0] == doctest::Approx(1.0));
    }
    SUBCASE("any gray is achromatic with hue 0") {
        const ColorPlanes hsv = rgb_to_hsv(triple(Space::Rgb, 0.42, 0.42, 0.42));
        CHECK(hsv.c0.data[0] == 0.0);
        CHECK(hsv.c1.data[0] == 0.0);
        CHECK(hsv.c2.data[0] == doctest::Approx(0.42));
    }
    SUBCASE("hexcone hand case") {
        const ColorPlanes hsv = rgb_to_hsv(triple(Space::Rgb, 0.5, 0.25, 0.75));
        CHECK(hsv.c0.data[0] == doctest::Approx(0.75).epsilon(1e-9));
        CHECK(hsv.c1.data[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
        CHECK(hsv.c2.data[0] == doctest::Approx(0.75).epsilon(1e-9));
    }
}

TEST_CASE("XYZ spot values") {
    SUBCASE("white lands on the adopted white point") {
        const ColorPlanes xyz = rgb_to_xyz(triple(Space::Rgb, 1, 1, 1));
        // Row sums of the adopted matrix: (0.950456, 1.000000, 1.088754).
        CHECK(xyz.c0.data[0] == doctest::Approx(0.950456).epsilon(1e-9));
        CHECK(xyz.c1.data[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(xyz.c2.data[0] == doctest::Approx(1.088754).epsilon(1e-9));
        // Agreement with the LAB white point to 4 decimal places.
        CHECK(std::abs(xyz.c0.data[0] - 0.95047) <= 1e-4);
        CHECK(std::abs(xyz.c1.data[0] - 1.0) <= 1e-4);
        CHECK(std::abs(xyz.c2.data[0] - 1.08883) <= 1e-4);
    }
    SUBCASE("black maps to zero") {
        const ColorPlanes xyz = rgb_to_xyz(triple(Space::Rgb, 0, 0, 0));
        CHECK(xyz.c0.data[0] == 0.0);
        CHECK(xyz.c1.data[0] == 0.0);
        CHECK(xyz.c2.data[0] == 0.0);
    }
}

TEST_CASE("LAB spot values") {
    SUBCASE("white") {
        const ColorPlanes lab = rgb_to_lab(triple(Space::Rgb, 1, 1, 1));
        CHECK(lab.c0.data[0] == doctest::Approx(100.0).epsilon(1e-4));
        CHECK(std::abs(lab.c1.data[0]) < 0.01);
        CHECK(std::abs(lab.c2.data[0]) < 0.01);
    }
    SUBCASE("black") {
        const ColorPlanes lab = rgb_to_lab(triple(Space::Rgb, 0, 0, 0));
        CHECK(std::abs(lab.c0.data[0]) < 1e-9);
        CHECK(lab.c1.data[0] == 0.0);
        CHECK(lab.c2.data[0] == 0.0);
    }
    SUBCASE("pure red") {
        const ColorPlanes lab = rgb_to_lab(triple(Space::Rgb, 1, 0, 0));
        CHECK(lab.c0.data[0] == doctest::Approx(53.240588).epsilon(1e-5));
        CHECK(lab.c1.data[0] == doctest::Approx(80.092308).epsilon(1e-5));
        CHECK(lab.c2.data[0] == doctest::Approx(67.202751).epsilon(1e-5));
    }
}

TEST_CASE("YUV and YIQ spot values") {
    SUBCASE("grays have exactly zero chroma") {
        for (double g : {0.0, 0.25, 0.5, 1.0}) {
            const ColorPlanes yuv = rgb_to_yuv(triple(Space::Rgb, g, g, g));
            CHECK(std::abs(yuv.c0.data[0] - g) <= 1e-12);
            CHECK(std::abs(yuv.c1.data[0]) <= 1e-12);
            CHECK(std::abs(yuv.c2.data[0]) <= 1e-12);

            const ColorPlanes yiq = rgb_to_yiq(triple(Space::Rgb, g, g, g));
            CHECK(std::abs(yiq.c0.data[0] - g) <= 1e-12);
            CHECK(std::abs(yiq.c1.data[0]) <= 1e-12);
            CHECK(std::abs(yiq.c2.data[0]) <= 1e-12);
        }
    }
    SUBCASE("pure red matches the adopted first columns") {
        const ColorPlanes yuv = rgb_to_yuv(triple(Space::Rgb, 1, 0, 0));
        CHECK(yuv.c0.data[0] == doctest::Approx(0.299).epsilon(1e-9));
        CHECK(yuv.c1.data[0] == doctest::Approx(-0.14713).epsilon(1e-4));
        CHECK(yuv.c2.data[0] == doctest::Approx(0.615).epsilon(1e-9));

        const ColorPlanes yiq = rgb_to_yiq(triple(Space::Rgb, 1, 0, 0));
        CHECK(yiq.c0.data[0] == doctest::Approx(0.299).epsilon(1e-9));
        CHECK(yiq.c1.data[0] == doctest::Approx(0.5959).epsilon(1e-9));
        CHECK(yiq.c2.data[0] == doctest::Approx(0.2115).epsilon(1e-9));
    }
    SUBCASE("YUV and YIQ share the same luma function") {
        std::mt19937 rng(9);
        const ColorPlanes rgb = random_rgb_planes(64, rng);
        const ColorPlanes yuv = rgb_to_yuv(rgb);
        const ColorPlanes yiq = rgb_to_yiq(rgb);
        for (std::size_t i = 0; i < yuv.c0.data.size(); ++i) {
            CHECK(yuv.c0.data[i] == yiq.c0.data[i]);
        }
    }
}

TEST_CASE("forward-inverse round trips stay within 1e-4 per component") {
    std::mt19937 rng(2718);
    const ColorPlanes rgb = random_rgb_planes(1000, rng);

    CHECK(max_component_error(rgb, hsv_to_rgb(rgb_to_hsv(rgb))) <= 1e-4);
    CHECK(max_component_error(rgb, xyz_to_rgb(rgb_to_xyz(rgb))) <= 1e-4);
    CHECK(max_component_error(rgb, lab_to_rgb(rgb_to_lab(rgb))) <= 1e-4);
    CHECK(max_component_error(rgb, yuv_to_rgb(rgb_to_yuv(rgb))) <= 1e-4);
    CHECK(max_component_error(rgb, yiq_to_rgb(rgb_to_yiq(rgb))) <= 1e-4);
}

TEST_CASE("tag and dimension validation") {
    const ColorPlanes hsv = rgb_to_hsv(triple(Space::Rgb, 0.2, 0.4, 0.6));
    CHECK_THROWS_AS(rgb_to_xyz(hsv), SpaceTagMismatch);

    ColorPlanes bad = triple(Space::Rgb, 0.1, 0.2, 0.3);
    bad.c2 = FloatPlane(2, 1);
    CHECK_THROWS_AS(rgb_to_hsv(bad), DimensionMismatch);
}

TEST_CASE("out-of-gamut inverse results clamp and count") {
    // A saturated LAB value outside the sRGB gamut.
    GamutStats stats;
    const ColorPlanes rgb = lab_to_rgb(triple(Space::Lab, 60.0, 120.0, -120.0), &stats);
    CHECK(stats.clamped > 0);
    for (double v : {rgb.c0.data[0], rgb.c1.data[0], rgb.c2.data[0]}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("planes_to_raster rescaling contract") {
    SUBCASE("RGB uses round(255 v)") {
        const RasterImage out = planes_to_raster(triple(Space::Rgb, 0.5, 0.0, 1.0));
        CHECK(out.data[0] == 128);  // round(127.5) away from zero
        CHECK(out.data[1] == 0);
        CHECK(out.data[2] == 255);
    }
    SUBCASE("LAB endpoints") {
        const RasterImage hi = planes_to_raster(triple(Space::Lab, 100.0, 0.0, 0.0));
        CHECK(hi.data[0] == 255);
        CHECK(hi.data[1] == 128);  // a=0 within nominal [-128,127]
        const RasterImage lo = planes_to_raster(triple(Space::Lab, 0.0, 0.0, 0.0));
        CHECK(lo.data[0] == 0);
    }
    SUBCASE("YUV chroma midpoint lands on 128") {
        const RasterImage out = planes_to_raster(triple(Space::Yuv, 0.5, 0.0, 0.0));
        CHECK(out.data[1] == 128);
        CHECK(out.data[2] == 128);
    }
    SUBCASE("raster_to_planes inverts the affine map") {
        std::mt19937 rng(33);
        const ColorPlanes rgb = random_rgb_planes(200, rng);
        for (Space space : {Space::Hsv, Space::Xyz, Space::Lab, Space::Yuv, Space::Yiq}) {
            const ColorPlanes converted = convert_from_rgb(rgb, space);
            const RasterImage raster = planes_to_raster(converted);
            const ColorPlanes recovered = raster_to_planes(raster, space);
            // Quantization error is at most half a step of the nominal range.
            for (int c = 0; c < 3; ++c) {
                const ComponentRange range = component_range(space, c);
                const double step = (range.hi - range.lo) / 255.0;
                const FloatPlane& a = c == 0 ? converted.c0 : c == 1 ? converted.c1
                                                                     : converted.c2;
                const FloatPlane& b = c == 0 ? recovered.c0 : c == 1 ? recovered.c1
                                                                     : recovered.c2;
                for (std::size_t i = 0; i < a.data.size(); ++i) {
                    CHECK(std::abs(a.data[i] - b.data[i]) <= 0.5 * step + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("8-bit re-quantized round trip stays within one count") {
    std::mt19937 rng(555);
    RasterImage img(500, 1, 3);
    std::uniform_int_distribution<int> dist(0, 255);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(dist(rng));

    const ColorPlanes rgb = rgb_planes(img);
    for (Space space : {Space::Hsv, Space::Xyz, Space::Lab, Space::Yuv, Space::Yiq}) {
        const ColorPlanes back = convert_to_rgb(convert_from_rgb(rgb, space));
        const RasterImage requantized = planes_to_raster(back);
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            CHECK(std::abs(int(requantized.data[i]) - int(img.data[i])) <= 1);
        }
    }
}
