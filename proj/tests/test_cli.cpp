#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "claritas/equalize.hpp"
#include "claritas/image_io.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace claritas;
using claritas::testing::CliResult;
using claritas::testing::constant_gray;
using claritas::testing::random_gray;
using claritas::testing::read_file;
using claritas::testing::run_cli;
using claritas::testing::TempDir;
using claritas::testing::write_file;

namespace {

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) {
        if (c == '\n') lines++;
    }
    return lines;
}

}  // namespace

TEST_CASE("convert --space gray copies a grayscale file byte for byte") {
    TempDir dir("cli_gray");
    std::mt19937 rng(1);
    save_image(random_gray(12, 10, rng), dir / "in.pgm");

    const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " convert " +
                                    (dir / "in.pgm").string() + " --space gray",
                                dir);
    CHECK(r.exit_code == 0);
    CHECK(read_file(dir / "out" / "in_gray.pgm") == read_file(dir / "in.pgm"));
}

TEST_CASE("convert --space yuv maps achromatic input to flat 128 chroma") {
    TempDir dir("cli_yuv");
    RasterImage img(6, 4, 3);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.data[i * 3 + 0] = img.data[i * 3 + 1] = img.data[i * 3 + 2] =
            static_cast<std::uint8_t>(i * 10);
    }
    save_image(img, dir / "in.ppm");

    const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " convert " +
                                    (dir / "in.ppm").string() + " --space yuv",
                                dir);
    CHECK(r.exit_code == 0);
    const RasterImage out = load_image(dir / "out" / "in_yuv.ppm");
    CHECK(out.channels == 3);
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        CHECK(out.data[i * 3 + 1] == 128);
        CHECK(out.data[i * 3 + 2] == 128);
    }
}

TEST_CASE("convert to xyz and back recovers RGB within one count") {
    TempDir dir("cli_xyzrt");
    std::mt19937 rng(2);
    const RasterImage img = claritas::testing::random_rgb(9, 9, rng);
    save_image(img, dir / "in.ppm");

    CHECK(run_cli("--output-dir " + (dir / "fwd").string() + " convert " +
                      (dir / "in.ppm").string() + " --space xyz --raw-planes",
                  dir)
              .exit_code == 0);
    CHECK(run_cli("--output-dir " + (dir / "back").string() + " convert " +
                      (dir / "fwd" / "in_xyz.ppm").string() + " --space xyz --inverse",
                  dir)
              .exit_code == 0);

    // The inverse picks up the lossless sidecar next to its input.
    const RasterImage recovered = load_image(dir / "back" / "in_xyz_rgb.ppm");
    REQUIRE(recovered.data.size() == img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        CHECK(std::abs(int(recovered.data[i]) - int(img.data[i])) <= 1);
    }

    // Without a sidecar the inverse goes through the 8-bit intermediate; the
    // sRGB gamma slope near black amplifies half-step XYZ quantization, so
    // only a coarse bound holds on that path.
    std::filesystem::copy_file(dir / "fwd" / "in_xyz.ppm", dir / "only_raster.ppm");
    CHECK(run_cli("--output-dir " + (dir / "back2").string() + " convert " +
                      (dir / "only_raster.ppm").string() + " --space xyz --inverse",
                  dir)
              .exit_code == 0);
    const RasterImage coarse = load_image(dir / "back2" / "only_raster_rgb.ppm");
    double total_err = 0.0;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const int err = std::abs(int(coarse.data[i]) - int(img.data[i]));
        CHECK(err <= 40);
        total_err += err;
    }
    CHECK(total_err / static_cast<double>(img.data.size()) < 3.0);
}

TEST_CASE("convert --raw-planes writes the sidecar") {
    TempDir dir("cli_raw");
    std::mt19937 rng(3);
    save_image(claritas::testing::random_rgb(5, 4, rng), dir / "in.ppm");

    const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " convert " +
                                    (dir / "in.ppm").string() + " --space lab --raw-planes",
                                dir);
    CHECK(r.exit_code == 0);
    const std::string sidecar = read_file(dir / "out" / "in_lab.planes");
    const std::string header = "claritas-planes lab 5 4 3\n";
    REQUIRE(sidecar.size() == header.size() + 3u * 5u * 4u * sizeof(double));
    CHECK(sidecar.substr(0, header.size()) == header);
}

TEST_CASE("metrics report") {
    TempDir dir("cli_metrics");
    save_image(constant_gray(8, 8, 60), dir / "a.pgm");
    save_image(constant_gray(8, 8, 200), dir / "b.pgm");

    SUBCASE("constant images give zero entropy and contrast, stable header") {
        const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " metrics " +
                                        (dir / "a.pgm").string() + " " +
                                        (dir / "b.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const std::string csv = read_file(dir / "out" / "metrics.csv");
        std::istringstream lines(csv);
        std::string header, row_a, row_b;
        std::getline(lines, header);
        std::getline(lines, row_a);
        std::getline(lines, row_b);
        CHECK(header ==
              "file,space,colorfulness,entropy,rms_contrast,mean,entropy_variant,"
              "contrast_variant");
        CHECK(row_a == (dir / "a.pgm").string() +
                           ",gray,0.000000,0.000000,0.000000,60.000000,histogram,global");
        CHECK(row_b == (dir / "b.pgm").string() +
                           ",gray,0.000000,0.000000,0.000000,200.000000,histogram,global");
    }

    SUBCASE("grayscale colorfulness column is exactly zero") {
        std::mt19937 rng(4);
        save_image(random_gray(16, 16, rng), dir / "noise.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out2").string() + " metrics " +
                                        (dir / "noise.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const std::string csv = read_file(dir / "out2" / "metrics.csv");
        CHECK(csv.find(",gray,0.000000,") != std::string::npos);
    }

    SUBCASE("--entropy glcm switches the entropy column") {
        std::mt19937 rng(5);
        save_image(random_gray(16, 16, rng), dir / "noise.pgm");
        const CliResult hist = run_cli("--output-dir " + (dir / "h").string() + " metrics " +
                                           (dir / "noise.pgm").string(),
                                       dir);
        const CliResult glcm = run_cli("--output-dir " + (dir / "g").string() + " metrics " +
                                           (dir / "noise.pgm").string() + " --entropy glcm",
                                       dir);
        CHECK(hist.exit_code == 0);
        CHECK(glcm.exit_code == 0);
        const std::string csv_h = read_file(dir / "h" / "metrics.csv");
        const std::string csv_g = read_file(dir / "g" / "metrics.csv");
        CHECK(csv_h.find("histogram,global") != std::string::npos);
        CHECK(csv_g.find("glcm,global") != std::string::npos);
        CHECK(csv_h != csv_g);

        const CliResult patch = run_cli("--output-dir " + (dir / "p").string() + " metrics " +
                                            (dir / "noise.pgm").string() +
                                            " --contrast patch --patch-radius 4",
                                        dir);
        CHECK(patch.exit_code == 0);
        CHECK(read_file(dir / "p" / "metrics.csv").find("histogram,patch") !=
              std::string::npos);
    }

    SUBCASE("a missing input yields an error row and nonzero exit") {
        const CliResult r = run_cli("--output-dir " + (dir / "err").string() + " metrics " +
                                        (dir / "a.pgm").string() + " " +
                                        (dir / "missing.pgm").string(),
                                    dir);
        CHECK(r.exit_code != 0);
        const std::string csv = read_file(dir / "err" / "metrics.csv");
        CHECK(count_lines(csv) == 3);  // header + ok row + error row
        CHECK(csv.find(",error,") != std::string::npos);
    }

    SUBCASE("json format") {
        const CliResult r = run_cli("--output-dir " + (dir / "json").string() +
                                        " --format json metrics " + (dir / "a.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const std::string json = read_file(dir / "json" / "metrics.json");
        CHECK(json.find("\"file\"") != std::string::npos);
        CHECK(json.find("\"entropy\"") != std::string::npos);
    }
}

TEST_CASE("equalize writes the image and both histogram CSVs") {
    TempDir dir("cli_eq");

    SUBCASE("low-contrast ramp stretches to the full range") {
        RasterImage img(50, 2, 1);
        for (int x = 0; x < 50; ++x) {
            img.at(x, 0) = img.at(x, 1) = static_cast<std::uint8_t>(100 + x);
        }
        save_image(img, dir / "ramp.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " equalize " +
                                        (dir / "ramp.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const RasterImage out = load_image(dir / "out" / "ramp_eq.pgm");
        int mn = 255, mx = 0;
        for (std::uint8_t v : out.data) {
            mn = std::min<int>(mn, v);
            mx = std::max<int>(mx, v);
        }
        CHECK(mn == 0);
        CHECK(mx == 255);

        const std::string before = read_file(dir / "out" / "ramp_hist_before.csv");
        CHECK(count_lines(before) == 257);  // header + 256 bins
        CHECK(before.substr(0, 14) == "bin,count,cdf\n");
        const std::string after = read_file(dir / "out" / "ramp_hist_after.csv");
        CHECK(count_lines(after) == 257);
    }

    SUBCASE("the equalization hand case comes through the pipeline") {
        RasterImage img(2, 2, 1);
        img.data = {10, 10, 20, 30};
        save_image(img, dir / "tiny.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out2").string() + " equalize " +
                                        (dir / "tiny.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const RasterImage out = load_image(dir / "out2" / "tiny_eq.pgm");
        CHECK(out.data == std::vector<std::uint8_t>{0, 0, 128, 255});
    }

    SUBCASE("constant image warns and copies through") {
        save_image(constant_gray(4, 4, 9), dir / "flat.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out3").string() + " equalize " +
                                        (dir / "flat.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        CHECK(r.err.find("constant image") != std::string::npos);
        const RasterImage out = load_image(dir / "out3" / "flat_eq.pgm");
        for (std::uint8_t v : out.data) CHECK(v == 9);

        const CliResult quiet = run_cli("--quiet --output-dir " + (dir / "out4").string() +
                                            " equalize " + (dir / "flat.pgm").string(),
                                        dir);
        CHECK(quiet.err.empty());
    }
}

TEST_CASE("clahe command") {
    TempDir dir("cli_clahe");
    std::mt19937 rng(6);
    const RasterImage img = random_gray(64, 64, rng);
    save_image(img, dir / "in.pgm");

    SUBCASE("defaults match the library call bit-exactly") {
        const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " clahe " +
                                        (dir / "in.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        CHECK(load_image(dir / "out" / "in_clahe.pgm") == clahe(img, ClaheParams(2.0, 8, 8)));
    }

    SUBCASE("degenerate grid equals global scaled-CDF equalization") {
        const CliResult r = run_cli("--output-dir " + (dir / "out2").string() + " clahe " +
                                        (dir / "in.pgm").string() +
                                        " --tiles 1x1 --clip-limit 1e9",
                                    dir);
        CHECK(r.exit_code == 0);
        CHECK(load_image(dir / "out2" / "in_clahe.pgm") == oracle::scaled_cdf_reference(img));
    }

    SUBCASE("too-small image exits nonzero naming the minimum size") {
        save_image(constant_gray(4, 4, 5), dir / "small.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out3").string() + " clahe " +
                                        (dir / "small.pgm").string(),
                                    dir);
        CHECK(r.exit_code != 0);
        CHECK(r.err.find("8x8") != std::string::npos);
    }
}

TEST_CASE("entropy-map command") {
    TempDir dir("cli_entropy");

    SUBCASE("constant input gives an all-black map") {
        save_image(constant_gray(16, 16, 120), dir / "flat.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out").string() +
                                        " entropy-map " + (dir / "flat.pgm").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const RasterImage out = load_image(dir / "out" / "flat_entropy.pgm");
        for (std::uint8_t v : out.data) CHECK(v == 0);
    }

    SUBCASE("checkerboard interior matches the oracle rescaling") {
        RasterImage img(16, 16, 1);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                img.at(x, y) = (x + y) % 2 ? 255 : 0;
            }
        }
        save_image(img, dir / "check.pgm");
        const CliResult r = run_cli("--output-dir " + (dir / "out2").string() +
                                        " entropy-map " + (dir / "check.pgm").string() +
                                        " --radius 2",
                                    dir);
        CHECK(r.exit_code == 0);
        const RasterImage out = load_image(dir / "out2" / "check_entropy.pgm");
        const FloatPlane expected = oracle::entropy_map_reference(img, 2);
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            CHECK(out.data[i] ==
                  static_cast<std::uint8_t>(std::lround(expected.data[i] * 255.0 / 8.0)));
            CHECK(out.data[i] > 0);  // brighter than the constant case
        }
    }
}

TEST_CASE("batch command") {
    TempDir dir("cli_batch");

    SUBCASE("empty job list writes an empty manifest and exits 0") {
        write_file(dir / "empty.json", R"({"schema_version": 1, "jobs": []})");
        const CliResult r = run_cli("--output-dir " + (dir / "out").string() + " batch " +
                                        (dir / "empty.json").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const std::string manifest = read_file(dir / "out" / "manifest.json");
        CHECK(manifest.find("\"jobs\": []") != std::string::npos);
    }

    SUBCASE("malformed config exits nonzero without writing outputs") {
        write_file(dir / "bad.json", R"({"schema_version": 1, "jobs": [{"command": "nope"}]})");
        const CliResult r = run_cli("--output-dir " + (dir / "none").string() + " batch " +
                                        (dir / "bad.json").string(),
                                    dir);
        CHECK(r.exit_code != 0);
        CHECK_FALSE(std::filesystem::exists(dir / "none"));

        write_file(dir / "notjson.json", "{");
        const CliResult r2 = run_cli("--output-dir " + (dir / "none2").string() + " batch " +
                                         (dir / "notjson.json").string(),
                                     dir);
        CHECK(r2.exit_code != 0);
        CHECK_FALSE(std::filesystem::exists(dir / "none2"));

        write_file(dir / "badver.json", R"({"schema_version": 2, "jobs": []})");
        CHECK(run_cli("--output-dir " + (dir / "none3").string() + " batch " +
                          (dir / "badver.json").string(),
                      dir)
                  .exit_code != 0);
    }

    SUBCASE("metrics sweep over images and spaces gives rows for every pair") {
        std::mt19937 rng(7);
        for (int i = 0; i < 4; ++i) {
            save_image(random_gray(12, 12, rng),
                       dir / ("img" + std::to_string(i) + ".pgm"));
        }
        std::string config = R"({"schema_version": 1, "jobs": [{"command": "metrics",)";
        config += R"("inputs": [")" + (dir / "img*.pgm").generic_string() + R"("],)";
        config += R"("spaces": ["rgb", "xyz", "yuv"]}]})";
        write_file(dir / "sweep.json", config);

        const CliResult r = run_cli("--output-dir " + (dir / "out_sweep").string() +
                                        " batch " + (dir / "sweep.json").string(),
                                    dir);
        CHECK(r.exit_code == 0);
        const std::string csv = read_file(dir / "out_sweep" / "job000" / "metrics.csv");
        CHECK(count_lines(csv) == 13);  // header + 4 images x 3 spaces

        const std::string manifest = read_file(dir / "out_sweep" / "manifest.json");
        CHECK(manifest.find("\"status\": \"ok\"") != std::string::npos);
        CHECK(manifest.find("job000/metrics.csv") != std::string::npos);
    }

    SUBCASE("a failing job is recorded and the run continues") {
        save_image(constant_gray(12, 12, 80), dir / "ok.pgm");
        std::string config = R"({"schema_version": 1, "jobs": [)";
        config += R"({"command": "clahe", "input": ")" + (dir / "missing.pgm").generic_string() +
                  R"("},)";
        config += R"({"command": "equalize", "input": ")" + (dir / "ok.pgm").generic_string() +
                  R"("}]})";
        write_file(dir / "mixed.json", config);

        const CliResult r = run_cli("--output-dir " + (dir / "out_mixed").string() +
                                        " batch " + (dir / "mixed.json").string(),
                                    dir);
        CHECK(r.exit_code != 0);
        const std::string manifest = read_file(dir / "out_mixed" / "manifest.json");
        CHECK(manifest.find("\"status\": \"error\"") != std::string::npos);
        CHECK(manifest.find("\"status\": \"ok\"") != std::string::npos);
        CHECK(std::filesystem::exists(dir / "out_mixed" / "job001" / "ok_eq.pgm"));
    }
}
