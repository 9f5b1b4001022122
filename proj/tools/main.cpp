// claritas - batch image enhancement toolkit.
//
// Subcommands: convert, metrics, equalize, clahe, entropy-map, batch.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "claritas/cli.hpp"
#include "claritas/error.hpp"

namespace {

claritas::ClaheParams make_clahe_params(double clip, const std::string& tiles) {
    const std::size_t x = tiles.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= tiles.size()) {
        throw claritas::ConfigError("--tiles must look like 8x8");
    }
    try {
        return claritas::ClaheParams(clip, std::stoi(tiles.substr(0, x)),
                                     std::stoi(tiles.substr(x + 1)));
    } catch (const std::exception& e) {
        throw claritas::ConfigError(std::string("--tiles/--clip-limit: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace claritas;

    CLI::App app{"Image enhancement toolkit: color-space conversion, quality metrics,\n"
                 "histogram equalization and CLAHE"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string output_dir = ".";
    std::string format = "csv";
    bool quiet = false;
    app.add_option("--output-dir", output_dir, "Directory for all outputs")
        ->capture_default_str();
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_flag("--quiet", quiet, "Suppress diagnostics on stderr");

    // convert
    std::string conv_input, conv_space;
    bool conv_inverse = false, conv_raw = false;
    auto* convert = app.add_subcommand("convert", "Convert between color spaces");
    convert->add_option("input", conv_input, "Input image")->required();
    convert->add_option("--space", conv_space, "Target space")
        ->required()
        ->check(CLI::IsMember({"gray", "hsv", "xyz", "lab", "yuv", "yiq"}));
    convert->add_flag("--inverse", conv_inverse,
                      "Input is an 8-bit rasterization of --space; convert back to RGB");
    convert->add_flag("--raw-planes", conv_raw, "Also write the float planes sidecar");

    // metrics
    std::vector<std::string> met_inputs, met_spaces;
    std::string met_entropy = "histogram", met_contrast = "global";
    int met_patch_radius = 16;
    int met_glcm_distance = 1;
    auto* metrics = app.add_subcommand("metrics", "Quantitative quality metrics report");
    metrics->add_option("inputs", met_inputs, "Input images")->required();
    metrics->add_option("--space", met_spaces,
                        "Color space(s) to measure in (repeatable; default rgb)")
        ->check(CLI::IsMember({"rgb", "hsv", "xyz", "lab", "yuv", "yiq"}));
    metrics->add_option("--entropy", met_entropy, "Entropy variant")
        ->check(CLI::IsMember({"histogram", "glcm"}))
        ->capture_default_str();
    metrics->add_option("--contrast", met_contrast, "Contrast variant")
        ->check(CLI::IsMember({"global", "patch"}))
        ->capture_default_str();
    metrics->add_option("--patch-radius", met_patch_radius, "Patch radius for --contrast patch")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    metrics->add_option("--glcm-distance", met_glcm_distance, "Pair distance for --entropy glcm")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // equalize
    std::string eq_input;
    auto* equalize = app.add_subcommand(
        "equalize", "Global histogram equalization plus before/after histogram CSVs");
    equalize->add_option("input", eq_input, "Input image")->required();

    // clahe
    std::string cl_input, cl_tiles = "8x8";
    double cl_clip = 2.0;
    auto* clahe = app.add_subcommand("clahe", "Contrast limited adaptive histogram equalization");
    clahe->add_option("input", cl_input, "Input image")->required();
    clahe->add_option("--clip-limit", cl_clip, "Relative clip limit")->capture_default_str();
    clahe->add_option("--tiles", cl_tiles, "Tile grid, e.g. 8x8")->capture_default_str();

    // entropy-map
    std::string em_input;
    int em_radius = 5;
    auto* entropy_map = app.add_subcommand("entropy-map", "Local entropy visualization");
    entropy_map->add_option("input", em_input, "Input image")->required();
    entropy_map->add_option("--radius", em_radius, "Disk neighborhood radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    // batch
    std::string batch_config;
    auto* batch = app.add_subcommand("batch", "Run a JSON job manifest");
    batch->add_option("config", batch_config, "Batch config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    cli::GlobalOptions global;
    global.output_dir = output_dir;
    global.format = format == "json" ? cli::ReportFormat::Json : cli::ReportFormat::Csv;
    global.quiet = quiet;

    try {
        cli::CommandResult result;
        if (*convert) {
            result = cli::cmd_convert(conv_input, conv_space, conv_inverse, conv_raw, global);
        } else if (*metrics) {
            MetricsConfig config;
            config.entropy =
                met_entropy == "glcm" ? EntropyVariant::Glcm : EntropyVariant::Histogram;
            config.contrast =
                met_contrast == "patch" ? ContrastVariant::Patch : ContrastVariant::Global;
            config.patch_radius = met_patch_radius;
            config.glcm.distance = met_glcm_distance;
            if (met_spaces.empty()) met_spaces = {"rgb"};
            std::vector<std::filesystem::path> inputs(met_inputs.begin(), met_inputs.end());
            result = cli::cmd_metrics(inputs, met_spaces, config, global);
        } else if (*equalize) {
            result = cli::cmd_equalize(eq_input, global);
        } else if (*clahe) {
            result = cli::cmd_clahe(cl_input, make_clahe_params(cl_clip, cl_tiles), global);
        } else if (*entropy_map) {
            result = cli::cmd_entropy_map(em_input, em_radius, global);
        } else if (*batch) {
            result = cli::cmd_batch(batch_config, global);
        }
        return result.failed_items > 0 ? 1 : 0;
    } catch (const std::exception& e) {
        std::cerr << "claritas: error: " << e.what() << '\n';
        return 1;
    }
}
