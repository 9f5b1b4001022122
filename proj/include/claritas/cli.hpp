#ifndef CLARITAS_CLI_HPP
#define CLARITAS_CLI_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "claritas/equalize.hpp"
#include "claritas/metrics.hpp"

namespace claritas::cli {

enum class ReportFormat { Csv, Json };

struct GlobalOptions {
    std::filesystem::path output_dir = ".";
    ReportFormat format = ReportFormat::Csv;
    bool quiet = false;  // suppresses diagnostics on stderr, not errors
};

struct CommandResult {
    std::vector<std::filesystem::path> outputs;
    int failed_items = 0;  // metrics rows or batch jobs that failed
};

/**
 * @brief Convert an image to another color space (or back).
 *
 * space is one of gray, hsv, xyz, lab, yuv, yiq. Forward conversion writes
 * the converted planes re-rasterized to 8 bits; with inverse=true the input
 * is interpreted as an 8-bit rasterization of `space` and converted back to
 * RGB. raw_planes additionally writes the float planes as a sidecar
 * (one header line, then the three planes as little-endian 64-bit reals).
 */
CommandResult cmd_convert(const std::filesystem::path& input, const std::string& space,
                          bool inverse, bool raw_planes, const GlobalOptions& g);

/**
 * @brief Metric report over a set of inputs, one row per input x space.
 *
 * spaces entries are rgb (metrics on the image as stored) or one of
 * hsv/xyz/lab/yuv/yiq (metrics on the 8-bit re-rasterization in that space,
 * as the per-color-space report tables expect). A failing input produces an
 * error row and counts in failed_items; the run continues.
 */
CommandResult cmd_metrics(const std::vector<std::filesystem::path>& inputs,
                          const std::vector<std::string>& spaces, const MetricsConfig& config,
                          const GlobalOptions& g);

/// Global histogram equalization; writes the equalized image plus
/// bin,count,cdf CSVs of the histogram before and after.
CommandResult cmd_equalize(const std::filesystem::path& input, const GlobalOptions& g);

/// CLAHE enhancement of the (grayscale-converted) input.
CommandResult cmd_clahe(const std::filesystem::path& input, const ClaheParams& params,
                        const GlobalOptions& g);

/// Local-entropy visualization: 8 bits of entropy rescale to intensity 255.
CommandResult cmd_entropy_map(const std::filesystem::path& input, int radius,
                              const GlobalOptions& g);

/**
 * @brief Run a JSON job manifest: {"schema_version": 1, "jobs": [...]}.
 *
 * Each job names a command plus its parameters; metrics jobs accept input
 * globs and a "spaces" list. The whole config is validated before anything
 * executes; a malformed config writes nothing. Job outputs go to
 * job-unique subdirectories jobNNN/ under the output directory, and a
 * run manifest (manifest.json, paths relative to the output directory) is
 * written last. Per-job errors are recorded in the manifest and counted in
 * failed_items rather than aborting the run.
 */
CommandResult cmd_batch(const std::filesystem::path& config_path, const GlobalOptions& g);

}  // namespace claritas::cli

#endif  // CLARITAS_CLI_HPP
