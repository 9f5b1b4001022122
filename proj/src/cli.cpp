#include "claritas/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "claritas/colorspace.hpp"
#include "claritas/error.hpp"
#include "claritas/image_io.hpp"
#include "claritas/numeric.hpp"

namespace claritas::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void diagnostic(const GlobalOptions& g, const std::string& message) {
    if (!g.quiet) std::cerr << "claritas: " << message << '\n';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Output extension for grayscale results, staying in the input's format
// family (JPEG inputs fall back to PNG; JPEG output is unsupported).
std::string gray_ext(const fs::path& input) {
    const std::string ext = lower(input.extension().string());
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") return ".png";
    return ".pgm";
}

std::string color_ext(const fs::path& input) {
    const std::string ext = lower(input.extension().string());
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") return ".png";
    return ".ppm";
}

fs::path prepare_output(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.output_dir);
    return g.output_dir / name;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoFailure("short write: " + path.string());
}

void write_histogram_csv(const fs::path& path, const Histogram256& h) {
    std::ostringstream out;
    out << "bin,count,cdf\n";
    for (int v = 0; v < 256; ++v) {
        out << v << ',' << h.counts[v] << ',' << h.cumulative[v] << '\n';
    }
    write_text(path, out.str());
}

void write_planes_sidecar(const fs::path& path, const ColorPlanes& planes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot open for writing: " + path.string());
    out << "claritas-planes " << space_name(planes.space) << ' ' << planes.width() << ' '
        << planes.height() << " 3\n";
    for (const FloatPlane* plane : {&planes.c0, &planes.c1, &planes.c2}) {
        out.write(reinterpret_cast<const char*>(plane->data.data()),
                  static_cast<std::streamsize>(plane->data.size() * sizeof(double)));
    }
    if (!out) throw IoFailure("short write: " + path.string());
}

ColorPlanes read_planes_sidecar(const fs::path& path, Space expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("cannot open: " + path.string());
    std::string magic, space;
    int w = 0, h = 0, n = 0;
    in >> magic >> space >> w >> h >> n;
    in.ignore(1);  // newline after the header
    if (magic != "claritas-planes" || n != 3 || w < 1 || h < 1 ||
        static_cast<long long>(w) * h > (1LL << 28)) {
        throw CorruptData("malformed planes sidecar: " + path.string());
    }
    if (space != space_name(expected)) {
        throw SpaceTagMismatch("sidecar is tagged " + space + ", expected " +
                               space_name(expected) + ": " + path.string());
    }
    ColorPlanes planes;
    planes.space = expected;
    planes.c0 = FloatPlane(w, h);
    planes.c1 = FloatPlane(w, h);
    planes.c2 = FloatPlane(w, h);
    for (FloatPlane* plane : {&planes.c0, &planes.c1, &planes.c2}) {
        in.read(reinterpret_cast<char*>(plane->data.data()),
                static_cast<std::streamsize>(plane->data.size() * sizeof(double)));
        if (static_cast<std::size_t>(in.gcount()) != plane->data.size() * sizeof(double)) {
            throw CorruptData("planes sidecar shorter than its header: " + path.string());
        }
    }
    return planes;
}

RasterImage load_as_gray(const fs::path& input, const GlobalOptions& g) {
    RasterImage img = load_image(input);
    if (img.channels != 1) {
        diagnostic(g, input.string() + ": color input converted to grayscale");
        img = to_grayscale(img);
    }
    return img;
}

// -------------------------------------------------------------------------
// Metric report rows
// -------------------------------------------------------------------------

struct MetricsRow {
    std::string file;
    std::string space;
    bool ok = false;
    MetricsReport report;
    std::string error;
};

MetricsRow compute_row(const fs::path& input, const std::string& space,
                       const MetricsConfig& config) {
    MetricsRow row;
    row.file = input.string();
    row.space = space;
    try {
        const RasterImage img = load_image(input);
        RasterImage subject = img;
        if (space == "rgb") {
            row.space = img.channels == 1 ? "gray" : "rgb";
        } else {
            const auto tag = space_from_name(space);
            if (!tag || *tag == Space::Rgb) {
                throw ConfigError("metrics: unknown color space: " + space);
            }
            subject = planes_to_raster(convert_from_rgb(rgb_planes(img), *tag));
        }
        row.report = metrics_report(subject, config);
        row.report.source = row.file;
        row.report.space = row.space;
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    return row;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    out << "file,space,colorfulness,entropy,rms_contrast,mean,entropy_variant,"
           "contrast_variant\n";
    for (const MetricsRow& row : rows) {
        std::vector<std::string> fields;
        if (row.ok) {
            fields = {row.file,
                      row.space,
                      format_double(row.report.colorfulness),
                      format_double(row.report.entropy),
                      format_double(row.report.rms_contrast),
                      format_double(row.report.mean),
                      entropy_variant_name(row.report.entropy_variant),
                      contrast_variant_name(row.report.contrast_variant)};
        } else {
            fields = {row.file, "error", "", "", "", "", "", ""};
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            out << csv_field(fields[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string metrics_json(const std::vector<MetricsRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const MetricsRow& row : rows) {
        ordered_json obj;
        obj["file"] = row.file;
        if (row.ok) {
            obj["space"] = row.space;
            obj["colorfulness"] = row.report.colorfulness;
            obj["entropy"] = row.report.entropy;
            obj["rms_contrast"] = row.report.rms_contrast;
            obj["mean"] = row.report.mean;
            obj["entropy_variant"] = entropy_variant_name(row.report.entropy_variant);
            obj["contrast_variant"] = contrast_variant_name(row.report.contrast_variant);
        } else {
            obj["space"] = "error";
            obj["error"] = row.error;
        }
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

// -------------------------------------------------------------------------
// Input globs (batch): * and ? in the filename component
// -------------------------------------------------------------------------

bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string::npos, star_n = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p, ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_n = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++star_n;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& patterns) {
    std::vector<fs::path> inputs;
    for (const std::string& pattern : patterns) {
        const fs::path as_path(pattern);
        const std::string name = as_path.filename().string();
        if (name.find_first_of("*?") == std::string::npos) {
            inputs.emplace_back(pattern);
            continue;
        }
        const fs::path dir = as_path.parent_path().empty() ? "." : as_path.parent_path();
        std::vector<fs::path> matches;
        if (fs::is_directory(dir)) {
            for (const auto& entry : fs::directory_iterator(dir)) {
                if (entry.is_regular_file() &&
                    glob_match(name, entry.path().filename().string())) {
                    matches.push_back(entry.path());
                }
            }
        }
        std::sort(matches.begin(), matches.end());
        if (matches.empty()) {
            throw ConfigError("no inputs matched: " + pattern);
        }
        inputs.insert(inputs.end(), matches.begin(), matches.end());
    }
    return inputs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

CommandResult cmd_convert(const fs::path& input, const std::string& space, bool inverse,
                          bool raw_planes, const GlobalOptions& g) {
    CommandResult result;
    const std::string stem = input.stem().string();

    if (space == "gray") {
        if (inverse) throw ConfigError("convert: --inverse is not defined for gray");
        if (raw_planes) throw ConfigError("convert: --raw-planes is not defined for gray");
        const RasterImage gray = to_grayscale(load_image(input));
        const fs::path out = prepare_output(g, stem + "_gray" + gray_ext(input));
        save_image(gray, out);
        result.outputs.push_back(out);
        return result;
    }

    const auto tag = space_from_name(space);
    if (!tag || *tag == Space::Rgb) {
        throw ConfigError("convert: unknown color space: " + space);
    }

    ColorPlanes produced;
    std::string out_tag;
    if (inverse) {
        // A lossless float sidecar written by the forward conversion takes
        // precedence over de-rasterizing the 8-bit image.
        fs::path sidecar = input;
        sidecar.replace_extension(".planes");
        ColorPlanes planes;
        if (fs::exists(sidecar)) {
            planes = read_planes_sidecar(sidecar, *tag);
            diagnostic(g, "using float planes from " + sidecar.string());
        } else {
            planes = raster_to_planes(load_image(input), *tag);
        }
        GamutStats stats;
        produced = convert_to_rgb(planes, &stats);
        if (stats.clamped > 0) {
            diagnostic(g, input.string() + ": " + std::to_string(stats.clamped) +
                              " out-of-gamut component(s) clamped");
        }
        out_tag = "rgb";
    } else {
        produced = convert_from_rgb(rgb_planes(load_image(input)), *tag);
        out_tag = space;
    }

    const fs::path out = prepare_output(g, stem + "_" + out_tag + color_ext(input));
    save_image(planes_to_raster(produced), out);
    result.outputs.push_back(out);

    if (raw_planes) {
        const fs::path sidecar = prepare_output(g, stem + "_" + out_tag + ".planes");
        write_planes_sidecar(sidecar, produced);
        result.outputs.push_back(sidecar);
    }
    return result;
}

CommandResult cmd_metrics(const std::vector<fs::path>& inputs,
                          const std::vector<std::string>& spaces, const MetricsConfig& config,
                          const GlobalOptions& g) {
    if (inputs.empty()) throw ConfigError("metrics: at least one input is required");

    std::vector<MetricsRow> rows;
    for (const fs::path& input : inputs) {
        for (const std::string& space : spaces) {
            rows.push_back(compute_row(input, space, config));
        }
    }

    CommandResult result;
    const bool csv = g.format == ReportFormat::Csv;
    const fs::path out = prepare_output(g, csv ? "metrics.csv" : "metrics.json");
    write_text(out, csv ? metrics_csv(rows) : metrics_json(rows));
    result.outputs.push_back(out);
    for (const MetricsRow& row : rows) {
        if (!row.ok) {
            diagnostic(g, row.file + ": " + row.error);
            result.failed_items++;
        }
    }
    return result;
}

CommandResult cmd_equalize(const fs::path& input, const GlobalOptions& g) {
    const RasterImage gray = load_as_gray(input, g);
    const std::string stem = input.stem().string();

    bool degenerate = false;
    const RasterImage equalized = equalize_global(gray, &degenerate);
    if (degenerate) {
        diagnostic(g, input.string() +
                          ": constant image, equalization mapping is undefined; copied through");
    }

    CommandResult result;
    const fs::path out_img = prepare_output(g, stem + "_eq" + gray_ext(input));
    save_image(equalized, out_img);
    result.outputs.push_back(out_img);

    const fs::path before = prepare_output(g, stem + "_hist_before.csv");
    write_histogram_csv(before, histogram(gray));
    result.outputs.push_back(before);

    const fs::path after = prepare_output(g, stem + "_hist_after.csv");
    write_histogram_csv(after, histogram(equalized));
    result.outputs.push_back(after);
    return result;
}

CommandResult cmd_clahe(const fs::path& input, const ClaheParams& params,
                        const GlobalOptions& g) {
    const RasterImage gray = load_as_gray(input, g);
    const RasterImage enhanced = clahe(gray, params);

    CommandResult result;
    const fs::path out = prepare_output(g, input.stem().string() + "_clahe" + gray_ext(input));
    save_image(enhanced, out);
    result.outputs.push_back(out);
    return result;
}

CommandResult cmd_entropy_map(const fs::path& input, int radius, const GlobalOptions& g) {
    const RasterImage gray = load_as_gray(input, g);
    const FloatPlane plane = entropy_map(gray, radius);

    RasterImage img(plane.width, plane.height, 1);
    for (std::size_t i = 0; i < plane.data.size(); ++i) {
        img.data[i] = round_to_u8(plane.data[i] * 255.0 / 8.0);
    }

    CommandResult result;
    const fs::path out =
        prepare_output(g, input.stem().string() + "_entropy" + gray_ext(input));
    save_image(img, out);
    result.outputs.push_back(out);
    return result;
}

// ---------------------------------------------------------------------------
// Batch
// ---------------------------------------------------------------------------

namespace {

struct BatchJob {
    std::string command;
    std::vector<std::string> input_patterns;
    std::vector<std::string> spaces = {"rgb"};
    std::string space = "gray";
    bool inverse = false;
    bool raw_planes = false;
    ClaheParams clahe_params;
    int radius = 5;
    MetricsConfig metrics_config;
    ordered_json params;  // echoed into the manifest
};

const ordered_json& require_field(const ordered_json& job, const char* key, int index) {
    const auto it = job.find(key);
    if (it == job.end()) {
        throw ConfigError("batch job " + std::to_string(index) + ": missing \"" + key + "\"");
    }
    return *it;
}

std::string string_field(const ordered_json& value, const char* key, int index) {
    if (!value.is_string()) {
        throw ConfigError("batch job " + std::to_string(index) + ": \"" + key +
                          "\" must be a string");
    }
    return value.get<std::string>();
}

ClaheParams parse_tiles(const std::string& tiles, double clip_limit, int index) {
    const std::size_t x = tiles.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= tiles.size()) {
        throw ConfigError("batch job " + std::to_string(index) +
                          ": \"tiles\" must look like 8x8");
    }
    try {
        const int tx = std::stoi(tiles.substr(0, x));
        const int ty = std::stoi(tiles.substr(x + 1));
        return ClaheParams(clip_limit, tx, ty);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("batch job " + std::to_string(index) + ": " + e.what());
    }
}

std::vector<std::string> known_spaces_check(const ordered_json& value, int index,
                                            bool allow_rgb) {
    std::vector<std::string> spaces;
    if (!value.is_array()) throw ConfigError("batch job " + std::to_string(index) +
                                             ": \"spaces\" must be an array");
    for (const auto& entry : value) {
        const std::string name = string_field(entry, "spaces", index);
        const bool color = space_from_name(name).has_value();
        if (!(color || (allow_rgb && name == "rgb"))) {
            throw ConfigError("batch job " + std::to_string(index) +
                              ": unknown color space: " + name);
        }
        spaces.push_back(name);
    }
    if (spaces.empty()) {
        throw ConfigError("batch job " + std::to_string(index) + ": \"spaces\" is empty");
    }
    return spaces;
}

BatchJob parse_job(const ordered_json& job, int index) {
    if (!job.is_object()) {
        throw ConfigError("batch job " + std::to_string(index) + ": must be an object");
    }
    BatchJob parsed;
    parsed.command = string_field(require_field(job, "command", index), "command", index);

    ordered_json params = job;
    params.erase("command");
    parsed.params = std::move(params);

    if (parsed.command == "metrics") {
        const ordered_json& inputs = require_field(job, "inputs", index);
        if (!inputs.is_array() || inputs.empty()) {
            throw ConfigError("batch job " + std::to_string(index) +
                              ": \"inputs\" must be a non-empty array");
        }
        for (const auto& entry : inputs) {
            parsed.input_patterns.push_back(string_field(entry, "inputs", index));
        }
        if (job.contains("spaces")) {
            parsed.spaces = known_spaces_check(job["spaces"], index, /*allow_rgb=*/true);
        }
        if (job.contains("entropy")) {
            const std::string v = string_field(job["entropy"], "entropy", index);
            if (v == "histogram") {
                parsed.metrics_config.entropy = EntropyVariant::Histogram;
            } else if (v == "glcm") {
                parsed.metrics_config.entropy = EntropyVariant::Glcm;
            } else {
                throw ConfigError("batch job " + std::to_string(index) +
                                  ": \"entropy\" must be histogram or glcm");
            }
        }
        if (job.contains("contrast")) {
            const std::string v = string_field(job["contrast"], "contrast", index);
            if (v == "global") {
                parsed.metrics_config.contrast = ContrastVariant::Global;
            } else if (v == "patch") {
                parsed.metrics_config.contrast = ContrastVariant::Patch;
            } else {
                throw ConfigError("batch job " + std::to_string(index) +
                                  ": \"contrast\" must be global or patch");
            }
        }
        return parsed;
    }

    parsed.input_patterns.push_back(
        string_field(require_field(job, "input", index), "input", index));

    if (parsed.command == "convert") {
        parsed.space = string_field(require_field(job, "space", index), "space", index);
        if (parsed.space != "gray" &&
            (!space_from_name(parsed.space) || parsed.space == "rgb")) {
            throw ConfigError("batch job " + std::to_string(index) +
                              ": unknown color space: " + parsed.space);
        }
        if (job.contains("inverse")) {
            if (!job["inverse"].is_boolean()) {
                throw ConfigError("batch job " + std::to_string(index) +
                                  ": \"inverse\" must be a boolean");
            }
            parsed.inverse = job["inverse"].get<bool>();
        }
        if (job.contains("raw_planes")) {
            if (!job["raw_planes"].is_boolean()) {
                throw ConfigError("batch job " + std::to_string(index) +
                                  ": \"raw_planes\" must be a boolean");
            }
            parsed.raw_planes = job["raw_planes"].get<bool>();
        }
    } else if (parsed.command == "clahe") {
        double clip = 2.0;
        if (job.contains("clip_limit")) {
            if (!job["clip_limit"].is_number()) {
                throw ConfigError("batch job " + std::to_string(index) +
                                  ": \"clip_limit\" must be a number");
            }
            clip = job["clip_limit"].get<double>();
        }
        std::string tiles = "8x8";
        if (job.contains("tiles")) tiles = string_field(job["tiles"], "tiles", index);
        parsed.clahe_params = parse_tiles(tiles, clip, index);
    } else if (parsed.command == "entropy-map") {
        if (job.contains("radius")) {
            if (!job["radius"].is_number_integer() || job["radius"].get<int>() < 1) {
                throw ConfigError("batch job " + std::to_string(index) +
                                  ": \"radius\" must be a positive integer");
            }
            parsed.radius = job["radius"].get<int>();
        }
    } else if (parsed.command != "equalize") {
        throw ConfigError("batch job " + std::to_string(index) + ": unknown command: " +
                          parsed.command);
    }
    return parsed;
}

CommandResult run_job(const BatchJob& job, const GlobalOptions& g) {
    if (job.command == "metrics") {
        return cmd_metrics(expand_inputs(job.input_patterns), job.spaces, job.metrics_config,
                           g);
    }
    const fs::path input = job.input_patterns.front();
    if (job.command == "convert") {
        return cmd_convert(input, job.space, job.inverse, job.raw_planes, g);
    }
    if (job.command == "equalize") {
        return cmd_equalize(input, g);
    }
    if (job.command == "clahe") {
        return cmd_clahe(input, job.clahe_params, g);
    }
    return cmd_entropy_map(input, job.radius, g);
}

}  // namespace

CommandResult cmd_batch(const fs::path& config_path, const GlobalOptions& g) {
    std::ifstream in(config_path);
    if (!in) throw FileNotFound("cannot open: " + config_path.string());

    ordered_json config;
    try {
        config = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("batch config: ") + e.what());
    }
    if (!config.is_object() || !config.contains("schema_version") ||
        !config["schema_version"].is_number_integer() ||
        config["schema_version"].get<int>() != 1) {
        throw ConfigError("batch config: expected {\"schema_version\": 1, ...}");
    }
    if (!config.contains("jobs") || !config["jobs"].is_array()) {
        throw ConfigError("batch config: \"jobs\" must be an array");
    }

    GlobalOptions base = g;
    if (config.contains("format")) {
        const std::string fmt = config["format"].is_string()
                                    ? config["format"].get<std::string>()
                                    : std::string();
        if (fmt == "csv") {
            base.format = ReportFormat::Csv;
        } else if (fmt == "json") {
            base.format = ReportFormat::Json;
        } else {
            throw ConfigError("batch config: \"format\" must be csv or json");
        }
    }

    // Validate everything before writing anything.
    std::vector<BatchJob> jobs;
    int index = 0;
    for (const auto& entry : config["jobs"]) {
        jobs.push_back(parse_job(entry, index));
        index++;
    }

    CommandResult result;
    ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["jobs"] = ordered_json::array();

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        char dir_name[16];
        std::snprintf(dir_name, sizeof(dir_name), "job%03zu", i);

        GlobalOptions job_options = base;
        job_options.output_dir = base.output_dir / dir_name;

        ordered_json record;
        record["index"] = i;
        record["command"] = jobs[i].command;
        record["inputs"] = jobs[i].input_patterns;
        record["params"] = jobs[i].params;

        try {
            const CommandResult job_result = run_job(jobs[i], job_options);
            ordered_json outputs = ordered_json::array();
            for (const fs::path& out : job_result.outputs) {
                outputs.push_back(fs::relative(out, base.output_dir).generic_string());
                result.outputs.push_back(out);
            }
            record["outputs"] = std::move(outputs);
            if (job_result.failed_items > 0) {
                record["status"] = "error";
                record["error"] = std::to_string(job_result.failed_items) +
                                  " item(s) failed; see the report for details";
                result.failed_items++;
            } else {
                record["status"] = "ok";
            }
        } catch (const std::exception& e) {
            record["outputs"] = ordered_json::array();
            record["status"] = "error";
            record["error"] = e.what();
            result.failed_items++;
            diagnostic(g, std::string(dir_name) + " (" + jobs[i].command +
                              ") failed: " + e.what());
        }
        manifest["jobs"].push_back(std::move(record));
    }

    const fs::path manifest_path = prepare_output(base, "manifest.json");
    write_text(manifest_path, manifest.dump(2) + "\n");
    result.outputs.push_back(manifest_path);
    return result;
}

}  // namespace claritas::cli
