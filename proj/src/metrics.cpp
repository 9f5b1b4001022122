#include "claritas/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "claritas/error.hpp"

namespace claritas {

namespace {

void require_gray(const RasterImage& img, const char* op) {
    if (img.channels != 1) {
        throw std::invalid_argument(std::string(op) + ": expects a 1-channel image");
    }
}

int mirror_index(int c, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    int m = c % period;
    if (m < 0) m += period;
    return m < n ? m : period - m;
}

std::pair<int, int> glcm_offset(GlcmAngle angle, int d) {
    switch (angle) {
        case GlcmAngle::Deg0: return {d, 0};
        case GlcmAngle::Deg45: return {d, -d};
        case GlcmAngle::Deg90: return {0, -d};
        case GlcmAngle::Deg135: return {-d, -d};
    }
    throw std::invalid_argument("glcm: unknown angle");
}

double population_std(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return std::sqrt(sq / n);
}

}  // namespace

OpponentChannels opponent_channels(const RasterImage& img) {
    if (img.channels != 3) {
        throw NotColor("opponent_channels: expects a 3-channel image");
    }
    OpponentChannels out;
    out.rg = FloatPlane(img.width, img.height);
    out.yb = FloatPlane(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0] / 255.0;
        const double g = img.data[i * 3 + 1] / 255.0;
        const double b = img.data[i * 3 + 2] / 255.0;
        out.rg.data[i] = r - g;
        out.yb.data[i] = 0.5 * (r + g) - b;
    }
    return out;
}

double colorfulness(const RasterImage& img) {
    OpponentChannels opp;
    if (img.channels == 3) {
        opp = opponent_channels(img);
    } else {
        // R=G=B promotion makes both opponent planes exactly zero.
        opp.rg = FloatPlane(img.width, img.height);
        opp.yb = FloatPlane(img.width, img.height);
    }
    const double n = static_cast<double>(img.pixel_count());
    double sum_rg = 0.0, sum_yb = 0.0;
    for (std::size_t i = 0; i < opp.rg.data.size(); ++i) {
        sum_rg += opp.rg.data[i];
        sum_yb += opp.yb.data[i];
    }
    const double mu_rg = sum_rg / n;
    const double mu_yb = sum_yb / n;
    double var_rg = 0.0, var_yb = 0.0;
    for (std::size_t i = 0; i < opp.rg.data.size(); ++i) {
        var_rg += (opp.rg.data[i] - mu_rg) * (opp.rg.data[i] - mu_rg);
        var_yb += (opp.yb.data[i] - mu_yb) * (opp.yb.data[i] - mu_yb);
    }
    var_rg /= n;
    var_yb /= n;
    return std::sqrt(var_rg + var_yb) + 0.3 * std::sqrt(mu_rg * mu_rg + mu_yb * mu_yb);
}

double histogram_entropy(const RasterImage& gray) {
    require_gray(gray, "histogram_entropy");
    std::uint64_t counts[256] = {};
    for (std::uint8_t v : gray.data) counts[v]++;
    const double n = static_cast<double>(gray.data.size());
    double h = 0.0;
    for (int v = 0; v < 256; ++v) {
        if (counts[v] == 0) continue;
        const double p = counts[v] / n;
        h -= p * std::log2(p);
    }
    return h;
}

GlcmMatrix glcm(const RasterImage& gray, const GlcmParams& params, GlcmAngle angle) {
    require_gray(gray, "glcm");
    if (params.distance < 1) throw std::invalid_argument("glcm: distance must be >= 1");
    if (params.levels < 2 || params.levels > 256) {
        throw std::invalid_argument("glcm: levels must be in [2, 256]");
    }

    const auto [dx, dy] = glcm_offset(angle, params.distance);
    const int levels = params.levels;

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(levels) * levels, 0);
    std::uint64_t pairs = 0;
    for (int y = 0; y < gray.height; ++y) {
        const int ny = y + dy;
        if (ny < 0 || ny >= gray.height) continue;
        for (int x = 0; x < gray.width; ++x) {
            const int nx = x + dx;
            if (nx < 0 || nx >= gray.width) continue;
            const int i = gray.at(x, y) * levels / 256;
            const int j = gray.at(nx, ny) * levels / 256;
            counts[static_cast<std::size_t>(i) * levels + j]++;
            pairs++;
        }
    }
    if (pairs == 0) {
        throw ImageTooSmall("glcm: no pixel pair fits the requested offset");
    }

    GlcmMatrix out;
    out.levels = levels;
    out.p.resize(counts.size());
    const double total = static_cast<double>(pairs);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out.p[i] = counts[i] / total;
    }
    return out;
}

double glcm_entropy(const RasterImage& gray, const GlcmParams& params) {
    static constexpr GlcmAngle kAngles[4] = {GlcmAngle::Deg0, GlcmAngle::Deg45,
                                             GlcmAngle::Deg90, GlcmAngle::Deg135};
    double sum = 0.0;
    for (GlcmAngle angle : kAngles) {
        const GlcmMatrix m = glcm(gray, params, angle);
        double h = 0.0;
        for (double p : m.p) {
            if (p > 0.0) h -= p * std::log10(p);
        }
        sum += h;
    }
    return sum / 4.0;
}

FloatPlane entropy_map(const RasterImage& gray, int radius) {
    require_gray(gray, "entropy_map");
    if (radius < 1) throw std::invalid_argument("entropy_map: radius must be >= 1");

    // Disk spans per row offset: |dx| <= span[dy + radius].
    std::vector<int> span(2 * radius + 1);
    int disk_size = 0;
    for (int dy = -radius; dy <= radius; ++dy) {
        const int k = static_cast<int>(std::sqrt(
            static_cast<double>(radius) * radius - static_cast<double>(dy) * dy));
        span[dy + radius] = k;
        disk_size += 2 * k + 1;
    }

    // c * log2(c) for every possible bin count; reflection keeps the disk
    // population constant at disk_size everywhere.
    std::vector<double> clog(disk_size + 1, 0.0);
    for (int c = 2; c <= disk_size; ++c) {
        clog[c] = c * std::log2(static_cast<double>(c));
    }
    const double n = static_cast<double>(disk_size);
    // Expressed via the same table entry so a single-bin window (constant
    // neighborhood) yields exactly zero.
    const double log_n = clog[disk_size] / n;

    FloatPlane out(gray.width, gray.height);
    std::vector<int> counts(256, 0);
    for (int y = 0; y < gray.height; ++y) {
        // Build the initial window at x = 0, then slide right: per disk row,
        // one sample leaves on the left and one enters on the right.
        std::fill(counts.begin(), counts.end(), 0);
        double weighted = 0.0;  // sum of c*log2(c) over bins
        for (int dy = -radius; dy <= radius; ++dy) {
            const int sy = mirror_index(y + dy, gray.height);
            for (int dx = -span[dy + radius]; dx <= span[dy + radius]; ++dx) {
                int& c = counts[gray.at(mirror_index(dx, gray.width), sy)];
                weighted -= clog[c];
                c++;
                weighted += clog[c];
            }
        }
        out.at(0, y) = std::max(0.0, log_n - weighted / n);
        for (int x = 1; x < gray.width; ++x) {
            for (int dy = -radius; dy <= radius; ++dy) {
                const int sy = mirror_index(y + dy, gray.height);
                const int k = span[dy + radius];
                int& leave = counts[gray.at(mirror_index(x - 1 - k, gray.width), sy)];
                weighted -= clog[leave];
                leave--;
                weighted += clog[leave];
                int& enter = counts[gray.at(mirror_index(x + k, gray.width), sy)];
                weighted -= clog[enter];
                enter++;
                weighted += clog[enter];
            }
            out.at(x, y) = std::max(0.0, log_n - weighted / n);
        }
    }
    return out;
}

FloatPlane raised_cosine_weights(int patch_radius) {
    if (patch_radius < 1) {
        throw std::invalid_argument("raised_cosine_weights: radius must be >= 1");
    }
    const int size = 2 * patch_radius + 1;
    FloatPlane out(size, size);
    const double p = patch_radius;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = x - patch_radius;
            const double dy = y - patch_radius;
            const double dist = std::sqrt(dx * dx + dy * dy);
            out.at(x, y) = dist >= p ? 0.0 : 0.5 * (std::cos(M_PI / p * dist) + 1.0);
        }
    }
    return out;
}

double local_luminance(const FloatPlane& patch, const FloatPlane& weights) {
    if (patch.width != weights.width || patch.height != weights.height) {
        throw DimensionMismatch("local_luminance: patch and weights differ in size");
    }
    double w_sum = 0.0, wl_sum = 0.0;
    for (std::size_t i = 0; i < patch.data.size(); ++i) {
        w_sum += weights.data[i];
        wl_sum += weights.data[i] * patch.data[i];
    }
    if (!(w_sum > 0.0)) throw ZeroWeightSum("local_luminance: weight sum is not positive");
    return wl_sum / w_sum;
}

double patch_rms_contrast(const FloatPlane& patch, const FloatPlane& weights) {
    const double lum = local_luminance(patch, weights);  // validates inputs
    double w_sum = 0.0, dev_sum = 0.0;
    for (std::size_t i = 0; i < patch.data.size(); ++i) {
        const double d = patch.data[i] - lum;
        w_sum += weights.data[i];
        dev_sum += weights.data[i] * d * d;
    }
    if (dev_sum == 0.0) return 0.0;  // constant patch, regardless of luminance
    if (lum == 0.0) {
        throw ZeroLuminance("patch_rms_contrast: zero luminance with nonconstant patch");
    }
    return std::sqrt(dev_sum / (lum * lum * w_sum));
}

double global_rms_contrast(const RasterImage& img) {
    const RasterImage gray = img.channels == 1 ? img : to_grayscale(img);
    std::vector<double> values(gray.data.begin(), gray.data.end());
    return population_std(values);
}

double image_mean(const RasterImage& img) {
    std::uint64_t sum = 0;
    for (std::uint8_t v : img.data) sum += v;
    return static_cast<double>(sum) / static_cast<double>(img.data.size());
}

std::string entropy_variant_name(EntropyVariant v) {
    return v == EntropyVariant::Histogram ? "histogram" : "glcm";
}

std::string contrast_variant_name(ContrastVariant v) {
    return v == ContrastVariant::Global ? "global" : "patch";
}

namespace {

// Image-level form of the patch contrast: mean of patch_rms_contrast over
// raised-cosine windows centered on a grid with spacing patch_radius,
// windows (and their weight planes) clipped at image borders.
double patch_contrast_grid(const RasterImage& gray, int patch_radius) {
    const FloatPlane weights = raised_cosine_weights(patch_radius);
    const int p = patch_radius;

    double sum = 0.0;
    int windows = 0;
    for (int cy = 0; cy < gray.height; cy += p) {
        for (int cx = 0; cx < gray.width; cx += p) {
            const int x0 = std::max(0, cx - p);
            const int x1 = std::min(gray.width - 1, cx + p);
            const int y0 = std::max(0, cy - p);
            const int y1 = std::min(gray.height - 1, cy + p);
            FloatPlane patch(x1 - x0 + 1, y1 - y0 + 1);
            FloatPlane w(x1 - x0 + 1, y1 - y0 + 1);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    patch.at(x - x0, y - y0) = gray.at(x, y);
                    w.at(x - x0, y - y0) = weights.at(x - cx + p, y - cy + p);
                }
            }
            sum += patch_rms_contrast(patch, w);
            windows++;
        }
    }
    return sum / windows;
}

}  // namespace

MetricsReport metrics_report(const RasterImage& img, const MetricsConfig& config) {
    const RasterImage gray = img.channels == 1 ? img : to_grayscale(img);

    MetricsReport report;
    report.colorfulness = colorfulness(img);
    report.mean = image_mean(img);
    report.entropy_variant = config.entropy;
    report.contrast_variant = config.contrast;

    if (config.entropy == EntropyVariant::Histogram) {
        report.entropy = histogram_entropy(gray);
    } else {
        report.entropy = glcm_entropy(gray, config.glcm);
    }
    if (config.contrast == ContrastVariant::Global) {
        report.rms_contrast = global_rms_contrast(gray);
    } else {
        report.rms_contrast = patch_contrast_grid(gray, config.patch_radius);
    }
    return report;
}

}  // namespace claritas
