#ifndef CLARITAS_METRICS_HPP
#define CLARITAS_METRICS_HPP

#include <string>
#include <vector>

#include "claritas/image.hpp"

namespace claritas {

/// Opponent color planes on [0,1]-normalized channels:
/// rg = R - G, yb = 0.5(R + G) - B. Values lie in [-1, 1]; a grayscale
/// image yields identically zero planes.
struct OpponentChannels {
    FloatPlane rg;
    FloatPlane yb;
};

/// Per-pixel opponent values of a 3-channel image (throws NotColor on 1-channel).
OpponentChannels opponent_channels(const RasterImage& img);

/// Colorfulness M = sqrt(var_rg + var_yb) + 0.3 sqrt(mean_rg^2 + mean_yb^2),
/// population statistics on [0,1]-normalized channels. Grayscale input is
/// promoted to R=G=B and scores exactly 0.
double colorfulness(const RasterImage& img);

/// Shannon entropy (bits) of the 256-bin intensity histogram; in [0, 8].
double histogram_entropy(const RasterImage& gray);

/// The four co-occurrence directions: offsets (+d,0), (+d,-d), (0,-d), (-d,-d).
enum class GlcmAngle { Deg0, Deg45, Deg90, Deg135 };

struct GlcmParams {
    int distance = 1;    // pixel offset d >= 1
    int levels = 256;    // quantization levels, 2..256; bin = floor(v * L / 256)
};

/// Normalized gray-level co-occurrence matrix P(i,j) for one direction.
struct GlcmMatrix {
    int levels = 0;
    std::vector<double> p;  // row-major, levels x levels, sums to 1

    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * levels + j]; }
};

/// Ordered-pair co-occurrence counts at the given distance/direction,
/// normalized to sum 1. Throws ImageTooSmall when no pixel pair fits.
GlcmMatrix glcm(const RasterImage& gray, const GlcmParams& params, GlcmAngle angle);

/// Co-occurrence entropy averaged over the four directions,
/// -(1/4) sum_k sum_ij P log10 P, with 0 log 0 = 0.
double glcm_entropy(const RasterImage& gray, const GlcmParams& params = {});

/// Per-pixel Shannon entropy (bits) over a Euclidean disk of the given
/// radius, reflect-101 borders. Output values lie in [0, 8].
FloatPlane entropy_map(const RasterImage& gray, int radius);

/// Raised-cosine window of size (2p+1)^2: w = 0.5(cos(pi d / p) + 1) for
/// center distance d <= p, 0 beyond (square corners).
FloatPlane raised_cosine_weights(int patch_radius);

/// Weighted mean sum(w L) / sum(w). Throws ZeroWeightSum when sum(w) <= 0.
double local_luminance(const FloatPlane& patch, const FloatPlane& weights);

/// Luminance-normalized weighted RMS contrast
/// sqrt(sum w (L - Lbar)^2 / (Lbar^2 sum w)); scale-invariant. A constant
/// patch scores 0; Lbar = 0 with a nonconstant patch throws ZeroLuminance.
double patch_rms_contrast(const FloatPlane& patch, const FloatPlane& weights);

/// Population standard deviation of 8-bit intensities (3-channel input is
/// converted to grayscale first).
double global_rms_contrast(const RasterImage& img);

/// Mean over all samples of all channels, in [0, 255].
double image_mean(const RasterImage& img);

enum class EntropyVariant { Histogram, Glcm };
enum class ContrastVariant { Global, Patch };

std::string entropy_variant_name(EntropyVariant v);
std::string contrast_variant_name(ContrastVariant v);

struct MetricsConfig {
    EntropyVariant entropy = EntropyVariant::Histogram;
    ContrastVariant contrast = ContrastVariant::Global;
    GlcmParams glcm;          // used by the Glcm entropy variant
    int patch_radius = 16;    // used by the Patch contrast variant
};

/// One report row: the four quantitative metrics plus provenance.
struct MetricsReport {
    double colorfulness = 0.0;
    double entropy = 0.0;       // bits (Histogram) or base-10 (Glcm)
    double rms_contrast = 0.0;  // intensity units (Global) or ratio (Patch)
    double mean = 0.0;
    std::string source;         // input path, filled by callers
    std::string space;          // color-space tag, filled by callers
    EntropyVariant entropy_variant = EntropyVariant::Histogram;
    ContrastVariant contrast_variant = ContrastVariant::Global;
};

/// Computes all four metrics with the configured variants. Entropy and
/// contrast are evaluated on the grayscale conversion; colorfulness and mean
/// on the image as given. The Patch contrast variant averages
/// patch_rms_contrast over windows centered on a grid with spacing
/// patch_radius, windows clipped at the borders.
MetricsReport metrics_report(const RasterImage& img, const MetricsConfig& config = {});

}  // namespace claritas

#endif  // CLARITAS_METRICS_HPP
