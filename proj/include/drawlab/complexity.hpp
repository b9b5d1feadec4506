#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drawlab/corpus.hpp"
#include "drawlab/image.hpp"
#include "drawlab/palette.hpp"

namespace drawlab::complexity {

struct HarrisParams {
    double k = 0.04;            // trace weight in the corner response
    double rel_threshold = 0.01; // responses above this fraction of the max survive
    int nms_radius = 5;          // non-maximum suppression window radius, pixels
};

/// Count Harris corners: Sobel gradients, structure tensor smoothed with a
/// Gaussian (sigma 1.5), response thresholded relative to its maximum, then
/// non-maximum suppression. Throws for images smaller than 3x3.
int harris_corners(const GrayImage& img, const HarrisParams& params = {});

/// Mean over the RGB channels of the population variance of the palette
/// centroids (converted to sRGB).
double palette_variability(const palette::Palette& palette);

struct ComplexityRecord {
    std::string id;
    int corner_count = 0;
    double palette_variability = 0.0;
    std::optional<double> age;
};

struct AgeScatter {
    struct BinSummary {
        corpus::AgeBin bin;
        int n = 0;
        double corner_median = 0.0;
        double variability_median = 0.0;
    };

    std::vector<std::pair<double, double>> corner_points;      // (age, corner count)
    std::vector<std::pair<double, double>> variability_points; // (age, variability)
    std::vector<BinSummary> bins;                              // only bins with data
};

/// Scatter datasets plus per-bin medians; records without a known age appear
/// in neither.
AgeScatter complexity_by_age(const std::vector<ComplexityRecord>& records,
                             const std::vector<corpus::AgeBin>& bins);

} // namespace drawlab::complexity
