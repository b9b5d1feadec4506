#pragma once

#include <string>
#include <vector>

#include "drawlab/image.hpp"

namespace drawlab::colorfield {

/// A named LAB color with the distance threshold under which a pixel counts
/// as being "that color".
struct ReferenceColor {
    std::string name;
    Lab lab;
    double threshold = 50.0;
};

/// The paper's two reference colors, threshold 50.
ReferenceColor green_reference();  // LAB (50, -50, 50)
ReferenceColor yellow_reference(); // LAB (80, 0, 100)

using PresenceMask = BinaryMask;

struct HeatMap {
    Eigen::ArrayXXi counts;
    int n = 0;

    int side() const { return static_cast<int>(counts.rows()); }
};

/// Mark each pixel whose Euclidean LAB distance to the reference is within
/// the threshold. The image must be square (the k-by-k working raster).
PresenceMask presence_mask(const LabImage& img, const ReferenceColor& ref);

/// Per-cell sum of same-sized masks.
HeatMap aggregate_masks(const std::vector<PresenceMask>& masks);

/// |mask AND foreground| / |foreground|. Throws when the foreground is empty.
double color_proportion(const PresenceMask& mask, const PresenceMask& foreground);

/// Shrink a mask to side x side cells; a cell is set when at least half of
/// the source pixels it covers are set.
PresenceMask downsample_majority(const PresenceMask& mask, int side);

} // namespace drawlab::colorfield
