#pragma once

#include <vector>

#include "drawlab/corpus.hpp"
#include "drawlab/image.hpp"

namespace drawlab::gravity {

/// Per-row inverse intensity of one drawing: values[j] = 255 minus the mean
/// grayscale intensity of row j after rescaling to the profile height.
/// Index 0 is the top row; entries lie in [0,255].
struct IntensityProfile {
    Eigen::VectorXd values;

    int height() const { return static_cast<int>(values.size()); }
};

struct GroupProfile {
    corpus::GroupKey key;
    Eigen::VectorXd mean;
    int n = 0;
};

/// Rescale to the requested height (width proportional) and take per-row
/// inverse means.
IntensityProfile intensity_profile(const GrayImage& img, int height);

/// Elementwise mean of same-length profiles, accumulated pairwise.
GroupProfile group_profile(const std::vector<IntensityProfile>& profiles, corpus::GroupKey key);

/// Fraction of the page that is drawn on: mean(profile) / 255, in [0,1].
double colored_proportion(const IntensityProfile& profile);

/// Normalized vertical center of mass of the profile, in [0,1); values below
/// 0.5 mean the drawn mass sits above the middle of the page. Throws on an
/// all-zero profile (blank drawing).
double gravity_row(const IntensityProfile& profile);

} // namespace drawlab::gravity
