#include "drawlab/gravity.hpp"

#include "drawlab/errors.hpp"
#include "drawlab/imaging.hpp"

namespace drawlab::gravity {

namespace {

// Pairwise reduction keeps the group mean stable however large the group gets.
Eigen::VectorXd pairwise_sum(const std::vector<IntensityProfile>& profiles, std::size_t lo,
                             std::size_t hi) {
    if (hi - lo == 1) return profiles[lo].values;
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(profiles, lo, mid) + pairwise_sum(profiles, mid, hi);
}

} // namespace

IntensityProfile intensity_profile(const GrayImage& img, int height) {
    if (img.width() < 1 || img.height() < 1) throw Error("intensity_profile: empty image");
    if (height < 1) throw Error("intensity_profile: height must be positive");
    const GrayImage scaled = imaging::resize_to_height(img, height);
    IntensityProfile out;
    out.values = 255.0 - scaled.values.rowwise().mean();
    return out;
}

GroupProfile group_profile(const std::vector<IntensityProfile>& profiles, corpus::GroupKey key) {
    if (profiles.empty()) throw Error("group_profile: no profiles");
    const Eigen::Index h = profiles.front().values.size();
    for (const auto& p : profiles) {
        if (p.values.size() != h) throw Error("group_profile: profiles have mixed lengths");
    }
    GroupProfile out;
    out.key = std::move(key);
    out.n = static_cast<int>(profiles.size());
    out.mean = pairwise_sum(profiles, 0, profiles.size()) / static_cast<double>(profiles.size());
    return out;
}

double colored_proportion(const IntensityProfile& profile) {
    if (profile.values.size() == 0) throw Error("colored_proportion: empty profile");
    return profile.values.mean() / 255.0;
}

double gravity_row(const IntensityProfile& profile) {
    const Eigen::Index h = profile.values.size();
    if (h == 0) throw Error("gravity_row: empty profile");
    const double total = profile.values.sum();
    if (total <= 0.0) throw Error("gravity_row: blank drawing (all-zero profile)");
    double weighted = 0.0;
    for (Eigen::Index j = 0; j < h; ++j) {
        weighted += (static_cast<double>(j) / static_cast<double>(h)) * profile.values[j];
    }
    return weighted / total;
}

} // namespace drawlab::gravity
