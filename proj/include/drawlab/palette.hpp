#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "drawlab/corpus.hpp"
#include "drawlab/image.hpp"

namespace drawlab::palette {

/// Two-component diagonal Gaussian mixture separating paper background from
/// colored foreground in LAB. Component 0 is the background (higher mean L).
struct ForegroundModel {
    Eigen::Vector2d mixing;                // (background, foreground), sums to 1
    Eigen::Matrix<double, 2, 3> means;     // LAB means, row per component
    Eigen::Matrix<double, 2, 3> variances; // diagonal LAB variances
    BinaryMask mask;                       // true = colored foreground
    double log_likelihood = 0.0;
    int iterations = 0;

    long foreground_pixels() const { return mask.count(); }
};

/// Fit the background/foreground mixture with EM, initialized from the
/// lightness prior (paper white sits at the top of the L channel).
ForegroundModel extract_foreground(const LabImage& img);

/// Collect the LAB coordinates of mask-selected pixels in row-major order.
LabPoints mask_points(const LabImage& img, const BinaryMask& mask);

struct KMeansResult {
    Eigen::Matrix<double, Eigen::Dynamic, 3> centroids;
    std::vector<int> assignments;
    double wcss = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding; best of five restarts by
/// within-cluster sum of squares; empty clusters re-seeded at the farthest
/// point.
KMeansResult kmeans_lab(const LabPoints& points, int k, std::uint64_t seed);

/// Mass-weighted variant used when pooling palettes across a group.
KMeansResult kmeans_weighted(const LabPoints& points, const Eigen::VectorXd& weights, int k,
                             std::uint64_t seed);

/// Mean Silhouette score over all points; a(j) and b(j) from full pairwise
/// distances. Points in singleton clusters contribute 0.
double silhouette_exact(const LabPoints& points, const std::vector<int>& assignments);
Eigen::VectorXd silhouette_exact_per_point(const LabPoints& points,
                                           const std::vector<int>& assignments);

/// Centroid approximation: a(j) = distance to own centroid, b(j) = distance
/// to the next closest centroid.
double silhouette_approx(const LabPoints& points, const std::vector<int>& assignments,
                         const Eigen::Matrix<double, Eigen::Dynamic, 3>& centroids);
Eigen::VectorXd silhouette_approx_per_point(const LabPoints& points,
                                            const std::vector<int>& assignments,
                                            const Eigen::Matrix<double, Eigen::Dynamic, 3>& centroids);

/// Extracted pencil colors of one drawing.
struct Palette {
    int K = 0;                                      // selected cluster count
    Eigen::Matrix<double, Eigen::Dynamic, 3> centroids; // K LAB rows
    Eigen::VectorXi masses;                         // pixels per cluster, sums to |foreground|
    std::map<int, double> silhouette_curve;         // k -> approximate Silhouette
};

/// Sweep k = 2..10 over the foreground pixels and keep the clustering whose
/// approximate Silhouette peaks (ties -> smaller k).
Palette select_palette(const LabPoints& foreground_pixels, std::uint64_t seed);
Palette select_palette(const LabImage& img, std::uint64_t seed);

/// Replace foreground pixels by their palette centroid (in sRGB) and paint
/// the background white.
RasterImage reconstruct(const LabImage& img, const Palette& palette, const BinaryMask& foreground);

struct GroupPalette {
    corpus::GroupKey key;
    Eigen::Matrix<double, Eigen::Dynamic, 3> colors; // LAB, most popular first
    Eigen::VectorXd weights;                         // descending
};

/// Pool the centroids of many palettes (weighted by their pixel masses) into
/// at most swatch_count representative colors, sorted by popularity.
GroupPalette group_palette(const std::vector<Palette>& palettes, int swatch_count,
                           corpus::GroupKey key, std::uint64_t seed);

} // namespace drawlab::palette
