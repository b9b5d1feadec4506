#include "drawlab/palette.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "drawlab/errors.hpp"
#include "drawlab/imaging.hpp"
#include "drawlab/rng.hpp"

namespace drawlab::palette {

namespace {

constexpr double kVarianceFloor = 1e-4;
constexpr int kEmMaxIterations = 200;
constexpr double kEmRelTolerance = 1e-6;
constexpr int kLloydMaxIterations = 100;
constexpr int kRestarts = 5;

double percentile(Eigen::VectorXd values, double q) {
    std::sort(values.begin(), values.end());
    const double rank = q / 100.0 * static_cast<double>(values.size() - 1);
    const Eigen::Index lo = static_cast<Eigen::Index>(rank);
    const Eigen::Index hi = std::min(lo + 1, values.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

/// Per-point log density of one diagonal Gaussian, up to no missing terms.
Eigen::VectorXd diag_gaussian_log_pdf(const LabPoints& x, const Eigen::RowVector3d& mean,
                                      const Eigen::RowVector3d& var) {
    Eigen::VectorXd out = Eigen::VectorXd::Constant(
        x.rows(), -0.5 * (3.0 * std::log(2.0 * M_PI) + var.array().log().sum()));
    for (int c = 0; c < 3; ++c) {
        out.array() -= (x.col(c).array() - mean[c]).square() / (2.0 * var[c]);
    }
    return out;
}

struct Fit {
    Eigen::Vector2d mixing;
    Eigen::Matrix<double, 2, 3> means;
    Eigen::Matrix<double, 2, 3> variances;
    Eigen::VectorXd resp_fg; // responsibility of component 1 per point
    double log_likelihood = 0.0;
    int iterations = 0;
};

Fit fit_two_component(const LabPoints& x) {
    const Eigen::Index n = x.rows();

    Fit fit;
    fit.mixing = Eigen::Vector2d(0.5, 0.5);
    const Eigen::RowVector3d data_mean = x.colwise().mean();
    Eigen::RowVector3d data_var;
    for (int c = 0; c < 3; ++c) {
        data_var[c] = std::max((x.col(c).array() - data_mean[c]).square().mean(), kVarianceFloor);
    }
    // Lightness prior: paper background is the bright tail of the L channel.
    fit.means.row(0) = data_mean;
    fit.means.row(1) = data_mean;
    fit.means(0, 0) = percentile(x.col(0), 95.0);
    fit.means(1, 0) = percentile(x.col(0), 25.0);
    fit.variances.row(0) = data_var;
    fit.variances.row(1) = data_var;

    Eigen::VectorXd log_p0, log_p1, lse;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= kEmMaxIterations; ++iter) {
        log_p0 = diag_gaussian_log_pdf(x, fit.means.row(0), fit.variances.row(0)).array() +
                 std::log(fit.mixing[0]);
        log_p1 = diag_gaussian_log_pdf(x, fit.means.row(1), fit.variances.row(1)).array() +
                 std::log(fit.mixing[1]);
        lse = log_p0.cwiseMax(log_p1).array() +
              ((log_p0 - log_p0.cwiseMax(log_p1)).array().exp() +
               (log_p1 - log_p0.cwiseMax(log_p1)).array().exp())
                  .log();
        const double ll = lse.sum();
        if (ll + 1e-8 * std::abs(ll) < prev_ll) {
            throw Error("EM log-likelihood decreased; numerical failure");
        }
        fit.log_likelihood = ll;
        fit.iterations = iter;
        fit.resp_fg = (log_p1 - lse).array().exp();

        if (std::isfinite(prev_ll) &&
            std::abs(ll - prev_ll) < kEmRelTolerance * std::abs(prev_ll)) {
            break;
        }
        prev_ll = ll;

        const double n1 = fit.resp_fg.sum();
        const double n0 = static_cast<double>(n) - n1;
        if (n0 < 1e-10 || n1 < 1e-10) break; // one component vanished; keep last fit
        const Eigen::VectorXd resp_bg = 1.0 - fit.resp_fg.array();
        for (int comp = 0; comp < 2; ++comp) {
            const Eigen::VectorXd& r = comp == 0 ? resp_bg : fit.resp_fg;
            const double total = comp == 0 ? n0 : n1;
            for (int c = 0; c < 3; ++c) {
                const double mu = (r.array() * x.col(c).array()).sum() / total;
                fit.means(comp, c) = mu;
                fit.variances(comp, c) = std::max(
                    (r.array() * (x.col(c).array() - mu).square()).sum() / total, kVarianceFloor);
            }
        }
        fit.mixing[0] = n0 / static_cast<double>(n);
        fit.mixing[1] = n1 / static_cast<double>(n);
    }
    return fit;
}

void check_assignments(const LabPoints& points, const std::vector<int>& assignments, int k) {
    if (static_cast<Eigen::Index>(assignments.size()) != points.rows()) {
        throw Error("silhouette: one assignment per point required");
    }
    if (k < 2) throw Error("silhouette: need at least two clusters");
    std::vector<long> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) {
        if (a < 0 || a >= k) throw Error("silhouette: assignment out of range");
        ++sizes[static_cast<std::size_t>(a)];
    }
    for (long s : sizes) {
        if (s == 0) throw Error("silhouette: empty cluster");
    }
}

int cluster_count(const std::vector<int>& assignments) {
    int k = 0;
    for (int a : assignments) k = std::max(k, a + 1);
    return k;
}

struct LloydState {
    Eigen::Matrix<double, Eigen::Dynamic, 3> centroids;
    std::vector<int> assignments;
    double wcss = 0.0;
};

void assign_points(const LabPoints& points, const Eigen::VectorXd& weights, LloydState& state) {
    const Eigen::Index n = points.rows();
    const int k = static_cast<int>(state.centroids.rows());
    Eigen::MatrixXd d2(n, k);
    for (int j = 0; j < k; ++j) {
        d2.col(j) = (points.rowwise() - state.centroids.row(j)).rowwise().squaredNorm();
    }
    state.assignments.assign(static_cast<std::size_t>(n), 0);
    state.wcss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = 0;
        double best_d = d2(i, 0);
        for (int j = 1; j < k; ++j) {
            if (d2(i, j) < best_d) {
                best_d = d2(i, j);
                best = j;
            }
        }
        state.assignments[static_cast<std::size_t>(i)] = best;
        state.wcss += weights[i] * best_d;
    }
}

/// k-means++ seeding; sampling is weight- and distance-proportional.
Eigen::Matrix<double, Eigen::Dynamic, 3> seed_centroids(const LabPoints& points,
                                                        const Eigen::VectorXd& weights, int k,
                                                        Rng& rng) {
    const Eigen::Index n = points.rows();
    Eigen::Matrix<double, Eigen::Dynamic, 3> centroids(k, 3);

    auto sample_from = [&](const Eigen::VectorXd& mass) -> Eigen::Index {
        const double total = mass.sum();
        if (!(total > 0.0)) return static_cast<Eigen::Index>(rng.next_index(static_cast<std::size_t>(n)));
        double r = rng.next_unit() * total;
        for (Eigen::Index i = 0; i < n; ++i) {
            r -= mass[i];
            if (r <= 0.0) return i;
        }
        return n - 1;
    };

    centroids.row(0) = points.row(sample_from(weights));
    Eigen::VectorXd d2 =
        (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (int j = 1; j < k; ++j) {
        const Eigen::Index pick = sample_from(weights.array() * d2.array());
        centroids.row(j) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centroids.row(j)).rowwise().squaredNorm());
    }
    return centroids;
}

LloydState lloyd_run(const LabPoints& points, const Eigen::VectorXd& weights, int k, Rng& rng) {
    const Eigen::Index n = points.rows();
    LloydState state;
    state.centroids = seed_centroids(points, weights, k, rng);
    assign_points(points, weights, state);

    double prev_wcss = state.wcss;
    std::vector<int> prev_assignments;
    for (int iter = 0; iter < kLloydMaxIterations; ++iter) {
        prev_assignments = state.assignments;

        Eigen::Matrix<double, Eigen::Dynamic, 3> sums =
            Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(k, 3);
        Eigen::VectorXd mass = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int a = state.assignments[static_cast<std::size_t>(i)];
            sums.row(a) += weights[i] * points.row(i);
            mass[a] += weights[i];
        }
        for (int j = 0; j < k; ++j) {
            if (mass[j] > 0.0) state.centroids.row(j) = sums.row(j) / mass[j];
        }
        assign_points(points, weights, state);

        // Re-seed clusters that lost all their points at the farthest point.
        for (int attempt = 0; attempt < k; ++attempt) {
            std::vector<bool> used(static_cast<std::size_t>(k), false);
            for (int a : state.assignments) used[static_cast<std::size_t>(a)] = true;
            int empty = -1;
            for (int j = 0; j < k; ++j) {
                if (!used[static_cast<std::size_t>(j)]) {
                    empty = j;
                    break;
                }
            }
            if (empty < 0) break;
            Eigen::Index farthest = 0;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double d =
                    (points.row(i) - state.centroids.row(state.assignments[static_cast<std::size_t>(i)]))
                        .squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    farthest = i;
                }
            }
            state.centroids.row(empty) = points.row(farthest);
            assign_points(points, weights, state);
        }

        if (state.wcss > prev_wcss + 1e-6 * (1.0 + prev_wcss)) {
            throw Error("k-means objective increased; numerical failure");
        }
        prev_wcss = state.wcss;
        if (state.assignments == prev_assignments) break;
    }
    return state;
}

KMeansResult kmeans_impl(const LabPoints& points, const Eigen::VectorXd& weights, int k,
                         std::uint64_t seed) {
    if (k < 1) throw Error("k-means: k must be positive");
    if (points.rows() < k) {
        throw Error("k-means: fewer points (" + std::to_string(points.rows()) + ") than clusters (" +
                    std::to_string(k) + ")");
    }

    LloydState best;
    bool have_best = false;
    for (int restart = 0; restart < kRestarts; ++restart) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
        LloydState state = lloyd_run(points, weights, k, rng);
        if (!have_best || state.wcss < best.wcss) {
            best = std::move(state);
            have_best = true;
        }
    }
    return {std::move(best.centroids), std::move(best.assignments), best.wcss};
}

} // namespace

ForegroundModel extract_foreground(const LabImage& img) {
    const int h = img.height();
    const int w = img.width();
    if (h < 1 || w < 1) throw Error("extract_foreground: empty image");

    LabPoints x(static_cast<Eigen::Index>(h) * w, 3);
    Eigen::Index idx = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c, ++idx) {
            x(idx, 0) = img.L(r, c);
            x(idx, 1) = img.a(r, c);
            x(idx, 2) = img.b(r, c);
        }
    }

    bool distinct = false;
    for (Eigen::Index i = 1; i < x.rows() && !distinct; ++i) {
        distinct = (x.row(i) != x.row(0)).any();
    }
    if (!distinct) {
        throw Error("extract_foreground: degenerate input (all pixels identical; blank or "
                    "monochrome scan)");
    }

    Fit fit = fit_two_component(x);

    // Component with the higher mean L is the paper background.
    bool swap = fit.means(0, 0) < fit.means(1, 0);
    ForegroundModel model;
    const int bg = swap ? 1 : 0;
    const int fg = swap ? 0 : 1;
    model.mixing = Eigen::Vector2d(fit.mixing[bg], fit.mixing[fg]);
    model.means.row(0) = fit.means.row(bg);
    model.means.row(1) = fit.means.row(fg);
    model.variances.row(0) = fit.variances.row(bg);
    model.variances.row(1) = fit.variances.row(fg);
    model.log_likelihood = fit.log_likelihood;
    model.iterations = fit.iterations;

    model.mask = BinaryMask(h, w);
    idx = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c, ++idx) {
            const double r_fg = swap ? 1.0 - fit.resp_fg[idx] : fit.resp_fg[idx];
            model.mask(r, c) = r_fg > 0.5;
        }
    }
    return model;
}

LabPoints mask_points(const LabImage& img, const BinaryMask& mask) {
    if (mask.rows() != img.L.rows() || mask.cols() != img.L.cols()) {
        throw Error("mask_points: mask and image sizes differ");
    }
    LabPoints out(mask.count(), 3);
    Eigen::Index idx = 0;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (mask(r, c)) {
                out(idx, 0) = img.L(r, c);
                out(idx, 1) = img.a(r, c);
                out(idx, 2) = img.b(r, c);
                ++idx;
            }
        }
    }
    return out;
}

KMeansResult kmeans_lab(const LabPoints& points, int k, std::uint64_t seed) {
    return kmeans_impl(points, Eigen::VectorXd::Ones(points.rows()), k, seed);
}

KMeansResult kmeans_weighted(const LabPoints& points, const Eigen::VectorXd& weights, int k,
                             std::uint64_t seed) {
    if (weights.size() != points.rows()) throw Error("k-means: one weight per point required");
    if ((weights.array() <= 0.0).any()) throw Error("k-means: weights must be positive");
    return kmeans_impl(points, weights, k, seed);
}

Eigen::VectorXd silhouette_exact_per_point(const LabPoints& points,
                                           const std::vector<int>& assignments) {
    const int k = cluster_count(assignments);
    check_assignments(points, assignments, k);
    const Eigen::Index n = points.rows();

    std::vector<long> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];

    Eigen::VectorXd scores(n);
    Eigen::VectorXd cluster_sum(k);
    for (Eigen::Index j = 0; j < n; ++j) {
        const int own = assignments[static_cast<std::size_t>(j)];
        if (sizes[static_cast<std::size_t>(own)] == 1) {
            scores[j] = 0.0;
            continue;
        }
        const Eigen::VectorXd dist = (points.rowwise() - points.row(j)).rowwise().norm();
        cluster_sum.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            cluster_sum[assignments[static_cast<std::size_t>(i)]] += dist[i];
        }
        const double a =
            cluster_sum[own] / static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own) continue;
            b = std::min(b, cluster_sum[c] / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
        }
        const double denom = std::max(a, b);
        scores[j] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return scores;
}

double silhouette_exact(const LabPoints& points, const std::vector<int>& assignments) {
    return silhouette_exact_per_point(points, assignments).mean();
}

Eigen::VectorXd silhouette_approx_per_point(
    const LabPoints& points, const std::vector<int>& assignments,
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& centroids) {
    const int k = static_cast<int>(centroids.rows());
    check_assignments(points, assignments, k);
    const Eigen::Index n = points.rows();

    Eigen::MatrixXd dist(n, k);
    for (int j = 0; j < k; ++j) {
        dist.col(j) = (points.rowwise() - centroids.row(j)).rowwise().norm();
    }

    Eigen::VectorXd scores(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int own = assignments[static_cast<std::size_t>(i)];
        const double a = dist(i, own);
        double b = std::numeric_limits<double>::infinity();
        for (int j = 0; j < k; ++j) {
            if (j != own) b = std::min(b, dist(i, j));
        }
        const double denom = std::max(a, b);
        scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return scores;
}

double silhouette_approx(const LabPoints& points, const std::vector<int>& assignments,
                         const Eigen::Matrix<double, Eigen::Dynamic, 3>& centroids) {
    return silhouette_approx_per_point(points, assignments, centroids).mean();
}

Palette select_palette(const LabPoints& foreground_pixels, std::uint64_t seed) {
    const Eigen::Index n = foreground_pixels.rows();
    if (n < 10) {
        throw Error("select_palette: foreground too small (" + std::to_string(n) +
                    " pixels, need at least 10)");
    }

    // Cap the sweep at the number of distinct colors so every cluster can be
    // nonempty.
    int distinct = 0;
    {
        std::map<std::array<double, 3>, int> seen;
        for (Eigen::Index i = 0; i < n && distinct <= 10; ++i) {
            std::array<double, 3> key{foreground_pixels(i, 0), foreground_pixels(i, 1),
                                      foreground_pixels(i, 2)};
            if (seen.emplace(key, 1).second) ++distinct;
        }
    }
    if (distinct < 2) {
        throw Error("select_palette: degenerate foreground (single distinct color)");
    }

    Palette palette;
    std::map<int, KMeansResult> runs;
    const int k_hi = std::min<int>(10, std::min<Eigen::Index>(n, distinct));
    for (int k = 2; k <= k_hi; ++k) {
        KMeansResult run = kmeans_lab(foreground_pixels, k, derive_seed(seed, k));
        palette.silhouette_curve[k] =
            silhouette_approx(foreground_pixels, run.assignments, run.centroids);
        runs.emplace(k, std::move(run));
    }

    int best_k = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& [k, score] : palette.silhouette_curve) {
        if (score > best_score) {
            best_score = score;
            best_k = k;
        }
    }

    const KMeansResult& best = runs.at(best_k);
    palette.K = best_k;
    palette.centroids = best.centroids;
    palette.masses = Eigen::VectorXi::Zero(best_k);
    for (int a : best.assignments) ++palette.masses[a];
    return palette;
}

Palette select_palette(const LabImage& img, std::uint64_t seed) {
    const ForegroundModel fg = extract_foreground(img);
    return select_palette(mask_points(img, fg.mask), seed);
}

RasterImage reconstruct(const LabImage& img, const Palette& palette, const BinaryMask& foreground) {
    if (foreground.rows() != img.L.rows() || foreground.cols() != img.L.cols()) {
        throw Error("reconstruct: mask and image sizes differ");
    }
    if (palette.K < 1) throw Error("reconstruct: empty palette");

    // Precompute centroid colors in sRGB.
    std::vector<std::array<std::uint8_t, 3>> colors(static_cast<std::size_t>(palette.K));
    for (int j = 0; j < palette.K; ++j) {
        const Eigen::Vector3d rgb = imaging::lab_to_srgb(palette.centroids.row(j).transpose());
        for (int c = 0; c < 3; ++c) {
            colors[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] =
                static_cast<std::uint8_t>(std::clamp(std::lround(rgb[c]), 0L, 255L));
        }
    }

    RasterImage out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            std::uint8_t* px = out.pixel(r, c);
            if (!foreground(r, c)) {
                px[0] = px[1] = px[2] = 255;
                continue;
            }
            const Eigen::RowVector3d p(img.L(r, c), img.a(r, c), img.b(r, c));
            int best = 0;
            double best_d = (p - palette.centroids.row(0)).squaredNorm();
            for (int j = 1; j < palette.K; ++j) {
                const double d = (p - palette.centroids.row(j)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            const auto& rgb = colors[static_cast<std::size_t>(best)];
            px[0] = rgb[0];
            px[1] = rgb[1];
            px[2] = rgb[2];
        }
    }
    return out;
}

GroupPalette group_palette(const std::vector<Palette>& palettes, int swatch_count,
                           corpus::GroupKey key, std::uint64_t seed) {
    if (palettes.empty()) throw Error("group_palette: empty palette list");
    if (swatch_count < 1) throw Error("group_palette: swatch_count must be positive");

    // Pool centroids, merging exact duplicates.
    std::map<std::array<double, 3>, double> pool;
    for (const auto& p : palettes) {
        for (int j = 0; j < p.K; ++j) {
            std::array<double, 3> c{p.centroids(j, 0), p.centroids(j, 1), p.centroids(j, 2)};
            pool[c] += static_cast<double>(p.masses[j]);
        }
    }
    if (pool.empty()) throw Error("group_palette: empty pool");

    LabPoints points(static_cast<Eigen::Index>(pool.size()), 3);
    Eigen::VectorXd weights(static_cast<Eigen::Index>(pool.size()));
    Eigen::Index i = 0;
    for (const auto& [color, weight] : pool) {
        points.row(i) << color[0], color[1], color[2];
        weights[i] = weight;
        ++i;
    }

    Eigen::Matrix<double, Eigen::Dynamic, 3> colors;
    Eigen::VectorXd mass;
    if (points.rows() <= swatch_count) {
        colors = points;
        mass = weights;
    } else {
        KMeansResult run = kmeans_weighted(points, weights, swatch_count, seed);
        colors = run.centroids;
        mass = Eigen::VectorXd::Zero(swatch_count);
        for (Eigen::Index p = 0; p < points.rows(); ++p) {
            mass[run.assignments[static_cast<std::size_t>(p)]] += weights[p];
        }
    }

    // Popularity order; LAB lexicographic as a deterministic tiebreak.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(colors.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        if (mass[x] != mass[y]) return mass[x] > mass[y];
        for (int c = 0; c < 3; ++c) {
            if (colors(x, c) != colors(y, c)) return colors(x, c) < colors(y, c);
        }
        return x < y;
    });

    GroupPalette out;
    out.key = std::move(key);
    out.colors.resize(colors.rows(), 3);
    out.weights.resize(colors.rows());
    for (std::size_t r = 0; r < order.size(); ++r) {
        out.colors.row(static_cast<Eigen::Index>(r)) = colors.row(order[r]);
        out.weights[static_cast<Eigen::Index>(r)] = mass[order[r]];
    }
    return out;
}

} // namespace drawlab::palette
