#include "drawlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "drawlab/errors.hpp"
#include "drawlab/parallel.hpp"
#include "drawlab/rng.hpp"

namespace drawlab::stats {

namespace {

void check_samples(const Sample& s1, const Sample& s2, int k_nn) {
    if (k_nn < 1) throw Error("two-sample test: k_nn must be positive");
    if (s1.rows() < 1 || s2.rows() < 1) throw Error("two-sample test: empty sample");
    if (s1.cols() != s2.cols()) throw Error("two-sample test: samples have mixed dimensions");
    if (s1.rows() + s2.rows() < k_nn + 1) {
        throw Error("two-sample test: pooled sample too small for k_nn=" + std::to_string(k_nn));
    }
}

/// k nearest neighbors of every pooled point, self excluded, ties broken by
/// lower pooled index. The lists depend only on geometry, so they are shared
/// by all label permutations.
std::vector<std::vector<int>> neighbor_lists(const Sample& pooled, int k_nn) {
    const int n = static_cast<int>(pooled.rows());
    std::vector<std::vector<int>> lists(n);
    std::vector<std::pair<double, int>> order;
    order.reserve(n - 1);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd d2 =
            (pooled.rowwise() - pooled.row(i)).rowwise().squaredNorm();
        order.clear();
        for (int j = 0; j < n; ++j) {
            if (j != i) order.emplace_back(d2[j], j);
        }
        std::nth_element(order.begin(), order.begin() + (k_nn - 1), order.end());
        std::sort(order.begin(), order.begin() + k_nn);
        lists[i].reserve(k_nn);
        for (int t = 0; t < k_nn; ++t) lists[i].push_back(order[t].second);
    }
    return lists;
}

long count_coincidences(const std::vector<std::vector<int>>& lists,
                        const std::vector<std::uint8_t>& labels) {
    long total = 0;
    for (std::size_t i = 0; i < lists.size(); ++i) {
        for (int j : lists[i]) total += labels[i] == labels[static_cast<std::size_t>(j)];
    }
    return total;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace

long nn_coincidences(const Sample& sample1, const Sample& sample2, int k_nn) {
    check_samples(sample1, sample2, k_nn);
    const int n1 = static_cast<int>(sample1.rows());
    const int n2 = static_cast<int>(sample2.rows());
    Sample pooled(n1 + n2, sample1.cols());
    pooled << sample1, sample2;

    std::vector<std::uint8_t> labels(static_cast<std::size_t>(n1 + n2), 0);
    std::fill(labels.begin() + n1, labels.end(), std::uint8_t{1});
    return count_coincidences(neighbor_lists(pooled, k_nn), labels);
}

TwoSampleResult two_sample_test(const Sample& sample1, const Sample& sample2, int k_nn,
                                int permutations, std::uint64_t seed, int workers) {
    check_samples(sample1, sample2, k_nn);
    if (permutations < 100) throw Error("two-sample test: need at least 100 permutations");

    const int n1 = static_cast<int>(sample1.rows());
    const int n2 = static_cast<int>(sample2.rows());
    Sample pooled(n1 + n2, sample1.cols());
    pooled << sample1, sample2;

    const auto lists = neighbor_lists(pooled, k_nn);
    std::vector<std::uint8_t> base_labels(static_cast<std::size_t>(n1 + n2), 0);
    std::fill(base_labels.begin() + n1, base_labels.end(), std::uint8_t{1});

    TwoSampleResult result;
    result.n1 = n1;
    result.n2 = n2;
    result.neighbors = k_nn;
    result.statistic = count_coincidences(lists, base_labels);

    std::vector<long> permuted(static_cast<std::size_t>(permutations));
    parallel_for(permuted.size(), workers, [&](std::size_t p) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
        std::vector<std::uint8_t> labels = base_labels;
        rng.shuffle(labels);
        permuted[p] = count_coincidences(lists, labels);
    });

    long at_least = 0;
    double sum = 0.0;
    for (long s : permuted) {
        at_least += s >= result.statistic;
        sum += static_cast<double>(s);
    }
    const double mean = sum / permutations;
    double var = 0.0;
    for (long s : permuted) var += (s - mean) * (s - mean);
    var /= permutations;
    const double sd = std::sqrt(var);

    result.p_permutation = static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
    if (sd > 0.0) {
        result.p_asymptotic = normal_upper_tail((result.statistic - mean) / sd);
    } else {
        result.p_asymptotic = result.statistic > mean ? 0.0 : 1.0;
    }
    return result;
}

TestReport pairwise_matrix(const std::map<corpus::GroupKey, Sample>& groups, int k_nn,
                           int permutations, std::uint64_t seed, double alpha, int workers) {
    if (groups.size() < 2) throw Error("pairwise_matrix: need at least two groups");

    TestReport report;
    report.alpha = alpha;
    std::vector<const Sample*> samples;
    for (const auto& [key, sample] : groups) {
        report.labels.push_back(key.label);
        samples.push_back(&sample);
    }

    const int g = static_cast<int>(report.labels.size());
    report.p_values =
        Eigen::MatrixXd::Constant(g, g, std::numeric_limits<double>::quiet_NaN());

    for (int i = 0; i < g; ++i) {
        for (int j = i + 1; j < g; ++j) {
            const std::uint64_t pair_seed =
                derive_seed(seed, fnv1a64(report.labels[i] + "|" + report.labels[j]));
            try {
                const TwoSampleResult r =
                    two_sample_test(*samples[i], *samples[j], k_nn, permutations, pair_seed, workers);
                report.p_values(i, j) = report.p_values(j, i) = r.p_permutation;
            } catch (const Error& e) {
                report.notes.push_back(report.labels[i] + " vs " + report.labels[j] + ": " + e.what());
            }
        }
    }
    return report;
}

} // namespace drawlab::stats
