#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drawlab/corpus.hpp"

namespace drawlab::stats {

/// Samples are matrices with one observation per row.
using Sample = Eigen::MatrixXd;

struct TwoSampleResult {
    long statistic = 0;       // observed nearest-neighbor coincidence count
    double p_permutation = 1; // add-one smoothed, never exactly 0
    double p_asymptotic = 1;  // normal tail with moments from the permutation sample
    int n1 = 0;
    int n2 = 0;
    int neighbors = 0;
};

/// Pool both samples and count, over every point, how many of its k nearest
/// neighbors (Euclidean, self excluded, ties broken by lower pooled index)
/// come from the same sample. Large counts mean the samples separate.
long nn_coincidences(const Sample& sample1, const Sample& sample2, int k_nn);

/// Permutation test on the coincidence count. Label shufflings are seeded per
/// permutation index, so results do not depend on evaluation order.
TwoSampleResult two_sample_test(const Sample& sample1, const Sample& sample2, int k_nn,
                                int permutations, std::uint64_t seed, int workers = 1);

struct TestReport {
    std::vector<std::string> labels;
    Eigen::MatrixXd p_values; // symmetric; NaN on the diagonal and for unavailable pairs
    std::vector<std::string> notes;
    double alpha = 0.05;

    bool available(int i, int j) const { return !std::isnan(p_values(i, j)); }
};

/// Run the two-sample test on every unordered pair of groups. Pairs that fail
/// a precondition (too small, mixed dimensions) are marked unavailable rather
/// than failing the report.
TestReport pairwise_matrix(const std::map<corpus::GroupKey, Sample>& groups, int k_nn,
                           int permutations, std::uint64_t seed, double alpha = 0.05,
                           int workers = 1);

} // namespace drawlab::stats
