#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drawlab/colorfield.hpp"
#include "drawlab/complexity.hpp"
#include "drawlab/corpus.hpp"

namespace drawlab::runner {

enum class Denominator { Colored, All };

/// Resolved configuration of one run. Everything here except out_dir and
/// workers determines the outputs; run.json echoes exactly that part.
struct RunConfig {
    std::string manifest;
    std::string out_dir;
    corpus::Dimension group_by = corpus::Dimension::Country;
    std::vector<double> age_bin_edges = {1, 7, 9, 11, 13, 23};
    bool split_russia = false;
    int profile_height = 200; // gravity profile length (--h)
    int field_side = 200;     // working raster side (--k)
    std::vector<colorfield::ReferenceColor> ref_colors; // empty = paper green/yellow
    int knn = 3;
    int permutations = 10000;
    std::uint64_t seed = 0;
    complexity::HarrisParams harris;
    int swatches = 12;
    Denominator denominator = Denominator::Colored;
    double alpha = 0.05;
    int workers = 0; // 0 = hardware concurrency; never affects results
};

struct Pipelines {
    bool gravity = false;
    bool colors = false;
    bool palette = false;
    bool complexity = false;
    bool stats = false;

    static Pipelines all() { return {true, true, true, true, true}; }
};

struct RunSummary {
    int records = 0;
    int processed = 0;
    int skipped = 0;
};

/// Check ranges and fill defaults; throws ConfigError.
void validate_config(RunConfig& config);

/// Execute the selected pipelines over the manifest, writing tables, figures,
/// run.json and skipped.json into out_dir. One bad image never aborts the
/// run; configuration and corpus problems throw.
RunSummary run(const RunConfig& config, const Pipelines& pipelines);

} // namespace drawlab::runner
