#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drawlab/corpus.hpp"
#include "drawlab/image.hpp"

namespace drawlab::synth {

struct PencilColor {
    std::string name;
    Lab lab;
};

/// Eight pencil colors, pairwise at least 60 LAB units apart, so k-means can
/// recover them from any subset.
std::vector<PencilColor> pencil_catalog();
PencilColor pencil(const std::string& name);

struct GroupSpec {
    std::string name;
    corpus::Country country = corpus::Country::CH;
    std::optional<std::string> region; // RU only
    corpus::Task task = corpus::Task::Gods;
    int n_drawings = 10;
    double placement_bias = 0.5; // 0 = bottom of the page, 0.5 = center, 1 = top
    std::vector<PencilColor> pencils;
    double stroke_density = 0.25; // target fraction of the canvas that gets painted
    double age_lo = 4.0;
    double age_hi = 16.0;
    int shapes_min = 4;
    int shapes_max = 12;
    double peak_age = 11.0; // drawings get busiest around this age
};

struct SynthSpec {
    std::uint64_t seed = 1;
    int canvas_width = 240;
    int canvas_height = 340;
    double jitter_sigma = 2.0; // per-pixel noise, 8-bit levels
    std::vector<GroupSpec> groups;
};

/// Per-drawing ground truth emitted next to the corpus.
struct GroundTruth {
    int true_k = 0;           // distinct pencils visible in the drawing
    double bias = 0.5;        // the group's placement bias
    double colored_fraction = 0.0;
    std::map<std::string, double> color_props; // painted-pixel share per pencil
};

struct GeneratedCorpus {
    std::string manifest_path;
    std::string ground_truth_path;
    std::vector<corpus::DrawingRecord> records;
    std::map<std::string, GroundTruth> truth;
};

/// Render the corpus into out_dir/images, write out_dir/manifest.csv and
/// out_dir/ground_truth.json. Same spec and seed always produce bit-identical
/// files.
GeneratedCorpus generate(const SynthSpec& spec, const std::string& out_dir);

/// The bundled 60-drawing demo corpus used by the end-to-end checks.
SynthSpec demo_spec(std::uint64_t seed = 7);

} // namespace drawlab::synth
