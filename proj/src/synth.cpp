#include "drawlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "drawlab/errors.hpp"
#include "drawlab/imaging.hpp"
#include "drawlab/rng.hpp"
#include "drawlab/strings.hpp"

namespace drawlab::synth {

namespace {

namespace fs = std::filesystem;

constexpr double kMinPencilDistance = 60.0;
constexpr int kGuaranteePixels = 50; // every pencil keeps at least this many visible

struct Painter {
    RasterImage img;
    std::vector<int> owner; // pencil index per pixel, -1 = background

    Painter(int w, int h) : img(w, h), owner(static_cast<std::size_t>(w) * h, -1) {}

    void paint(int row, int col, const std::array<std::uint8_t, 3>& rgb, int pencil) {
        if (row < 0 || row >= img.height || col < 0 || col >= img.width) return;
        std::uint8_t* p = img.pixel(row, col);
        p[0] = rgb[0];
        p[1] = rgb[1];
        p[2] = rgb[2];
        owner[static_cast<std::size_t>(row) * img.width + col] = pencil;
    }

    void ellipse(double cr, double cc, double rr, double rc,
                 const std::array<std::uint8_t, 3>& rgb, int pencil) {
        for (int r = static_cast<int>(cr - rr); r <= static_cast<int>(cr + rr) + 1; ++r) {
            for (int c = static_cast<int>(cc - rc); c <= static_cast<int>(cc + rc) + 1; ++c) {
                const double dr = (r - cr) / rr;
                const double dc = (c - cc) / rc;
                if (dr * dr + dc * dc <= 1.0) paint(r, c, rgb, pencil);
            }
        }
    }

    void rect(double cr, double cc, double half_r, double half_c,
              const std::array<std::uint8_t, 3>& rgb, int pencil) {
        for (int r = static_cast<int>(cr - half_r); r <= static_cast<int>(cr + half_r); ++r) {
            for (int c = static_cast<int>(cc - half_c); c <= static_cast<int>(cc + half_c); ++c) {
                paint(r, c, rgb, pencil);
            }
        }
    }

    void segment(double r0, double c0, double r1, double c1, double thickness,
                 const std::array<std::uint8_t, 3>& rgb, int pencil) {
        const double half = std::max(1.0, thickness / 2.0);
        const double dr = r1 - r0, dc = c1 - c0;
        const double len2 = dr * dr + dc * dc;
        for (int r = static_cast<int>(std::min(r0, r1) - half);
             r <= static_cast<int>(std::max(r0, r1) + half) + 1; ++r) {
            for (int c = static_cast<int>(std::min(c0, c1) - half);
                 c <= static_cast<int>(std::max(c0, c1) + half) + 1; ++c) {
                double t = len2 > 0 ? ((r - r0) * dr + (c - c0) * dc) / len2 : 0.0;
                t = std::clamp(t, 0.0, 1.0);
                const double pr = r0 + t * dr, pc = c0 + t * dc;
                if ((r - pr) * (r - pr) + (c - pc) * (c - pc) <= half * half) {
                    paint(r, c, rgb, pencil);
                }
            }
        }
    }
};

std::array<std::uint8_t, 3> to_rgb8(const Lab& lab) {
    const Eigen::Vector3d rgb = imaging::lab_to_srgb(lab);
    return {static_cast<std::uint8_t>(std::clamp(std::lround(rgb[0]), 0L, 255L)),
            static_cast<std::uint8_t>(std::clamp(std::lround(rgb[1]), 0L, 255L)),
            static_cast<std::uint8_t>(std::clamp(std::lround(rgb[2]), 0L, 255L))};
}

void validate_spec(const SynthSpec& spec) {
    if (spec.groups.empty()) throw ConfigError("synth: spec has no groups");
    if (spec.canvas_width < 32 || spec.canvas_height < 32) {
        throw ConfigError("synth: canvas must be at least 32x32");
    }
    for (const auto& g : spec.groups) {
        if (g.name.empty()) throw ConfigError("synth: group without a name");
        if (g.n_drawings < 1) throw ConfigError("synth: group '" + g.name + "' has no drawings");
        if (g.pencils.empty()) throw ConfigError("synth: group '" + g.name + "' has no pencils");
        if (g.placement_bias < 0.0 || g.placement_bias > 1.0) {
            throw ConfigError("synth: placement bias must lie in [0,1]");
        }
        if (!(g.age_lo > 1.0 && g.age_hi <= 23.0 && g.age_lo <= g.age_hi)) {
            throw ConfigError("synth: ages must lie in (1,23]");
        }
        for (std::size_t i = 0; i < g.pencils.size(); ++i) {
            for (std::size_t j = i + 1; j < g.pencils.size(); ++j) {
                const double d = (g.pencils[i].lab - g.pencils[j].lab).norm();
                if (d < kMinPencilDistance) {
                    throw ConfigError("synth: pencils '" + g.pencils[i].name + "' and '" +
                                      g.pencils[j].name + "' are only " + fmt_double(d) +
                                      " LAB units apart (need >= 60)");
                }
            }
        }
    }
}

struct DrawingOutput {
    RasterImage image;
    GroundTruth truth;
};

// One shape per pencil is drawn last so that every pencil stays visible after
// all the overdraw.
DrawingOutput render_drawing(const SynthSpec& spec, const GroupSpec& group, double age, Rng& rng) {
    const int W = spec.canvas_width;
    const int H = spec.canvas_height;
    Painter painter(W, H);

    const double span =
        std::max(group.peak_age - group.age_lo, group.age_hi - group.peak_age);
    const double hump =
        std::clamp(1.0 - std::pow((age - group.peak_age) / std::max(span, 1e-9), 2.0), 0.0, 1.0);
    int shapes = group.shapes_min +
                 static_cast<int>(std::lround(hump * (group.shapes_max - group.shapes_min)));
    shapes = std::max<int>(shapes, static_cast<int>(group.pencils.size()));

    const double target_area =
        group.stroke_density * static_cast<double>(W) * H / std::max(1, shapes);
    const double base_radius = std::sqrt(target_area / M_PI);
    const double mean_row = (1.0 - group.placement_bias) * H;

    std::vector<std::array<std::uint8_t, 3>> rgb_of;
    for (const auto& p : group.pencils) rgb_of.push_back(to_rgb8(p.lab));

    auto draw_shape = [&](int pencil, double scale) {
        const double row = std::clamp(rng.next_normal(mean_row, 0.16 * H), 2.0, H - 3.0);
        const double col = rng.next_range(0.1 * W, 0.9 * W);
        const double radius = std::max(2.5, base_radius * scale * rng.next_range(0.7, 1.3));
        const auto& rgb = rgb_of[static_cast<std::size_t>(pencil)];
        switch (rng.next_index(3)) {
            case 0:
                painter.ellipse(row, col, radius, radius * rng.next_range(0.6, 1.4), rgb, pencil);
                break;
            case 1:
                painter.rect(row, col, radius * rng.next_range(0.6, 1.2),
                             radius * rng.next_range(0.6, 1.2), rgb, pencil);
                break;
            default: {
                const double r1 = std::clamp(row + rng.next_range(-2.0, 2.0) * radius, 2.0, H - 3.0);
                const double c1 = std::clamp(col + rng.next_range(-3.0, 3.0) * radius, 2.0, W - 3.0);
                painter.segment(row, col, r1, c1, std::max(2.0, radius / 2.0), rgb, pencil);
                break;
            }
        }
    };

    const int np = static_cast<int>(group.pencils.size());
    for (int s = 0; s < shapes - np; ++s) {
        draw_shape(static_cast<int>(rng.next_index(static_cast<std::size_t>(np))), 1.0);
    }
    for (int pencil = 0; pencil < np; ++pencil) draw_shape(pencil, 0.8);

    // Top up any pencil whose strokes got buried.
    std::vector<long> visible(static_cast<std::size_t>(np), 0);
    auto recount = [&]() {
        std::fill(visible.begin(), visible.end(), 0L);
        for (int o : painter.owner) {
            if (o >= 0) ++visible[static_cast<std::size_t>(o)];
        }
    };
    recount();
    for (int pencil = 0; pencil < np; ++pencil) {
        int attempts = 0;
        while (visible[static_cast<std::size_t>(pencil)] < kGuaranteePixels && attempts++ < 100) {
            draw_shape(pencil, 0.6);
            recount();
        }
        if (visible[static_cast<std::size_t>(pencil)] < kGuaranteePixels) {
            throw Error("synth: could not keep pencil '" +
                        group.pencils[static_cast<std::size_t>(pencil)].name + "' visible");
        }
    }

    // Scanner-style per-pixel noise.
    for (std::size_t i = 0; i < painter.img.rgb.size(); ++i) {
        const double v = painter.img.rgb[i] + rng.next_normal(0.0, spec.jitter_sigma);
        painter.img.rgb[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }

    DrawingOutput out;
    out.truth.bias = group.placement_bias;
    long painted = 0;
    std::map<std::string, double> props;
    for (int pencil = 0; pencil < np; ++pencil) {
        painted += visible[static_cast<std::size_t>(pencil)];
    }
    for (int pencil = 0; pencil < np; ++pencil) {
        props[group.pencils[static_cast<std::size_t>(pencil)].name] =
            static_cast<double>(visible[static_cast<std::size_t>(pencil)]) /
            static_cast<double>(painted);
    }
    out.truth.color_props = std::move(props);
    out.truth.true_k = np;

    double inverse_sum = 0.0;
    for (std::size_t px = 0; px < painter.owner.size(); ++px) {
        const std::uint8_t* p = painter.img.rgb.data() + 3 * px;
        inverse_sum += 255.0 - (static_cast<double>(p[0]) + p[1] + p[2]) / 3.0;
    }
    out.truth.colored_fraction = inverse_sum / (255.0 * static_cast<double>(painter.owner.size()));

    out.image = std::move(painter.img);
    return out;
}

} // namespace

std::vector<PencilColor> pencil_catalog() {
    return {
        {"black", Lab(10, 0, 0)},    {"red", Lab(50, 75, 60)},    {"green", Lab(55, -60, 55)},
        {"blue", Lab(30, 25, -80)},  {"yellow", Lab(88, -8, 92)}, {"purple", Lab(45, 90, -55)},
        {"cyan", Lab(70, -45, -35)}, {"pink", Lab(75, 55, -5)},
    };
}

PencilColor pencil(const std::string& name) {
    for (const auto& p : pencil_catalog()) {
        if (p.name == name) return p;
    }
    throw ConfigError("unknown pencil color: " + name);
}

GeneratedCorpus generate(const SynthSpec& spec, const std::string& out_dir) {
    validate_spec(spec);

    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root / "images", ec);
    if (ec) throw Error("synth: cannot create output directory: " + ec.message());

    GeneratedCorpus out;
    std::string manifest = "id,path,country,region,age,gender,task,school\n";
    nlohmann::json truth_json = nlohmann::json::object();

    static const char* genders[] = {"female", "male", "unknown"};
    for (const auto& group : spec.groups) {
        for (int i = 0; i < group.n_drawings; ++i) {
            const std::string id = sanitize_id(group.name) + "_" + std::to_string(i);
            Rng rng(derive_seed(spec.seed, fnv1a64(id)));

            const double age = group.age_lo == group.age_hi
                                   ? group.age_lo
                                   : rng.next_range(group.age_lo, group.age_hi);
            DrawingOutput drawing = render_drawing(spec, group, age, rng);

            const std::string rel_path = "images/" + id + ".png";
            imaging::encode_png(drawing.image, (root / rel_path).string());

            corpus::DrawingRecord rec;
            rec.id = id;
            rec.path = rel_path;
            rec.country = group.country;
            rec.region = group.region;
            rec.age = age;
            rec.gender = i % 3 == 0 ? corpus::Gender::Female
                                    : (i % 3 == 1 ? corpus::Gender::Male : corpus::Gender::Unknown);
            rec.task = group.task;

            manifest += rec.id + "," + rec.path + "," + corpus::to_string(rec.country) + "," +
                        rec.region.value_or("") + "," + fmt_double(age) + "," +
                        genders[i % 3] + "," + corpus::to_string(rec.task) + ",\n";

            nlohmann::json entry;
            entry["true_k"] = drawing.truth.true_k;
            entry["bias"] = drawing.truth.bias;
            entry["colored_fraction"] = drawing.truth.colored_fraction;
            entry["color_props"] = drawing.truth.color_props;
            truth_json[id] = std::move(entry);

            out.truth[id] = std::move(drawing.truth);
            out.records.push_back(std::move(rec));
        }
    }

    out.manifest_path = (root / "manifest.csv").string();
    out.ground_truth_path = (root / "ground_truth.json").string();
    std::ofstream(out.manifest_path, std::ios::binary) << manifest;
    std::ofstream(out.ground_truth_path, std::ios::binary) << truth_json.dump(2) << "\n";
    return out;
}

SynthSpec demo_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.seed = seed;

    auto pick = [](std::initializer_list<const char*> names) {
        std::vector<PencilColor> out;
        for (const char* n : names) out.push_back(pencil(n));
        return out;
    };

    GroupSpec ch_gods;
    ch_gods.name = "ch_gods";
    ch_gods.country = corpus::Country::CH;
    ch_gods.task = corpus::Task::Gods;
    ch_gods.placement_bias = 0.75;
    ch_gods.pencils = pick({"black", "red", "blue", "yellow", "green"});
    ch_gods.stroke_density = 0.16;

    GroupSpec ch_general;
    ch_general.name = "ch_general";
    ch_general.country = corpus::Country::CH;
    ch_general.task = corpus::Task::General;
    ch_general.placement_bias = 0.5;
    ch_general.pencils = pick({"black", "red", "green", "purple"});
    ch_general.stroke_density = 0.3;

    GroupSpec jp;
    jp.name = "jp_gods";
    jp.country = corpus::Country::JP;
    jp.placement_bias = 0.7;
    jp.pencils = pick({"yellow", "green", "black"});
    jp.stroke_density = 0.22;

    GroupSpec ru_bo;
    ru_bo.name = "ru_bo_gods";
    ru_bo.country = corpus::Country::RU;
    ru_bo.region = "bo";
    ru_bo.placement_bias = 0.6;
    ru_bo.pencils = pick({"red", "blue", "yellow", "cyan"});
    ru_bo.stroke_density = 0.2;

    GroupSpec ru_sp;
    ru_sp.name = "ru_sp_gods";
    ru_sp.country = corpus::Country::RU;
    ru_sp.region = "sp";
    ru_sp.placement_bias = 0.8;
    ru_sp.pencils = pick({"yellow", "black", "purple"});
    ru_sp.stroke_density = 0.15;

    GroupSpec us;
    us.name = "us_gods";
    us.country = corpus::Country::US;
    us.placement_bias = 0.5;
    us.pencils = pick({"black", "red", "green", "blue", "yellow", "pink"});
    us.stroke_density = 0.25;

    spec.groups = {ch_gods, ch_general, jp, ru_bo, ru_sp, us};
    return spec;
}

} // namespace drawlab::synth
