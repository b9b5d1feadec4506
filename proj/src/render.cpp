#include "drawlab/render.hpp"

#include <algorithm>
#include <cmath>

#include "drawlab/errors.hpp"
#include "drawlab/imaging.hpp"

namespace drawlab::render {

namespace {

constexpr Rgb kBar{70, 80, 120};
constexpr Rgb kAxis{150, 150, 150};
constexpr Rgb kPoint{30, 60, 140};
constexpr Rgb kMedian{190, 60, 40};

} // namespace

Canvas::Canvas(int width, int height, Rgb background) : img_(width, height) {
    for (std::size_t i = 0; i < img_.rgb.size(); i += 3) {
        img_.rgb[i] = background.r;
        img_.rgb[i + 1] = background.g;
        img_.rgb[i + 2] = background.b;
    }
}

void Canvas::set(int row, int col, Rgb color) {
    if (row < 0 || row >= img_.height || col < 0 || col >= img_.width) return;
    std::uint8_t* p = img_.pixel(row, col);
    p[0] = color.r;
    p[1] = color.g;
    p[2] = color.b;
}

void Canvas::fill_rect(int row0, int col0, int row1, int col1, Rgb color) {
    for (int r = std::max(0, row0); r <= std::min(img_.height - 1, row1); ++r) {
        for (int c = std::max(0, col0); c <= std::min(img_.width - 1, col1); ++c) {
            set(r, c, color);
        }
    }
}

void Canvas::fill_ellipse(double center_row, double center_col, double radius_row,
                          double radius_col, Rgb color) {
    if (radius_row <= 0 || radius_col <= 0) return;
    const int r0 = static_cast<int>(std::floor(center_row - radius_row));
    const int r1 = static_cast<int>(std::ceil(center_row + radius_row));
    const int c0 = static_cast<int>(std::floor(center_col - radius_col));
    const int c1 = static_cast<int>(std::ceil(center_col + radius_col));
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            const double dr = (r - center_row) / radius_row;
            const double dc = (c - center_col) / radius_col;
            if (dr * dr + dc * dc <= 1.0) set(r, c, color);
        }
    }
}

void Canvas::line(double row0, double col0, double row1, double col1, double thickness,
                  Rgb color) {
    const double half = std::max(0.5, thickness / 2.0);
    const int r0 = static_cast<int>(std::floor(std::min(row0, row1) - half));
    const int r1 = static_cast<int>(std::ceil(std::max(row0, row1) + half));
    const int c0 = static_cast<int>(std::floor(std::min(col0, col1) - half));
    const int c1 = static_cast<int>(std::ceil(std::max(col0, col1) + half));
    const double dr = row1 - row0;
    const double dc = col1 - col0;
    const double len2 = dr * dr + dc * dc;
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            double t = len2 > 0 ? ((r - row0) * dr + (c - col0) * dc) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double pr = row0 + t * dr;
            const double pc = col0 + t * dc;
            const double d2 = (r - pr) * (r - pr) + (c - pc) * (c - pc);
            if (d2 <= half * half) set(r, c, color);
        }
    }
}

RasterImage heatmap_image(const colorfield::HeatMap& map, int scale) {
    if (map.n < 1) throw Error("heatmap_image: empty heat map");
    scale = std::max(1, scale);
    const int side = map.side();
    RasterImage out(side * scale, side * scale);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            const double t = static_cast<double>(map.counts(r, c)) / map.n;
            const auto v = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - t)));
            for (int sr = 0; sr < scale; ++sr) {
                for (int sc = 0; sc < scale; ++sc) {
                    std::uint8_t* p = out.pixel(r * scale + sr, c * scale + sc);
                    p[0] = p[1] = p[2] = v;
                }
            }
        }
    }
    return out;
}

RasterImage profile_chart(const Eigen::VectorXd& profile, int width) {
    const int h = static_cast<int>(profile.size());
    if (h < 1) throw Error("profile_chart: empty profile");
    const int margin = 12;
    const int chart_w = std::max(40, width - 2 * margin);
    Canvas canvas(width, h + 2 * margin);

    // Frame on the left (zero line) and bottom.
    for (int r = margin; r < margin + h; ++r) canvas.set(r, margin - 1, kAxis);
    for (int c = margin - 1; c < margin + chart_w; ++c) canvas.set(margin + h, c, kAxis);

    for (int j = 0; j < h; ++j) {
        const double frac = std::clamp(profile[j] / 255.0, 0.0, 1.0);
        const int len = static_cast<int>(std::lround(frac * chart_w));
        if (len > 0) canvas.fill_rect(margin + j, margin, margin + j, margin + len - 1, kBar);
    }
    return canvas.take();
}

RasterImage scatter_chart(const std::vector<std::pair<double, double>>& points,
                          const std::vector<std::pair<double, double>>& medians, double x_max,
                          int width, int height) {
    const int margin = 24;
    Canvas canvas(width, height);
    const int x0 = margin, x1 = width - margin;
    const int y0 = margin, y1 = height - margin;
    for (int c = x0; c <= x1; ++c) canvas.set(y1, c, kAxis);
    for (int r = y0; r <= y1; ++r) canvas.set(r, x0, kAxis);

    double y_max = 1.0;
    for (const auto& [x, y] : points) y_max = std::max(y_max, y);
    for (const auto& [x, y] : medians) y_max = std::max(y_max, y);
    x_max = std::max(x_max, 1.0);

    auto to_col = [&](double x) {
        return x0 + static_cast<int>(std::lround(x / x_max * (x1 - x0)));
    };
    auto to_row = [&](double y) {
        return y1 - static_cast<int>(std::lround(y / y_max * (y1 - y0)));
    };

    for (const auto& [x, y] : points) {
        canvas.fill_rect(to_row(y) - 1, to_col(x) - 1, to_row(y) + 1, to_col(x) + 1, kPoint);
    }
    for (const auto& [x, y] : medians) {
        canvas.fill_rect(to_row(y) - 2, to_col(x) - 5, to_row(y) + 2, to_col(x) + 5, kMedian);
    }
    return canvas.take();
}

RasterImage palette_strip(const palette::GroupPalette& palette, int width, int height) {
    const Eigen::Index n = palette.colors.rows();
    if (n < 1) throw Error("palette_strip: empty palette");
    const double total = palette.weights.sum();
    Canvas canvas(width, height);

    double cursor = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double frac = total > 0 ? palette.weights[i] / total : 1.0 / static_cast<double>(n);
        const int c0 = static_cast<int>(std::lround(cursor));
        cursor += frac * width;
        int c1 = static_cast<int>(std::lround(cursor)) - 1;
        if (i == n - 1) c1 = width - 1;
        const Eigen::Vector3d rgb = imaging::lab_to_srgb(palette.colors.row(i).transpose());
        const Rgb color{static_cast<std::uint8_t>(std::clamp(std::lround(rgb[0]), 0L, 255L)),
                        static_cast<std::uint8_t>(std::clamp(std::lround(rgb[1]), 0L, 255L)),
                        static_cast<std::uint8_t>(std::clamp(std::lround(rgb[2]), 0L, 255L))};
        canvas.fill_rect(0, c0, height - 1, c1, color);
    }
    return canvas.take();
}

RasterImage pvalue_matrix_image(const stats::TestReport& report, double p_floor, int cell) {
    const int g = static_cast<int>(report.labels.size());
    if (g < 1) throw Error("pvalue_matrix_image: empty report");
    cell = std::max(8, cell);
    const int side = g * cell + 1;
    Canvas canvas(side, side);

    // Paper figure scheme: green at the floor, light blue when significant,
    // blue otherwise.
    const Rgb green{60, 170, 60};
    const Rgb light_blue{160, 205, 250};
    const Rgb blue{40, 60, 190};
    const Rgb unavailable{205, 205, 205};

    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            Rgb color{255, 255, 255};
            if (i != j) {
                const double p = report.p_values(i, j);
                if (std::isnan(p)) {
                    color = unavailable;
                } else if (p <= p_floor) {
                    color = green;
                } else if (p <= report.alpha) {
                    color = light_blue;
                } else {
                    color = blue;
                }
            }
            canvas.fill_rect(i * cell + 1, j * cell + 1, (i + 1) * cell - 1, (j + 1) * cell - 1,
                             color);
        }
    }
    return canvas.take();
}

} // namespace drawlab::render
