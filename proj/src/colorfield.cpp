#include "drawlab/colorfield.hpp"

#include <cmath>

#include "drawlab/errors.hpp"

namespace drawlab::colorfield {

ReferenceColor green_reference() { return {"green", Lab(50, -50, 50), 50.0}; }
ReferenceColor yellow_reference() { return {"yellow", Lab(80, 0, 100), 50.0}; }

PresenceMask presence_mask(const LabImage& img, const ReferenceColor& ref) {
    if (img.width() != img.height() || img.width() < 1) {
        throw Error("presence_mask: image must be a non-empty square raster");
    }
    if (!(ref.threshold > 0)) throw Error("presence_mask: threshold must be positive");
    const Eigen::ArrayXXd d2 = (img.L - ref.lab.x()).square() + (img.a - ref.lab.y()).square() +
                               (img.b - ref.lab.z()).square();
    return d2 <= ref.threshold * ref.threshold;
}

HeatMap aggregate_masks(const std::vector<PresenceMask>& masks) {
    if (masks.empty()) throw Error("aggregate_masks: no masks");
    const Eigen::Index side = masks.front().rows();
    HeatMap out;
    out.counts = Eigen::ArrayXXi::Zero(side, side);
    for (const auto& m : masks) {
        if (m.rows() != side || m.cols() != side) {
            throw Error("aggregate_masks: masks have mixed sides");
        }
        out.counts += m.cast<int>();
    }
    out.n = static_cast<int>(masks.size());
    return out;
}

double color_proportion(const PresenceMask& mask, const PresenceMask& foreground) {
    if (mask.rows() != foreground.rows() || mask.cols() != foreground.cols()) {
        throw Error("color_proportion: mask and foreground sizes differ");
    }
    const long fg = foreground.count();
    if (fg == 0) throw Error("color_proportion: empty foreground (blank drawing)");
    const long both = (mask && foreground).count();
    return static_cast<double>(both) / static_cast<double>(fg);
}

PresenceMask downsample_majority(const PresenceMask& mask, int side) {
    if (side < 1) throw Error("downsample_majority: side must be positive");
    const int src = static_cast<int>(mask.rows());
    if (mask.cols() != src) throw Error("downsample_majority: mask must be square");
    if (src == side) return mask;

    PresenceMask out(side, side);
    for (int r = 0; r < side; ++r) {
        const int r0 = static_cast<int>(static_cast<long>(r) * src / side);
        const int r1 = static_cast<int>(static_cast<long>(r + 1) * src / side);
        for (int c = 0; c < side; ++c) {
            const int c0 = static_cast<int>(static_cast<long>(c) * src / side);
            const int c1 = static_cast<int>(static_cast<long>(c + 1) * src / side);
            long set = 0, total = 0;
            for (int rr = r0; rr < std::max(r1, r0 + 1); ++rr) {
                for (int cc = c0; cc < std::max(c1, c0 + 1); ++cc) {
                    set += mask(rr, cc) ? 1 : 0;
                    ++total;
                }
            }
            out(r, c) = 2 * set >= total;
        }
    }
    return out;
}

} // namespace drawlab::colorfield
