#include "mograph/mask.hpp"

#include "mograph/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mograph {

std::int64_t RleMask::area() const {
    std::int64_t total = 0;
    for (const auto& [start, len] : runs) {
        total += len;
    }
    return total;
}

void RleMask::validate() const {
    if (width < 0 || height < 0) {
        throw ValidationError("mask dimensions must be non-negative");
    }
    const std::int64_t pixels = static_cast<std::int64_t>(width) * height;
    std::int64_t prev_end = 0;
    for (const auto& [start, len] : runs) {
        if (len <= 0 || start < prev_end) {
            throw ValidationError("mask runs must be sorted, non-overlapping and non-empty");
        }
        if (start + len > pixels) {
            std::ostringstream msg;
            msg << "mask run [" << start << ", " << start + len << ") exceeds image area "
                << pixels;
            throw ValidationError(msg.str());
        }
        prev_end = start + len;
    }
}

RleMask RleMask::from_pixels(int width, int height, const std::vector<std::uint8_t>& pixels) {
    if (pixels.size() != static_cast<std::size_t>(width) * height) {
        throw ValidationError("pixel buffer size does not match mask dimensions");
    }
    RleMask mask;
    mask.width = width;
    mask.height = height;
    std::int64_t i = 0;
    const std::int64_t n = static_cast<std::int64_t>(pixels.size());
    while (i < n) {
        if (pixels[i]) {
            std::int64_t start = i;
            while (i < n && pixels[i]) {
                ++i;
            }
            mask.runs.emplace_back(start, i - start);
        } else {
            ++i;
        }
    }
    return mask;
}

std::int64_t rle_intersection_area(const RleMask& a, const RleMask& b) {
    std::int64_t inter = 0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.runs.size() && ib < b.runs.size()) {
        const std::int64_t a0 = a.runs[ia].first;
        const std::int64_t a1 = a0 + a.runs[ia].second;
        const std::int64_t b0 = b.runs[ib].first;
        const std::int64_t b1 = b0 + b.runs[ib].second;
        inter += std::max<std::int64_t>(0, std::min(a1, b1) - std::max(a0, b0));
        if (a1 < b1) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return inter;
}

double mask_iou(const RleMask& a, const RleMask& b) {
    const std::int64_t inter = rle_intersection_area(a, b);
    const std::int64_t uni = a.area() + b.area() - inter;
    if (uni <= 0) {
        return 0.0;
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

bool covered(const std::vector<Box>& boxes, double cx, double cy) {
    for (const auto& box : boxes) {
        if (cx >= box.x0 && cx < box.x1 && cy >= box.y0 && cy < box.y1) {
            return true;
        }
    }
    return false;
}

}  // namespace

double box_union_iou(const std::vector<Box>& a, const std::vector<Box>& b) {
    std::vector<double> xs, ys;
    for (const auto* set : {&a, &b}) {
        for (const auto& box : *set) {
            if (box.x1 > box.x0 && box.y1 > box.y0) {
                xs.push_back(box.x0);
                xs.push_back(box.x1);
                ys.push_back(box.y0);
                ys.push_back(box.y1);
            }
        }
    }
    if (xs.empty()) {
        return 0.0;
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    double area_a = 0.0, area_b = 0.0, inter = 0.0;
    for (std::size_t xi = 0; xi + 1 < xs.size(); ++xi) {
        for (std::size_t yi = 0; yi + 1 < ys.size(); ++yi) {
            const double cell = (xs[xi + 1] - xs[xi]) * (ys[yi + 1] - ys[yi]);
            const double cx = 0.5 * (xs[xi] + xs[xi + 1]);
            const double cy = 0.5 * (ys[yi] + ys[yi + 1]);
            const bool in_a = covered(a, cx, cy);
            const bool in_b = covered(b, cx, cy);
            if (in_a) {
                area_a += cell;
            }
            if (in_b) {
                area_b += cell;
            }
            if (in_a && in_b) {
                inter += cell;
            }
        }
    }
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) {
        return 0.0;
    }
    return inter / uni;
}

}  // namespace mograph
