#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace mograph {

/// Binary foreground mask as sorted, non-overlapping (start, length) runs of
/// set pixels in row-major index space.
struct RleMask {
    int width = 0;
    int height = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> runs;

    bool empty_mask() const { return runs.empty(); }
    std::int64_t area() const;

    /// Checks run ordering and image bounds.
    void validate() const;

    static RleMask from_pixels(int width, int height, const std::vector<std::uint8_t>& pixels);
};

std::int64_t rle_intersection_area(const RleMask& a, const RleMask& b);

/// IoU of two masks; the convention for empty operands is handled by the
/// caller (see iou_distance).
double mask_iou(const RleMask& a, const RleMask& b);

/// Axis-aligned box, half-open [x0, x1) x [y0, y1) in pixel coordinates.
struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double area() const { return (x1 > x0 && y1 > y0) ? (x1 - x0) * (y1 - y0) : 0.0; }
};

/// IoU between the union regions of two box sets. Exact via coordinate
/// compression (box sets per frame are tiny, typically two hands).
double box_union_iou(const std::vector<Box>& a, const std::vector<Box>& b);

}  // namespace mograph
