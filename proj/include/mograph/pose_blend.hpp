#pragma once

#include <Eigen/Core>
#include <vector>

namespace mograph {

/// One frame of 2D pose keypoints in normalized [0,1]^2 coordinates with
/// per-joint detector confidences.
struct Pose2D {
    std::vector<Eigen::Vector2d> joints;
    std::vector<double> confidence;

    std::size_t size() const { return joints.size(); }
    void validate() const;
};

/// Evenly spaced poses strictly between `start` and `end`: frame m of n sits
/// at fraction (m+1)/(n+1). The endpoints themselves already exist in the
/// source footage and are not regenerated.
std::vector<Pose2D> linear_pose_blend(const Pose2D& start, const Pose2D& end,
                                      int n_intermediate = 8);

struct BlendCheck {
    double error = 0.0;
    bool linear_ok = false;
};

/// Mean joint-wise Euclidean distance between a blended transition and its
/// ground truth, with the accept/reject verdict at `threshold` (normalized
/// coordinates).
BlendCheck blend_error(const std::vector<Pose2D>& blended,
                       const std::vector<Pose2D>& ground_truth, double threshold = 0.005);

}  // namespace mograph
