#pragma once

#include "mograph/mask.hpp"
#include "mograph/rng.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace mograph {

/// Matched keypoint pairs between a reference and a target image. Detection
/// and matching happen upstream; this is their output.
struct PointMatches {
    std::vector<Eigen::Vector2d> src;
    std::vector<Eigen::Vector2d> dst;
    int width = 0;
    int height = 0;

    std::size_t size() const { return src.size(); }
    void validate() const;
    /// Matches with either endpoint outside the image. Legal — detectors can
    /// overshoot the border — but worth a warning upstream.
    int count_outside_bounds() const;
};

struct RansacConfig {
    int max_iters = 2000;
    double inlier_px = 3.0;
    std::uint64_t seed = 7;
    double confidence = 0.999;
};

struct HomographyEstimate {
    Eigen::Matrix3d H;          // normalized so H(2,2) == 1
    std::vector<int> inliers;   // ascending indices into the matches
    int iterations = 0;         // RANSAC rounds actually run
};

/// RANSAC over 4-point minimal samples with a normalized direct linear
/// transform, followed by a least-squares refit on the winning consensus set.
/// Inliers are matches whose symmetric reprojection error is at most
/// `inlier_px`. Deterministic for a fixed seed.
HomographyEstimate estimate_homography(const PointMatches& matches,
                                       const RansacConfig& config = {});

/// Applies H to (x, y); throws if the point maps to infinity.
Eigen::Vector2d apply_homography(const Eigen::Matrix3d& H, const Eigen::Vector2d& p);

/// max of forward and backward transfer distance for one match.
double symmetric_reprojection_error(const Eigen::Matrix3d& H, const Eigen::Matrix3d& H_inv,
                                    const Eigen::Vector2d& src, const Eigen::Vector2d& dst);

/// Dense background offsets: flow(p) = H*p - p, with pixels under the
/// foreground mask zeroed out (they move with the person, not the camera).
struct HomographyFlow {
    Eigen::Matrix3d H;
    int width = 0;
    int height = 0;
    std::vector<double> flow;  // height x width x 2, row-major (dx, dy)
    RleMask foreground;

    double dx(int x, int y) const { return flow[2 * (static_cast<std::size_t>(y) * width + x)]; }
    double dy(int x, int y) const { return flow[2 * (static_cast<std::size_t>(y) * width + x) + 1]; }
};

HomographyFlow background_flow(const Eigen::Matrix3d& H, int width, int height,
                               const RleMask& foreground);

}  // namespace mograph
