#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

namespace mograph {

/// Root-relative joint positions and rotations for one clip or video.
/// Flat layout: index (t * joints + j) into positions/rotations.
struct JointSequence {
    double fps = 30.0;
    int frames = 0;
    int joints = 0;
    std::vector<Eigen::Vector3d> positions;   // frames * joints
    std::vector<Eigen::Matrix3d> rotations;   // frames * joints

    std::size_t index(int t, int j) const {
        return static_cast<std::size_t>(t) * joints + j;
    }

    /// Checks shapes, finiteness, rotation validity and frames >= 2.
    void validate() const;
};

/// Per-joint motion features, 15 channels per (frame, joint):
/// [position(3), linear velocity(3), 6d rotation(6), angular velocity(3)].
struct Motion15D {
    static constexpr int kChannels = 15;

    int frames = 0;
    int joints = 0;
    std::vector<double> data;  // frames * joints * 15

    std::size_t index(int t, int j, int c = 0) const {
        return (static_cast<std::size_t>(t) * joints + j) * kChannels + c;
    }
    const double* at(int t, int j) const { return data.data() + index(t, j); }
    double* at(int t, int j) { return data.data() + index(t, j); }

    Eigen::Vector3d position(int t, int j) const {
        const double* p = at(t, j);
        return {p[0], p[1], p[2]};
    }
    Eigen::Vector3d velocity(int t, int j) const {
        const double* p = at(t, j);
        return {p[3], p[4], p[5]};
    }
};

/// Forward differences scaled to units-per-second; the last frame repeats the
/// previous velocity so the output stays frames-aligned with the input.
std::vector<Eigen::Vector3d> linear_velocity(const std::vector<Eigen::Vector3d>& positions,
                                             int frames, int joints, double fps);

/// Angular velocity as the axis-angle of R_t^-1 * R_{t+1}, scaled by fps;
/// last frame repeated.
std::vector<Eigen::Vector3d> angular_velocity(const std::vector<Eigen::Matrix3d>& rotations,
                                              int frames, int joints, double fps);

/// Assembles the full per-joint feature tensor from a validated sequence.
Motion15D build_15d(const JointSequence& seq);

}  // namespace mograph
