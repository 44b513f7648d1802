#include "mograph/motion.hpp"

#include "mograph/error.hpp"
#include "mograph/rotation.hpp"

#include <cmath>
#include <sstream>

namespace mograph {

void JointSequence::validate() const {
    if (frames < 2) {
        throw ValidationError("joint sequence needs at least 2 frames for velocities");
    }
    if (joints < 1) {
        throw ValidationError("joint sequence needs at least 1 joint");
    }
    if (!(fps > 0.0) || !std::isfinite(fps)) {
        throw ValidationError("fps must be a positive finite number");
    }
    const std::size_t expected = static_cast<std::size_t>(frames) * joints;
    if (positions.size() != expected || rotations.size() != expected) {
        std::ostringstream msg;
        msg << "joint sequence arrays have " << positions.size() << "/" << rotations.size()
            << " entries, expected " << expected;
        throw ValidationError(msg.str());
    }
    for (const auto& p : positions) {
        if (!p.allFinite()) {
            throw ValidationError("joint positions contain non-finite values");
        }
    }
    for (const auto& R : rotations) {
        validate_rotation(R);
    }
}

std::vector<Eigen::Vector3d> linear_velocity(const std::vector<Eigen::Vector3d>& positions,
                                             int frames, int joints, double fps) {
    if (frames < 2) {
        throw ValidationError("linear_velocity needs at least 2 frames");
    }
    std::vector<Eigen::Vector3d> out(positions.size());
    const auto idx = [joints](int t, int j) {
        return static_cast<std::size_t>(t) * joints + j;
    };
    for (int t = 0; t + 1 < frames; ++t) {
        for (int j = 0; j < joints; ++j) {
            out[idx(t, j)] = (positions[idx(t + 1, j)] - positions[idx(t, j)]) * fps;
        }
    }
    for (int j = 0; j < joints; ++j) {
        out[idx(frames - 1, j)] = out[idx(frames - 2, j)];
    }
    return out;
}

std::vector<Eigen::Vector3d> angular_velocity(const std::vector<Eigen::Matrix3d>& rotations,
                                              int frames, int joints, double fps) {
    if (frames < 2) {
        throw ValidationError("angular_velocity needs at least 2 frames");
    }
    for (const auto& R : rotations) {
        validate_rotation(R);
    }
    std::vector<Eigen::Vector3d> out(rotations.size());
    const auto idx = [joints](int t, int j) {
        return static_cast<std::size_t>(t) * joints + j;
    };
    for (int t = 0; t + 1 < frames; ++t) {
        for (int j = 0; j < joints; ++j) {
            const Eigen::Matrix3d rel =
                rotations[idx(t, j)].transpose() * rotations[idx(t + 1, j)];
            out[idx(t, j)] = rotation_log(rel) * fps;
        }
    }
    for (int j = 0; j < joints; ++j) {
        out[idx(frames - 1, j)] = out[idx(frames - 2, j)];
    }
    return out;
}

Motion15D build_15d(const JointSequence& seq) {
    seq.validate();
    const auto vel = linear_velocity(seq.positions, seq.frames, seq.joints, seq.fps);
    const auto ang = angular_velocity(seq.rotations, seq.frames, seq.joints, seq.fps);

    Motion15D out;
    out.frames = seq.frames;
    out.joints = seq.joints;
    out.data.resize(static_cast<std::size_t>(seq.frames) * seq.joints * Motion15D::kChannels);
    for (int t = 0; t < seq.frames; ++t) {
        for (int j = 0; j < seq.joints; ++j) {
            const std::size_t src = seq.index(t, j);
            double* dst = out.at(t, j);
            const Eigen::Vector3d& p = seq.positions[src];
            const Eigen::Vector3d& v = vel[src];
            const auto r6 = rotmat_to_6d(seq.rotations[src]);
            const Eigen::Vector3d& w = ang[src];
            dst[0] = p.x();
            dst[1] = p.y();
            dst[2] = p.z();
            dst[3] = v.x();
            dst[4] = v.y();
            dst[5] = v.z();
            for (int c = 0; c < 6; ++c) {
                dst[6 + c] = r6[c];
            }
            dst[12] = w.x();
            dst[13] = w.y();
            dst[14] = w.z();
        }
    }
    return out;
}

}  // namespace mograph
