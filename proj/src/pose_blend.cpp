#include "mograph/pose_blend.hpp"

#include "mograph/error.hpp"

#include <cmath>
#include <sstream>

namespace mograph {

void Pose2D::validate() const {
    if (joints.empty()) throw ValidationError("pose has no joints");
    if (confidence.size() != joints.size())
        throw ValidationError("pose confidence count does not match joint count");
    for (std::size_t j = 0; j < joints.size(); ++j) {
        if (!joints[j].allFinite() || !std::isfinite(confidence[j]))
            throw ValidationError("pose contains non-finite values");
        if (confidence[j] < 0.0 || confidence[j] > 1.0)
            throw ValidationError("pose confidence outside [0, 1]");
    }
}

std::vector<Pose2D> linear_pose_blend(const Pose2D& start, const Pose2D& end,
                                      int n_intermediate) {
    start.validate();
    end.validate();
    if (start.size() != end.size()) {
        std::ostringstream msg;
        msg << "pose joint counts differ: " << start.size() << " vs " << end.size();
        throw ValidationError(msg.str());
    }
    if (n_intermediate < 0) throw ValidationError("intermediate frame count must be >= 0");

    std::vector<Pose2D> frames(n_intermediate);
    for (int m = 0; m < n_intermediate; ++m) {
        const double alpha = static_cast<double>(m + 1) / (n_intermediate + 1);
        Pose2D& pose = frames[m];
        pose.joints.resize(start.size());
        pose.confidence.resize(start.size());
        for (std::size_t j = 0; j < start.size(); ++j) {
            pose.joints[j] = start.joints[j] + alpha * (end.joints[j] - start.joints[j]);
            pose.confidence[j] =
                start.confidence[j] + alpha * (end.confidence[j] - start.confidence[j]);
        }
    }
    return frames;
}

BlendCheck blend_error(const std::vector<Pose2D>& blended,
                       const std::vector<Pose2D>& ground_truth, double threshold) {
    if (blended.size() != ground_truth.size())
        throw ValidationError("blended and ground-truth frame counts differ");
    if (blended.empty()) throw ValidationError("blend comparison needs at least one frame");

    double total = 0.0;
    std::size_t joints = 0;
    for (std::size_t f = 0; f < blended.size(); ++f) {
        if (blended[f].size() != ground_truth[f].size())
            throw ValidationError("blended and ground-truth joint counts differ");
        for (std::size_t j = 0; j < blended[f].size(); ++j)
            total += (blended[f].joints[j] - ground_truth[f].joints[j]).norm();
        joints += blended[f].size();
    }

    BlendCheck check;
    check.error = total / static_cast<double>(joints);
    check.linear_ok = check.error < threshold;
    return check;
}

}  // namespace mograph
