#pragma once

#include "mograph/graph.hpp"
#include "mograph/motion.hpp"
#include "mograph/rng.hpp"
#include "mograph/rotation.hpp"

#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace test {

/// Self-deleting scratch directory under the system temp root.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("mograph-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    std::string dir() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline Eigen::Matrix3d random_rotation(mograph::Rng& rng) {
    Eigen::Vector3d axis(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian());
    if (axis.norm() < 1e-12) axis = Eigen::Vector3d::UnitZ();
    axis.normalize();
    const double angle = rng.next_double() * 3.0;
    return mograph::rotation_exp(axis * angle);
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, mograph::Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.next_gaussian();
    return m;
}

/// Node whose 4 frames all hold position (x, y, z), zero velocities, identity
/// rotation, zero angular velocity. node_distance between two such nodes (with
/// empty masks and boxes) is exactly the positional offset.
inline mograph::MotionClipNode const_node(int id, const std::string& video,
                                          int frame_start, double x, double y = 0.0,
                                          double z = 0.0, int joints = 1) {
    mograph::MotionClipNode node;
    node.id = id;
    node.video = video;
    node.frame_start = frame_start;
    node.joints = joints;
    node.motion.assign(static_cast<std::size_t>(mograph::kNodeFrames) * joints *
                           mograph::Motion15D::kChannels,
                       0.0);
    for (int f = 0; f < mograph::kNodeFrames; ++f) {
        for (int j = 0; j < joints; ++j) {
            double* p = node.motion.data() +
                        (static_cast<std::size_t>(f) * joints + j) *
                            mograph::Motion15D::kChannels;
            p[0] = x;
            p[1] = y;
            p[2] = z;
            // 6d encoding of the identity rotation
            p[6] = 1.0;
            p[10] = 1.0;
        }
    }
    node.audio_begin = 0;
    node.audio_end = 0;
    return node;
}

/// Graph over hand-picked edges; distances recomputed from the nodes so prune
/// tie-breaking sees the real geometry.
inline mograph::GestureGraph make_graph(std::vector<mograph::MotionClipNode> nodes,
                                        const std::vector<std::pair<int, int>>& edges,
                                        mograph::EdgeKind kind = mograph::EdgeKind::original) {
    mograph::GestureGraph graph;
    graph.nodes = std::move(nodes);
    graph.width = 64;
    graph.height = 64;
    graph.thresholds.assign(graph.nodes.size(), 0.0);
    for (const auto& [s, d] : edges) {
        graph.edges.push_back(
            {s, d, mograph::node_distance(graph.nodes[s], graph.nodes[d], graph.config),
             kind});
    }
    return graph;
}

}  // namespace test
