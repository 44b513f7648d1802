#pragma once

#include "mograph/mask.hpp"
#include "mograph/motion.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mograph {

/// Frames per graph node. Nodes are non-overlapping 4-frame clips cut from
/// each reference video in original order.
constexpr int kNodeFrames = 4;

struct MotionClipNode {
    int id = -1;
    std::string video;
    int frame_start = 0;  // frames [frame_start, frame_start + 4) of `video`
    int joints = 0;
    std::vector<double> motion;                       // 4 x joints x 15
    std::array<RleMask, kNodeFrames> body_mask;
    std::array<std::vector<Box>, kNodeFrames> hand_boxes;
    std::int64_t audio_begin = 0;                     // samples into source audio
    std::int64_t audio_end = 0;

    const double* frame(int f) const {
        return motion.data() + static_cast<std::size_t>(f) * joints * Motion15D::kChannels;
    }
};

enum class EdgeKind { original, synthetic, bridge };

const char* edge_kind_name(EdgeKind kind);
EdgeKind edge_kind_from_name(const std::string& name);

struct GraphEdge {
    int src = -1;
    int dst = -1;
    double distance = 0.0;
    EdgeKind kind = EdgeKind::original;
};

/// Which pair of clips a candidate transition i -> j is scored on.
/// `substitute` admits j when it can stand in for i's original continuation:
/// d(successor(i), j) <= tau_i. `literal` thresholds d(i, j) directly.
enum class EdgeRule { substitute, literal };

const char* edge_rule_name(EdgeRule rule);
EdgeRule edge_rule_from_name(const std::string& name);

struct GraphBuildConfig {
    EdgeRule edge_rule = EdgeRule::substitute;
    double w_body = 0.5;
    double w_hand = 0.5;
    /// Used to derive node audio spans from frame indices.
    double audio_sample_rate = 16000.0;
    double fps = 30.0;
};

struct GestureGraph {
    std::vector<MotionClipNode> nodes;
    std::vector<GraphEdge> edges;
    int width = 0;
    int height = 0;
    std::vector<double> thresholds;   // adaptive tau per node
    GraphBuildConfig config;

    /// Node id of i's original continuation within the same video, or -1.
    int successor(int id) const;

    std::vector<std::vector<int>> out_edges() const;  // edge indices per source node
    bool has_edge(int src, int dst) const;
};

/// Cuts a video into floor(T/4) nodes; trailing remainder frames are dropped.
/// Masks and boxes are per source frame and must cover all T frames.
std::vector<MotionClipNode> segment_nodes(const Motion15D& motion,
                                          const std::vector<RleMask>& masks,
                                          const std::vector<std::vector<Box>>& boxes,
                                          const std::string& video_id,
                                          const GraphBuildConfig& config = {},
                                          int id_offset = 0);

/// Mean over the 4 aligned frame pairs and all joints of
/// |pos_a - pos_b| + |vel_a - vel_b|.
double pose_distance(const MotionClipNode& a, const MotionClipNode& b);

/// Mean over the 4 aligned frames of
/// w_body * (1 - IoU(body masks)) + w_hand * (1 - IoU(hand box unions)).
/// Two empty foregrounds count as matching (term 0); empty vs non-empty is 1.
double iou_distance(const MotionClipNode& a, const MotionClipNode& b,
                    double w_body = 0.5, double w_hand = 0.5);

double node_distance(const MotionClipNode& a, const MotionClipNode& b,
                     const GraphBuildConfig& config = {});

/// Adaptive threshold tau_i = (d_{i,i-1} + d_{i,i} + d_{i,i+1}) / 3 over the
/// node's temporal neighbors in its source video; d_{i,i} is 0 by definition.
/// Missing boundary neighbors drop their term and reduce the divisor.
double adaptive_threshold(const std::vector<MotionClipNode>& nodes, int id,
                          const GraphBuildConfig& config = {});

/// Builds the initial directed graph: every original-successor link plus the
/// synthetic transitions admitted by the configured edge rule.
GestureGraph build_graph(std::vector<MotionClipNode> nodes, int width, int height,
                         const GraphBuildConfig& config = {});

}  // namespace mograph
