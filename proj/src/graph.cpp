#include "mograph/graph.hpp"

#include "mograph/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <sstream>

namespace mograph {

const char* edge_kind_name(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::original: return "original";
        case EdgeKind::synthetic: return "synthetic";
        case EdgeKind::bridge: return "bridge";
    }
    return "unknown";
}

EdgeKind edge_kind_from_name(const std::string& name) {
    if (name == "original") return EdgeKind::original;
    if (name == "synthetic") return EdgeKind::synthetic;
    if (name == "bridge") return EdgeKind::bridge;
    throw ValidationError("unknown edge kind: " + name);
}

const char* edge_rule_name(EdgeRule rule) {
    return rule == EdgeRule::substitute ? "substitute" : "literal";
}

EdgeRule edge_rule_from_name(const std::string& name) {
    if (name == "substitute") return EdgeRule::substitute;
    if (name == "literal") return EdgeRule::literal;
    throw ValidationError("unknown edge rule: " + name);
}

int GestureGraph::successor(int id) const {
    const int next = id + 1;
    if (next < static_cast<int>(nodes.size()) && nodes[next].video == nodes[id].video) {
        return next;
    }
    return -1;
}

std::vector<std::vector<int>> GestureGraph::out_edges() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e].src].push_back(e);
    }
    return adj;
}

bool GestureGraph::has_edge(int src, int dst) const {
    for (const auto& e : edges) {
        if (e.src == src && e.dst == dst) {
            return true;
        }
    }
    return false;
}

std::vector<MotionClipNode> segment_nodes(const Motion15D& motion,
                                          const std::vector<RleMask>& masks,
                                          const std::vector<std::vector<Box>>& boxes,
                                          const std::string& video_id,
                                          const GraphBuildConfig& config, int id_offset) {
    if (motion.frames < 2 * kNodeFrames) {
        std::ostringstream msg;
        msg << "source too short: " << motion.frames << " frames, need at least "
            << 2 * kNodeFrames;
        throw ValidationError(msg.str());
    }
    const bool have_masks = !masks.empty();
    const bool have_boxes = !boxes.empty();
    if (have_masks && static_cast<int>(masks.size()) < motion.frames) {
        throw ValidationError("mask track shorter than motion track");
    }
    if (have_boxes && static_cast<int>(boxes.size()) < motion.frames) {
        throw ValidationError("box track shorter than motion track");
    }

    const int count = motion.frames / kNodeFrames;
    const double samples_per_frame = config.audio_sample_rate / config.fps;
    std::vector<MotionClipNode> nodes;
    nodes.reserve(count);
    for (int n = 0; n < count; ++n) {
        MotionClipNode node;
        node.id = id_offset + n;
        node.video = video_id;
        node.frame_start = n * kNodeFrames;
        node.joints = motion.joints;
        const std::size_t begin = motion.index(node.frame_start, 0);
        const std::size_t end = motion.index(node.frame_start + kNodeFrames - 1, motion.joints - 1,
                                             Motion15D::kChannels - 1) + 1;
        node.motion.assign(motion.data.begin() + begin, motion.data.begin() + end);
        for (int f = 0; f < kNodeFrames; ++f) {
            const int src_frame = node.frame_start + f;
            if (have_masks) {
                node.body_mask[f] = masks[src_frame];
            }
            if (have_boxes) {
                node.hand_boxes[f] = boxes[src_frame];
            }
        }
        node.audio_begin = static_cast<std::int64_t>(
            std::llround(node.frame_start * samples_per_frame));
        node.audio_end = static_cast<std::int64_t>(
            std::llround((node.frame_start + kNodeFrames) * samples_per_frame));
        nodes.push_back(std::move(node));
    }
    return nodes;
}

double pose_distance(const MotionClipNode& a, const MotionClipNode& b) {
    if (a.joints != b.joints) {
        std::ostringstream msg;
        msg << "joint count mismatch: " << a.joints << " vs " << b.joints;
        throw ValidationError(msg.str());
    }
    double total = 0.0;
    for (int f = 0; f < kNodeFrames; ++f) {
        const double* fa = a.frame(f);
        const double* fb = b.frame(f);
        for (int j = 0; j < a.joints; ++j) {
            const double* ja = fa + static_cast<std::size_t>(j) * Motion15D::kChannels;
            const double* jb = fb + static_cast<std::size_t>(j) * Motion15D::kChannels;
            double pos2 = 0.0, vel2 = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double dp = ja[c] - jb[c];
                const double dv = ja[3 + c] - jb[3 + c];
                pos2 += dp * dp;
                vel2 += dv * dv;
            }
            total += std::sqrt(pos2) + std::sqrt(vel2);
        }
    }
    return total / (kNodeFrames * a.joints);
}

namespace {

double overlap_term(bool a_empty, bool b_empty, double iou) {
    if (a_empty && b_empty) {
        return 0.0;  // two absent foregrounds match
    }
    if (a_empty || b_empty) {
        return 1.0;
    }
    return 1.0 - iou;
}

}  // namespace

double iou_distance(const MotionClipNode& a, const MotionClipNode& b, double w_body,
                    double w_hand) {
    double total = 0.0;
    for (int f = 0; f < kNodeFrames; ++f) {
        const RleMask& ma = a.body_mask[f];
        const RleMask& mb = b.body_mask[f];
        if (!ma.empty_mask() && !mb.empty_mask() &&
            (ma.width != mb.width || ma.height != mb.height)) {
            throw ValidationError("body mask dimensions differ between nodes");
        }
        const double body = overlap_term(ma.empty_mask(), mb.empty_mask(), mask_iou(ma, mb));
        const auto& ba = a.hand_boxes[f];
        const auto& bb = b.hand_boxes[f];
        const double hand =
            overlap_term(ba.empty(), bb.empty(), box_union_iou(ba, bb));
        total += w_body * body + w_hand * hand;
    }
    return total / kNodeFrames;
}

double node_distance(const MotionClipNode& a, const MotionClipNode& b,
                     const GraphBuildConfig& config) {
    return pose_distance(a, b) + iou_distance(a, b, config.w_body, config.w_hand);
}

double adaptive_threshold(const std::vector<MotionClipNode>& nodes, int id,
                          const GraphBuildConfig& config) {
    const MotionClipNode& node = nodes[id];
    double sum = 0.0;   // d_{i,i} contributes 0
    int terms = 1;
    if (id > 0 && nodes[id - 1].video == node.video) {
        sum += node_distance(node, nodes[id - 1], config);
        ++terms;
    }
    if (id + 1 < static_cast<int>(nodes.size()) && nodes[id + 1].video == node.video) {
        sum += node_distance(node, nodes[id + 1], config);
        ++terms;
    }
    if (terms == 1) {
        return 0.0;  // isolated single-node video
    }
    return sum / terms;
}

GestureGraph build_graph(std::vector<MotionClipNode> nodes, int width, int height,
                         const GraphBuildConfig& config) {
    if (nodes.empty()) {
        throw ValidationError("cannot build a graph from an empty node list");
    }
    if (nodes.size() < 2) {
        throw ValidationError("graph needs at least 2 nodes");
    }
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (nodes[i].id != i) {
            throw ValidationError("node ids must be dense and in positional order");
        }
    }

    GestureGraph graph;
    graph.width = width;
    graph.height = height;
    graph.config = config;
    graph.nodes = std::move(nodes);

    const int n = static_cast<int>(graph.nodes.size());
    graph.thresholds.resize(n);
    for (int i = 0; i < n; ++i) {
        graph.thresholds[i] = adaptive_threshold(graph.nodes, i, config);
    }

    // Cache of pairwise distances; each (a, b) is needed at most a few times.
    std::vector<double> dist(static_cast<std::size_t>(n) * n,
                             std::numeric_limits<double>::quiet_NaN());
    const auto d = [&](int a, int b) {
        double& slot = dist[static_cast<std::size_t>(a) * n + b];
        if (std::isnan(slot)) {
            slot = node_distance(graph.nodes[a], graph.nodes[b], config);
            dist[static_cast<std::size_t>(b) * n + a] = slot;
        }
        return slot;
    };

    for (int i = 0; i < n; ++i) {
        const int succ = graph.successor(i);
        if (succ >= 0) {
            graph.edges.push_back({i, succ, d(i, succ), EdgeKind::original});
        }
        const int anchor = (config.edge_rule == EdgeRule::substitute) ? succ : i;
        if (anchor < 0) {
            continue;  // last node of a video has no continuation to substitute
        }
        for (int j = 0; j < n; ++j) {
            if (j == succ) {
                continue;
            }
            const double dij = d(anchor, j);
            if (dij <= graph.thresholds[i]) {
                graph.edges.push_back({i, j, dij, EdgeKind::synthetic});
            }
        }
    }
    return graph;
}

}  // namespace mograph
