#include "mograph/retrieval.hpp"

#include "mograph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mograph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// DP cell: accumulated score with a secondary objective that prefers fewer
/// non-original transitions, so exact score ties resolve toward untouched
/// source footage.
struct DpValue {
    double score = kNegInf;
    int non_original = 0;
    bool reachable = false;
};

bool improves(double score, int non_original, const DpValue& incumbent) {
    if (!incumbent.reachable) return true;
    if (score != incumbent.score) return score > incumbent.score;
    return non_original < incumbent.non_original;
}

struct BackPointer {
    int pred = -1;
    EdgeKind kind = EdgeKind::original;
};

void check_compatible(const FeatureTrack& audio, const MotionBank& bank,
                      const GestureGraph& graph) {
    if (graph.nodes.empty()) throw ValidationError("search requires a non-empty graph");
    audio.validate();
    if (audio.modality != Modality::audio)
        throw ValidationError("search target must be an audio feature track");
    for (const auto& [video, track] : bank) {
        track.validate();
        if (track.modality != Modality::motion)
            throw ValidationError("feature bank entry '" + video + "' is not a motion track");
        if (track.low.cols() != audio.low.cols() || track.high.cols() != audio.high.cols())
            throw ValidationError("feature dimensions of '" + video +
                                  "' do not match the audio track");
    }
    for (const auto& node : graph.nodes) {
        auto it = bank.find(node.video);
        if (it == bank.end())
            throw ValidationError("no feature track for video '" + node.video + "'");
        if (node.frame_start + kNodeFrames > it->second.frames()) {
            std::ostringstream msg;
            msg << "node " << node.id << " spans frames past the feature track of '"
                << node.video << "'";
            throw ValidationError(msg.str());
        }
    }
}

RetrievedPath run_search(const GestureGraph& graph, const FeatureTrack& audio,
                         const MotionBank& bank, const SearchConfig& config,
                         int beam_width) {
    check_compatible(audio, bank, graph);
    const int steps = audio.frames() / kNodeFrames;
    if (steps < 1)
        throw ValidationError("audio track is shorter than one 4-frame step");
    const int n = static_cast<int>(graph.nodes.size());
    if (beam_width == 0) beam_width = n;
    if (beam_width < 1) throw ValidationError("beam width must be positive");

    // Predecessor lists sorted by (source id, kind) make the strict-improvement
    // relaxation deterministic: ties go to the lowest source id, and among
    // parallel edges to the least synthetic kind.
    std::vector<std::vector<BackPointer>> preds(n);
    for (const auto& edge : graph.edges)
        preds[edge.dst].push_back({edge.src, edge.kind});
    for (auto& list : preds) {
        std::sort(list.begin(), list.end(), [](const BackPointer& a, const BackPointer& b) {
            if (a.pred != b.pred) return a.pred < b.pred;
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        });
        list.erase(std::unique(list.begin(), list.end(),
                               [](const BackPointer& a, const BackPointer& b) {
                                   return a.pred == b.pred && a.kind == b.kind;
                               }),
                   list.end());
    }

    auto step_scores = [&](int t) {
        std::vector<double> s(n);
        for (int v = 0; v < n; ++v)
            s[v] = node_score(graph.nodes[v], audio, bank.at(graph.nodes[v].video), t,
                              config.weights);
        return s;
    };

    auto apply_beam = [&](std::vector<DpValue>& layer) {
        if (beam_width >= n) return;
        std::vector<int> alive;
        for (int v = 0; v < n; ++v)
            if (layer[v].reachable) alive.push_back(v);
        if (static_cast<int>(alive.size()) <= beam_width) return;
        std::stable_sort(alive.begin(), alive.end(), [&](int a, int b) {
            if (layer[a].score != layer[b].score) return layer[a].score > layer[b].score;
            if (layer[a].non_original != layer[b].non_original)
                return layer[a].non_original < layer[b].non_original;
            return a < b;
        });
        for (std::size_t i = beam_width; i < alive.size(); ++i)
            layer[alive[i]].reachable = false;
    };

    std::vector<DpValue> current(n);
    {
        const auto s0 = step_scores(0);
        for (int v = 0; v < n; ++v) current[v] = {s0[v], 0, true};
        apply_beam(current);
    }

    // back[t - 1][v] records how step t reached node v.
    std::vector<std::vector<BackPointer>> back;
    int completed = 1;
    bool truncated = false;
    for (int t = 1; t < steps; ++t) {
        const auto st = step_scores(t);
        std::vector<DpValue> next(n);
        std::vector<BackPointer> bp(n);
        for (int v = 0; v < n; ++v) {
            for (const auto& in : preds[v]) {
                if (!current[in.pred].reachable) continue;
                const int penalty = in.kind == EdgeKind::original ? 0 : 1;
                const double score =
                    current[in.pred].score + st[v] - config.lambda * penalty;
                const int count = current[in.pred].non_original + penalty;
                if (improves(score, count, next[v])) {
                    next[v] = {score, count, true};
                    bp[v] = in;
                }
            }
        }
        apply_beam(next);
        if (std::none_of(next.begin(), next.end(),
                         [](const DpValue& c) { return c.reachable; })) {
            truncated = true;
            break;
        }
        current = std::move(next);
        back.push_back(std::move(bp));
        completed = t + 1;
    }

    int best = -1;
    for (int v = 0; v < n; ++v)
        if (current[v].reachable &&
            (best < 0 || improves(current[v].score, current[v].non_original, current[best])))
            best = v;
    if (best < 0) throw ComputeError("search found no reachable node");

    RetrievedPath path;
    path.terminated_early = truncated;
    path.non_original_count = current[best].non_original;
    path.node_ids.assign(completed, -1);
    path.transition_kinds.assign(completed > 1 ? completed - 1 : 0, EdgeKind::original);
    int v = best;
    for (int t = completed - 1; t >= 1; --t) {
        path.node_ids[t] = v;
        path.transition_kinds[t - 1] = back[t - 1][v].kind;
        v = back[t - 1][v].pred;
    }
    path.node_ids[0] = v;

    path.per_step_scores.resize(completed);
    for (int t = 0; t < completed; ++t) {
        const int node = path.node_ids[t];
        double s = node_score(graph.nodes[node], audio, bank.at(graph.nodes[node].video), t,
                              config.weights);
        if (t > 0 && path.transition_kinds[t - 1] != EdgeKind::original)
            s -= config.lambda;
        path.per_step_scores[t] = s;
    }
    path.total_score = std::accumulate(path.per_step_scores.begin(),
                                       path.per_step_scores.end(), 0.0);
    return path;
}

}  // namespace

int FeatureTrack::high_row(int frame) const {
    const int rows = static_cast<int>(high.rows());
    return std::clamp(frame / window_hop, 0, rows - 1);
}

void FeatureTrack::validate() const {
    if (fps <= 0.0) throw ValidationError("feature track fps must be positive");
    if (window_hop < 1) throw ValidationError("feature window hop must be at least 1");
    if (low.rows() < 1) throw ValidationError("feature track has no frames");
    if (high.rows() < 1) throw ValidationError("feature track has no windows");
    if (low.cols() < 1 || high.cols() < 1)
        throw ValidationError("feature dimensions must be positive");
    if (!low.allFinite() || !high.allFinite())
        throw ValidationError("feature track contains non-finite values");
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size())
        throw ValidationError("cosine similarity requires equal dimensions");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

double node_score(const MotionClipNode& node, const FeatureTrack& audio,
                  const FeatureTrack& motion_features, int step,
                  const ScoreWeights& weights) {
    if (step < 0 || (step + 1) * kNodeFrames > audio.frames())
        throw ValidationError("audio step out of range");
    if (node.frame_start + kNodeFrames > motion_features.frames())
        throw ValidationError("node frames exceed the motion feature track");

    double low = 0.0;
    for (int r = 0; r < kNodeFrames; ++r)
        low += cosine_similarity(audio.low.row(step * kNodeFrames + r),
                                 motion_features.low.row(node.frame_start + r));
    low /= kNodeFrames;

    const double high = cosine_similarity(
        audio.high.row(audio.high_row(step * kNodeFrames)),
        motion_features.high.row(motion_features.high_row(node.frame_start)));

    return weights.w_low * low + weights.w_high * high;
}

RetrievedPath dp_search(const GestureGraph& graph, const FeatureTrack& audio,
                        const MotionBank& motion_bank, const SearchConfig& config) {
    return run_search(graph, audio, motion_bank, config, 0);
}

RetrievedPath beam_search(const GestureGraph& graph, const FeatureTrack& audio,
                          const MotionBank& motion_bank, int beam_width,
                          const SearchConfig& config) {
    if (beam_width < 1) throw ValidationError("beam width must be positive");
    return run_search(graph, audio, motion_bank, config, beam_width);
}

}  // namespace mograph
