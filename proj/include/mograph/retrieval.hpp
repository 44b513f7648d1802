#pragma once

#include "mograph/graph.hpp"

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

namespace mograph {

enum class Modality { audio, motion };

/// Per-frame ("low-level") and per-window ("high-level") embeddings for one
/// audio target or one source video. High-level windows cover 120 frames at
/// 30 fps and slide with `window_hop` frames between rows.
struct FeatureTrack {
    Modality modality = Modality::audio;
    double fps = 30.0;
    int window_hop = 4;
    Eigen::MatrixXd low;   // F x D_low
    Eigen::MatrixXd high;  // C x D_high

    int frames() const { return static_cast<int>(low.rows()); }

    /// Row of `high` whose window starts at (or covers, after clamping) the
    /// given frame.
    int high_row(int frame) const;

    void validate() const;
};

/// Motion feature tracks keyed by source video id.
using MotionBank = std::map<std::string, FeatureTrack>;

struct ScoreWeights {
    double w_low = 1.0;
    double w_high = 1.0;
};

struct SearchConfig {
    ScoreWeights weights;
    /// Penalty subtracted for every non-original transition. Exact ties are
    /// still broken in favor of original transitions even at 0.
    double lambda = 0.0;
    /// 0 runs the exact DP; >= 1 runs the beam approximation.
    int beam_width = 0;
};

struct RetrievedPath {
    std::vector<int> node_ids;
    /// Step 0 is the node score; later steps are node score minus the
    /// transition penalty, so total_score is their exact sum.
    std::vector<double> per_step_scores;
    std::vector<EdgeKind> transition_kinds;  // size node_ids.size() - 1
    double total_score = 0.0;
    int non_original_count = 0;
    /// Set when a dead end cut the search short of the requested length.
    bool terminated_early = false;
};

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

/// Similarity of one node against audio step t (frames [4t, 4t+4)):
/// w_low * mean frame-wise cosine + w_high * window cosine.
double node_score(const MotionClipNode& node, const FeatureTrack& audio,
                  const FeatureTrack& motion_features, int step,
                  const ScoreWeights& weights = {});

/// Exact optimal playback path over floor(audio frames / 4) steps, maximizing
/// the summed node scores minus lambda per non-original transition. Ties are
/// resolved by fewest non-original transitions, then lowest node ids.
RetrievedPath dp_search(const GestureGraph& graph, const FeatureTrack& audio,
                        const MotionBank& motion_bank, const SearchConfig& config = {});

/// Beam approximation keeping `beam_width` best nodes per step; with
/// beam_width >= node count it reduces to the exact DP.
RetrievedPath beam_search(const GestureGraph& graph, const FeatureTrack& audio,
                          const MotionBank& motion_bank, int beam_width,
                          const SearchConfig& config = {});

}  // namespace mograph
