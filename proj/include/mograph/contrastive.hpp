#pragma once

#include <Eigen/Core>
#include <vector>

namespace mograph {

/// Local window geometry: positives within t frames of the anchor, negatives
/// in the surrounding band out to k*t frames. Anchors too close to either
/// track end to own a full band are skipped.
struct LocalWindowSpec {
    int t = 4;
    int k = 4;

    int band() const { return k * t; }
    int negatives_per_anchor() const { return 2 * t * (k - 1); }
};

struct GlobalLossResult {
    double loss = 0.0;
    Eigen::MatrixXd grad_audio;   // d loss / d audio_cls, before normalization
    Eigen::MatrixXd grad_motion;  // d loss / d motion_cls
};

/// Symmetric cross-modal InfoNCE over clip-level embeddings: rows are
/// unit-normalized, pairwise cosines are divided by tau, and the loss averages
/// the audio->motion and motion->audio cross entropies with matching rows as
/// the positive pairs. Gradients are with respect to the raw (unnormalized)
/// inputs.
GlobalLossResult global_infonce(const Eigen::MatrixXd& audio_cls,
                                const Eigen::MatrixXd& motion_cls, double tau = 0.07);

struct LocalLossResult {
    double loss = 0.0;
    int anchors = 0;
    Eigen::MatrixXd grad_audio;   // d loss / d audio_low
    Eigen::MatrixXd grad_motion;  // d loss / d motion_low
};

/// Frame-level contrastive loss between two aligned tracks. Every valid frame
/// anchors one InfoNCE term per positive and per direction; the result is the
/// mean over anchors, positives, and both directions.
LocalLossResult local_frame_contrastive(const Eigen::MatrixXd& audio_low,
                                        const Eigen::MatrixXd& motion_low,
                                        const LocalWindowSpec& spec = {},
                                        double tau = 0.07);

/// One training batch: clip-level rows are paired by index with the per-frame
/// tracks. The clip embeddings are separate inputs rather than pooled frames,
/// so the global loss cannot leak gradient into the frame tracks by
/// construction.
struct EmbeddingBatch {
    std::vector<Eigen::MatrixXd> audio_low;
    std::vector<Eigen::MatrixXd> motion_low;
    Eigen::MatrixXd audio_cls;   // B x D_high
    Eigen::MatrixXd motion_cls;  // B x D_high
    double tau = 0.07;
    /// Stop-gradient switch for the clip-level term's influence on the
    /// per-frame tracks. Accepted for configuration compatibility; because the
    /// clip embeddings enter this module as independent inputs, that gradient
    /// is structurally zero and the flag never changes any output.
    bool grad_mask_low = true;
};

struct CombinedLossResult {
    double loss = 0.0;
    double global_loss = 0.0;
    double local_loss = 0.0;
    Eigen::MatrixXd grad_audio_cls;
    Eigen::MatrixXd grad_motion_cls;
    std::vector<Eigen::MatrixXd> grad_audio_low;
    std::vector<Eigen::MatrixXd> grad_motion_low;
};

/// Global loss over the clip embeddings plus the batch-mean local loss over
/// the per-frame tracks.
CombinedLossResult combined_loss(const EmbeddingBatch& batch,
                                 const LocalWindowSpec& spec = {});

}  // namespace mograph
