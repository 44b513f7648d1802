#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace mograph {

struct RetrievalEvalConfig {
    /// Frame-level protocol: candidates are the `low_candidate_window` frames
    /// centered on the query; a hit lands inside the `low_accurate_window`
    /// frames around it. 8/32 puts the random baseline at exactly 25%.
    int low_candidate_window = 32;
    int low_accurate_window = 8;
    int low_trials = 16000;
    /// Clip-level protocol: 1 paired clip against high_candidates - 1
    /// distinct negatives, random baseline 1/256.
    int high_candidates = 256;
    int high_trials = 3000;
    std::uint64_t seed = 7;

    void validate() const;
};

struct EvalReport {
    double low_accuracy = 0.0;
    double high_accuracy = 0.0;
    int low_trials = 0;
    int high_trials = 0;
    std::uint64_t seed = 0;
    /// 3-sigma binomial radii around the measured accuracies.
    double low_radius = 0.0;
    double high_radius = 0.0;
};

/// Fraction of trials where the frame with the highest cosine similarity to a
/// random audio frame (within the candidate window around it) falls inside the
/// accurate window. Argmax ties are broken by a seeded random choice; trials
/// run on independent counter-derived RNG streams.
double eval_low_level(const Eigen::MatrixXd& audio_low, const Eigen::MatrixXd& motion_low,
                      const RetrievalEvalConfig& config = {});

/// Fraction of trials where the paired clip beats the sampled distinct
/// negatives on cosine similarity. Rows of the two banks are paired by index.
double eval_high_level(const Eigen::MatrixXd& audio_high,
                       const Eigen::MatrixXd& motion_high,
                       const RetrievalEvalConfig& config = {});

/// Both protocols plus their 3-sigma radii in one report.
EvalReport eval_retrieval(const Eigen::MatrixXd& audio_low,
                          const Eigen::MatrixXd& motion_low,
                          const Eigen::MatrixXd& audio_high,
                          const Eigen::MatrixXd& motion_high,
                          const RetrievalEvalConfig& config = {});

/// Mean pairwise Euclidean distance between clip feature rows.
double diversity(const Eigen::MatrixXd& clips);

}  // namespace mograph
