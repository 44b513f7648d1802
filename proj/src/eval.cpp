#include "mograph/eval.hpp"

#include "mograph/error.hpp"
#include "mograph/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace mograph {

namespace {

double row_cosine(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
                  Eigen::Index j) {
    const double na = a.row(i).norm();
    const double nb = b.row(j).norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.row(i).dot(b.row(j)) / (na * nb);
}

/// Index of the maximum, with exact ties resolved by a uniform random pick so
/// degenerate (e.g. constant) features keep the analytic baseline.
int argmax_random_ties(const std::vector<double>& values, Rng& rng) {
    double best = values[0];
    for (double v : values) best = std::max(best, v);
    std::vector<int> ties;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == best) ties.push_back(static_cast<int>(i));
    if (ties.size() == 1) return ties[0];
    return ties[rng.next_below(ties.size())];
}

double three_sigma(double p, int trials) {
    return 3.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / trials);
}

}  // namespace

void RetrievalEvalConfig::validate() const {
    if (low_accurate_window >= low_candidate_window)
        throw ValidationError("accurate window must be smaller than the candidate window");
    if (low_accurate_window < 1 || low_candidate_window < 2)
        throw ValidationError("evaluation windows must be positive");
    if (low_candidate_window % 2 != 0 || low_accurate_window % 2 != 0)
        throw ValidationError("evaluation windows must be even to center on a frame");
    if (high_candidates < 2) throw ValidationError("need at least 2 clip candidates");
    if (low_trials < 1 || high_trials < 1) throw ValidationError("trial counts must be >= 1");
}

double eval_low_level(const Eigen::MatrixXd& audio_low, const Eigen::MatrixXd& motion_low,
                      const RetrievalEvalConfig& config) {
    config.validate();
    if (audio_low.rows() != motion_low.rows() || audio_low.cols() != motion_low.cols())
        throw ValidationError("audio and motion frame tracks must share one shape");
    const int frames = static_cast<int>(audio_low.rows());
    const int half = config.low_candidate_window / 2;
    const int accurate_half = config.low_accurate_window / 2;
    if (frames < config.low_candidate_window) {
        std::ostringstream msg;
        msg << "tracks of " << frames << " frames are shorter than the "
            << config.low_candidate_window << "-frame candidate window";
        throw ValidationError(msg.str());
    }

    // Query frames must own a full window: i in [half, frames - half].
    const int query_span = frames - config.low_candidate_window + 1;
    int hits = 0;
    for (int trial = 0; trial < config.low_trials; ++trial) {
        Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(trial));
        const int i = half + static_cast<int>(rng.next_below(query_span));
        std::vector<double> sims(config.low_candidate_window);
        for (int o = 0; o < config.low_candidate_window; ++o)
            sims[o] = row_cosine(audio_low, i, motion_low, i - half + o);
        const int chosen = i - half + argmax_random_ties(sims, rng);
        if (chosen >= i - accurate_half && chosen < i + accurate_half) ++hits;
    }
    return static_cast<double>(hits) / config.low_trials;
}

double eval_high_level(const Eigen::MatrixXd& audio_high,
                       const Eigen::MatrixXd& motion_high,
                       const RetrievalEvalConfig& config) {
    config.validate();
    if (audio_high.rows() != motion_high.rows() || audio_high.cols() != motion_high.cols())
        throw ValidationError("audio and motion clip banks must share one shape");
    const int bank = static_cast<int>(audio_high.rows());
    if (bank < config.high_candidates) {
        std::ostringstream msg;
        msg << "clip bank of " << bank << " is smaller than the " << config.high_candidates
            << "-candidate protocol";
        throw ValidationError(msg.str());
    }

    std::vector<int> pool(bank);
    int hits = 0;
    for (int trial = 0; trial < config.high_trials; ++trial) {
        Rng rng = Rng::stream(config.seed, 0x8000000000000000ULL + trial);
        const int paired = static_cast<int>(rng.next_below(bank));

        // Partial Fisher-Yates over everything but the paired clip draws the
        // distinct negatives.
        for (int c = 0; c < bank; ++c) pool[c] = c;
        std::swap(pool[paired], pool[bank - 1]);
        const int negatives = config.high_candidates - 1;
        for (int d = 0; d < negatives; ++d) {
            const int swap_with = d + static_cast<int>(rng.next_below(bank - 1 - d));
            std::swap(pool[d], pool[swap_with]);
        }

        std::vector<double> sims(config.high_candidates);
        sims[0] = row_cosine(audio_high, paired, motion_high, paired);
        for (int d = 0; d < negatives; ++d)
            sims[d + 1] = row_cosine(audio_high, paired, motion_high, pool[d]);
        if (argmax_random_ties(sims, rng) == 0) ++hits;
    }
    return static_cast<double>(hits) / config.high_trials;
}

EvalReport eval_retrieval(const Eigen::MatrixXd& audio_low,
                          const Eigen::MatrixXd& motion_low,
                          const Eigen::MatrixXd& audio_high,
                          const Eigen::MatrixXd& motion_high,
                          const RetrievalEvalConfig& config) {
    EvalReport report;
    report.low_accuracy = eval_low_level(audio_low, motion_low, config);
    report.high_accuracy = eval_high_level(audio_high, motion_high, config);
    report.low_trials = config.low_trials;
    report.high_trials = config.high_trials;
    report.seed = config.seed;
    report.low_radius = three_sigma(report.low_accuracy, config.low_trials);
    report.high_radius = three_sigma(report.high_accuracy, config.high_trials);
    return report;
}

double diversity(const Eigen::MatrixXd& clips) {
    if (clips.rows() < 2)
        throw ValidationError("diversity needs at least two clips");
    if (!clips.allFinite())
        throw ValidationError("clip features contain non-finite values");
    double total = 0.0;
    for (Eigen::Index i = 0; i < clips.rows(); ++i)
        for (Eigen::Index j = i + 1; j < clips.rows(); ++j)
            total += (clips.row(i) - clips.row(j)).norm();
    const double pairs = static_cast<double>(clips.rows()) * (clips.rows() - 1) / 2.0;
    return total / pairs;
}

}  // namespace mograph
