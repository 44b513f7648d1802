#include "mograph/contrastive.hpp"

#include "mograph/error.hpp"

#include <cmath>
#include <sstream>

namespace mograph {

namespace {

/// Unit-normalizes every row; zero rows are rejected because the cosine (and
/// its gradient) is undefined there.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x, const char* what) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double norm = x.row(i).norm();
        if (norm == 0.0) {
            std::ostringstream msg;
            msg << what << " row " << i << " has zero norm";
            throw ValidationError(msg.str());
        }
        out.row(i) = x.row(i) / norm;
    }
    return out;
}

/// Pulls a gradient on unit rows back through the normalization: the radial
/// component is projected out and the rest is scaled by 1/norm.
Eigen::MatrixXd denormalize_grad(const Eigen::MatrixXd& grad_unit,
                                 const Eigen::MatrixXd& raw,
                                 const Eigen::MatrixXd& unit) {
    Eigen::MatrixXd out(raw.rows(), raw.cols());
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
        const double norm = raw.row(i).norm();
        const double radial = grad_unit.row(i).dot(unit.row(i));
        out.row(i) = (grad_unit.row(i) - radial * unit.row(i)) / norm;
    }
    return out;
}

void check_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tau,
                const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError(std::string(what) + " matrices must share one shape");
    if (a.cols() < 1) throw ValidationError(std::string(what) + " dimension must be positive");
    if (!a.allFinite() || !b.allFinite())
        throw ValidationError(std::string(what) + " contains non-finite values");
    if (!(tau > 0.0)) throw ValidationError("temperature must be positive");
}

/// Adds the InfoNCE terms of one direction: rows of `anchors` against rows of
/// `candidates` at the same offsets. Gradients accumulate on the unit-row
/// matrices; `weight` is the caller's 1 / (total term count).
double accumulate_direction(const Eigen::MatrixXd& anchors,
                            const Eigen::MatrixXd& candidates,
                            const LocalWindowSpec& spec, double tau, double weight,
                            Eigen::MatrixXd& grad_anchors,
                            Eigen::MatrixXd& grad_candidates) {
    const int frames = static_cast<int>(anchors.rows());
    const int band = spec.band();
    double loss = 0.0;
    for (int i = band; i + band < frames; ++i) {
        const int lo = i - band;
        const int width = 2 * band + 1;
        Eigen::VectorXd sims(width);
        for (int o = 0; o < width; ++o)
            sims[o] = anchors.row(i).dot(candidates.row(lo + o)) / tau;
        const double peak = sims.maxCoeff();

        Eigen::VectorXd shifted = (sims.array() - peak).exp();
        auto is_positive = [&](int o) { return std::abs(lo + o - i) <= spec.t; };
        double negative_mass = 0.0;
        for (int o = 0; o < width; ++o)
            if (!is_positive(o)) negative_mass += shifted[o];

        // d(term)/d(sim): sigma - 1 on the positive, its softmax share on each
        // negative. Negative shares only need the summed 1/denom across
        // positives, so the band is swept twice, not once per positive.
        double inv_denom_sum = 0.0;
        Eigen::VectorXd dsims = Eigen::VectorXd::Zero(width);
        for (int o = 0; o < width; ++o) {
            if (!is_positive(o)) continue;
            const double denom = shifted[o] + negative_mass;
            loss += weight * (peak + std::log(denom) - sims[o]);
            dsims[o] += weight * (shifted[o] / denom - 1.0);
            inv_denom_sum += 1.0 / denom;
        }
        for (int o = 0; o < width; ++o)
            if (!is_positive(o)) dsims[o] += weight * shifted[o] * inv_denom_sum;

        for (int o = 0; o < width; ++o) {
            if (dsims[o] == 0.0) continue;
            grad_anchors.row(i) += dsims[o] / tau * candidates.row(lo + o);
            grad_candidates.row(lo + o) += dsims[o] / tau * anchors.row(i);
        }
    }
    return loss;
}

}  // namespace

GlobalLossResult global_infonce(const Eigen::MatrixXd& audio_cls,
                                const Eigen::MatrixXd& motion_cls, double tau) {
    check_pair(audio_cls, motion_cls, tau, "clip embedding");
    const Eigen::Index batch = audio_cls.rows();
    if (batch < 2)
        throw ValidationError("clip-level loss needs at least two pairs for negatives");

    const Eigen::MatrixXd a_unit = normalize_rows(audio_cls, "audio clip embedding");
    const Eigen::MatrixXd m_unit = normalize_rows(motion_cls, "motion clip embedding");
    const Eigen::MatrixXd sims = a_unit * m_unit.transpose() / tau;

    // Row softmax drives audio->motion, column softmax motion->audio.
    Eigen::MatrixXd row_soft(batch, batch);
    Eigen::MatrixXd col_soft(batch, batch);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < batch; ++i) {
        const double peak = sims.row(i).maxCoeff();
        const Eigen::ArrayXd e = (sims.row(i).array() - peak).exp();
        row_soft.row(i) = (e / e.sum()).matrix();
        loss += peak + std::log(e.sum()) - sims(i, i);
    }
    for (Eigen::Index j = 0; j < batch; ++j) {
        const double peak = sims.col(j).maxCoeff();
        const Eigen::ArrayXd e = (sims.col(j).array() - peak).exp();
        col_soft.col(j) = (e / e.sum()).matrix();
        loss += peak + std::log(e.sum()) - sims(j, j);
    }
    loss /= 2.0 * static_cast<double>(batch);

    Eigen::MatrixXd dsims = (row_soft + col_soft) / (2.0 * static_cast<double>(batch));
    dsims.diagonal().array() -= 1.0 / static_cast<double>(batch);

    GlobalLossResult result;
    result.loss = loss;
    result.grad_audio = denormalize_grad(dsims * m_unit / tau, audio_cls, a_unit);
    result.grad_motion =
        denormalize_grad(dsims.transpose() * a_unit / tau, motion_cls, m_unit);
    return result;
}

LocalLossResult local_frame_contrastive(const Eigen::MatrixXd& audio_low,
                                        const Eigen::MatrixXd& motion_low,
                                        const LocalWindowSpec& spec, double tau) {
    check_pair(audio_low, motion_low, tau, "frame embedding");
    if (spec.t < 1 || spec.k < 2)
        throw ValidationError("local window needs t >= 1 and k >= 2");
    const int frames = static_cast<int>(audio_low.rows());
    const int band = spec.band();
    const int anchors = frames - 2 * band;
    if (anchors < 1) {
        std::ostringstream msg;
        msg << "local loss needs at least " << 2 * band + 1 << " frames, got " << frames;
        throw ValidationError(msg.str());
    }

    const Eigen::MatrixXd a_unit = normalize_rows(audio_low, "audio frame embedding");
    const Eigen::MatrixXd m_unit = normalize_rows(motion_low, "motion frame embedding");

    const double weight = 1.0 / (2.0 * anchors * (2 * spec.t + 1));
    Eigen::MatrixXd ga = Eigen::MatrixXd::Zero(frames, audio_low.cols());
    Eigen::MatrixXd gm = Eigen::MatrixXd::Zero(frames, motion_low.cols());

    LocalLossResult result;
    result.anchors = anchors;
    result.loss = accumulate_direction(a_unit, m_unit, spec, tau, weight, ga, gm) +
                  accumulate_direction(m_unit, a_unit, spec, tau, weight, gm, ga);
    result.grad_audio = denormalize_grad(ga, audio_low, a_unit);
    result.grad_motion = denormalize_grad(gm, motion_low, m_unit);
    return result;
}

CombinedLossResult combined_loss(const EmbeddingBatch& batch, const LocalWindowSpec& spec) {
    const std::size_t tracks = batch.audio_low.size();
    if (tracks != batch.motion_low.size())
        throw ValidationError("audio and motion track counts differ");
    if (batch.audio_cls.rows() != static_cast<Eigen::Index>(tracks) ||
        batch.motion_cls.rows() != static_cast<Eigen::Index>(tracks))
        throw ValidationError("clip embedding rows must match the track count");

    CombinedLossResult result;
    const GlobalLossResult global =
        global_infonce(batch.audio_cls, batch.motion_cls, batch.tau);
    result.global_loss = global.loss;
    result.grad_audio_cls = global.grad_audio;
    result.grad_motion_cls = global.grad_motion;

    result.grad_audio_low.reserve(tracks);
    result.grad_motion_low.reserve(tracks);
    for (std::size_t b = 0; b < tracks; ++b) {
        LocalLossResult local =
            local_frame_contrastive(batch.audio_low[b], batch.motion_low[b], spec, batch.tau);
        result.local_loss += local.loss / static_cast<double>(tracks);
        result.grad_audio_low.push_back(local.grad_audio / static_cast<double>(tracks));
        result.grad_motion_low.push_back(local.grad_motion / static_cast<double>(tracks));
    }
    result.loss = result.global_loss + result.local_loss;
    return result;
}

}  // namespace mograph
