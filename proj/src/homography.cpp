#include "mograph/homography.hpp"

#include "mograph/error.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace mograph {

namespace {

struct Normalization {
    Eigen::Matrix3d T;
    std::vector<Eigen::Vector2d> points;
};

/// Hartley conditioning: translate to the centroid, scale so the mean distance
/// from the origin is sqrt(2). Keeps the DLT system well conditioned.
Normalization normalize_points(const std::vector<Eigen::Vector2d>& points,
                               const std::vector<int>& indices) {
    Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
    for (int i : indices) centroid += points[i];
    centroid /= static_cast<double>(indices.size());

    double mean_dist = 0.0;
    for (int i : indices) mean_dist += (points[i] - centroid).norm();
    mean_dist /= static_cast<double>(indices.size());
    const double scale = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;

    Normalization out;
    out.T << scale, 0, -scale * centroid.x(), 0, scale, -scale * centroid.y(), 0, 0, 1;
    out.points.reserve(indices.size());
    for (int i : indices) out.points.push_back(scale * (points[i] - centroid));
    return out;
}

/// Direct linear transform on the given match subset. Returns false when the
/// system is rank-deficient (degenerate geometry).
bool solve_dlt(const PointMatches& matches, const std::vector<int>& indices,
               Eigen::Matrix3d& H) {
    const Normalization ns = normalize_points(matches.src, indices);
    const Normalization nd = normalize_points(matches.dst, indices);

    const Eigen::Index n = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd A(2 * n, 9);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double x = ns.points[r].x(), y = ns.points[r].y();
        const double u = nd.points[r].x(), v = nd.points[r].y();
        A.row(2 * r) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
        A.row(2 * r + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    // A rank below 8 leaves a >1-dimensional null space: no unique solution.
    if (svd.singularValues()(7) < 1e-9 * svd.singularValues()(0)) return false;
    const Eigen::VectorXd h = svd.matrixV().col(8);

    Eigen::Matrix3d Hn;
    Hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
    H = nd.T.inverse() * Hn * ns.T;
    return std::abs(H.determinant()) > 1e-12;
}

bool three_collinear(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c) {
    const Eigen::Vector2d u = b - a;
    const Eigen::Vector2d v = c - a;
    const double cross = u.x() * v.y() - u.y() * v.x();
    return std::abs(cross) <= 1e-9 * std::max(1.0, u.norm() * v.norm());
}

bool sample_degenerate(const PointMatches& matches, const std::vector<int>& idx) {
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            for (int c = b + 1; c < 4; ++c) {
                if (three_collinear(matches.src[idx[a]], matches.src[idx[b]],
                                    matches.src[idx[c]]))
                    return true;
                if (three_collinear(matches.dst[idx[a]], matches.dst[idx[b]],
                                    matches.dst[idx[c]]))
                    return true;
            }
    return false;
}

std::vector<int> find_inliers(const PointMatches& matches, const Eigen::Matrix3d& H,
                              double inlier_px) {
    Eigen::Matrix3d H_inv = H.inverse();
    std::vector<int> inliers;
    for (std::size_t i = 0; i < matches.size(); ++i)
        if (symmetric_reprojection_error(H, H_inv, matches.src[i], matches.dst[i]) <=
            inlier_px)
            inliers.push_back(static_cast<int>(i));
    return inliers;
}

}  // namespace

void PointMatches::validate() const {
    if (src.size() != dst.size())
        throw ValidationError("source and target match lists differ in length");
    for (std::size_t i = 0; i < src.size(); ++i)
        if (!src[i].allFinite() || !dst[i].allFinite())
            throw ValidationError("match coordinates contain non-finite values");
}

int PointMatches::count_outside_bounds() const {
    if (width <= 0 || height <= 0) return 0;
    int outside = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        auto out = [&](const Eigen::Vector2d& p) {
            return p.x() < 0 || p.y() < 0 || p.x() >= width || p.y() >= height;
        };
        if (out(src[i]) || out(dst[i])) ++outside;
    }
    return outside;
}

Eigen::Vector2d apply_homography(const Eigen::Matrix3d& H, const Eigen::Vector2d& p) {
    const Eigen::Vector3d q = H * Eigen::Vector3d(p.x(), p.y(), 1.0);
    if (std::abs(q.z()) < 1e-15)
        throw ComputeError("point maps to infinity under the homography");
    return {q.x() / q.z(), q.y() / q.z()};
}

double symmetric_reprojection_error(const Eigen::Matrix3d& H, const Eigen::Matrix3d& H_inv,
                                    const Eigen::Vector2d& src, const Eigen::Vector2d& dst) {
    auto transfer = [](const Eigen::Matrix3d& M, const Eigen::Vector2d& from,
                       const Eigen::Vector2d& to) {
        const Eigen::Vector3d q = M * Eigen::Vector3d(from.x(), from.y(), 1.0);
        if (std::abs(q.z()) < 1e-15) return std::numeric_limits<double>::infinity();
        return (Eigen::Vector2d(q.x() / q.z(), q.y() / q.z()) - to).norm();
    };
    return std::max(transfer(H, src, dst), transfer(H_inv, dst, src));
}

HomographyEstimate estimate_homography(const PointMatches& matches,
                                       const RansacConfig& config) {
    matches.validate();
    const int n = static_cast<int>(matches.size());
    if (n < 4) throw ValidationError("homography estimation needs at least 4 matches");
    if (config.max_iters < 1) throw ValidationError("max_iters must be positive");
    if (!(config.inlier_px > 0.0)) throw ValidationError("inlier threshold must be positive");
    if (!(config.confidence > 0.0 && config.confidence < 1.0))
        throw ValidationError("confidence must lie in (0, 1)");

    Rng rng(config.seed);
    std::vector<int> best_inliers;
    bool any_valid_sample = false;
    int needed = config.max_iters;
    int it = 0;
    for (; it < needed; ++it) {
        std::vector<int> sample;
        while (sample.size() < 4) {
            const int pick = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            if (std::find(sample.begin(), sample.end(), pick) == sample.end())
                sample.push_back(pick);
        }
        if (sample_degenerate(matches, sample)) continue;

        Eigen::Matrix3d H;
        if (!solve_dlt(matches, sample, H)) continue;
        any_valid_sample = true;

        std::vector<int> inliers = find_inliers(matches, H, config.inlier_px);
        if (inliers.size() > best_inliers.size()) {
            best_inliers = std::move(inliers);
            // Standard adaptive stopping: enough rounds that an all-inlier
            // sample was drawn with the requested confidence.
            const double w = static_cast<double>(best_inliers.size()) / n;
            const double p_good = std::pow(w, 4);
            if (p_good >= 1.0) {
                needed = it + 1;
            } else if (p_good > 0.0) {
                const double rounds = std::log1p(-config.confidence) / std::log1p(-p_good);
                needed = std::min(config.max_iters,
                                  static_cast<int>(std::min(rounds + 1.0, 1e9)));
            }
        }
    }

    if (!any_valid_sample)
        throw ComputeError("homography estimation failed: all samples were degenerate");
    if (best_inliers.size() < 4)
        throw ComputeError("no model: fewer than 4 matches reached consensus");

    // Least-squares refit on the consensus set, then a final membership pass
    // under the refit model.
    Eigen::Matrix3d H;
    if (!solve_dlt(matches, best_inliers, H))
        throw ComputeError("inlier refit is degenerate");
    std::vector<int> final_inliers = find_inliers(matches, H, config.inlier_px);
    if (final_inliers.size() < 4)
        throw ComputeError("no model: refit lost the consensus set");

    if (std::abs(H(2, 2)) < 1e-12)
        throw ComputeError("homography scale component vanishes; cannot normalize");
    H /= H(2, 2);
    return {H, std::move(final_inliers), it};
}

HomographyFlow background_flow(const Eigen::Matrix3d& H, int width, int height,
                               const RleMask& foreground) {
    if (width < 1 || height < 1) throw ValidationError("flow field needs positive dimensions");
    if (!H.allFinite()) throw ValidationError("homography contains non-finite values");
    if (std::abs(H.determinant()) <= 1e-12)
        throw ValidationError("homography is singular");
    const bool has_mask = !foreground.runs.empty() || foreground.width > 0;
    if (has_mask && (foreground.width != width || foreground.height != height))
        throw ValidationError("foreground mask dimensions do not match the flow field");

    std::vector<bool> fg(static_cast<std::size_t>(width) * height, false);
    for (const auto& [start, len] : foreground.runs)
        for (std::int64_t p = start; p < start + len; ++p) fg[static_cast<std::size_t>(p)] = true;

    HomographyFlow out;
    out.H = H;
    out.width = width;
    out.height = height;
    out.foreground = foreground;
    out.flow.assign(static_cast<std::size_t>(width) * height * 2, 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * width + x;
            if (fg[p]) continue;  // person pixels keep zero camera flow
            const Eigen::Vector3d q = H * Eigen::Vector3d(x, y, 1.0);
            if (std::abs(q.z()) < 1e-9) continue;  // horizon: offset undefined
            out.flow[2 * p] = q.x() / q.z() - x;
            out.flow[2 * p + 1] = q.y() / q.z() - y;
        }
    }
    return out;
}

}  // namespace mograph
