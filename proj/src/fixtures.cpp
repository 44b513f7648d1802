#include "mograph/fixtures.hpp"

#include "mograph/error.hpp"
#include "mograph/graph.hpp"
#include "mograph/io.hpp"
#include "mograph/motion.hpp"
#include "mograph/pipeline.hpp"
#include "mograph/rng.hpp"
#include "mograph/rotation.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>

namespace mograph {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_sidecar(std::vector<std::string>& written, const std::string& dir,
                   const ordered_json& gt) {
    const std::string path = join(dir, "gt.json");
    write_text_file(path, gt.dump(2) + "\n");
    written.push_back(path);
}

/// Smooth random motion: sinusoidal joint positions plus an integrated random
/// rotation walk, so every rotation is orthonormal by construction.
JointSequence random_motion(int frames, int joints, Rng& rng) {
    JointSequence seq;
    seq.fps = 30.0;
    seq.frames = frames;
    seq.joints = joints;
    seq.positions.resize(static_cast<std::size_t>(frames) * joints);
    seq.rotations.resize(static_cast<std::size_t>(frames) * joints);

    for (int j = 0; j < joints; ++j) {
        const Eigen::Vector3d base(rng.next_gaussian(), rng.next_gaussian(),
                                   rng.next_gaussian());
        const Eigen::Vector3d amp = 0.2 * Eigen::Vector3d(rng.next_double(), rng.next_double(),
                                                          rng.next_double());
        const double phase = rng.next_double() * 6.28318530717958647692;
        const double speed = 0.5 + rng.next_double();
        Eigen::Vector3d axis(rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian());
        if (axis.norm() < 1e-9) axis = Eigen::Vector3d::UnitX();
        axis.normalize();
        const double step = 0.03 * rng.next_double();

        Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
        const Eigen::Matrix3d advance = rotation_exp(axis * step);
        for (int t = 0; t < frames; ++t) {
            const double phi = phase + speed * t / 30.0;
            seq.positions[seq.index(t, j)] =
                base + amp * std::sin(phi) + Eigen::Vector3d(0.01 * t / frames, 0, 0);
            seq.rotations[seq.index(t, j)] = rot;
            rot = advance * rot;
        }
    }
    return seq;
}

/// Constant-pose motion: every frame identical. Distances between any two
/// clips vanish, which is the degenerate regime several fixtures rely on.
JointSequence constant_motion(int frames, int joints, const Eigen::Vector3d& at) {
    JointSequence seq;
    seq.fps = 30.0;
    seq.frames = frames;
    seq.joints = joints;
    seq.positions.assign(static_cast<std::size_t>(frames) * joints, at);
    seq.rotations.assign(static_cast<std::size_t>(frames) * joints,
                         Eigen::Matrix3d::Identity());
    return seq;
}

std::vector<std::string> gen_motion(const FixtureParams& p) {
    if (p.frames < 8) throw ValidationError("motion fixture needs at least 8 frames");
    if (p.joints < 1) throw ValidationError("motion fixture needs at least one joint");
    Rng rng(p.seed);
    const JointSequence seq = random_motion(p.frames, p.joints, rng);

    std::vector<std::string> written;
    written.push_back(join(p.out_dir, "motion.bin"));
    write_motion_binary(written.back(), seq);
    written.push_back(join(p.out_dir, "motion.txt"));
    write_motion_text(written.back(), seq);

    ordered_json gt;
    gt["kind"] = "motion";
    gt["frames"] = p.frames;
    gt["joints"] = p.joints;
    gt["fps"] = 30.0;
    gt["channels"] = Motion15D::kChannels;
    write_sidecar(written, p.out_dir, gt);
    return written;
}

std::vector<std::string> gen_graph(const FixtureParams& p) {
    // Two constant-pose videos at different positions: within a video every
    // clip matches every other (distance 0); across videos every pair is at
    // the same distance, so the bridge tie-break must pick the lowest ids.
    const JointSequence video_a = constant_motion(12, 2, {0.0, 0.0, 0.0});
    const JointSequence video_b = constant_motion(12, 2, {3.0, 0.0, 0.0});

    std::vector<std::string> written;
    written.push_back(join(p.out_dir, "video_a.motion"));
    write_motion_binary(written.back(), video_a);
    written.push_back(join(p.out_dir, "video_b.motion"));
    write_motion_binary(written.back(), video_b);

    GraphBuildConfig config;
    std::vector<MotionClipNode> nodes =
        segment_nodes(build_15d(video_a), {}, {}, "video_a", config, 0);
    std::vector<MotionClipNode> more =
        segment_nodes(build_15d(video_b), {}, {}, "video_b", config, 3);
    nodes.insert(nodes.end(), more.begin(), more.end());

    GestureGraph graph;
    graph.config = config;
    graph.nodes = std::move(nodes);
    graph.thresholds.resize(graph.nodes.size());
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        graph.thresholds[i] = adaptive_threshold(graph.nodes, static_cast<int>(i), config);
    // Hand-set topology: two disjoint 3-cycles, one per video.
    for (int base : {0, 3}) {
        graph.edges.push_back({base, base + 1, 0.0, EdgeKind::original});
        graph.edges.push_back({base + 1, base + 2, 0.0, EdgeKind::original});
        graph.edges.push_back({base + 2, base, 0.0, EdgeKind::synthetic});
    }

    GraphDocument doc;
    doc.graph = std::move(graph);
    doc.sources.push_back({"video_a", "video_a.motion", "", ""});
    doc.sources.push_back({"video_b", "video_b.motion", "", ""});
    written.push_back(join(p.out_dir, "graph.json"));
    write_graph(written.back(), doc);

    ordered_json gt;
    gt["kind"] = "graph";
    gt["components"] = 2;
    gt["bridge_pairs_needed"] = 1;
    // All cross-video clip distances tie, so the bridge lands on (0, 3).
    gt["expected_bridge"] = ordered_json::array({0, 3});
    gt["cross_distance"] = 3.0;
    write_sidecar(written, p.out_dir, gt);
    return written;
}

std::vector<std::string> gen_homography(const FixtureParams& p) {
    if (p.n_matches < 8) throw ValidationError("homography fixture needs at least 8 matches");
    if (p.outlier_fraction < 0.0 || p.outlier_fraction > 0.5)
        throw ValidationError("outlier fraction must lie in [0, 0.5]");

    // A mild projective map: representative of camera motion between nearby
    // frames, far from the horizon over the whole image.
    Eigen::Matrix3d H;
    H << 1.02, 0.013, 4.0, -0.009, 0.985, -2.5, 1.2e-5, -2.1e-5, 1.0;

    Rng rng(p.seed);
    PointMatches matches;
    matches.width = p.width;
    matches.height = p.height;
    for (int i = 0; i < p.n_matches; ++i) {
        const Eigen::Vector2d src(rng.next_double() * p.width, rng.next_double() * p.height);
        const Eigen::Vector3d mapped = H * Eigen::Vector3d(src.x(), src.y(), 1.0);
        matches.src.push_back(src);
        matches.dst.emplace_back(mapped.x() / mapped.z(), mapped.y() / mapped.z());
    }

    // Planted outliers: displaced by at least 5x the inlier threshold, so the
    // estimator must recover exactly the clean set.
    const int outliers = static_cast<int>(std::lround(p.outlier_fraction * p.n_matches));
    std::vector<int> order(p.n_matches);
    for (int i = 0; i < p.n_matches; ++i) order[i] = i;
    for (int i = 0; i < p.n_matches - 1; ++i) {
        const int j = i + static_cast<int>(rng.next_below(p.n_matches - i));
        std::swap(order[i], order[j]);
    }
    std::vector<int> outlier_ids(order.begin(), order.begin() + outliers);
    std::sort(outlier_ids.begin(), outlier_ids.end());
    for (int idx : outlier_ids) {
        const double angle = rng.next_double() * 6.28318530717958647692;
        const double radius = 5.0 * p.inlier_px * (1.0 + rng.next_double());
        matches.dst[idx] += radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    }

    std::vector<std::string> written;
    written.push_back(join(p.out_dir, "matches.txt"));
    write_matches(written.back(), matches);

    ordered_json gt;
    gt["kind"] = "homography";
    ordered_json h_rows = ordered_json::array();
    for (int r = 0; r < 3; ++r)
        h_rows.push_back(ordered_json::array({H(r, 0), H(r, 1), H(r, 2)}));
    gt["H"] = std::move(h_rows);
    gt["outlier_indices"] = outlier_ids;
    gt["inlier_px"] = p.inlier_px;
    write_sidecar(written, p.out_dir, gt);
    return written;
}

std::vector<std::string> gen_random_features(const FixtureParams& p) {
    if (p.feature_frames < 32)
        throw ValidationError("random features need at least 32 frames");
    if (p.feature_clips < 256)
        throw ValidationError("random features need at least 256 clips");
    Rng rng(p.seed);
    auto gaussian_matrix = [&](int rows, int cols) {
        Eigen::MatrixXd m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
        return m;
    };

    FeatureTrack audio;
    audio.modality = Modality::audio;
    audio.low = gaussian_matrix(p.feature_frames, p.d_low);
    audio.high = gaussian_matrix(p.feature_clips, p.d_high);
    FeatureTrack motion;
    motion.modality = Modality::motion;
    motion.low = gaussian_matrix(p.feature_frames, p.d_low);
    motion.high = gaussian_matrix(p.feature_clips, p.d_high);

    std::vector<std::string> written;
    written.push_back(join(p.out_dir, "audio.feat"));
    write_features(written.back(), audio);
    written.push_back(join(p.out_dir, "motion.feat"));
    write_features(written.back(), motion);

    ordered_json gt;
    gt["kind"] = "random-features";
    gt["low_baseline"] = 0.25;
    gt["high_baseline"] = 1.0 / 256.0;
    gt["frames"] = p.feature_frames;
    gt["clips"] = p.feature_clips;
    write_sidecar(written, p.out_dir, gt);
    return written;
}

std::vector<std::string> gen_alignment(const FixtureParams& p) {
    const std::vector<std::string> frames = {"", "", "T", "", "", "h", "e",
                                             "",  "F", "i", "r", "s", "t"};
    std::string frame_lines;
    for (const std::string& t : frames) frame_lines += t + "\n";
    const std::string word_lines = "CLS\nThe\nFirst\nPOS\n";

    std::vector<std::string> written;
    written.push_back(join(p.out_dir, "frames.txt"));
    write_text_file(written.back(), frame_lines);
    written.push_back(join(p.out_dir, "words.txt"));
    write_text_file(written.back(), word_lines);

    ordered_json gt;
    gt["kind"] = "alignment";
    gt["word_index"] = std::vector<int>{-1, -1, 1, -1, -1, 1, 1, -1, 2, 2, 2, 2, 2};
    gt["filled_word_index"] = std::vector<int>{1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2};
    write_sidecar(written, p.out_dir, gt);
    return written;
}

/// Two 24-frame constant-pose videos (6 nodes each, ids 0-5 and 6-11) whose
/// features plant [0, 1, 6, 7, 2] as the unique optimal 5-step path: every
/// motion frame carries the one-hot code of its node, the audio carries the
/// planted node's code per step, and the clip-level rows are constant so the
/// window term cancels out of the argmax.
std::vector<std::string> gen_pipeline(const FixtureParams& p) {
    const std::vector<int> planted = {0, 1, 6, 7, 2};
    constexpr int kVideoFrames = 24;
    constexpr int kNodesPerVideo = kVideoFrames / kNodeFrames;
    constexpr int kDims = 2 * kNodesPerVideo;

    std::vector<std::string> written;
    PipelineConfig config;
    config.seed = p.seed;
    config.out_dir = "out";
    config.audio_features = "audio.feat";

    for (int v = 0; v < 2; ++v) {
        const std::string video = v == 0 ? "video0" : "video1";
        // Identical constant-pose motion in both videos: every pairwise node
        // distance and every adaptive threshold is exactly zero, so the edge
        // rule links every non-terminal node to every node. That makes the
        // planted cross-video path feasible and the two terminal nodes the
        // only extra components the prune stage has to bridge.
        const JointSequence seq = constant_motion(kVideoFrames, 3, {0.0, 0.0, 0.0});
        written.push_back(join(p.out_dir, video + ".motion"));
        write_motion_binary(written.back(), seq);

        FeatureTrack track;
        track.modality = Modality::motion;
        track.low = Eigen::MatrixXd::Zero(kVideoFrames, kDims);
        for (int f = 0; f < kVideoFrames; ++f)
            track.low(f, v * kNodesPerVideo + f / kNodeFrames) = 1.0;
        track.high = Eigen::MatrixXd::Ones(kVideoFrames / track.window_hop, 4);
        written.push_back(join(p.out_dir, video + ".feat"));
        write_features(written.back(), track);

        // Simple per-frame poses so transition blending has real inputs.
        std::vector<Pose2D> poses(kVideoFrames);
        for (int f = 0; f < kVideoFrames; ++f) {
            poses[f].joints = {{0.25 + 0.01 * f, 0.5 + 0.1 * v}, {0.75 - 0.01 * f, 0.4}};
            poses[f].confidence = {1.0, 1.0};
        }
        written.push_back(join(p.out_dir, video + "_poses.json"));
        write_pose_frames(written.back(), poses);

        SourceSpec spec;
        spec.video = video;
        spec.motion = video + ".motion";
        spec.features = video + ".feat";
        spec.poses = video + "_poses.json";
        config.sources.push_back(std::move(spec));
    }

    FeatureTrack audio;
    audio.modality = Modality::audio;
    audio.low = Eigen::MatrixXd::Zero(static_cast<int>(planted.size()) * kNodeFrames, kDims);
    for (std::size_t t = 0; t < planted.size(); ++t)
        for (int r = 0; r < kNodeFrames; ++r)
            audio.low(static_cast<int>(t) * kNodeFrames + r, planted[t]) = 1.0;
    audio.high = Eigen::MatrixXd::Ones(1, 4);
    written.push_back(join(p.out_dir, "audio.feat"));
    write_features(written.back(), audio);

    written.push_back(join(p.out_dir, "pipeline.json"));
    write_pipeline_config(written.back(), config);

    ordered_json gt;
    gt["kind"] = "pipeline";
    gt["planted_path"] = planted;
    gt["non_original_count"] = 2;
    gt["components_before_prune"] = 3;  // main SCC + the two terminal dead ends
    gt["bridge_pairs"] = 2;
    gt["total_frames"] = static_cast<int>(planted.size()) * kNodeFrames + 2 * 8;
    gt["segments"] = ordered_json::array(
        {ordered_json{{"type", "source"}, {"video", "video0"}, {"frame_begin", 0}, {"frame_end", 8}},
         ordered_json{{"type", "interpolate"}, {"kind", "synthetic"}},
         ordered_json{{"type", "source"}, {"video", "video1"}, {"frame_begin", 0}, {"frame_end", 8}},
         ordered_json{{"type", "interpolate"}, {"kind", "synthetic"}},
         ordered_json{
             {"type", "source"}, {"video", "video0"}, {"frame_begin", 8}, {"frame_end", 12}}});
    write_sidecar(written, p.out_dir, gt);
    return written;
}

}  // namespace

std::vector<std::string> gen_fixtures(const std::string& kind, const FixtureParams& params) {
    if (params.out_dir.empty()) throw ValidationError("fixture generation needs an out_dir");
    std::filesystem::create_directories(params.out_dir);
    if (kind == "motion") return gen_motion(params);
    if (kind == "graph") return gen_graph(params);
    if (kind == "homography") return gen_homography(params);
    if (kind == "random-features") return gen_random_features(params);
    if (kind == "pipeline") return gen_pipeline(params);
    if (kind == "alignment") return gen_alignment(params);
    throw ValidationError("unknown fixture kind: " + kind);
}

}  // namespace mograph
