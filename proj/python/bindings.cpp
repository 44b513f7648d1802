// Python bindings for the gesture motion-graph core. The surface mirrors the
// command-line operations: per-joint feature assembly, contrastive losses,
// retrieval evaluation, homography/flow estimation, token alignment, pose
// interpolation, fixture generation, and the end-to-end pipeline.

#include "mograph/align.hpp"
#include "mograph/contrastive.hpp"
#include "mograph/error.hpp"
#include "mograph/eval.hpp"
#include "mograph/fixtures.hpp"
#include "mograph/homography.hpp"
#include "mograph/io.hpp"
#include "mograph/motion.hpp"
#include "mograph/pipeline.hpp"
#include "mograph/pose_blend.hpp"
#include "mograph/retrieval.hpp"
#include "mograph/rotation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstring>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace mograph;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

JointSequence sequence_from_arrays(const DoubleArray& positions,
                                   const DoubleArray& rotations, double fps) {
    if (positions.ndim() != 3 || positions.shape(2) != 3)
        throw ValidationError("positions must have shape (frames, joints, 3)");
    if (rotations.ndim() != 4 || rotations.shape(2) != 3 || rotations.shape(3) != 3)
        throw ValidationError("rotations must have shape (frames, joints, 3, 3)");
    if (positions.shape(0) != rotations.shape(0) ||
        positions.shape(1) != rotations.shape(1))
        throw ValidationError("positions and rotations disagree on frames or joints");

    JointSequence seq;
    seq.fps = fps;
    seq.frames = static_cast<int>(positions.shape(0));
    seq.joints = static_cast<int>(positions.shape(1));
    const double* p = positions.data();
    const double* r = rotations.data();
    const std::size_t count = static_cast<std::size_t>(seq.frames) * seq.joints;
    seq.positions.reserve(count);
    seq.rotations.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        seq.positions.emplace_back(p[3 * i], p[3 * i + 1], p[3 * i + 2]);
        Eigen::Matrix3d R;
        for (int row = 0; row < 3; ++row)
            for (int col = 0; col < 3; ++col) R(row, col) = r[9 * i + 3 * row + col];
        seq.rotations.push_back(R);
    }
    return seq;
}

py::array py_build_15d(const DoubleArray& positions, const DoubleArray& rotations,
                       double fps) {
    const JointSequence seq = sequence_from_arrays(positions, rotations, fps);
    const Motion15D feat = build_15d(seq);
    py::array_t<double> out({feat.frames, feat.joints, Motion15D::kChannels});
    std::memcpy(out.mutable_data(), feat.data.data(), feat.data.size() * sizeof(double));
    return out;
}

py::dict py_global_infonce(const Eigen::MatrixXd& audio_cls,
                           const Eigen::MatrixXd& motion_cls, double tau) {
    const GlobalLossResult result = global_infonce(audio_cls, motion_cls, tau);
    py::dict out;
    out["loss"] = result.loss;
    out["grad_audio"] = result.grad_audio;
    out["grad_motion"] = result.grad_motion;
    return out;
}

py::dict py_local_frame_contrastive(const Eigen::MatrixXd& audio_low,
                                    const Eigen::MatrixXd& motion_low, int t, int k,
                                    double tau) {
    LocalWindowSpec spec;
    spec.t = t;
    spec.k = k;
    const LocalLossResult result = local_frame_contrastive(audio_low, motion_low, spec, tau);
    py::dict out;
    out["loss"] = result.loss;
    out["anchors"] = result.anchors;
    out["grad_audio"] = result.grad_audio;
    out["grad_motion"] = result.grad_motion;
    return out;
}

py::dict report_to_dict(const EvalReport& report) {
    py::dict out;
    out["low_accuracy"] = report.low_accuracy;
    out["high_accuracy"] = report.high_accuracy;
    out["low_trials"] = report.low_trials;
    out["high_trials"] = report.high_trials;
    out["seed"] = report.seed;
    out["low_radius_3sigma"] = report.low_radius;
    out["high_radius_3sigma"] = report.high_radius;
    return out;
}

py::dict py_eval_retrieval(const Eigen::MatrixXd& audio_low,
                           const Eigen::MatrixXd& motion_low,
                           const Eigen::MatrixXd& audio_high,
                           const Eigen::MatrixXd& motion_high, int low_trials,
                           int high_trials, std::uint64_t seed, int low_candidate_window,
                           int low_accurate_window, int high_candidates) {
    RetrievalEvalConfig config;
    config.low_trials = low_trials;
    config.high_trials = high_trials;
    config.seed = seed;
    config.low_candidate_window = low_candidate_window;
    config.low_accurate_window = low_accurate_window;
    config.high_candidates = high_candidates;
    return report_to_dict(
        eval_retrieval(audio_low, motion_low, audio_high, motion_high, config));
}

py::dict py_estimate_homography(const Eigen::MatrixXd& src, const Eigen::MatrixXd& dst,
                                int width, int height, double inlier_px,
                                std::uint64_t seed, int max_iters, double confidence) {
    if (src.cols() != 2 || dst.cols() != 2)
        throw ValidationError("match arrays must have shape (n, 2)");
    PointMatches matches;
    matches.width = width;
    matches.height = height;
    for (Eigen::Index i = 0; i < src.rows(); ++i)
        matches.src.emplace_back(src(i, 0), src(i, 1));
    for (Eigen::Index i = 0; i < dst.rows(); ++i)
        matches.dst.emplace_back(dst(i, 0), dst(i, 1));

    RansacConfig config;
    config.inlier_px = inlier_px;
    config.seed = seed;
    config.max_iters = max_iters;
    config.confidence = confidence;
    const HomographyEstimate est = estimate_homography(matches, config);
    py::dict out;
    out["H"] = est.H;
    out["inliers"] = est.inliers;
    out["iterations"] = est.iterations;
    return out;
}

py::array py_background_flow(const Eigen::Matrix3d& H, int width, int height,
                             const std::optional<py::array>& foreground) {
    RleMask mask;
    if (foreground.has_value()) {
        const auto pixels_array =
            py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(
                *foreground);
        if (!pixels_array || pixels_array.ndim() != 2)
            throw ValidationError("foreground must be a (height, width) array");
        if (pixels_array.shape(0) != height || pixels_array.shape(1) != width)
            throw ValidationError("foreground mask dimensions do not match the flow field");
        std::vector<std::uint8_t> pixels(pixels_array.data(),
                                         pixels_array.data() + pixels_array.size());
        mask = RleMask::from_pixels(width, height, pixels);
    }
    const HomographyFlow flow = background_flow(H, width, height, mask);
    py::array_t<double> out({height, width, 2});
    std::memcpy(out.mutable_data(), flow.flow.data(), flow.flow.size() * sizeof(double));
    return out;
}

std::vector<int> py_align_tokens(const std::vector<std::string>& frame_tokens,
                                 const std::vector<std::string>& words,
                                 const std::optional<std::vector<std::string>>& specials,
                                 bool allow_unmatched) {
    FrameTokenSequence frames;
    frames.tokens = frame_tokens;
    WordTokenSequence sequence;
    sequence.words = words;
    if (specials.has_value())
        sequence.special_markers.insert(specials->begin(), specials->end());
    else
        sequence.special_markers = default_special_markers();
    AlignConfig config;
    config.allow_unmatched = allow_unmatched;
    return align_tokens(frames, sequence, config).word_index;
}

std::vector<int> py_fill_gaps(const std::vector<int>& word_index) {
    FrameWordAlignment alignment;
    alignment.word_index = word_index;
    alignment.filled.assign(word_index.size(), false);
    return fill_gaps(alignment).word_index;
}

Pose2D pose_from_row(const DoubleArray& joints, const double* confidence, int count) {
    Pose2D pose;
    const double* j = joints.data();
    for (int i = 0; i < count; ++i) {
        pose.joints.emplace_back(j[2 * i], j[2 * i + 1]);
        pose.confidence.push_back(confidence ? confidence[i] : 1.0);
    }
    return pose;
}

py::tuple py_linear_pose_blend(const DoubleArray& start, const DoubleArray& end,
                               const std::optional<DoubleArray>& start_confidence,
                               const std::optional<DoubleArray>& end_confidence,
                               int n_intermediate) {
    if (start.ndim() != 2 || start.shape(1) != 2 || end.ndim() != 2 || end.shape(1) != 2)
        throw ValidationError("poses must have shape (joints, 2)");
    const int joints = static_cast<int>(start.shape(0));
    const Pose2D a = pose_from_row(
        start, start_confidence ? start_confidence->data() : nullptr, joints);
    const Pose2D b = pose_from_row(
        end, end_confidence ? end_confidence->data() : nullptr,
        static_cast<int>(end.shape(0)));
    const std::vector<Pose2D> blended = linear_pose_blend(a, b, n_intermediate);

    py::array_t<double> out_joints({n_intermediate, joints, 2});
    py::array_t<double> out_conf({n_intermediate, joints});
    auto joints_view = out_joints.mutable_unchecked<3>();
    auto conf_view = out_conf.mutable_unchecked<2>();
    for (int m = 0; m < n_intermediate; ++m)
        for (int j = 0; j < joints; ++j) {
            joints_view(m, j, 0) = blended[m].joints[j].x();
            joints_view(m, j, 1) = blended[m].joints[j].y();
            conf_view(m, j) = blended[m].confidence[j];
        }
    return py::make_tuple(out_joints, out_conf);
}

std::vector<Pose2D> poses_from_stack(const DoubleArray& stack) {
    if (stack.ndim() != 3 || stack.shape(2) != 2)
        throw ValidationError("pose stacks must have shape (frames, joints, 2)");
    std::vector<Pose2D> frames;
    const double* data = stack.data();
    const int joints = static_cast<int>(stack.shape(1));
    for (py::ssize_t f = 0; f < stack.shape(0); ++f) {
        Pose2D pose;
        for (int j = 0; j < joints; ++j) {
            const double* at = data + (f * joints + j) * 2;
            pose.joints.emplace_back(at[0], at[1]);
            pose.confidence.push_back(1.0);
        }
        frames.push_back(std::move(pose));
    }
    return frames;
}

py::tuple py_blend_error(const DoubleArray& blended, const DoubleArray& ground_truth,
                         double threshold) {
    const BlendCheck check =
        blend_error(poses_from_stack(blended), poses_from_stack(ground_truth), threshold);
    return py::make_tuple(check.error, check.linear_ok);
}

py::dict py_run_pipeline(const std::string& config_path) {
    PipelineConfig config = read_pipeline_config(config_path);
    // Relative data paths in the config resolve against the config file,
    // matching the command-line frontend.
    const auto resolve = [&](std::string& path) {
        if (path.empty() || std::filesystem::path(path).is_absolute()) return;
        path = (std::filesystem::path(config_path).parent_path() / path).string();
    };
    for (SourceSpec& s : config.sources) {
        resolve(s.motion);
        resolve(s.masks);
        resolve(s.boxes);
        resolve(s.features);
        resolve(s.poses);
    }
    resolve(config.audio_features);
    resolve(config.homography.matches);
    resolve(config.out_dir);

    const PipelineResult result = run_pipeline(config);
    std::vector<std::string> kinds;
    for (const EdgeKind kind : result.path.transition_kinds)
        kinds.push_back(edge_kind_name(kind));
    py::dict out;
    out["manifest_file"] = result.manifest_file;
    out["node_ids"] = result.path.node_ids;
    out["transition_kinds"] = kinds;
    out["total_score"] = result.path.total_score;
    out["non_original_count"] = result.path.non_original_count;
    out["components_merged"] = result.components_merged;
    out["total_frames"] = result.manifest.total_frames();
    out["interpolate_count"] = result.manifest.interpolate_count();
    return out;
}

std::vector<std::string> py_gen_fixtures(const std::string& kind,
                                         const std::string& out_dir, std::uint64_t seed,
                                         int frames, int joints, int n_matches,
                                         double outlier_fraction, double inlier_px,
                                         int width, int height, int feature_frames,
                                         int feature_clips, int d_low, int d_high) {
    FixtureParams params;
    params.out_dir = out_dir;
    params.seed = seed;
    params.frames = frames;
    params.joints = joints;
    params.n_matches = n_matches;
    params.outlier_fraction = outlier_fraction;
    params.inlier_px = inlier_px;
    params.width = width;
    params.height = height;
    params.feature_frames = feature_frames;
    params.feature_clips = feature_clips;
    params.d_low = d_low;
    params.d_high = d_high;
    return gen_fixtures(kind, params);
}

py::dict py_read_features(const std::string& path) {
    const FeatureTrack track = read_features(path);
    py::dict out;
    out["modality"] = track.modality == Modality::audio ? "audio" : "motion";
    out["fps"] = track.fps;
    out["window_hop"] = track.window_hop;
    out["low"] = track.low;
    out["high"] = track.high;
    return out;
}

}  // namespace

PYBIND11_MODULE(_mograph, m) {
    m.doc() = "Gesture motion-graph engine: core operations";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ComputeError>(m, "ComputeError", PyExc_RuntimeError);

    m.def("build_15d", &py_build_15d, py::arg("positions"), py::arg("rotations"),
          py::arg("fps") = 30.0,
          "Per-joint features (frames, joints, 15): position, linear velocity, "
          "6d rotation, angular velocity.");
    m.def(
        "rotmat_to_6d",
        [](const Eigen::Matrix3d& R) {
            const std::array<double, 6> v = rotmat_to_6d(R);
            return std::vector<double>(v.begin(), v.end());
        },
        py::arg("R"), "First two rotation-matrix columns, column-major.");
    m.def(
        "rotmat_from_6d",
        [](const std::vector<double>& v) {
            if (v.size() != 6)
                throw ValidationError("6d rotation encoding needs exactly 6 values");
            std::array<double, 6> a;
            std::copy(v.begin(), v.end(), a.begin());
            return Eigen::Matrix3d(rotmat_from_6d(a));
        },
        py::arg("v"), "Gram-Schmidt reconstruction of the 6d rotation encoding.");

    m.def("global_infonce", &py_global_infonce, py::arg("audio_cls"),
          py::arg("motion_cls"), py::arg("tau") = 0.07,
          "Symmetric clip-level InfoNCE with analytic input gradients.");
    m.def("local_frame_contrastive", &py_local_frame_contrastive, py::arg("audio_low"),
          py::arg("motion_low"), py::arg("t") = 4, py::arg("k") = 4,
          py::arg("tau") = 0.07,
          "Frame-level contrastive loss over aligned tracks with analytic gradients.");

    m.def("eval_retrieval", &py_eval_retrieval, py::arg("audio_low"),
          py::arg("motion_low"), py::arg("audio_high"), py::arg("motion_high"),
          py::arg("low_trials") = 16000, py::arg("high_trials") = 3000,
          py::arg("seed") = 7, py::arg("low_candidate_window") = 32,
          py::arg("low_accurate_window") = 8, py::arg("high_candidates") = 256,
          "Frame- and clip-level retrieval accuracies with 3-sigma radii.");
    m.def("diversity", &diversity, py::arg("clips"),
          "Mean pairwise Euclidean distance between clip feature rows.");

    m.def("estimate_homography", &py_estimate_homography, py::arg("src"), py::arg("dst"),
          py::arg("width"), py::arg("height"), py::arg("inlier_px") = 3.0,
          py::arg("seed") = 7, py::arg("max_iters") = 2000,
          py::arg("confidence") = 0.999,
          "RANSAC homography with inlier indices and iteration count.");
    m.def("background_flow", &py_background_flow, py::arg("H"), py::arg("width"),
          py::arg("height"), py::arg("foreground") = py::none(),
          "Dense (height, width, 2) background offset field, foreground zeroed.");

    m.def("align_tokens", &py_align_tokens, py::arg("frame_tokens"), py::arg("words"),
          py::arg("specials") = py::none(), py::arg("allow_unmatched") = false,
          "Per-frame word indices from greedy character matching; -1 is unassigned.");
    m.def("fill_gaps", &py_fill_gaps, py::arg("word_index"),
          "Nearest-assigned gap filling, ties toward the earlier frame.");

    m.def("linear_pose_blend", &py_linear_pose_blend, py::arg("start"), py::arg("end"),
          py::arg("start_confidence") = py::none(),
          py::arg("end_confidence") = py::none(), py::arg("n_intermediate") = 8,
          "Evenly spaced intermediate poses and confidences, endpoints excluded.");
    m.def("blend_error", &py_blend_error, py::arg("blended"), py::arg("ground_truth"),
          py::arg("threshold") = 0.005,
          "Mean joint distance against ground truth plus the accept verdict.");

    m.def("run_pipeline", &py_run_pipeline, py::arg("config_path"),
          "Full build/prune/search/blend run; returns the manifest summary.");
    m.def("gen_fixtures", &py_gen_fixtures, py::arg("kind"), py::arg("out_dir"),
          py::arg("seed") = 7, py::arg("frames") = 96, py::arg("joints") = 8,
          py::arg("n_matches") = 50, py::arg("outlier_fraction") = 0.3,
          py::arg("inlier_px") = 3.0, py::arg("width") = 640, py::arg("height") = 480,
          py::arg("feature_frames") = 4000, py::arg("feature_clips") = 512,
          py::arg("d_low") = 16, py::arg("d_high") = 32,
          "Writes synthetic inputs plus a gt.json sidecar; returns the file list.");
    m.def("read_features", &py_read_features, py::arg("path"),
          "Loads a feature container as numpy arrays.");
}
