#include "mograph/align.hpp"
#include "mograph/contrastive.hpp"
#include "mograph/error.hpp"
#include "mograph/eval.hpp"
#include "mograph/fixtures.hpp"
#include "mograph/gradcheck.hpp"
#include "mograph/graph.hpp"
#include "mograph/homography.hpp"
#include "mograph/io.hpp"
#include "mograph/pipeline.hpp"
#include "mograph/pose_blend.hpp"
#include "mograph/prune.hpp"
#include "mograph/retrieval.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace {

using mograph::ComputeError;
using mograph::ValidationError;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitCompute = 3;

std::string absolutize(const std::string& path) {
    return std::filesystem::absolute(path).lexically_normal().string();
}

// ---------------------------------------------------------------------------
// build-graph
// ---------------------------------------------------------------------------
struct BuildGraphArgs {
    std::string motion, masks, boxes, out;
    std::string video_id;
    std::string edge_rule = "substitute";
    double w_body = 0.5, w_hand = 0.5;
    double fps = 30.0, sample_rate = 16000.0;
};

int run_build_graph(const BuildGraphArgs& args) {
    mograph::GraphBuildConfig config;
    config.edge_rule = mograph::edge_rule_from_name(args.edge_rule);
    config.w_body = args.w_body;
    config.w_hand = args.w_hand;
    config.fps = args.fps;
    config.audio_sample_rate = args.sample_rate;

    const mograph::JointSequence seq = mograph::read_motion(args.motion);
    const mograph::Motion15D features = mograph::build_15d(seq);
    std::vector<mograph::RleMask> masks;
    std::vector<std::vector<mograph::Box>> boxes;
    int width = 0, height = 0;
    if (!args.masks.empty()) {
        masks = mograph::read_masks(args.masks);
        if (static_cast<int>(masks.size()) < features.frames)
            throw ValidationError("masks do not cover all motion frames");
        width = masks.front().width;
        height = masks.front().height;
    }
    if (!args.boxes.empty()) {
        boxes = mograph::read_boxes(args.boxes);
        if (static_cast<int>(boxes.size()) < features.frames)
            throw ValidationError("boxes do not cover all motion frames");
    }

    const std::string video =
        args.video_id.empty() ? std::filesystem::path(args.motion).stem().string()
                              : args.video_id;
    std::vector<mograph::MotionClipNode> nodes =
        mograph::segment_nodes(features, masks, boxes, video, config, 0);

    mograph::GraphDocument doc;
    doc.graph = mograph::build_graph(std::move(nodes), width, height, config);
    mograph::GraphSource source;
    source.video = video;
    source.motion = absolutize(args.motion);
    if (!args.masks.empty()) source.masks = absolutize(args.masks);
    if (!args.boxes.empty()) source.boxes = absolutize(args.boxes);
    doc.sources.push_back(std::move(source));
    mograph::write_graph(args.out, doc);

    std::cout << "graph: " << doc.graph.nodes.size() << " nodes, " << doc.graph.edges.size()
              << " edges -> " << args.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// prune-graph / graph-stats
// ---------------------------------------------------------------------------
struct PruneArgs {
    std::string in, out;
};

int run_prune_graph(const PruneArgs& args) {
    mograph::GraphDocument doc = mograph::read_graph(args.in, true);
    mograph::PruneResult result = mograph::prune_graph(doc.graph);
    doc.graph = std::move(result.graph);
    mograph::write_graph(args.out, doc);
    std::cout << "pruned: " << result.components_before << " components -> 1, "
              << result.bridge_pairs_added << " bridge pair(s) added -> " << args.out << "\n";
    return kExitOk;
}

struct StatsArgs {
    std::string in, out;
    std::vector<int> path_lengths{1, 5, 10, 30};
    int trials = 4096;
    std::uint64_t seed = 7;
};

int run_graph_stats(const StatsArgs& args) {
    const mograph::GraphDocument doc = mograph::read_graph(args.in, false);
    const mograph::SccDecomposition scc = mograph::scc_decompose(doc.graph);

    std::size_t dead_ends = 0;
    const auto adjacency = doc.graph.out_edges();
    for (const auto& out : adjacency) dead_ends += out.empty() ? 1 : 0;

    ordered_json report;
    report["nodes"] = doc.graph.nodes.size();
    report["edges"] = doc.graph.edges.size();
    report["components"] = scc.components.size();
    report["largest_component"] = scc.components[scc.largest_index].size();
    report["dead_end_nodes"] = dead_ends;
    ordered_json table = ordered_json::array();
    for (int length : args.path_lengths) {
        ordered_json row;
        row["path_length"] = length;
        row["dead_end_probability"] =
            mograph::dead_end_probability(doc.graph, length, args.trials, args.seed);
        table.push_back(std::move(row));
    }
    report["dead_end_table"] = std::move(table);

    const std::string text = report.dump(2) + "\n";
    if (args.out.empty())
        std::cout << text;
    else
        mograph::write_text_file(args.out, text);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------
struct SearchArgs {
    std::string graph, audio, out;
    std::vector<std::string> motion_feats;
    double w_low = 1.0, w_high = 1.0, lambda = 0.0;
    int beam = 0;
};

int run_search(const SearchArgs& args) {
    const mograph::GraphDocument doc = mograph::read_graph(args.graph, false);
    const mograph::FeatureTrack audio = mograph::read_features(args.audio);

    std::set<std::string> videos;
    for (const auto& node : doc.graph.nodes) videos.insert(node.video);

    mograph::MotionBank bank;
    for (const std::string& entry : args.motion_feats) {
        const auto eq = entry.find('=');
        std::string video, path;
        if (eq == std::string::npos) {
            if (videos.size() != 1)
                throw ValidationError(
                    "graph spans multiple videos; use --motion-feat video=path");
            video = *videos.begin();
            path = entry;
        } else {
            video = entry.substr(0, eq);
            path = entry.substr(eq + 1);
        }
        bank[video] = mograph::read_features(path);
    }

    mograph::SearchConfig config;
    config.weights.w_low = args.w_low;
    config.weights.w_high = args.w_high;
    config.lambda = args.lambda;
    config.beam_width = args.beam;

    const mograph::RetrievedPath path =
        args.beam > 0 ? mograph::beam_search(doc.graph, audio, bank, args.beam, config)
                      : mograph::dp_search(doc.graph, audio, bank, config);
    mograph::write_path(args.out, path);

    std::cout << "path: " << path.node_ids.size() << " steps, total score "
              << path.total_score << ", " << path.non_original_count
              << " non-original transition(s) -> " << args.out << "\n";
    if (path.terminated_early)
        std::cerr << "warning: search hit a dead end before the requested length\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eval-retrieval / diversity
// ---------------------------------------------------------------------------
struct EvalArgs {
    std::string audio, motion, out;
    int low_trials = 16000;
    int high_trials = 3000;
    std::uint64_t seed = 7;
};

int run_eval(const EvalArgs& args) {
    const mograph::FeatureTrack audio = mograph::read_features(args.audio);
    const mograph::FeatureTrack motion = mograph::read_features(args.motion);
    mograph::RetrievalEvalConfig config;
    config.low_trials = args.low_trials;
    config.high_trials = args.high_trials;
    config.seed = args.seed;
    const mograph::EvalReport report =
        mograph::eval_retrieval(audio.low, motion.low, audio.high, motion.high, config);
    if (!args.out.empty()) mograph::write_eval_report(args.out, report);
    std::cout << "low-level accuracy:  " << report.low_accuracy << " (+/- "
              << report.low_radius << ", " << report.low_trials << " trials)\n"
              << "high-level accuracy: " << report.high_accuracy << " (+/- "
              << report.high_radius << ", " << report.high_trials << " trials)\n";
    return kExitOk;
}

struct DiversityArgs {
    std::string clips;
    std::string level = "high";
};

int run_diversity(const DiversityArgs& args) {
    const mograph::FeatureTrack track = mograph::read_features(args.clips);
    const Eigen::MatrixXd& rows = args.level == "low" ? track.low : track.high;
    std::cout << "diversity: " << mograph::diversity(rows) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// loss-check
// ---------------------------------------------------------------------------
struct LossArgs {
    std::string audio, motion;
    int t = 4, k = 4;
    double tau = 0.07;
    double tolerance = 1e-4;
    int samples = 48;
    std::uint64_t seed = 7;
};

int run_loss_check(const LossArgs& args) {
    const mograph::FeatureTrack audio = mograph::read_features(args.audio);
    const mograph::FeatureTrack motion = mograph::read_features(args.motion);
    mograph::LocalWindowSpec spec;
    spec.t = args.t;
    spec.k = args.k;

    // Clip-level loss over the window rows (they are the clip embeddings);
    // frame-level loss over the per-frame rows.
    const mograph::GlobalLossResult global =
        mograph::global_infonce(audio.high, motion.high, args.tau);
    const mograph::LocalLossResult local =
        mograph::local_frame_contrastive(audio.low, motion.low, spec, args.tau);

    const double global_err = mograph::max_gradient_error(
        [&](const std::vector<Eigen::MatrixXd>& in) {
            return mograph::global_infonce(in[0], in[1], args.tau).loss;
        },
        {audio.high, motion.high}, {global.grad_audio, global.grad_motion}, 1e-5,
        args.samples, args.seed);
    const double local_err = mograph::max_gradient_error(
        [&](const std::vector<Eigen::MatrixXd>& in) {
            return mograph::local_frame_contrastive(in[0], in[1], spec, args.tau).loss;
        },
        {audio.low, motion.low}, {local.grad_audio, local.grad_motion}, 1e-5,
        args.samples, args.seed);

    std::cout << "clip-level loss:   " << global.loss << "\n"
              << "frame-level loss:  " << local.loss << " (" << local.anchors
              << " anchors)\n"
              << "combined loss:     " << global.loss + local.loss << "\n"
              << "max gradient error (clip-level):  " << global_err << "\n"
              << "max gradient error (frame-level): " << local_err << "\n";
    if (global_err > args.tolerance || local_err > args.tolerance)
        throw ComputeError("gradient check failed: error above tolerance");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// align
// ---------------------------------------------------------------------------
struct AlignArgs {
    std::string frames, words, out;
    std::vector<std::string> specials;
    bool allow_unmatched = false;
    bool no_fill = false;
};

int run_align(const AlignArgs& args) {
    const mograph::FrameTokenSequence frames = mograph::read_frame_tokens(args.frames);
    const mograph::WordTokenSequence words =
        mograph::read_word_tokens(args.words, args.specials);
    mograph::AlignConfig config;
    config.allow_unmatched = args.allow_unmatched;

    mograph::FrameWordAlignment alignment = mograph::align_tokens(frames, words, config);
    bool any_assigned = false;
    for (int idx : alignment.word_index) any_assigned |= idx >= 0;
    if (!args.no_fill && any_assigned) alignment = mograph::fill_gaps(alignment);
    mograph::write_alignment(args.out, alignment);
    std::cout << "alignment: " << alignment.word_index.size() << " frames -> " << args.out
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// homography
// ---------------------------------------------------------------------------
struct HomographyArgs {
    std::string matches, mask, out, h_out;
    double inlier_px = 3.0;
    std::uint64_t seed = 7;
    int width = 0, height = 0;
    int mask_frame = 0;
};

int run_homography(const HomographyArgs& args) {
    const mograph::PointMatches matches = mograph::read_matches(args.matches);
    if (const int outside = matches.count_outside_bounds(); outside > 0)
        std::cerr << "warning: " << outside << " match(es) outside the image bounds\n";

    mograph::RansacConfig config;
    config.inlier_px = args.inlier_px;
    config.seed = args.seed;
    const mograph::HomographyEstimate estimate =
        mograph::estimate_homography(matches, config);

    mograph::RleMask foreground;
    if (!args.mask.empty()) {
        const std::vector<mograph::RleMask> frames = mograph::read_masks(args.mask);
        if (args.mask_frame < 0 || args.mask_frame >= static_cast<int>(frames.size()))
            throw ValidationError("mask frame index out of range");
        foreground = frames[args.mask_frame];
    }
    int width = args.width > 0 ? args.width : foreground.width;
    int height = args.height > 0 ? args.height : foreground.height;
    if (width < 1 || height < 1) {
        width = matches.width;
        height = matches.height;
    }
    if (width < 1 || height < 1)
        throw ValidationError("flow dimensions unknown: pass --width/--height");

    const mograph::HomographyFlow flow =
        mograph::background_flow(estimate.H, width, height, foreground);
    mograph::write_flow(args.out, flow);

    ordered_json summary;
    ordered_json h_rows = ordered_json::array();
    for (int r = 0; r < 3; ++r)
        h_rows.push_back(
            ordered_json::array({estimate.H(r, 0), estimate.H(r, 1), estimate.H(r, 2)}));
    summary["H"] = std::move(h_rows);
    summary["inliers"] = estimate.inliers;
    summary["iterations"] = estimate.iterations;
    if (!args.h_out.empty()) mograph::write_text_file(args.h_out, summary.dump(2) + "\n");

    std::cout << "homography: " << estimate.inliers.size() << "/" << matches.size()
              << " inliers in " << estimate.iterations << " iteration(s), flow " << width
              << "x" << height << " -> " << args.out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// blend-poses / blend-error
// ---------------------------------------------------------------------------
struct BlendArgs {
    std::string start, end, out;
    int n = 8;
};

int run_blend_poses(const BlendArgs& args) {
    const mograph::Pose2D start = mograph::read_pose(args.start);
    const mograph::Pose2D end = mograph::read_pose(args.end);
    mograph::write_pose_frames(args.out, mograph::linear_pose_blend(start, end, args.n));
    std::cout << "blended " << args.n << " intermediate frame(s) -> " << args.out << "\n";
    return kExitOk;
}

struct BlendErrorArgs {
    std::string blended, gt;
    double threshold = 0.005;
};

int run_blend_error(const BlendErrorArgs& args) {
    const std::vector<mograph::Pose2D> blended = mograph::read_pose_frames(args.blended);
    const std::vector<mograph::Pose2D> truth = mograph::read_pose_frames(args.gt);
    const mograph::BlendCheck check = mograph::blend_error(blended, truth, args.threshold);
    ordered_json out;
    out["error"] = check.error;
    out["linear_ok"] = check.linear_ok;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-fixtures / run
// ---------------------------------------------------------------------------
struct FixtureArgs {
    std::string kind, out;
    mograph::FixtureParams params;
};

int run_gen_fixtures(FixtureArgs& args) {
    args.params.out_dir = args.out;
    const std::vector<std::string> written = mograph::gen_fixtures(args.kind, args.params);
    for (const std::string& file : written) std::cout << file << "\n";
    return kExitOk;
}

struct RunArgs {
    std::string config;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool dump_config = false;
};

int run_pipeline_cmd(const RunArgs& args) {
    if (args.dump_config) {
        std::cout << mograph::dump_pipeline_config_defaults();
        return kExitOk;
    }
    if (args.config.empty()) throw ValidationError("run needs --config (or --dump-config)");
    mograph::PipelineConfig config = mograph::read_pipeline_config(args.config);
    // Relative data paths in the config resolve against the config file.
    const auto resolve = [&](std::string& path) {
        if (path.empty() || std::filesystem::path(path).is_absolute()) return;
        path = (std::filesystem::path(args.config).parent_path() / path).string();
    };
    for (mograph::SourceSpec& s : config.sources) {
        resolve(s.motion);
        resolve(s.masks);
        resolve(s.boxes);
        resolve(s.features);
        resolve(s.poses);
    }
    resolve(config.audio_features);
    resolve(config.homography.matches);
    resolve(config.out_dir);
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (args.has_seed) config.seed = args.seed;

    const mograph::PipelineResult result = mograph::run_pipeline(config);
    std::cout << "manifest: " << result.manifest.segments.size() << " segment(s), "
              << result.manifest.interpolate_count() << " interpolation(s), "
              << result.manifest.total_frames() << " frames -> " << result.manifest_file
              << "\n";
    if (result.path.terminated_early)
        std::cerr << "warning: search hit a dead end before the requested length\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gesture video motion-graph toolkit"};
    app.require_subcommand(1);

    BuildGraphArgs build_args;
    CLI::App* build = app.add_subcommand("build-graph", "Segment motion into clip nodes and build the transition graph");
    build->add_option("--motion", build_args.motion, "motion container (binary or text)")->required();
    build->add_option("--masks", build_args.masks, "per-frame body mask JSON");
    build->add_option("--boxes", build_args.boxes, "per-frame hand box JSON");
    build->add_option("--out", build_args.out, "output graph JSON")->required();
    build->add_option("--video-id", build_args.video_id, "video id (default: motion file stem)");
    build->add_option("--edge-rule", build_args.edge_rule, "substitute|literal")
        ->check(CLI::IsMember({"substitute", "literal"}));
    build->add_option("--w-body", build_args.w_body, "body mask IoU weight");
    build->add_option("--w-hand", build_args.w_hand, "hand box IoU weight");
    build->add_option("--fps", build_args.fps, "frames per second");
    build->add_option("--sample-rate", build_args.sample_rate, "audio samples per second");

    PruneArgs prune_args;
    CLI::App* prune = app.add_subcommand("prune-graph", "Bridge all components into one strongly connected graph");
    prune->add_option("--in", prune_args.in, "input graph JSON")->required();
    prune->add_option("--out", prune_args.out, "output graph JSON")->required();

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand("graph-stats", "Node/edge/component counts and dead-end probabilities");
    stats->add_option("--in", stats_args.in, "input graph JSON")->required();
    stats->add_option("--out", stats_args.out, "write the report here instead of stdout");
    stats->add_option("--path-lengths", stats_args.path_lengths, "walk lengths for the dead-end table");
    stats->add_option("--trials", stats_args.trials, "Monte-Carlo trials per length");
    stats->add_option("--seed", stats_args.seed, "random seed");

    SearchArgs search_args;
    CLI::App* search = app.add_subcommand("search", "Retrieve the best gesture path for an audio feature track");
    search->add_option("--graph", search_args.graph, "graph JSON")->required();
    search->add_option("--audio-feat", search_args.audio, "audio feature file")->required();
    search->add_option("--motion-feat", search_args.motion_feats,
                       "motion feature file, or video=path (repeatable)")
        ->required();
    search->add_option("--out", search_args.out, "output path JSON")->required();
    search->add_option("--w-low", search_args.w_low, "frame-level score weight");
    search->add_option("--w-high", search_args.w_high, "window-level score weight");
    search->add_option("--lambda", search_args.lambda, "non-original transition penalty");
    search->add_option("--beam", search_args.beam, "beam width (0 = exact DP)");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval-retrieval", "Frame- and clip-level retrieval accuracy with 3-sigma radii");
    eval->add_option("--audio", eval_args.audio, "audio feature file")->required();
    eval->add_option("--motion", eval_args.motion, "motion feature file")->required();
    eval->add_option("--out", eval_args.out, "report JSON");
    eval->add_option("--low-trials", eval_args.low_trials, "frame-level trials");
    eval->add_option("--high-trials", eval_args.high_trials, "clip-level trials");
    eval->add_option("--seed", eval_args.seed, "random seed");

    LossArgs loss_args;
    CLI::App* loss = app.add_subcommand("loss-check", "Contrastive losses plus a finite-difference gradient check");
    loss->add_option("--audio", loss_args.audio, "audio feature file")->required();
    loss->add_option("--motion", loss_args.motion, "motion feature file")->required();
    loss->add_option("--t", loss_args.t, "positive half-window (frames)");
    loss->add_option("--k", loss_args.k, "negative band multiplier");
    loss->add_option("--tau", loss_args.tau, "temperature");
    loss->add_option("--tolerance", loss_args.tolerance, "max allowed relative gradient error");
    loss->add_option("--samples", loss_args.samples, "probed coordinates per matrix");
    loss->add_option("--seed", loss_args.seed, "random seed");

    AlignArgs align_args;
    CLI::App* align = app.add_subcommand("align", "Align frame token emissions to word tokens");
    align->add_option("--frames", align_args.frames, "frame tokens, one per line")->required();
    align->add_option("--words", align_args.words, "word tokens, one per line")->required();
    align->add_option("--out", align_args.out, "alignment JSON")->required();
    align->add_option("--special", align_args.specials, "extra special marker (repeatable)");
    align->add_flag("--allow-unmatched", align_args.allow_unmatched,
                    "all-blank input yields an all -1 alignment instead of an error");
    align->add_flag("--no-fill", align_args.no_fill, "skip nearest-neighbor gap filling");

    HomographyArgs homography_args;
    CLI::App* homography = app.add_subcommand("homography", "RANSAC homography and background offset flow");
    homography->add_option("--matches", homography_args.matches, "keypoint matches file")->required();
    homography->add_option("--mask", homography_args.mask, "foreground mask JSON");
    homography->add_option("--mask-frame", homography_args.mask_frame, "frame index into the mask file");
    homography->add_option("--out", homography_args.out, "output flow binary")->required();
    homography->add_option("--h-out", homography_args.h_out, "write H and inliers as JSON");
    homography->add_option("--inlier-px", homography_args.inlier_px, "inlier threshold (pixels)");
    homography->add_option("--seed", homography_args.seed, "random seed");
    homography->add_option("--width", homography_args.width, "flow width");
    homography->add_option("--height", homography_args.height, "flow height");

    BlendArgs blend_args;
    CLI::App* blend = app.add_subcommand("blend-poses", "Linear 2D pose blend between two poses");
    blend->add_option("--start", blend_args.start, "start pose JSON")->required();
    blend->add_option("--end", blend_args.end, "end pose JSON")->required();
    blend->add_option("--n", blend_args.n, "intermediate frame count");
    blend->add_option("--out", blend_args.out, "output pose frames JSON")->required();

    BlendErrorArgs blend_error_args;
    CLI::App* blend_err = app.add_subcommand("blend-error", "Mean pose distance between a blend and its ground truth");
    blend_err->add_option("--blended", blend_error_args.blended, "blended pose frames JSON")->required();
    blend_err->add_option("--gt", blend_error_args.gt, "ground-truth pose frames JSON")->required();
    blend_err->add_option("--threshold", blend_error_args.threshold, "linearity verdict threshold");

    DiversityArgs diversity_args;
    CLI::App* diversity = app.add_subcommand("diversity", "Mean pairwise distance between clip features");
    diversity->add_option("--clips", diversity_args.clips, "feature file")->required();
    diversity->add_option("--level", diversity_args.level, "high|low rows")
        ->check(CLI::IsMember({"high", "low"}));

    FixtureArgs fixture_args;
    CLI::App* fixtures = app.add_subcommand("gen-fixtures", "Write synthetic fixtures with ground-truth sidecars");
    fixtures->add_option("--kind", fixture_args.kind,
                         "motion|graph|homography|random-features|pipeline|alignment")
        ->required();
    fixtures->add_option("--out", fixture_args.out, "output directory")->required();
    fixtures->add_option("--seed", fixture_args.params.seed, "random seed");
    fixtures->add_option("--frames", fixture_args.params.frames, "motion frames");
    fixtures->add_option("--joints", fixture_args.params.joints, "motion joints");
    fixtures->add_option("--n-matches", fixture_args.params.n_matches, "homography matches");
    fixtures->add_option("--outlier-fraction", fixture_args.params.outlier_fraction,
                         "planted outlier fraction");
    fixtures->add_option("--feature-frames", fixture_args.params.feature_frames,
                         "random feature frames");
    fixtures->add_option("--feature-clips", fixture_args.params.feature_clips,
                         "random feature clips");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Full pipeline: build, prune, search, blend/flow");
    run->add_option("--config", run_args.config, "pipeline config JSON");
    run->add_option("--out-dir", run_args.out_dir, "override the config output directory");
    run->add_option("--seed", run_args.seed, "override the config seed")
        ->each([&](const std::string&) { run_args.has_seed = true; });
    run->add_flag("--dump-config", run_args.dump_config, "print the default config and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (build->parsed()) return run_build_graph(build_args);
        if (prune->parsed()) return run_prune_graph(prune_args);
        if (stats->parsed()) return run_graph_stats(stats_args);
        if (search->parsed()) return run_search(search_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (loss->parsed()) return run_loss_check(loss_args);
        if (align->parsed()) return run_align(align_args);
        if (homography->parsed()) return run_homography(homography_args);
        if (blend->parsed()) return run_blend_poses(blend_args);
        if (blend_err->parsed()) return run_blend_error(blend_error_args);
        if (diversity->parsed()) return run_diversity(diversity_args);
        if (fixtures->parsed()) return run_gen_fixtures(fixture_args);
        if (run->parsed()) return run_pipeline_cmd(run_args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitOk;
}
