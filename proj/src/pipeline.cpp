#include "mograph/pipeline.hpp"

#include "mograph/error.hpp"
#include "mograph/homography.hpp"
#include "mograph/io.hpp"
#include "mograph/pose_blend.hpp"
#include "mograph/prune.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <set>
#include <sstream>

namespace mograph {

namespace {

/// Exclusive ownership of an output directory: O_CREAT|O_EXCL either atomically
/// creates the lock file or proves another run owns the directory.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".mograph.lock") {
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0)
            throw ValidationError("output directory is locked by another run: " +
                                  path_.string());
        ::close(fd);
    }
    ~DirectoryLock() { ::unlink(path_.c_str()); }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path path_;
};

/// Reruns a stage body with the stage name prefixed onto any error, keeping
/// the error class (and therefore the exit code) intact.
template <typename F>
auto stage(const char* name, F&& body) {
    try {
        return body();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(name) + ": " + e.what());
    } catch (const ComputeError& e) {
        throw ComputeError(std::string(name) + ": " + e.what());
    }
}

std::string segment_file_name(std::size_t index, const char* suffix) {
    std::ostringstream name;
    name << "segment_" << std::setw(3) << std::setfill('0') << index << '_' << suffix;
    return name.str();
}

struct SourceData {
    Motion15D motion;
    std::vector<RleMask> masks;
    std::vector<std::vector<Box>> boxes;
    std::vector<Pose2D> poses;
};

}  // namespace

int TransitionManifest::total_frames() const {
    int total = 0;
    for (const ManifestSegment& segment : segments) {
        if (const auto* src = std::get_if<SourceSegment>(&segment))
            total += src->frames();
        else
            total += std::get<InterpolateSegment>(segment).frames;
    }
    return total;
}

int TransitionManifest::interpolate_count() const {
    int count = 0;
    for (const ManifestSegment& segment : segments)
        count += std::holds_alternative<InterpolateSegment>(segment) ? 1 : 0;
    return count;
}

void TransitionManifest::validate() const {
    if (!(fps > 0.0)) throw ValidationError("manifest fps must be positive");
    if (segments.empty()) throw ValidationError("manifest has no segments");
    if (!std::holds_alternative<SourceSegment>(segments.front()) ||
        !std::holds_alternative<SourceSegment>(segments.back()))
        throw ValidationError("manifest must start and end with source segments");

    int shared_frames = -1;
    bool last_was_interpolate = false;
    for (const ManifestSegment& segment : segments) {
        if (const auto* src = std::get_if<SourceSegment>(&segment)) {
            if (src->video.empty()) throw ValidationError("source segment without video id");
            if (src->frame_begin < 0 || src->frame_end <= src->frame_begin)
                throw ValidationError("source segment frame range is empty or negative");
            if (src->audio_begin < 0 || src->audio_end < src->audio_begin)
                throw ValidationError("source segment audio span is invalid");
            last_was_interpolate = false;
            continue;
        }
        if (last_was_interpolate)
            throw ValidationError("manifest has adjacent interpolate segments");
        last_was_interpolate = true;
        const auto& in = std::get<InterpolateSegment>(segment);
        if (in.frames < 1) throw ValidationError("interpolate segment without frames");
        if (shared_frames < 0) shared_frames = in.frames;
        if (in.frames != shared_frames)
            throw ValidationError("interpolate segments disagree on frame count");
        if (in.kind != "synthetic" && in.kind != "bridge")
            throw ValidationError("interpolate segment kind must be synthetic or bridge");
        if (in.from_end <= in.from_begin || in.to_end <= in.to_begin)
            throw ValidationError("interpolate context ranges must be non-empty");
        if (in.from_begin < 0 || in.to_begin < 0)
            throw ValidationError("interpolate context ranges must be non-negative");
    }
}

void PipelineConfig::validate() const {
    if (out_dir.empty()) throw ValidationError("config needs an output directory");
    if (audio_features.empty()) throw ValidationError("config needs audio features");
    if (sources.empty()) throw ValidationError("config needs at least one source video");
    std::set<std::string> seen;
    for (const SourceSpec& s : sources) {
        if (s.video.empty()) throw ValidationError("source without video id");
        if (!seen.insert(s.video).second)
            throw ValidationError("duplicate source video id: " + s.video);
        if (s.motion.empty())
            throw ValidationError("source '" + s.video + "' has no motion file");
        if (s.features.empty())
            throw ValidationError("source '" + s.video + "' has no feature file");
    }
    if (graph.w_body < 0 || graph.w_hand < 0)
        throw ValidationError("IoU weights must be non-negative");
    if (!(graph.fps > 0)) throw ValidationError("fps must be positive");
    if (!(graph.audio_sample_rate > 0))
        throw ValidationError("audio sample rate must be positive");
    if (search.weights.w_low < 0 || search.weights.w_high < 0)
        throw ValidationError("score weights must be non-negative");
    if (search.lambda < 0) throw ValidationError("lambda must be non-negative");
    if (search.beam_width < 0) throw ValidationError("beam width must be non-negative");
    if (transition.context_frames < 1 || transition.context_frames > kNodeFrames)
        throw ValidationError("context frames must lie in [1, 4]");
    if (transition.intermediate_frames < 1)
        throw ValidationError("intermediate frame count must be positive");
    if (!(homography.inlier_px > 0))
        throw ValidationError("inlier threshold must be positive");
}

TransitionManifest manifest_from_path(const GestureGraph& graph, const RetrievedPath& path,
                                      const TransitionConfig& transition) {
    if (path.node_ids.empty()) throw ValidationError("retrieved path is empty");
    if (path.transition_kinds.size() + 1 != path.node_ids.size())
        throw ValidationError("retrieved path transition count is inconsistent");
    for (int id : path.node_ids)
        if (id < 0 || id >= static_cast<int>(graph.nodes.size()))
            throw ValidationError("retrieved path references an unknown node");

    const int k = transition.context_frames;
    TransitionManifest manifest;
    manifest.fps = graph.config.fps;

    const MotionClipNode* first = &graph.nodes[path.node_ids.front()];
    SourceSegment run{first->video, first->frame_start, first->frame_start + kNodeFrames,
                      first->audio_begin, first->audio_end};
    for (std::size_t t = 1; t < path.node_ids.size(); ++t) {
        const MotionClipNode& node = graph.nodes[path.node_ids[t]];
        const EdgeKind kind = path.transition_kinds[t - 1];
        if (kind == EdgeKind::original) {
            // Original continuation: same video, contiguous frames.
            run.frame_end = node.frame_start + kNodeFrames;
            run.audio_end = node.audio_end;
            continue;
        }
        const MotionClipNode& prev = graph.nodes[path.node_ids[t - 1]];
        manifest.segments.emplace_back(run);

        InterpolateSegment in;
        in.frames = transition.intermediate_frames;
        in.kind = edge_kind_name(kind);
        in.from_video = prev.video;
        // Source context (i-k, i] around the cut's last kept frame i.
        const int cut = prev.frame_start + kNodeFrames - 1;
        in.from_begin = std::max(0, cut - k + 1);
        in.from_end = cut + 1;
        in.to_video = node.video;
        in.to_begin = node.frame_start;
        in.to_end = node.frame_start + k;
        manifest.segments.emplace_back(std::move(in));

        run = SourceSegment{node.video, node.frame_start, node.frame_start + kNodeFrames,
                            node.audio_begin, node.audio_end};
    }
    manifest.segments.emplace_back(run);
    manifest.validate();
    return manifest;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    DirectoryLock lock{config.out_dir};

    // --- ingest: read everything up front so dimension problems surface
    // before any long computation.
    FeatureTrack audio;
    MotionBank bank;
    std::map<std::string, SourceData> data;
    int width = 0, height = 0;
    stage("ingest", [&] {
        audio = read_features(config.audio_features);
        if (audio.modality != Modality::audio)
            throw ValidationError(config.audio_features + " is not an audio feature file");
        for (const SourceSpec& spec : config.sources) {
            SourceData& src = data[spec.video];
            src.motion = build_15d(read_motion(spec.motion));
            if (!spec.masks.empty()) {
                src.masks = read_masks(spec.masks);
                if (static_cast<int>(src.masks.size()) < src.motion.frames)
                    throw ValidationError("masks of '" + spec.video +
                                          "' do not cover the motion frames");
                if (width == 0) {
                    width = src.masks.front().width;
                    height = src.masks.front().height;
                } else if (src.masks.front().width != width ||
                           src.masks.front().height != height) {
                    throw ValidationError("mask resolutions differ across sources");
                }
            }
            if (!spec.boxes.empty()) {
                src.boxes = read_boxes(spec.boxes);
                if (static_cast<int>(src.boxes.size()) < src.motion.frames)
                    throw ValidationError("boxes of '" + spec.video +
                                          "' do not cover the motion frames");
            }
            if (!spec.poses.empty()) {
                src.poses = read_pose_frames(spec.poses);
                if (static_cast<int>(src.poses.size()) < src.motion.frames)
                    throw ValidationError("poses of '" + spec.video +
                                          "' do not cover the motion frames");
            }
            FeatureTrack track = read_features(spec.features);
            if (track.modality != Modality::motion)
                throw ValidationError(spec.features + " is not a motion feature file");
            if (track.frames() < src.motion.frames)
                throw ValidationError("feature track of '" + spec.video +
                                      "' is shorter than its motion");
            if (track.low.cols() != audio.low.cols() ||
                track.high.cols() != audio.high.cols())
                throw ValidationError("feature dimensions of '" + spec.video +
                                      "' do not match the audio");
            bank.emplace(spec.video, std::move(track));
        }
        return 0;
    });

    // --- build
    GestureGraph graph = stage("build", [&] {
        std::vector<MotionClipNode> nodes;
        for (const SourceSpec& spec : config.sources) {
            const SourceData& src = data.at(spec.video);
            std::vector<MotionClipNode> part =
                segment_nodes(src.motion, src.masks, src.boxes, spec.video, config.graph,
                              static_cast<int>(nodes.size()));
            nodes.insert(nodes.end(), std::make_move_iterator(part.begin()),
                         std::make_move_iterator(part.end()));
        }
        return build_graph(std::move(nodes), width, height, config.graph);
    });

    // --- prune
    const PruneResult pruned = stage("prune", [&] { return prune_graph(graph); });

    // --- search
    const RetrievedPath path = stage("search", [&] {
        if (config.search.beam_width > 0)
            return beam_search(pruned.graph, audio, bank, config.search.beam_width,
                               config.search);
        return dp_search(pruned.graph, audio, bank, config.search);
    });

    // --- blend/flow: build the manifest and attach per-transition payloads.
    PipelineResult result;
    result.path = path;
    result.components_merged = pruned.components_before - 1;
    stage("blend/flow", [&] {
        result.manifest = manifest_from_path(pruned.graph, path, config.transition);

        HomographyEstimate camera;
        bool have_camera = false;
        if (!config.homography.matches.empty()) {
            const PointMatches matches = read_matches(config.homography.matches);
            RansacConfig ransac;
            ransac.inlier_px = config.homography.inlier_px;
            ransac.seed = config.seed;
            camera = estimate_homography(matches, ransac);
            have_camera = true;
        }
        int flow_w = config.homography.width > 0 ? config.homography.width : width;
        int flow_h = config.homography.height > 0 ? config.homography.height : height;
        if (have_camera && (flow_w < 1 || flow_h < 1))
            throw ValidationError(
                "flow dimensions unknown: set homography.width/height or provide masks");

        for (std::size_t s = 0; s < result.manifest.segments.size(); ++s) {
            auto* in = std::get_if<InterpolateSegment>(&result.manifest.segments[s]);
            if (!in) continue;

            const SourceData& from = data.at(in->from_video);
            const SourceData& to = data.at(in->to_video);
            if (!from.poses.empty() && !to.poses.empty()) {
                const Pose2D& start = from.poses[in->from_end - 1];
                const Pose2D& end = to.poses[in->to_begin];
                const std::vector<Pose2D> blended =
                    linear_pose_blend(start, end, in->frames);
                in->poses_file = segment_file_name(s, "poses.json");
                write_pose_frames(
                    (std::filesystem::path(config.out_dir) / in->poses_file).string(),
                    blended);
            }
            if (have_camera) {
                // Foreground = the person at the incoming cut frame, when its
                // mask matches the flow resolution.
                RleMask fg;
                if (!to.masks.empty() && to.masks.front().width == flow_w &&
                    to.masks.front().height == flow_h)
                    fg = to.masks[in->to_begin];
                const HomographyFlow flow = background_flow(camera.H, flow_w, flow_h, fg);
                in->flow_file = segment_file_name(s, "flow.bin");
                write_flow((std::filesystem::path(config.out_dir) / in->flow_file).string(),
                           flow);
            }
        }

        result.manifest_file =
            (std::filesystem::path(config.out_dir) / "manifest.json").string();
        write_manifest(result.manifest_file, result.manifest);
        return 0;
    });
    return result;
}

}  // namespace mograph
