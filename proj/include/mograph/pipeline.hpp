#pragma once

#include "mograph/graph.hpp"
#include "mograph/retrieval.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mograph {

/// Consecutive retrieved clips from one video, merged over original
/// transitions. Frame ranges are half-open; audio sample spans map the
/// segment back onto the driving audio.
struct SourceSegment {
    std::string video;
    int frame_begin = 0;
    int frame_end = 0;
    std::int64_t audio_begin = 0;
    std::int64_t audio_end = 0;

    int frames() const { return frame_end - frame_begin; }
};

/// Synthesized transition between two retrieved clips: `frames` new frames,
/// conditioned on the last context frames before the cut and the first ones
/// after it. Pose and flow payloads are file references (the renderer that
/// consumes them is external).
struct InterpolateSegment {
    int frames = 8;
    std::string from_video;
    int from_begin = 0;  // half-open context range (i-k, i] == [i-k+1, i+1)
    int from_end = 0;
    std::string to_video;
    int to_begin = 0;  // half-open context range [j, j+k)
    int to_end = 0;
    std::string kind;        // "synthetic" or "bridge"
    std::string poses_file;  // empty when 2D poses were not supplied
    std::string flow_file;   // empty when no homography matches were supplied
};

using ManifestSegment = std::variant<SourceSegment, InterpolateSegment>;

/// Ordered output timeline: source segments tile the retrieved clips, one
/// interpolate segment is inserted at every non-original transition.
struct TransitionManifest {
    double fps = 30.0;
    std::vector<ManifestSegment> segments;

    int total_frames() const;
    int interpolate_count() const;
    void validate() const;
};

/// One source video's input files. Motion is required; masks, hand boxes,
/// per-frame 2D poses, and the feature track are optional depending on which
/// stages run.
struct SourceSpec {
    std::string video;
    std::string motion;
    std::string masks;
    std::string boxes;
    std::string features;
    std::string poses;
};

struct TransitionConfig {
    int context_frames = 4;
    int intermediate_frames = 8;
};

struct HomographyInputs {
    std::string matches;  // empty disables background-flow attachment
    int width = 0;
    int height = 0;
    double inlier_px = 3.0;
};

struct PipelineConfig {
    std::uint64_t seed = 7;
    std::string out_dir;
    std::string audio_features;
    std::vector<SourceSpec> sources;
    GraphBuildConfig graph;
    SearchConfig search;
    TransitionConfig transition;
    HomographyInputs homography;

    void validate() const;
};

struct PipelineResult {
    TransitionManifest manifest;
    RetrievedPath path;
    int components_merged = 0;
    std::string manifest_file;
};

/// build -> prune -> search -> blend/flow, writing the manifest and any pose
/// or flow payloads into config.out_dir. The output directory is owned
/// exclusively for the duration of the run via a lock file.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Turns a retrieved path over a graph into the manifest timeline (no files
/// written): original transitions extend the current source segment,
/// non-original ones insert an interpolate segment.
TransitionManifest manifest_from_path(const GestureGraph& graph, const RetrievedPath& path,
                                      const TransitionConfig& transition);

}  // namespace mograph
