#pragma once

#include "mograph/align.hpp"
#include "mograph/eval.hpp"
#include "mograph/graph.hpp"
#include "mograph/homography.hpp"
#include "mograph/mask.hpp"
#include "mograph/motion.hpp"
#include "mograph/pipeline.hpp"
#include "mograph/pose_blend.hpp"
#include "mograph/retrieval.hpp"

#include <string>
#include <vector>

namespace mograph {

// ---------------------------------------------------------------------------
// Motion container: binary layout is magic "MOGM", version u32, fps f32,
// T u32, J u32, then per frame and joint 3 position + 9 row-major rotation
// f32 values, all little-endian. A text variant (header line "fps T J", then
// one frame per line) is accepted for small fixtures; readers sniff the magic.
// ---------------------------------------------------------------------------
JointSequence read_motion(const std::string& path);
void write_motion_binary(const std::string& path, const JointSequence& seq);
void write_motion_text(const std::string& path, const JointSequence& seq);

// ---------------------------------------------------------------------------
// Feature container: header (modality tag u32 0=audio/1=motion, F, D_low, C,
// D_high, hop u32, fps f32), then F x D_low and C x D_high row-major f32.
// ---------------------------------------------------------------------------
FeatureTrack read_features(const std::string& path);
void write_features(const std::string& path, const FeatureTrack& track);

// ---------------------------------------------------------------------------
// Flow container: header (w u32, h u32), then row-major (dx, dy) f32 pairs.
// ---------------------------------------------------------------------------
struct FlowData {
    int width = 0;
    int height = 0;
    std::vector<double> flow;  // height x width x 2
};
void write_flow(const std::string& path, const HomographyFlow& flow);
FlowData read_flow(const std::string& path);

// Masks: JSON {"width", "height", "frames": [[start,len, ...], ...]} with
// row-major run-length pixel runs per frame.
std::vector<RleMask> read_masks(const std::string& path);
void write_masks(const std::string& path, const std::vector<RleMask>& frames);

// Hand boxes: JSON {"frames": [[[x0,y0,x1,y1], ...], ...]}.
std::vector<std::vector<Box>> read_boxes(const std::string& path);
void write_boxes(const std::string& path, const std::vector<std::vector<Box>>& frames);

// Keypoint matches: text, one "x1 y1 x2 y2" record per line.
PointMatches read_matches(const std::string& path);
void write_matches(const std::string& path, const PointMatches& matches);

// 2D poses: single pose {"joints": [[x,y],...], "confidence": [...]} or a
// frame list {"frames": [pose, ...]}.
Pose2D read_pose(const std::string& path);
void write_pose(const std::string& path, const Pose2D& pose);
std::vector<Pose2D> read_pose_frames(const std::string& path);
void write_pose_frames(const std::string& path, const std::vector<Pose2D>& frames);

// Frame tokens / word tokens: one token per line (empty line = blank frame).
FrameTokenSequence read_frame_tokens(const std::string& path);
WordTokenSequence read_word_tokens(const std::string& path,
                                   const std::vector<std::string>& extra_specials = {});
void write_alignment(const std::string& path, const FrameWordAlignment& alignment);
FrameWordAlignment read_alignment(const std::string& path);

// ---------------------------------------------------------------------------
// Graph document: JSON with config, per-video source file references, node
// metadata (video + frame offset into the referenced containers), adaptive
// thresholds, and edges. Node payloads (motion block, masks, boxes) are
// reloaded from the sources when `load_payloads` is set; relative source
// paths resolve against the graph file's directory.
// ---------------------------------------------------------------------------
struct GraphSource {
    std::string video;
    std::string motion;
    std::string masks;  // empty = none
    std::string boxes;  // empty = none
};

struct GraphDocument {
    GestureGraph graph;
    std::vector<GraphSource> sources;
};

GraphDocument read_graph(const std::string& path, bool load_payloads);
void write_graph(const std::string& path, const GraphDocument& doc);

// Retrieved paths, eval reports, manifests, pipeline configs: stable-schema
// JSON documents.
void write_path(const std::string& path, const RetrievedPath& result);
RetrievedPath read_path(const std::string& path);

void write_eval_report(const std::string& path, const EvalReport& report);

void write_manifest(const std::string& path, const TransitionManifest& manifest);
TransitionManifest read_manifest(const std::string& path);

PipelineConfig read_pipeline_config(const std::string& path);
void write_pipeline_config(const std::string& path, const PipelineConfig& config);
std::string dump_pipeline_config_defaults();

// Shared low-level helpers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mograph
