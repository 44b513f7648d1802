#include "mograph/io.hpp"

#include "mograph/error.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mograph {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMotionMagic[4] = {'M', 'O', 'G', 'M'};
constexpr std::uint32_t kMotionVersion = 1;

// --- little-endian binary primitives ---------------------------------------

void put_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& is, const std::string& path) {
    unsigned char bytes[4];
    if (!is.read(reinterpret_cast<char*>(bytes), 4))
        throw ValidationError("unexpected end of file in " + path);
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f32(std::ostream& os, double v) {
    put_u32(os, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

double get_f32(std::istream& is, const std::string& path) {
    return static_cast<double>(std::bit_cast<float>(get_u32(is, path)));
}

std::ofstream open_out_binary(const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open: " + path);
    return is;
}

void finish_write(std::ostream& os, const std::string& path) {
    os.flush();
    if (!os) throw ComputeError("write failed: " + path);
}

// --- JSON helpers ------------------------------------------------------------

ordered_json parse_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open: " + path);
    try {
        return ordered_json::parse(is);
    } catch (const std::exception& e) {
        throw ValidationError("failed to parse " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const ordered_json& doc) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw ValidationError("cannot open for writing: " + path);
    os << doc.dump(2) << '\n';
    finish_write(os, path);
}

/// Strict schema check: every present key must be a declared one.
void expect_keys(const ordered_json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known |= key == a;
        if (!known) throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

const ordered_json& require(const ordered_json& obj, const char* key,
                            const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(std::string("missing key '") + key + "' in " + where);
    return *it;
}

std::string optional_path(const ordered_json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return "";
    if (!it->is_string())
        throw ValidationError(std::string("key '") + key + "' must be a string or null");
    return it->get<std::string>();
}

ordered_json path_or_null(const std::string& path) {
    if (path.empty()) return nullptr;
    return path;
}

/// Relative source references inside a document resolve against the
/// document's own directory.
std::string resolve_relative(const std::string& document_path, const std::string& ref) {
    std::filesystem::path p(ref);
    if (p.is_absolute()) return ref;
    return (std::filesystem::path(document_path).parent_path() / p).string();
}

}  // namespace

// --- plain text ---------------------------------------------------------------

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot open for writing: " + path);
    os << content;
    finish_write(os, path);
}

// --- motion container ----------------------------------------------------------

void write_motion_binary(const std::string& path, const JointSequence& seq) {
    seq.validate();
    std::ofstream os = open_out_binary(path);
    os.write(kMotionMagic, 4);
    put_u32(os, kMotionVersion);
    put_f32(os, seq.fps);
    put_u32(os, static_cast<std::uint32_t>(seq.frames));
    put_u32(os, static_cast<std::uint32_t>(seq.joints));
    for (int t = 0; t < seq.frames; ++t) {
        for (int j = 0; j < seq.joints; ++j) {
            const Eigen::Vector3d& p = seq.positions[seq.index(t, j)];
            const Eigen::Matrix3d& r = seq.rotations[seq.index(t, j)];
            for (int c = 0; c < 3; ++c) put_f32(os, p[c]);
            for (int row = 0; row < 3; ++row)
                for (int col = 0; col < 3; ++col) put_f32(os, r(row, col));
        }
    }
    finish_write(os, path);
}

void write_motion_text(const std::string& path, const JointSequence& seq) {
    seq.validate();
    std::ostringstream out;
    out.precision(17);
    out << seq.fps << ' ' << seq.frames << ' ' << seq.joints << '\n';
    for (int t = 0; t < seq.frames; ++t) {
        for (int j = 0; j < seq.joints; ++j) {
            const Eigen::Vector3d& p = seq.positions[seq.index(t, j)];
            const Eigen::Matrix3d& r = seq.rotations[seq.index(t, j)];
            if (j > 0) out << ' ';
            out << p.x() << ' ' << p.y() << ' ' << p.z();
            for (int row = 0; row < 3; ++row)
                for (int col = 0; col < 3; ++col) out << ' ' << r(row, col);
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

JointSequence read_motion(const std::string& path) {
    std::ifstream is = open_in_binary(path);
    char magic[4] = {};
    is.read(magic, 4);
    if (!is) throw ValidationError("motion file too short: " + path);

    JointSequence seq;
    if (std::memcmp(magic, kMotionMagic, 4) == 0) {
        const std::uint32_t version = get_u32(is, path);
        if (version != kMotionVersion)
            throw ValidationError("unsupported motion container version in " + path);
        seq.fps = get_f32(is, path);
        seq.frames = static_cast<int>(get_u32(is, path));
        seq.joints = static_cast<int>(get_u32(is, path));
        if (seq.frames < 1 || seq.joints < 1 || seq.frames > (1 << 24) ||
            seq.joints > (1 << 16))
            throw ValidationError("implausible motion dimensions in " + path);
        const std::size_t total = static_cast<std::size_t>(seq.frames) * seq.joints;
        seq.positions.resize(total);
        seq.rotations.resize(total);
        for (std::size_t i = 0; i < total; ++i) {
            for (int c = 0; c < 3; ++c) seq.positions[i][c] = get_f32(is, path);
            for (int row = 0; row < 3; ++row)
                for (int col = 0; col < 3; ++col) seq.rotations[i](row, col) = get_f32(is, path);
        }
    } else {
        // Text variant: rewind and stream-parse.
        is.seekg(0);
        std::stringstream ss(read_text_file(path));
        if (!(ss >> seq.fps >> seq.frames >> seq.joints))
            throw ValidationError("malformed motion text header in " + path);
        if (seq.frames < 1 || seq.joints < 1)
            throw ValidationError("implausible motion dimensions in " + path);
        const std::size_t total = static_cast<std::size_t>(seq.frames) * seq.joints;
        seq.positions.resize(total);
        seq.rotations.resize(total);
        for (std::size_t i = 0; i < total; ++i) {
            for (int c = 0; c < 3; ++c)
                if (!(ss >> seq.positions[i][c]))
                    throw ValidationError("truncated motion text data in " + path);
            for (int row = 0; row < 3; ++row)
                for (int col = 0; col < 3; ++col)
                    if (!(ss >> seq.rotations[i](row, col)))
                        throw ValidationError("truncated motion text data in " + path);
        }
        double extra;
        if (ss >> extra) throw ValidationError("trailing data in motion text file " + path);
    }
    seq.validate();
    return seq;
}

// --- feature container -----------------------------------------------------------

void write_features(const std::string& path, const FeatureTrack& track) {
    track.validate();
    std::ofstream os = open_out_binary(path);
    put_u32(os, track.modality == Modality::audio ? 0u : 1u);
    put_u32(os, static_cast<std::uint32_t>(track.low.rows()));
    put_u32(os, static_cast<std::uint32_t>(track.low.cols()));
    put_u32(os, static_cast<std::uint32_t>(track.high.rows()));
    put_u32(os, static_cast<std::uint32_t>(track.high.cols()));
    put_u32(os, static_cast<std::uint32_t>(track.window_hop));
    put_f32(os, track.fps);
    for (Eigen::Index i = 0; i < track.low.rows(); ++i)
        for (Eigen::Index j = 0; j < track.low.cols(); ++j) put_f32(os, track.low(i, j));
    for (Eigen::Index i = 0; i < track.high.rows(); ++i)
        for (Eigen::Index j = 0; j < track.high.cols(); ++j) put_f32(os, track.high(i, j));
    finish_write(os, path);
}

FeatureTrack read_features(const std::string& path) {
    std::ifstream is = open_in_binary(path);
    FeatureTrack track;
    const std::uint32_t tag = get_u32(is, path);
    if (tag > 1) throw ValidationError("unknown modality tag in " + path);
    track.modality = tag == 0 ? Modality::audio : Modality::motion;
    const std::uint32_t frames = get_u32(is, path);
    const std::uint32_t d_low = get_u32(is, path);
    const std::uint32_t windows = get_u32(is, path);
    const std::uint32_t d_high = get_u32(is, path);
    track.window_hop = static_cast<int>(get_u32(is, path));
    track.fps = get_f32(is, path);
    if (frames < 1 || d_low < 1 || windows < 1 || d_high < 1 || frames > (1u << 24) ||
        d_low > (1u << 16) || windows > (1u << 24) || d_high > (1u << 16))
        throw ValidationError("implausible feature dimensions in " + path);
    track.low.resize(frames, d_low);
    track.high.resize(windows, d_high);
    for (Eigen::Index i = 0; i < track.low.rows(); ++i)
        for (Eigen::Index j = 0; j < track.low.cols(); ++j) track.low(i, j) = get_f32(is, path);
    for (Eigen::Index i = 0; i < track.high.rows(); ++i)
        for (Eigen::Index j = 0; j < track.high.cols(); ++j)
            track.high(i, j) = get_f32(is, path);
    track.validate();
    return track;
}

// --- flow container ------------------------------------------------------------

void write_flow(const std::string& path, const HomographyFlow& flow) {
    std::ofstream os = open_out_binary(path);
    put_u32(os, static_cast<std::uint32_t>(flow.width));
    put_u32(os, static_cast<std::uint32_t>(flow.height));
    for (double v : flow.flow) put_f32(os, v);
    finish_write(os, path);
}

FlowData read_flow(const std::string& path) {
    std::ifstream is = open_in_binary(path);
    FlowData data;
    data.width = static_cast<int>(get_u32(is, path));
    data.height = static_cast<int>(get_u32(is, path));
    if (data.width < 1 || data.height < 1 || data.width > (1 << 16) || data.height > (1 << 16))
        throw ValidationError("implausible flow dimensions in " + path);
    data.flow.resize(static_cast<std::size_t>(data.width) * data.height * 2);
    for (double& v : data.flow) v = get_f32(is, path);
    return data;
}

// --- masks / boxes ---------------------------------------------------------------

std::vector<RleMask> read_masks(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path, {"width", "height", "frames"});
    const int width = require(doc, "width", path).get<int>();
    const int height = require(doc, "height", path).get<int>();
    const auto& frames = require(doc, "frames", path);
    if (!frames.is_array()) throw ValidationError("'frames' must be an array in " + path);

    std::vector<RleMask> masks;
    masks.reserve(frames.size());
    for (const auto& runs : frames) {
        if (!runs.is_array() || runs.size() % 2 != 0)
            throw ValidationError("mask runs must be flat [start, len, ...] arrays in " + path);
        RleMask mask;
        mask.width = width;
        mask.height = height;
        for (std::size_t i = 0; i < runs.size(); i += 2)
            mask.runs.emplace_back(runs[i].get<std::int64_t>(), runs[i + 1].get<std::int64_t>());
        mask.validate();
        masks.push_back(std::move(mask));
    }
    return masks;
}

void write_masks(const std::string& path, const std::vector<RleMask>& frames) {
    ordered_json doc;
    doc["width"] = frames.empty() ? 0 : frames.front().width;
    doc["height"] = frames.empty() ? 0 : frames.front().height;
    ordered_json arr = ordered_json::array();
    for (const RleMask& mask : frames) {
        if (mask.width != doc["width"].get<int>() || mask.height != doc["height"].get<int>())
            throw ValidationError("all mask frames must share one resolution");
        mask.validate();
        ordered_json runs = ordered_json::array();
        for (const auto& [start, len] : mask.runs) {
            runs.push_back(start);
            runs.push_back(len);
        }
        arr.push_back(std::move(runs));
    }
    doc["frames"] = std::move(arr);
    write_json_file(path, doc);
}

std::vector<std::vector<Box>> read_boxes(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path, {"frames"});
    const auto& frames = require(doc, "frames", path);
    if (!frames.is_array()) throw ValidationError("'frames' must be an array in " + path);

    std::vector<std::vector<Box>> out;
    out.reserve(frames.size());
    for (const auto& frame : frames) {
        if (!frame.is_array()) throw ValidationError("each box frame must be an array in " + path);
        std::vector<Box> boxes;
        for (const auto& b : frame) {
            if (!b.is_array() || b.size() != 4)
                throw ValidationError("each box must be [x0, y0, x1, y1] in " + path);
            boxes.push_back(
                {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()});
        }
        out.push_back(std::move(boxes));
    }
    return out;
}

void write_boxes(const std::string& path, const std::vector<std::vector<Box>>& frames) {
    ordered_json arr = ordered_json::array();
    for (const auto& frame : frames) {
        ordered_json fr = ordered_json::array();
        for (const Box& b : frame) fr.push_back(ordered_json::array({b.x0, b.y0, b.x1, b.y1}));
        arr.push_back(std::move(fr));
    }
    ordered_json doc;
    doc["frames"] = std::move(arr);
    write_json_file(path, doc);
}

// --- keypoint matches -------------------------------------------------------------

PointMatches read_matches(const std::string& path) {
    std::istringstream is(read_text_file(path));
    PointMatches matches;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# dims ", 0) == 0) {
            std::istringstream dims(line.substr(7));
            if (!(dims >> matches.width >> matches.height))
                throw ValidationError("malformed dims directive in " + path);
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double x1, y1, x2, y2;
        if (!(row >> x1 >> y1 >> x2 >> y2)) {
            std::ostringstream msg;
            msg << "malformed match record at " << path << ":" << line_no;
            throw ValidationError(msg.str());
        }
        matches.src.emplace_back(x1, y1);
        matches.dst.emplace_back(x2, y2);
    }
    matches.validate();
    return matches;
}

void write_matches(const std::string& path, const PointMatches& matches) {
    matches.validate();
    std::ostringstream out;
    out.precision(17);
    if (matches.width > 0 && matches.height > 0)
        out << "# dims " << matches.width << ' ' << matches.height << '\n';
    for (std::size_t i = 0; i < matches.size(); ++i)
        out << matches.src[i].x() << ' ' << matches.src[i].y() << ' ' << matches.dst[i].x()
            << ' ' << matches.dst[i].y() << '\n';
    write_text_file(path, out.str());
}

// --- 2D poses ---------------------------------------------------------------------

namespace {

ordered_json pose_to_json(const Pose2D& pose) {
    ordered_json joints = ordered_json::array();
    for (const auto& j : pose.joints) joints.push_back(ordered_json::array({j.x(), j.y()}));
    ordered_json out;
    out["joints"] = std::move(joints);
    out["confidence"] = pose.confidence;
    return out;
}

Pose2D pose_from_json(const ordered_json& doc, const std::string& where) {
    expect_keys(doc, where, {"joints", "confidence"});
    const auto& joints = require(doc, "joints", where);
    if (!joints.is_array()) throw ValidationError("'joints' must be an array in " + where);
    Pose2D pose;
    for (const auto& j : joints) {
        if (!j.is_array() || j.size() != 2)
            throw ValidationError("each joint must be [x, y] in " + where);
        pose.joints.emplace_back(j[0].get<double>(), j[1].get<double>());
    }
    const auto& conf = require(doc, "confidence", where);
    pose.confidence = conf.get<std::vector<double>>();
    pose.validate();
    return pose;
}

}  // namespace

Pose2D read_pose(const std::string& path) { return pose_from_json(parse_json_file(path), path); }

void write_pose(const std::string& path, const Pose2D& pose) {
    pose.validate();
    write_json_file(path, pose_to_json(pose));
}

std::vector<Pose2D> read_pose_frames(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path, {"frames"});
    const auto& frames = require(doc, "frames", path);
    if (!frames.is_array()) throw ValidationError("'frames' must be an array in " + path);
    std::vector<Pose2D> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(pose_from_json(f, path));
    return out;
}

void write_pose_frames(const std::string& path, const std::vector<Pose2D>& frames) {
    ordered_json arr = ordered_json::array();
    for (const Pose2D& pose : frames) {
        pose.validate();
        arr.push_back(pose_to_json(pose));
    }
    ordered_json doc;
    doc["frames"] = std::move(arr);
    write_json_file(path, doc);
}

// --- token files -------------------------------------------------------------------

FrameTokenSequence read_frame_tokens(const std::string& path) {
    std::istringstream is(read_text_file(path));
    FrameTokenSequence seq;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        seq.tokens.push_back(line);
    }
    if (seq.tokens.empty()) throw ValidationError("frame token file is empty: " + path);
    return seq;
}

WordTokenSequence read_word_tokens(const std::string& path,
                                   const std::vector<std::string>& extra_specials) {
    std::istringstream is(read_text_file(path));
    WordTokenSequence words;
    words.special_markers = default_special_markers();
    for (const std::string& s : extra_specials) words.special_markers.insert(s);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // words are non-empty by contract
        words.words.push_back(line);
    }
    if (words.words.empty()) throw ValidationError("word token file is empty: " + path);
    return words;
}

void write_alignment(const std::string& path, const FrameWordAlignment& alignment) {
    alignment.validate();
    ordered_json doc;
    doc["word_index"] = alignment.word_index;
    doc["filled"] = std::vector<int>(alignment.filled.begin(), alignment.filled.end());
    write_json_file(path, doc);
}

FrameWordAlignment read_alignment(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path, {"word_index", "filled"});
    FrameWordAlignment alignment;
    alignment.word_index = require(doc, "word_index", path).get<std::vector<int>>();
    for (const auto& f : require(doc, "filled", path))
        alignment.filled.push_back(f.get<int>() != 0);
    alignment.validate();
    return alignment;
}

// --- graph document ----------------------------------------------------------------

void write_graph(const std::string& path, const GraphDocument& doc) {
    ordered_json out;
    out["format"] = "gesture-graph";
    out["version"] = 1;
    out["config"] = {{"edge_rule", edge_rule_name(doc.graph.config.edge_rule)},
                     {"w_body", doc.graph.config.w_body},
                     {"w_hand", doc.graph.config.w_hand},
                     {"audio_sample_rate", doc.graph.config.audio_sample_rate},
                     {"fps", doc.graph.config.fps}};
    out["width"] = doc.graph.width;
    out["height"] = doc.graph.height;

    ordered_json sources = ordered_json::array();
    for (const GraphSource& s : doc.sources) {
        ordered_json entry;
        entry["video"] = s.video;
        entry["motion"] = s.motion;
        entry["masks"] = path_or_null(s.masks);
        entry["boxes"] = path_or_null(s.boxes);
        sources.push_back(std::move(entry));
    }
    out["sources"] = std::move(sources);

    ordered_json nodes = ordered_json::array();
    for (const MotionClipNode& n : doc.graph.nodes) {
        ordered_json entry;
        entry["id"] = n.id;
        entry["video"] = n.video;
        entry["frame_start"] = n.frame_start;
        entry["audio_begin"] = n.audio_begin;
        entry["audio_end"] = n.audio_end;
        nodes.push_back(std::move(entry));
    }
    out["nodes"] = std::move(nodes);
    out["thresholds"] = doc.graph.thresholds;

    ordered_json edges = ordered_json::array();
    for (const GraphEdge& e : doc.graph.edges) {
        ordered_json entry;
        entry["src"] = e.src;
        entry["dst"] = e.dst;
        entry["distance"] = e.distance;
        entry["kind"] = edge_kind_name(e.kind);
        edges.push_back(std::move(entry));
    }
    out["edges"] = std::move(edges);
    write_json_file(path, out);
}

GraphDocument read_graph(const std::string& path, bool load_payloads) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path,
                {"format", "version", "config", "width", "height", "sources", "nodes",
                 "thresholds", "edges"});
    if (require(doc, "format", path).get<std::string>() != "gesture-graph")
        throw ValidationError(path + " is not a gesture-graph document");
    if (require(doc, "version", path).get<int>() != 1)
        throw ValidationError("unsupported gesture-graph version in " + path);

    GraphDocument out;
    const auto& cfg = require(doc, "config", path);
    expect_keys(cfg, path + " config",
                {"edge_rule", "w_body", "w_hand", "audio_sample_rate", "fps"});
    out.graph.config.edge_rule =
        edge_rule_from_name(require(cfg, "edge_rule", path).get<std::string>());
    out.graph.config.w_body = require(cfg, "w_body", path).get<double>();
    out.graph.config.w_hand = require(cfg, "w_hand", path).get<double>();
    out.graph.config.audio_sample_rate = require(cfg, "audio_sample_rate", path).get<double>();
    out.graph.config.fps = require(cfg, "fps", path).get<double>();
    out.graph.width = require(doc, "width", path).get<int>();
    out.graph.height = require(doc, "height", path).get<int>();

    for (const auto& s : require(doc, "sources", path)) {
        expect_keys(s, path + " source", {"video", "motion", "masks", "boxes"});
        GraphSource src;
        src.video = require(s, "video", path).get<std::string>();
        src.motion = require(s, "motion", path).get<std::string>();
        src.masks = optional_path(s, "masks");
        src.boxes = optional_path(s, "boxes");
        out.sources.push_back(std::move(src));
    }

    for (const auto& n : require(doc, "nodes", path)) {
        expect_keys(n, path + " node", {"id", "video", "frame_start", "audio_begin", "audio_end"});
        MotionClipNode node;
        node.id = require(n, "id", path).get<int>();
        node.video = require(n, "video", path).get<std::string>();
        node.frame_start = require(n, "frame_start", path).get<int>();
        node.audio_begin = require(n, "audio_begin", path).get<std::int64_t>();
        node.audio_end = require(n, "audio_end", path).get<std::int64_t>();
        if (node.id != static_cast<int>(out.graph.nodes.size()))
            throw ValidationError("node ids must be dense and ascending in " + path);
        out.graph.nodes.push_back(std::move(node));
    }

    out.graph.thresholds = require(doc, "thresholds", path).get<std::vector<double>>();
    if (out.graph.thresholds.size() != out.graph.nodes.size())
        throw ValidationError("threshold count does not match node count in " + path);

    for (const auto& e : require(doc, "edges", path)) {
        expect_keys(e, path + " edge", {"src", "dst", "distance", "kind"});
        GraphEdge edge;
        edge.src = require(e, "src", path).get<int>();
        edge.dst = require(e, "dst", path).get<int>();
        edge.distance = require(e, "distance", path).get<double>();
        edge.kind = edge_kind_from_name(require(e, "kind", path).get<std::string>());
        const int n = static_cast<int>(out.graph.nodes.size());
        if (edge.src < 0 || edge.src >= n || edge.dst < 0 || edge.dst >= n)
            throw ValidationError("edge endpoint out of range in " + path);
        out.graph.edges.push_back(edge);
    }

    if (load_payloads) {
        for (const GraphSource& src : out.sources) {
            const JointSequence seq = read_motion(resolve_relative(path, src.motion));
            const Motion15D features = build_15d(seq);
            std::vector<RleMask> masks;
            std::vector<std::vector<Box>> boxes;
            if (!src.masks.empty()) masks = read_masks(resolve_relative(path, src.masks));
            if (!src.boxes.empty()) boxes = read_boxes(resolve_relative(path, src.boxes));
            if (!masks.empty() && static_cast<int>(masks.size()) < features.frames)
                throw ValidationError("mask frames of '" + src.video +
                                      "' do not cover the motion");
            if (!boxes.empty() && static_cast<int>(boxes.size()) < features.frames)
                throw ValidationError("box frames of '" + src.video +
                                      "' do not cover the motion");

            for (MotionClipNode& node : out.graph.nodes) {
                if (node.video != src.video) continue;
                if (node.frame_start + kNodeFrames > features.frames)
                    throw ValidationError("node frames exceed motion data of '" + src.video +
                                          "' in " + path);
                node.joints = features.joints;
                const std::size_t begin = features.index(node.frame_start, 0);
                const std::size_t end = features.index(node.frame_start + kNodeFrames, 0);
                node.motion.assign(features.data.begin() + begin, features.data.begin() + end);
                for (int f = 0; f < kNodeFrames; ++f) {
                    if (!masks.empty()) node.body_mask[f] = masks[node.frame_start + f];
                    if (!boxes.empty()) node.hand_boxes[f] = boxes[node.frame_start + f];
                }
            }
        }
        for (const MotionClipNode& node : out.graph.nodes)
            if (node.motion.empty())
                throw ValidationError("node " + std::to_string(node.id) +
                                      " has no source entry in " + path);
    }
    return out;
}

// --- retrieved path ------------------------------------------------------------------

void write_path(const std::string& path, const RetrievedPath& result) {
    ordered_json doc;
    doc["node_ids"] = result.node_ids;
    doc["per_step_scores"] = result.per_step_scores;
    ordered_json kinds = ordered_json::array();
    for (EdgeKind k : result.transition_kinds) kinds.push_back(edge_kind_name(k));
    doc["transition_kinds"] = std::move(kinds);
    doc["total_score"] = result.total_score;
    doc["non_original_count"] = result.non_original_count;
    doc["terminated_early"] = result.terminated_early;
    write_json_file(path, doc);
}

RetrievedPath read_path(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path,
                {"node_ids", "per_step_scores", "transition_kinds", "total_score",
                 "non_original_count", "terminated_early"});
    RetrievedPath result;
    result.node_ids = require(doc, "node_ids", path).get<std::vector<int>>();
    result.per_step_scores =
        require(doc, "per_step_scores", path).get<std::vector<double>>();
    for (const auto& k : require(doc, "transition_kinds", path))
        result.transition_kinds.push_back(edge_kind_from_name(k.get<std::string>()));
    result.total_score = require(doc, "total_score", path).get<double>();
    result.non_original_count = require(doc, "non_original_count", path).get<int>();
    result.terminated_early = require(doc, "terminated_early", path).get<bool>();
    if (result.node_ids.empty())
        throw ValidationError("retrieved path has no nodes in " + path);
    if (result.transition_kinds.size() + 1 != result.node_ids.size() ||
        result.per_step_scores.size() != result.node_ids.size())
        throw ValidationError("retrieved path arrays are inconsistent in " + path);
    return result;
}

// --- eval report ---------------------------------------------------------------------

void write_eval_report(const std::string& path, const EvalReport& report) {
    ordered_json doc;
    doc["low_accuracy"] = report.low_accuracy;
    doc["low_trials"] = report.low_trials;
    doc["low_radius_3sigma"] = report.low_radius;
    doc["high_accuracy"] = report.high_accuracy;
    doc["high_trials"] = report.high_trials;
    doc["high_radius_3sigma"] = report.high_radius;
    doc["seed"] = report.seed;
    write_json_file(path, doc);
}

// --- transition manifest ---------------------------------------------------------------

void write_manifest(const std::string& path, const TransitionManifest& manifest) {
    manifest.validate();
    ordered_json doc;
    doc["format"] = "transition-manifest";
    doc["version"] = 1;
    doc["fps"] = manifest.fps;
    ordered_json segments = ordered_json::array();
    for (const ManifestSegment& segment : manifest.segments) {
        ordered_json entry;
        if (const auto* src = std::get_if<SourceSegment>(&segment)) {
            entry["type"] = "source";
            entry["video"] = src->video;
            entry["frame_begin"] = src->frame_begin;
            entry["frame_end"] = src->frame_end;
            entry["audio_begin"] = src->audio_begin;
            entry["audio_end"] = src->audio_end;
        } else {
            const auto& in = std::get<InterpolateSegment>(segment);
            entry["type"] = "interpolate";
            entry["frames"] = in.frames;
            entry["kind"] = in.kind;
            entry["from"] = {{"video", in.from_video},
                             {"frame_begin", in.from_begin},
                             {"frame_end", in.from_end}};
            entry["to"] = {{"video", in.to_video},
                           {"frame_begin", in.to_begin},
                           {"frame_end", in.to_end}};
            entry["poses"] = path_or_null(in.poses_file);
            entry["flow"] = path_or_null(in.flow_file);
        }
        segments.push_back(std::move(entry));
    }
    doc["segments"] = std::move(segments);
    write_json_file(path, doc);
}

TransitionManifest read_manifest(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path, {"format", "version", "fps", "segments"});
    if (require(doc, "format", path).get<std::string>() != "transition-manifest")
        throw ValidationError(path + " is not a transition-manifest document");
    if (require(doc, "version", path).get<int>() != 1)
        throw ValidationError("unsupported manifest version in " + path);

    TransitionManifest manifest;
    manifest.fps = require(doc, "fps", path).get<double>();
    for (const auto& entry : require(doc, "segments", path)) {
        const std::string type = require(entry, "type", path).get<std::string>();
        if (type == "source") {
            expect_keys(entry, path + " segment",
                        {"type", "video", "frame_begin", "frame_end", "audio_begin",
                         "audio_end"});
            SourceSegment src;
            src.video = require(entry, "video", path).get<std::string>();
            src.frame_begin = require(entry, "frame_begin", path).get<int>();
            src.frame_end = require(entry, "frame_end", path).get<int>();
            src.audio_begin = require(entry, "audio_begin", path).get<std::int64_t>();
            src.audio_end = require(entry, "audio_end", path).get<std::int64_t>();
            manifest.segments.emplace_back(std::move(src));
        } else if (type == "interpolate") {
            expect_keys(entry, path + " segment",
                        {"type", "frames", "kind", "from", "to", "poses", "flow"});
            InterpolateSegment in;
            in.frames = require(entry, "frames", path).get<int>();
            in.kind = require(entry, "kind", path).get<std::string>();
            const auto& from = require(entry, "from", path);
            expect_keys(from, path + " from", {"video", "frame_begin", "frame_end"});
            in.from_video = require(from, "video", path).get<std::string>();
            in.from_begin = require(from, "frame_begin", path).get<int>();
            in.from_end = require(from, "frame_end", path).get<int>();
            const auto& to = require(entry, "to", path);
            expect_keys(to, path + " to", {"video", "frame_begin", "frame_end"});
            in.to_video = require(to, "video", path).get<std::string>();
            in.to_begin = require(to, "frame_begin", path).get<int>();
            in.to_end = require(to, "frame_end", path).get<int>();
            in.poses_file = optional_path(entry, "poses");
            in.flow_file = optional_path(entry, "flow");
            manifest.segments.emplace_back(std::move(in));
        } else {
            throw ValidationError("unknown segment type '" + type + "' in " + path);
        }
    }
    manifest.validate();
    return manifest;
}

// --- pipeline config ----------------------------------------------------------------------

namespace {

ordered_json pipeline_config_to_json(const PipelineConfig& config) {
    ordered_json doc;
    doc["seed"] = config.seed;
    doc["out_dir"] = config.out_dir;
    doc["audio_features"] = config.audio_features;
    ordered_json sources = ordered_json::array();
    for (const SourceSpec& s : config.sources) {
        ordered_json entry;
        entry["video"] = s.video;
        entry["motion"] = s.motion;
        entry["masks"] = path_or_null(s.masks);
        entry["boxes"] = path_or_null(s.boxes);
        entry["features"] = s.features;
        entry["poses"] = path_or_null(s.poses);
        sources.push_back(std::move(entry));
    }
    doc["sources"] = std::move(sources);
    doc["graph"] = {{"edge_rule", edge_rule_name(config.graph.edge_rule)},
                    {"w_body", config.graph.w_body},
                    {"w_hand", config.graph.w_hand},
                    {"audio_sample_rate", config.graph.audio_sample_rate},
                    {"fps", config.graph.fps}};
    doc["search"] = {{"w_low", config.search.weights.w_low},
                     {"w_high", config.search.weights.w_high},
                     {"lambda", config.search.lambda},
                     {"beam", config.search.beam_width}};
    doc["transition"] = {{"context_frames", config.transition.context_frames},
                         {"intermediate_frames", config.transition.intermediate_frames}};
    doc["homography"] = {{"matches", path_or_null(config.homography.matches)},
                         {"width", config.homography.width},
                         {"height", config.homography.height},
                         {"inlier_px", config.homography.inlier_px}};
    return doc;
}

}  // namespace

PipelineConfig read_pipeline_config(const std::string& path) {
    const ordered_json doc = parse_json_file(path);
    expect_keys(doc, path,
                {"seed", "out_dir", "audio_features", "sources", "graph", "search",
                 "transition", "homography"});
    PipelineConfig config;
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    config.out_dir = optional_path(doc, "out_dir");
    config.audio_features = optional_path(doc, "audio_features");

    if (doc.contains("sources")) {
        for (const auto& s : doc["sources"]) {
            expect_keys(s, path + " source",
                        {"video", "motion", "masks", "boxes", "features", "poses"});
            SourceSpec spec;
            spec.video = require(s, "video", path).get<std::string>();
            spec.motion = require(s, "motion", path).get<std::string>();
            spec.masks = optional_path(s, "masks");
            spec.boxes = optional_path(s, "boxes");
            spec.features = optional_path(s, "features");
            spec.poses = optional_path(s, "poses");
            config.sources.push_back(std::move(spec));
        }
    }
    if (doc.contains("graph")) {
        const auto& g = doc["graph"];
        expect_keys(g, path + " graph",
                    {"edge_rule", "w_body", "w_hand", "audio_sample_rate", "fps"});
        if (g.contains("edge_rule"))
            config.graph.edge_rule = edge_rule_from_name(g["edge_rule"].get<std::string>());
        if (g.contains("w_body")) config.graph.w_body = g["w_body"].get<double>();
        if (g.contains("w_hand")) config.graph.w_hand = g["w_hand"].get<double>();
        if (g.contains("audio_sample_rate"))
            config.graph.audio_sample_rate = g["audio_sample_rate"].get<double>();
        if (g.contains("fps")) config.graph.fps = g["fps"].get<double>();
    }
    if (doc.contains("search")) {
        const auto& s = doc["search"];
        expect_keys(s, path + " search", {"w_low", "w_high", "lambda", "beam"});
        if (s.contains("w_low")) config.search.weights.w_low = s["w_low"].get<double>();
        if (s.contains("w_high")) config.search.weights.w_high = s["w_high"].get<double>();
        if (s.contains("lambda")) config.search.lambda = s["lambda"].get<double>();
        if (s.contains("beam")) config.search.beam_width = s["beam"].get<int>();
    }
    if (doc.contains("transition")) {
        const auto& t = doc["transition"];
        expect_keys(t, path + " transition", {"context_frames", "intermediate_frames"});
        if (t.contains("context_frames"))
            config.transition.context_frames = t["context_frames"].get<int>();
        if (t.contains("intermediate_frames"))
            config.transition.intermediate_frames = t["intermediate_frames"].get<int>();
    }
    if (doc.contains("homography")) {
        const auto& h = doc["homography"];
        expect_keys(h, path + " homography", {"matches", "width", "height", "inlier_px"});
        config.homography.matches = optional_path(h, "matches");
        if (h.contains("width")) config.homography.width = h["width"].get<int>();
        if (h.contains("height")) config.homography.height = h["height"].get<int>();
        if (h.contains("inlier_px")) config.homography.inlier_px = h["inlier_px"].get<double>();
    }
    return config;
}

void write_pipeline_config(const std::string& path, const PipelineConfig& config) {
    write_json_file(path, pipeline_config_to_json(config));
}

std::string dump_pipeline_config_defaults() {
    PipelineConfig defaults;
    defaults.out_dir = "out";
    defaults.audio_features = "audio.feat";
    SourceSpec example;
    example.video = "video-id";
    example.motion = "video.motion";
    example.features = "video.feat";
    defaults.sources.push_back(example);
    return pipeline_config_to_json(defaults).dump(2) + "\n";
}

}  // namespace mograph
