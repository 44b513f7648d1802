#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mograph {

/// Knobs for synthetic fixture generation. Only the fields relevant to the
/// requested kind are read.
struct FixtureParams {
    std::string out_dir;
    std::uint64_t seed = 7;

    // kind=motion
    int frames = 96;
    int joints = 8;

    // kind=homography
    int n_matches = 50;
    double outlier_fraction = 0.3;
    double inlier_px = 3.0;
    int width = 640;
    int height = 480;

    // kind=random-features
    int feature_frames = 4000;
    int feature_clips = 512;
    int d_low = 16;
    int d_high = 32;
};

/// Writes synthetic input files plus a `gt.json` sidecar holding the planted
/// ground truth, and returns the list of files written. Kinds:
///   motion          - smooth random joint sequence (binary + text variant)
///   graph           - two source videos whose graph is two disjoint 3-cycles
///   homography      - matches under a known H with planted outliers
///   random-features - i.i.d. feature tracks hitting the analytic baselines
///   pipeline        - two-video corpus with a planted unique optimal path
///   alignment       - frame/word token files with known alignment
std::vector<std::string> gen_fixtures(const std::string& kind, const FixtureParams& params);

}  // namespace mograph
