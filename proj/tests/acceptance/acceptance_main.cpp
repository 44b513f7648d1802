// Acceptance suite: one line per criterion, PASS/FAIL plus runtime. Each
// criterion is a self-contained check of a user-visible guarantee; the binary
// exits non-zero when any of them fails.

#include "mograph/align.hpp"
#include "mograph/contrastive.hpp"
#include "mograph/error.hpp"
#include "mograph/eval.hpp"
#include "mograph/fixtures.hpp"
#include "mograph/gradcheck.hpp"
#include "mograph/graph.hpp"
#include "mograph/homography.hpp"
#include "mograph/io.hpp"
#include "mograph/motion.hpp"
#include "mograph/pipeline.hpp"
#include "mograph/pose_blend.hpp"
#include "mograph/prune.hpp"
#include "mograph/retrieval.hpp"
#include "mograph/rng.hpp"
#include "mograph/rotation.hpp"

#include "helpers.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace mograph;

namespace {

template <class... Args>
std::string cat(Args&&... args) {
    std::ostringstream os;
    os.precision(10);
    (os << ... << args);
    return os.str();
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }
Outcome pass(std::string detail = "") { return {true, std::move(detail)}; }

/// Runs one criterion, prints its line, returns 0 on pass / 1 on fail.
/// A positive budget turns a slow pass into a failure.
int run_criterion(int index, const char* name, double budget_seconds,
                  const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome = fail(cat("exception: ", e.what()));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.ok && budget_seconds > 0.0 && seconds >= budget_seconds)
        outcome = fail(cat("runtime ", seconds, " s exceeds the ", budget_seconds,
                           " s budget"));
    std::printf("[%s] %d. %s (%.2f s)%s%s\n", outcome.ok ? "PASS" : "FAIL", index, name,
                seconds, outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
    std::fflush(stdout);
    return outcome.ok ? 0 : 1;
}

// --------------------------------------------------------------------------
// 1. Random-feature retrieval baselines.
// --------------------------------------------------------------------------

Outcome criterion_baselines() {
    test::TempDir tmp("accept-baselines");
    FixtureParams params;
    params.out_dir = tmp.dir();
    gen_fixtures("random-features", params);
    const FeatureTrack audio = read_features(tmp.file("audio.feat"));
    const FeatureTrack motion = read_features(tmp.file("motion.feat"));

    const EvalReport report =
        eval_retrieval(audio.low, motion.low, audio.high, motion.high, {});
    if (report.low_trials != 16000 || report.high_trials != 3000)
        return fail(cat("unexpected trial counts ", report.low_trials, " / ",
                        report.high_trials));
    const double low_off = std::abs(report.low_accuracy - 0.25);
    const double high_off = std::abs(report.high_accuracy - 1.0 / 256.0);
    if (low_off > 0.011)
        return fail(cat("low-level accuracy ", 100.0 * report.low_accuracy,
                        "% is more than 1.1 pp from 25%"));
    if (high_off > 0.0035)
        return fail(cat("high-level accuracy ", 100.0 * report.high_accuracy,
                        "% is more than 0.35 pp from 0.391%"));
    return pass(cat("low ", 100.0 * report.low_accuracy, "% over 16000 trials, high ",
                    100.0 * report.high_accuracy, "% over 3000 trials"));
}

// --------------------------------------------------------------------------
// 2. Pruning: one strongly connected component, independently verified.
// --------------------------------------------------------------------------

/// Kosaraju component count: forward DFS finish order, then reverse-graph
/// sweeps. Deliberately a different algorithm from the library's Tarjan pass.
int kosaraju_components(int n, const std::vector<GraphEdge>& edges) {
    std::vector<std::vector<int>> fwd(n), rev(n);
    for (const GraphEdge& e : edges) {
        fwd[e.src].push_back(e.dst);
        rev[e.dst].push_back(e.src);
    }
    std::vector<int> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            const int u = stack.back().first;
            if (stack.back().second < fwd[u].size()) {
                const int v = fwd[u][stack.back().second++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::fill(seen.begin(), seen.end(), 0);
    int components = 0;
    for (int i = n - 1; i >= 0; --i) {
        if (seen[order[i]]) continue;
        ++components;
        std::vector<int> stack{order[i]};
        seen[order[i]] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : rev[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
    }
    return components;
}

/// Strong connectivity by plain breadth-first reachability from node 0 over
/// the forward and the reversed edge set.
bool strongly_connected_bfs(const GestureGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    if (n == 0) return false;
    for (int direction = 0; direction < 2; ++direction) {
        std::vector<std::vector<int>> adj(n);
        for (const GraphEdge& e : graph.edges) {
            if (direction == 0)
                adj[e.src].push_back(e.dst);
            else
                adj[e.dst].push_back(e.src);
        }
        std::vector<char> seen(n, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        int reached = 1;
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    queue.push_back(v);
                }
        }
        if (reached != n) return false;
    }
    return true;
}

Outcome criterion_prune() {
    Rng rng(211);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 50 + static_cast<int>(rng.next_below(451));
        const double density = 0.5 + 2.5 * rng.next_double();
        const int m = static_cast<int>(std::lround(n * density));
        std::vector<MotionClipNode> nodes;
        nodes.reserve(n);
        for (int i = 0; i < n; ++i)
            nodes.push_back(test::const_node(i, "v", 4 * i, rng.next_double(),
                                             rng.next_double(), rng.next_double()));
        std::vector<std::pair<int, int>> edges;
        edges.reserve(m);
        for (int e = 0; e < m; ++e)
            edges.push_back({static_cast<int>(rng.next_below(n)),
                             static_cast<int>(rng.next_below(n))});
        const GestureGraph graph =
            test::make_graph(std::move(nodes), edges, EdgeKind::synthetic);

        const int expected = kosaraju_components(n, graph.edges);
        const PruneResult pruned = prune_graph(graph);
        if (pruned.components_before != expected)
            return fail(cat("trial ", trial, ": reported ", pruned.components_before,
                            " components, reference counted ", expected));
        if (pruned.bridge_pairs_added != expected - 1)
            return fail(cat("trial ", trial, ": ", pruned.bridge_pairs_added,
                            " bridge pairs for ", expected, " components"));
        if (pruned.graph.edges.size() !=
            graph.edges.size() + 2 * static_cast<std::size_t>(expected - 1))
            return fail(cat("trial ", trial, ": unexpected edge count after pruning"));
        if (!strongly_connected_bfs(pruned.graph))
            return fail(cat("trial ", trial,
                            ": pruned graph is not strongly connected (n=", n,
                            ", m=", m, ")"));

        const PruneResult again = prune_graph(pruned.graph);
        if (again.components_before != 1 || again.bridge_pairs_added != 0)
            return fail(cat("trial ", trial, ": pruning is not idempotent"));
        if (again.graph.edges.size() != pruned.graph.edges.size())
            return fail(cat("trial ", trial, ": idempotent rerun changed the edge set"));
        for (std::size_t i = 0; i < again.graph.edges.size(); ++i) {
            const GraphEdge& a = again.graph.edges[i];
            const GraphEdge& b = pruned.graph.edges[i];
            if (a.src != b.src || a.dst != b.dst || a.kind != b.kind ||
                a.distance != b.distance)
                return fail(cat("trial ", trial, ": idempotent rerun altered edge ", i));
        }
    }
    return pass("100 random digraphs, 50-500 nodes, verified against Kosaraju + BFS");
}

// --------------------------------------------------------------------------
// 3. Search optimality against exhaustive enumeration.
// --------------------------------------------------------------------------

FeatureTrack accept_track(Modality modality, const Eigen::MatrixXd& low,
                          const Eigen::MatrixXd& high) {
    FeatureTrack track;
    track.modality = modality;
    track.low = low;
    track.high = high;
    return track;
}

struct SearchInstance {
    GestureGraph graph;
    FeatureTrack audio;
    MotionBank bank;
};

SearchInstance random_search_instance(int n, int steps, Rng& rng) {
    SearchInstance inst;
    std::vector<MotionClipNode> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(test::const_node(i, "v", 4 * i, i));
    inst.graph = test::make_graph(std::move(nodes), {});
    for (int i = 0; i + 1 < n; ++i)
        inst.graph.edges.push_back({i, i + 1, 0.0, EdgeKind::original});
    // The wrap-around edge keeps every out-degree positive so full-length
    // walks always exist.
    inst.graph.edges.push_back({n - 1, 0, 0.0, EdgeKind::synthetic});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i + 1) continue;
            if (rng.next_double() < 0.4)
                inst.graph.edges.push_back(
                    {i, j, 0.0,
                     rng.next_double() < 0.2 ? EdgeKind::bridge : EdgeKind::synthetic});
        }
    const int dims = 6;
    inst.audio = accept_track(Modality::audio, test::random_matrix(4 * steps, dims, rng),
                              test::random_matrix(steps, 3, rng));
    inst.bank["v"] = accept_track(Modality::motion, test::random_matrix(4 * n, dims, rng),
                                  test::random_matrix(n, 3, rng));
    return inst;
}

struct ReferencePath {
    std::vector<int> node_ids;
    double total_score = 0.0;
    int non_original = 0;
    bool found = false;
};

/// Brute force over every length-`steps` walk with a precomputed score table,
/// applying the documented tie order: higher score, fewer non-original
/// transitions, then the ids a back-to-front lowest-id reconstruction picks.
ReferencePath exhaustive_reference(const SearchInstance& inst, const SearchConfig& config) {
    const int n = static_cast<int>(inst.graph.nodes.size());
    const int steps = static_cast<int>(inst.audio.low.rows()) / kNodeFrames;
    std::vector<std::vector<double>> score(n, std::vector<double>(steps));
    for (int node = 0; node < n; ++node)
        for (int t = 0; t < steps; ++t)
            score[node][t] =
                node_score(inst.graph.nodes[node], inst.audio,
                           inst.bank.at(inst.graph.nodes[node].video), t, config.weights);
    std::vector<std::vector<std::pair<int, EdgeKind>>> adj(n);
    for (const GraphEdge& e : inst.graph.edges) adj[e.src].push_back({e.dst, e.kind});

    ReferencePath best;
    std::vector<int> walk;
    walk.reserve(steps);
    const std::function<void(double, int)> visit = [&](double total, int penalties) {
        const int depth = static_cast<int>(walk.size());
        if (depth == steps) {
            bool better = !best.found;
            if (!better) {
                if (total != best.total_score) {
                    better = total > best.total_score;
                } else if (penalties != best.non_original) {
                    better = penalties < best.non_original;
                } else {
                    for (int i = steps - 1; i >= 0; --i)
                        if (walk[i] != best.node_ids[i]) {
                            better = walk[i] < best.node_ids[i];
                            break;
                        }
                }
            }
            if (better) {
                best.node_ids = walk;
                best.total_score = total;
                best.non_original = penalties;
                best.found = true;
            }
            return;
        }
        if (depth == 0) {
            for (int s = 0; s < n; ++s) {
                walk.push_back(s);
                visit(score[s][0], 0);
                walk.pop_back();
            }
            return;
        }
        for (const auto& [dst, kind] : adj[walk.back()]) {
            const bool penalized = kind != EdgeKind::original;
            walk.push_back(dst);
            visit(total + score[dst][depth] - (penalized ? config.lambda : 0.0),
                  penalties + (penalized ? 1 : 0));
            walk.pop_back();
        }
    };
    visit(0.0, 0);
    return best;
}

Outcome criterion_search() {
    Rng rng(307);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(7));     // 2..8 nodes
        const int steps = 1 + static_cast<int>(rng.next_below(5)); // 1..5 steps
        const SearchInstance inst = random_search_instance(n, steps, rng);
        SearchConfig config;
        config.lambda = rng.next_double() < 0.5 ? 0.0 : 0.3;

        const RetrievedPath dp = dp_search(inst.graph, inst.audio, inst.bank, config);
        const ReferencePath oracle = exhaustive_reference(inst, config);
        if (!oracle.found) return fail(cat("trial ", trial, ": oracle found no walk"));
        if (dp.node_ids != oracle.node_ids)
            return fail(cat("trial ", trial, ": path differs from the exhaustive optimum"));
        if (std::abs(dp.total_score - oracle.total_score) > 1e-9)
            return fail(cat("trial ", trial, ": score ", dp.total_score,
                            " vs exhaustive ", oracle.total_score));
        if (dp.non_original_count != oracle.non_original)
            return fail(cat("trial ", trial, ": non-original count differs"));

        const RetrievedPath beam =
            beam_search(inst.graph, inst.audio, inst.bank, n, config);
        if (beam.node_ids != dp.node_ids ||
            std::abs(beam.total_score - dp.total_score) > 1e-12)
            return fail(cat("trial ", trial, ": full-width beam differs from the DP"));
    }
    return pass("200 instances up to 8 nodes x 5 steps match exhaustive enumeration");
}

// --------------------------------------------------------------------------
// 4. Contrastive losses: finite-difference gradients and closed forms.
// --------------------------------------------------------------------------

Outcome criterion_gradients() {
    Rng rng(401);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        const int B = 3 + static_cast<int>(rng.next_below(6));
        const int D = 4 + static_cast<int>(rng.next_below(5));
        const Eigen::MatrixXd a = test::random_matrix(B, D, rng);
        const Eigen::MatrixXd m = test::random_matrix(B, D, rng);
        const GlobalLossResult result = global_infonce(a, m, 0.07);
        const double err = max_gradient_error(
            [](const std::vector<Eigen::MatrixXd>& in) {
                return global_infonce(in[0], in[1], 0.07).loss;
            },
            {a, m}, {result.grad_audio, result.grad_motion}, 1e-5, 32, 7);
        worst = std::max(worst, err);
        if (err >= 1e-4)
            return fail(cat("clip-level batch ", trial, ": gradient error ", err));
    }
    for (int trial = 0; trial < 25; ++trial) {
        const int F = 33 + static_cast<int>(rng.next_below(12));
        const int D = 3 + static_cast<int>(rng.next_below(4));
        const Eigen::MatrixXd a = test::random_matrix(F, D, rng);
        const Eigen::MatrixXd m = test::random_matrix(F, D, rng);
        const LocalLossResult result = local_frame_contrastive(a, m, {}, 0.07);
        const double err = max_gradient_error(
            [](const std::vector<Eigen::MatrixXd>& in) {
                return local_frame_contrastive(in[0], in[1], {}, 0.07).loss;
            },
            {a, m}, {result.grad_audio, result.grad_motion}, 1e-5, 32, 7);
        worst = std::max(worst, err);
        if (err >= 1e-4)
            return fail(cat("frame-level batch ", trial, ": gradient error ", err));
    }

    for (const int B : {2, 5, 16}) {
        const Eigen::MatrixXd rows = Eigen::MatrixXd::Ones(B, 4);
        const double loss = global_infonce(rows, rows, 0.07).loss;
        if (std::abs(loss - std::log(static_cast<double>(B))) > 1e-9)
            return fail(cat("uniform clip-level loss ", loss, " != ln ", B));
    }
    const Eigen::MatrixXd track = Eigen::MatrixXd::Ones(40, 3);
    const LocalLossResult uniform = local_frame_contrastive(track, track, {}, 0.07);
    if (std::abs(uniform.loss - std::log(25.0)) > 1e-9)
        return fail(cat("uniform frame-level loss ", uniform.loss, " != ln 25"));
    if (uniform.anchors != 8)
        return fail(cat("expected 8 full-band anchors in 40 frames, got ", uniform.anchors));

    // Stop-gradient contract: the clip-level term must contribute exactly
    // nothing to the per-frame gradients, with or without the flag.
    EmbeddingBatch batch;
    const int B = 3;
    batch.audio_cls = test::random_matrix(B, 5, rng);
    batch.motion_cls = test::random_matrix(B, 5, rng);
    for (int b = 0; b < B; ++b) {
        batch.audio_low.push_back(test::random_matrix(36, 4, rng));
        batch.motion_low.push_back(test::random_matrix(36, 4, rng));
    }
    batch.grad_mask_low = true;
    const CombinedLossResult combined = combined_loss(batch, {});
    for (int b = 0; b < B; ++b) {
        const LocalLossResult local =
            local_frame_contrastive(batch.audio_low[b], batch.motion_low[b], {}, batch.tau);
        if ((combined.grad_audio_low[b] - local.grad_audio / B).cwiseAbs().maxCoeff() !=
                0.0 ||
            (combined.grad_motion_low[b] - local.grad_motion / B).cwiseAbs().maxCoeff() !=
                0.0)
            return fail(cat("clip-level term leaked gradient into track ", b));
    }
    EmbeddingBatch flipped = batch;
    flipped.grad_mask_low = false;
    const CombinedLossResult other = combined_loss(flipped, {});
    if (other.loss != combined.loss)
        return fail("the stop-gradient flag changed the loss value");
    for (int b = 0; b < B; ++b)
        if ((other.grad_audio_low[b] - combined.grad_audio_low[b]).cwiseAbs().maxCoeff() !=
            0.0)
            return fail("the stop-gradient flag changed per-frame gradients");

    return pass(cat("50 batches, max relative gradient error ", worst));
}

// --------------------------------------------------------------------------
// 5. Homography recovery and closed-form flow fields.
// --------------------------------------------------------------------------

std::vector<Eigen::Vector2d> scatter_points(int count, Rng& rng, double extent = 64.0) {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i)
        pts.emplace_back(extent * rng.next_double(), extent * rng.next_double());
    return pts;
}

Eigen::Matrix3d random_projective(Rng& rng) {
    while (true) {
        Eigen::Matrix3d H;
        H << 1.0 + 0.2 * rng.next_gaussian(), 0.2 * rng.next_gaussian(),
            8.0 * rng.next_gaussian(), 0.2 * rng.next_gaussian(),
            1.0 + 0.2 * rng.next_gaussian(), 8.0 * rng.next_gaussian(),
            5e-4 * rng.next_gaussian(), 5e-4 * rng.next_gaussian(), 1.0;
        if (std::abs(H.determinant()) > 0.1) return H;
    }
}

PointMatches matches_under(const Eigen::Matrix3d& H,
                           const std::vector<Eigen::Vector2d>& src) {
    PointMatches m;
    m.src = src;
    m.width = 64;
    m.height = 64;
    for (const auto& p : src) m.dst.push_back(apply_homography(H, p));
    return m;
}

Outcome criterion_homography() {
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(500 + trial);
        const Eigen::Matrix3d H_true = random_projective(rng);
        const PointMatches matches = matches_under(H_true, scatter_points(40, rng));
        const HomographyEstimate est = estimate_homography(matches);
        if (est.inliers.size() != matches.size())
            return fail(cat("noise-free trial ", trial, ": dropped matches"));
        const Eigen::Matrix3d H_inv = est.H.inverse();
        for (std::size_t i = 0; i < matches.size(); ++i) {
            const double err = symmetric_reprojection_error(est.H, H_inv, matches.src[i],
                                                            matches.dst[i]);
            if (err > 1e-6)
                return fail(cat("noise-free trial ", trial, ": reprojection ", err));
        }
    }

    int exact_sets = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(900 + trial);
        const Eigen::Matrix3d H_true = random_projective(rng);
        PointMatches matches = matches_under(H_true, scatter_points(40, rng));
        std::vector<int> expected;
        for (int i = 0; i < 40; ++i) {
            if (i % 10 < 3) {
                const double angle = 6.283185307179586 * rng.next_double();
                const double radius = 15.0 + 25.0 * rng.next_double();
                matches.dst[i] +=
                    radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
            } else {
                expected.push_back(i);
            }
        }
        const HomographyEstimate est = estimate_homography(matches);
        if (est.inliers != expected) continue;
        const Eigen::Matrix3d H_inv = est.H.inverse();
        bool tight = true;
        for (int i : expected)
            if (symmetric_reprojection_error(est.H, H_inv, matches.src[i],
                                             matches.dst[i]) > 1e-3)
                tight = false;
        if (tight) ++exact_sets;
    }
    if (exact_sets < 95)
        return fail(cat("only ", exact_sets,
                        "/100 outlier trials recovered the exact inlier set"));

    const HomographyFlow identity =
        background_flow(Eigen::Matrix3d::Identity(), 7, 5, RleMask{});
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x)
            if (std::abs(identity.dx(x, y)) > 1e-9 || std::abs(identity.dy(x, y)) > 1e-9)
                return fail("identity flow is not zero");
    Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
    T(0, 2) = 5.0;
    T(1, 2) = 3.0;
    const HomographyFlow shifted = background_flow(T, 8, 6, RleMask{});
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 8; ++x)
            if (std::abs(shifted.dx(x, y) - 5.0) > 1e-9 ||
                std::abs(shifted.dy(x, y) - 3.0) > 1e-9)
                return fail("translation flow does not match the closed form");

    return pass(cat("20 noise-free fits within 1e-6; ", exact_sets,
                    "/100 exact inlier sets under 30% outliers"));
}

// --------------------------------------------------------------------------
// 6. Token alignment: worked example plus gap-filling properties.
// --------------------------------------------------------------------------

Outcome criterion_alignment() {
    FrameTokenSequence frames;
    frames.tokens = {"", "", "T", "", "", "h", "e", "", "F", "i", "r", "s", "t"};
    WordTokenSequence words;
    words.words = {"CLS", "The", "First", "POS"};
    words.special_markers = {"CLS", "POS"};
    const FrameWordAlignment aligned = align_tokens(frames, words);
    const std::vector<int> expected = {-1, -1, 1, -1, -1, 1, 1, -1, 2, 2, 2, 2, 2};
    if (aligned.word_index != expected)
        return fail("the worked token example produced a different frame mapping");

    Rng rng(179);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(24));
        std::vector<int> idx(n, -1);
        int value = static_cast<int>(rng.next_below(4));
        bool any = false;
        for (int i = 0; i < n; ++i) {
            if (rng.next_double() < 0.4) {
                idx[i] = value;
                any = true;
                if (rng.next_double() < 0.3) ++value;
            }
        }
        if (!any) idx[static_cast<int>(rng.next_below(n))] = value;

        FrameWordAlignment sparse;
        sparse.word_index = idx;
        sparse.filled.assign(idx.size(), false);
        const FrameWordAlignment filled = fill_gaps(sparse);
        if (filled.word_index.size() != idx.size())
            return fail(cat("fill trial ", trial, ": frame count changed"));
        for (int i = 0; i < n; ++i) {
            if (filled.word_index[i] < 0)
                return fail(cat("fill trial ", trial, ": frame ", i, " left unassigned"));
            if (i > 0 && filled.word_index[i] < filled.word_index[i - 1])
                return fail(cat("fill trial ", trial, ": output is not monotone"));
            if (idx[i] >= 0 && filled.word_index[i] != idx[i])
                return fail(cat("fill trial ", trial, ": assigned frame ", i, " changed"));
        }
        const FrameWordAlignment again = fill_gaps(filled);
        if (again.word_index != filled.word_index)
            return fail(cat("fill trial ", trial, ": filling is not idempotent"));
    }
    return pass("worked example exact; 1000 random gap fillings monotone and idempotent");
}

// --------------------------------------------------------------------------
// 7. Motion features: rotation encoding round trip and derivative oracles.
// --------------------------------------------------------------------------

Outcome criterion_motion_features() {
    Rng rng(701);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Matrix3d R = test::random_rotation(rng);
        const Eigen::Matrix3d back = rotmat_from_6d(rotmat_to_6d(R));
        worst = std::max(worst, (back - R).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-9)
        return fail(cat("6d rotation round trip error ", worst, " exceeds 1e-9"));

    JointSequence seq;
    seq.fps = 30.0;
    seq.frames = 12;
    seq.joints = 3;
    for (int t = 0; t < seq.frames; ++t)
        for (int j = 0; j < seq.joints; ++j) {
            seq.positions.emplace_back(rng.next_gaussian(), rng.next_gaussian(),
                                       rng.next_gaussian());
            seq.rotations.push_back(test::random_rotation(rng));
        }
    const Motion15D feat = build_15d(seq);
    if (feat.frames != seq.frames || feat.joints != seq.joints ||
        feat.data.size() != static_cast<std::size_t>(seq.frames) * seq.joints * 15)
        return fail("feature tensor shape is not frames x joints x 15");

    for (int t = 0; t < seq.frames; ++t)
        for (int j = 0; j < seq.joints; ++j) {
            const double* row = feat.at(t, j);
            const Eigen::Vector3d pos = seq.positions[seq.index(t, j)];
            if (Eigen::Vector3d(row[0], row[1], row[2]) != pos)
                return fail(cat("position channels differ at frame ", t));

            const int tv = std::min(t, seq.frames - 2);  // last frame repeats
            const Eigen::Vector3d vel =
                (seq.positions[seq.index(tv + 1, j)] - seq.positions[seq.index(tv, j)]) *
                seq.fps;
            if ((Eigen::Vector3d(row[3], row[4], row[5]) - vel).cwiseAbs().maxCoeff() >
                1e-12)
                return fail(cat("velocity differs from the forward difference at frame ",
                                t));

            const Eigen::Matrix3d R = seq.rotations[seq.index(t, j)];
            const std::array<double, 6> six = rotmat_to_6d(R);
            for (int c = 0; c < 6; ++c)
                if (row[6 + c] != six[c])
                    return fail(cat("rotation channels differ at frame ", t));

            const Eigen::Matrix3d rel =
                seq.rotations[seq.index(tv, j)].transpose() *
                seq.rotations[seq.index(tv + 1, j)];
            const Eigen::AngleAxisd aa(rel);
            const Eigen::Vector3d ang = aa.angle() * aa.axis() * seq.fps;
            if ((Eigen::Vector3d(row[12], row[13], row[14]) - ang).cwiseAbs().maxCoeff() >
                1e-6)
                return fail(cat("angular velocity differs from the axis-angle oracle ",
                                "at frame ", t));
        }
    return pass(cat("1000 rotations round-trip within ", worst,
                    "; derivative channels match brute force"));
}

// --------------------------------------------------------------------------
// 8. Interpolation linearity check.
// --------------------------------------------------------------------------

Outcome criterion_blend() {
    Rng rng(801);
    const int joints = 5, n = 8;
    Pose2D start, end;
    for (int j = 0; j < joints; ++j) {
        start.joints.emplace_back(rng.next_double(), rng.next_double());
        end.joints.emplace_back(rng.next_double(), rng.next_double());
        start.confidence.push_back(1.0);
        end.confidence.push_back(1.0);
    }
    const std::vector<Pose2D> blended = linear_pose_blend(start, end, n);

    std::vector<Pose2D> truth(n);
    for (int m = 0; m < n; ++m) {
        const double alpha = static_cast<double>(m + 1) / (n + 1);
        for (int j = 0; j < joints; ++j) {
            truth[m].joints.push_back(start.joints[j] +
                                      alpha * (end.joints[j] - start.joints[j]));
            truth[m].confidence.push_back(1.0);
        }
    }
    const BlendCheck linear = blend_error(blended, truth);
    if (linear.error != 0.0 || !linear.linear_ok)
        return fail(cat("linear ground truth gave error ", linear.error));

    std::vector<Pose2D> offset = truth;
    for (Pose2D& pose : offset)
        for (auto& joint : pose.joints) joint.x() += 0.01;
    const BlendCheck shifted = blend_error(blended, offset);
    if (std::abs(shifted.error - 0.01) > 1e-12 || shifted.linear_ok)
        return fail(cat("constant 0.01 offset gave error ", shifted.error, ", ok=",
                        shifted.linear_ok));
    return pass("error 0 / accepted on linear truth; 0.01 / rejected on offset truth");
}

// --------------------------------------------------------------------------
// 9. Pipeline determinism and file-format round trips.
// --------------------------------------------------------------------------

PipelineConfig load_fixture_config(const test::TempDir& tmp) {
    PipelineConfig config = read_pipeline_config(tmp.file("pipeline.json"));
    auto absolutize = [&](std::string& p) {
        if (!p.empty() && !std::filesystem::path(p).is_absolute()) p = tmp.file(p);
    };
    absolutize(config.audio_features);
    for (SourceSpec& s : config.sources) {
        absolutize(s.motion);
        absolutize(s.masks);
        absolutize(s.boxes);
        absolutize(s.features);
        absolutize(s.poses);
    }
    absolutize(config.homography.matches);
    absolutize(config.out_dir);
    return config;
}

Outcome criterion_determinism() {
    test::TempDir tmp("accept-pipeline");
    FixtureParams params;
    params.out_dir = tmp.dir();
    gen_fixtures("pipeline", params);

    PipelineConfig config = load_fixture_config(tmp);
    config.out_dir = tmp.file("run_a");
    run_pipeline(config);
    config.out_dir = tmp.file("run_b");
    run_pipeline(config);

    const auto listing = [](const std::string& dir) {
        std::vector<std::string> names;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            names.push_back(entry.path().filename().string());
        std::sort(names.begin(), names.end());
        return names;
    };
    const std::vector<std::string> names = listing(tmp.file("run_a"));
    if (names != listing(tmp.file("run_b")))
        return fail("the two runs produced different file sets");
    if (names.size() < 3) return fail("the pipeline run produced too few files");
    for (const std::string& name : names)
        if (test::slurp(tmp.file("run_a/" + name)) != test::slurp(tmp.file("run_b/" + name)))
            return fail(cat("rerun changed the bytes of ", name));

    // Write -> read -> write must reproduce each container byte for byte.
    Rng rng(901);
    std::vector<std::pair<std::string, std::function<bool()>>> formats;
    const auto stable = [&](const std::string& tag, auto&& write1, auto&& reread_write) {
        formats.push_back({tag, [&tmp, tag, write1, reread_write]() {
                               const std::string f1 = tmp.file(tag + ".1");
                               const std::string f2 = tmp.file(tag + ".2");
                               write1(f1);
                               reread_write(f1, f2);
                               return test::slurp(f1) == test::slurp(f2);
                           }});
    };

    JointSequence seq;
    seq.fps = 30.0;
    seq.frames = 6;
    seq.joints = 2;
    for (int t = 0; t < seq.frames; ++t)
        for (int j = 0; j < seq.joints; ++j) {
            seq.positions.emplace_back(rng.next_gaussian(), rng.next_gaussian(),
                                       rng.next_gaussian());
            seq.rotations.push_back(test::random_rotation(rng));
        }
    stable("motion-binary", [&](const std::string& f) { write_motion_binary(f, seq); },
           [](const std::string& f, const std::string& g) {
               write_motion_binary(g, read_motion(f));
           });
    stable("motion-text", [&](const std::string& f) { write_motion_text(f, seq); },
           [](const std::string& f, const std::string& g) {
               write_motion_text(g, read_motion(f));
           });

    FeatureTrack track;
    track.modality = Modality::motion;
    track.fps = 25.0;
    track.window_hop = 4;
    track.low = test::random_matrix(6, 3, rng);
    track.high = test::random_matrix(2, 5, rng);
    stable("features", [&](const std::string& f) { write_features(f, track); },
           [](const std::string& f, const std::string& g) {
               write_features(g, read_features(f));
           });

    Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
    T(0, 2) = 5.0;
    T(1, 2) = 3.0;
    const HomographyFlow flow = background_flow(T, 6, 4, RleMask{});
    stable("flow", [&](const std::string& f) { write_flow(f, flow); },
           [](const std::string& f, const std::string& g) {
               const FlowData data = read_flow(f);
               HomographyFlow back;
               back.width = data.width;
               back.height = data.height;
               back.flow = data.flow;
               write_flow(g, back);
           });

    std::vector<RleMask> masks;
    for (int f = 0; f < 3; ++f) {
        std::vector<std::uint8_t> pixels(8 * 6, 0);
        for (auto& p : pixels) p = rng.next_double() < 0.35 ? 1 : 0;
        masks.push_back(RleMask::from_pixels(8, 6, pixels));
    }
    stable("masks", [&](const std::string& f) { write_masks(f, masks); },
           [](const std::string& f, const std::string& g) {
               write_masks(g, read_masks(f));
           });

    std::vector<std::vector<Box>> boxes(3);
    for (auto& frame : boxes)
        for (std::uint64_t b = 0; b < rng.next_below(3); ++b) {
            const double x = 8.0 * rng.next_double(), y = 6.0 * rng.next_double();
            frame.push_back({x, y, x + 2.0 * rng.next_double(), y + rng.next_double()});
        }
    stable("boxes", [&](const std::string& f) { write_boxes(f, boxes); },
           [](const std::string& f, const std::string& g) {
               write_boxes(g, read_boxes(f));
           });

    PointMatches matches;
    matches.width = 64;
    matches.height = 48;
    for (int i = 0; i < 12; ++i) {
        matches.src.emplace_back(64.0 * rng.next_double(), 48.0 * rng.next_double());
        matches.dst.emplace_back(64.0 * rng.next_double(), 48.0 * rng.next_double());
    }
    stable("matches", [&](const std::string& f) { write_matches(f, matches); },
           [](const std::string& f, const std::string& g) {
               write_matches(g, read_matches(f));
           });

    Pose2D pose;
    pose.joints = {{0.25, 0.5}, {0.75, 0.4}};
    pose.confidence = {1.0, 0.625};
    stable("pose", [&](const std::string& f) { write_pose(f, pose); },
           [](const std::string& f, const std::string& g) { write_pose(g, read_pose(f)); });
    const std::vector<Pose2D> pose_frames = {pose, pose};
    stable("pose-frames",
           [&](const std::string& f) { write_pose_frames(f, pose_frames); },
           [](const std::string& f, const std::string& g) {
               write_pose_frames(g, read_pose_frames(f));
           });

    FrameWordAlignment alignment;
    alignment.word_index = {-1, 0, 1, 1};
    alignment.filled = {false, false, true, false};
    stable("alignment", [&](const std::string& f) { write_alignment(f, alignment); },
           [](const std::string& f, const std::string& g) {
               write_alignment(g, read_alignment(f));
           });

    GraphDocument doc;
    doc.graph = test::make_graph(
        {test::const_node(0, "v", 0, 0.0), test::const_node(1, "v", 4, 1.0)}, {{0, 1}});
    doc.graph.thresholds = {0.5, 0.25};
    doc.sources.push_back({"v", "v.motion", "", ""});
    stable("graph", [&](const std::string& f) { write_graph(f, doc); },
           [](const std::string& f, const std::string& g) {
               write_graph(g, read_graph(f, false));
           });

    RetrievedPath path;
    path.node_ids = {0, 1, 6};
    path.per_step_scores = {1.5, 2.25, 0.75};
    path.transition_kinds = {EdgeKind::original, EdgeKind::synthetic};
    path.total_score = 4.5;
    path.non_original_count = 1;
    stable("path", [&](const std::string& f) { write_path(f, path); },
           [](const std::string& f, const std::string& g) { write_path(g, read_path(f)); });

    TransitionManifest manifest;
    manifest.fps = 30.0;
    SourceSegment seg_a{"a", 0, 8, 0, 4266};
    InterpolateSegment jump;
    jump.from_video = "a";
    jump.from_begin = 4;
    jump.from_end = 8;
    jump.to_video = "b";
    jump.to_begin = 0;
    jump.to_end = 4;
    jump.kind = "bridge";
    jump.poses_file = "p.json";
    jump.flow_file = "f.bin";
    SourceSegment seg_b{"b", 0, 4, 4266, 6399};
    manifest.segments = {seg_a, jump, seg_b};
    stable("manifest", [&](const std::string& f) { write_manifest(f, manifest); },
           [](const std::string& f, const std::string& g) {
               write_manifest(g, read_manifest(f));
           });

    const PipelineConfig fixture_config = read_pipeline_config(tmp.file("pipeline.json"));
    stable("config",
           [&](const std::string& f) { write_pipeline_config(f, fixture_config); },
           [](const std::string& f, const std::string& g) {
               write_pipeline_config(g, read_pipeline_config(f));
           });

    EvalReport report;
    report.low_accuracy = 0.25;
    report.high_accuracy = 1.0 / 256.0;
    report.low_trials = 16000;
    report.high_trials = 3000;
    report.seed = 7;
    report.low_radius = 0.0103;
    report.high_radius = 0.0035;
    stable("report", [&](const std::string& f) { write_eval_report(f, report); },
           [&](const std::string&, const std::string& g) { write_eval_report(g, report); });

    for (const auto& [tag, check] : formats)
        if (!check()) return fail(cat("the ", tag, " container did not round-trip"));

    return pass(cat("rerun byte-identical across ", names.size(), " output files; ",
                    formats.size(), " containers round-trip"));
}

}  // namespace

int main() {
    std::printf("gesture motion-graph engine: acceptance criteria\n");
    int failed = 0;
    failed += run_criterion(1, "retrieval baselines on random features", 30.0,
                            criterion_baselines);
    failed += run_criterion(2, "pruning yields one strongly connected component", 10.0,
                            criterion_prune);
    failed += run_criterion(3, "search is exhaustively optimal", 5.0, criterion_search);
    failed += run_criterion(4, "contrastive gradients and closed forms", 0.0,
                            criterion_gradients);
    failed += run_criterion(5, "homography recovery and background flow", 0.0,
                            criterion_homography);
    failed += run_criterion(6, "token alignment and gap filling", 0.0,
                            criterion_alignment);
    failed += run_criterion(7, "per-joint motion features", 0.0,
                            criterion_motion_features);
    failed += run_criterion(8, "transition linearity check", 0.0, criterion_blend);
    failed += run_criterion(9, "pipeline determinism and container round trips", 0.0,
                            criterion_determinism);
    std::printf("%d/9 criteria passed\n", 9 - failed);
    return failed == 0 ? 0 : 1;
}
