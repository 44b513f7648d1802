#include "mograph/error.hpp"
#include "mograph/pose_blend.hpp"
#include "mograph/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace mograph;

namespace {

Pose2D pose_of(std::vector<Eigen::Vector2d> joints, std::vector<double> conf = {}) {
    Pose2D pose;
    pose.joints = std::move(joints);
    if (conf.empty()) conf.assign(pose.joints.size(), 1.0);
    pose.confidence = std::move(conf);
    return pose;
}

Pose2D random_pose(int joints, Rng& rng) {
    Pose2D pose;
    for (int j = 0; j < joints; ++j) {
        pose.joints.emplace_back(rng.next_double(), rng.next_double());
        pose.confidence.push_back(rng.next_double());
    }
    return pose;
}

}  // namespace

TEST_CASE("blending between identical poses repeats the pose") {
    const Pose2D p = pose_of({{0.3, 0.4}, {0.6, 0.1}}, {0.9, 0.5});
    const auto frames = linear_pose_blend(p, p, 8);
    REQUIRE(frames.size() == 8);
    for (const auto& f : frames) {
        REQUIRE(f.size() == 2);
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK((f.joints[j] - p.joints[j]).norm() == 0.0);
            CHECK(f.confidence[j] == p.confidence[j]);
        }
    }
}

TEST_CASE("eight intermediates between x=0 and x=0.9 land at 0.1 through 0.8") {
    const Pose2D start = pose_of({{0.0, 0.0}});
    const Pose2D end = pose_of({{0.9, 0.0}});
    const auto frames = linear_pose_blend(start, end, 8);
    REQUIRE(frames.size() == 8);
    for (int m = 0; m < 8; ++m) {
        CHECK(frames[m].joints[0].x() == doctest::Approx(0.1 * (m + 1)).epsilon(1e-12));
        CHECK(frames[m].joints[0].y() == 0.0);
    }
}

TEST_CASE("blended trajectories have vanishing second differences") {
    Rng rng(88);
    const Pose2D start = random_pose(5, rng);
    const Pose2D end = random_pose(5, rng);
    const auto frames = linear_pose_blend(start, end, 7);

    // Assemble the full path including the endpoints; a linear path has zero
    // discrete acceleration everywhere.
    std::vector<Pose2D> path;
    path.push_back(start);
    path.insert(path.end(), frames.begin(), frames.end());
    path.push_back(end);
    for (std::size_t f = 1; f + 1 < path.size(); ++f)
        for (std::size_t j = 0; j < 5; ++j) {
            const Eigen::Vector2d second = path[f + 1].joints[j] -
                                           2.0 * path[f].joints[j] +
                                           path[f - 1].joints[j];
            CHECK(second.norm() < 1e-12);
        }
}

TEST_CASE("confidences interpolate on the same schedule as joints") {
    const Pose2D start = pose_of({{0.0, 0.0}}, {0.0});
    const Pose2D end = pose_of({{0.0, 0.0}}, {1.0});
    const auto frames = linear_pose_blend(start, end, 4);
    for (int m = 0; m < 4; ++m)
        CHECK(frames[m].confidence[0] == doctest::Approx((m + 1) / 5.0).epsilon(1e-12));
}

TEST_CASE("a linear ground truth scores zero error and passes") {
    Rng rng(123);
    const Pose2D start = random_pose(4, rng);
    const Pose2D end = random_pose(4, rng);
    const auto blended = linear_pose_blend(start, end, 8);
    const auto truth = linear_pose_blend(start, end, 8);
    const BlendCheck check = blend_error(blended, truth);
    CHECK(check.error == 0.0);
    CHECK(check.linear_ok);
}

TEST_CASE("a uniform 0.01 offset scores exactly 0.01 and fails the default gate") {
    Rng rng(124);
    const Pose2D start = random_pose(3, rng);
    const Pose2D end = random_pose(3, rng);
    const auto blended = linear_pose_blend(start, end, 8);
    auto truth = blended;
    for (auto& frame : truth)
        for (auto& joint : frame.joints) joint.x() += 0.01;

    const BlendCheck check = blend_error(blended, truth);
    CHECK(check.error == doctest::Approx(0.01).epsilon(1e-12));
    CHECK_FALSE(check.linear_ok);
    // The verdict is threshold-relative: a looser gate accepts the same error.
    CHECK(blend_error(blended, truth, 0.02).linear_ok);
}

TEST_CASE("error against a curved ground truth matches a direct average") {
    // Ground truth follows a parabola in x; the blend is the chord.
    const Pose2D start = pose_of({{0.0, 0.0}});
    const Pose2D end = pose_of({{1.0, 0.0}});
    const int n = 8;
    const auto blended = linear_pose_blend(start, end, n);

    std::vector<Pose2D> truth;
    double expected = 0.0;
    for (int m = 0; m < n; ++m) {
        const double a = (m + 1) / static_cast<double>(n + 1);
        truth.push_back(pose_of({{a, a * (1.0 - a)}}));
        expected += a * (1.0 - a);  // vertical gap at this frame
    }
    expected /= n;

    const BlendCheck check = blend_error(blended, truth);
    CHECK(check.error == doctest::Approx(expected).epsilon(1e-12));
    CHECK_FALSE(check.linear_ok);
}

TEST_CASE("blend error is equivariant under rigid translation") {
    Rng rng(125);
    const Pose2D start = random_pose(6, rng);
    const Pose2D end = random_pose(6, rng);
    auto blended = linear_pose_blend(start, end, 5);
    std::vector<Pose2D> truth;
    for (const auto& frame : blended) {
        Pose2D t = frame;
        for (auto& joint : t.joints) joint += Eigen::Vector2d(0.002, -0.001);
        truth.push_back(t);
    }
    const double shift = Eigen::Vector2d(0.002, -0.001).norm();
    const BlendCheck base = blend_error(blended, truth);
    CHECK(base.error == doctest::Approx(shift).epsilon(1e-9));

    // Translating both tracks together leaves the error unchanged.
    for (auto& frame : blended)
        for (auto& joint : frame.joints) joint += Eigen::Vector2d(0.37, 0.24);
    for (auto& frame : truth)
        for (auto& joint : frame.joints) joint += Eigen::Vector2d(0.37, 0.24);
    CHECK(blend_error(blended, truth).error == doctest::Approx(shift).epsilon(1e-9));
}

TEST_CASE("mismatched shapes and malformed poses are rejected") {
    const Pose2D two = pose_of({{0.1, 0.1}, {0.2, 0.2}});
    const Pose2D three = pose_of({{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}});
    CHECK_THROWS_AS((void)linear_pose_blend(two, three, 8), ValidationError);
    CHECK_THROWS_AS((void)linear_pose_blend(two, two, -1), ValidationError);

    Pose2D no_conf = two;
    no_conf.confidence.pop_back();
    CHECK_THROWS_AS((void)linear_pose_blend(no_conf, two, 8), ValidationError);
    Pose2D bad_conf = two;
    bad_conf.confidence[0] = 1.5;
    CHECK_THROWS_AS((void)linear_pose_blend(bad_conf, two, 8), ValidationError);
    CHECK_THROWS_AS((void)linear_pose_blend(Pose2D{}, Pose2D{}, 8), ValidationError);

    const auto frames = linear_pose_blend(two, two, 4);
    auto truth = frames;
    truth.pop_back();
    CHECK_THROWS_AS((void)blend_error(frames, truth), ValidationError);
    CHECK_THROWS_AS((void)blend_error({}, {}), ValidationError);
}

TEST_CASE("zero intermediates is a legal no-op") {
    const Pose2D p = pose_of({{0.5, 0.5}});
    CHECK(linear_pose_blend(p, p, 0).empty());
}
