#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

namespace mograph {

/// Verifies analytic gradients against central differences. Up to
/// `samples_per_matrix` coordinates of each input (all of them for small
/// inputs) are perturbed by +-step; the result is the maximum
/// |analytic - fd| / max(|fd|, floor) over all probed coordinates.
/// The floor bounds the denominator away from zero: a central difference at
/// step h carries about |loss| * eps / (2h) of absolute rounding noise
/// (~1e-10 here), so ratios against coordinates smaller than the floor would
/// measure that noise rather than the gradient. Deterministic for a fixed
/// seed.
double max_gradient_error(
    const std::function<double(const std::vector<Eigen::MatrixXd>&)>& loss,
    const std::vector<Eigen::MatrixXd>& inputs,
    const std::vector<Eigen::MatrixXd>& analytic, double step = 1e-5,
    int samples_per_matrix = 64, std::uint64_t seed = 7, double floor = 1e-4);

}  // namespace mograph
