#include "mograph/gradcheck.hpp"

#include "mograph/error.hpp"
#include "mograph/rng.hpp"

#include <algorithm>
#include <cmath>

namespace mograph {

double max_gradient_error(
    const std::function<double(const std::vector<Eigen::MatrixXd>&)>& loss,
    const std::vector<Eigen::MatrixXd>& inputs,
    const std::vector<Eigen::MatrixXd>& analytic, double step, int samples_per_matrix,
    std::uint64_t seed, double floor) {
    if (inputs.size() != analytic.size())
        throw ValidationError("gradient check needs one analytic gradient per input");
    if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive");

    double worst = 0.0;
    std::vector<Eigen::MatrixXd> probe = inputs;
    for (std::size_t m = 0; m < inputs.size(); ++m) {
        if (analytic[m].rows() != inputs[m].rows() || analytic[m].cols() != inputs[m].cols())
            throw ValidationError("analytic gradient shape does not match its input");
        const Eigen::Index total = inputs[m].size();
        if (total == 0) continue;

        std::vector<Eigen::Index> coords;
        if (total <= samples_per_matrix) {
            coords.resize(total);
            for (Eigen::Index i = 0; i < total; ++i) coords[i] = i;
        } else {
            Rng rng = Rng::stream(seed, m);
            for (int i = 0; i < samples_per_matrix; ++i)
                coords.push_back(static_cast<Eigen::Index>(
                    rng.next_below(static_cast<std::uint64_t>(total))));
            std::sort(coords.begin(), coords.end());
            coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        }

        for (Eigen::Index flat : coords) {
            const Eigen::Index r = flat % inputs[m].rows();
            const Eigen::Index c = flat / inputs[m].rows();
            const double saved = probe[m](r, c);
            probe[m](r, c) = saved + step;
            const double up = loss(probe);
            probe[m](r, c) = saved - step;
            const double down = loss(probe);
            probe[m](r, c) = saved;

            const double fd = (up - down) / (2.0 * step);
            const double err =
                std::abs(analytic[m](r, c) - fd) / std::max(std::abs(fd), floor);
            worst = std::max(worst, err);
        }
    }
    return worst;
}

}  // namespace mograph
