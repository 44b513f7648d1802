#include "mograph/rotation.hpp"

#include "mograph/error.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace mograph {

double rotation_residual(const Eigen::Matrix3d& R) {
    const double ortho = (R.transpose() * R - Eigen::Matrix3d::Identity()).norm();
    const double det = std::abs(R.determinant() - 1.0);
    return std::max(ortho, det);
}

void validate_rotation(const Eigen::Matrix3d& R, double tol) {
    const double ortho = (R.transpose() * R - Eigen::Matrix3d::Identity()).norm();
    const double det = R.determinant();
    if (ortho > tol || std::abs(det - 1.0) > tol) {
        std::ostringstream msg;
        msg << "matrix is not a rotation: orthogonality residual " << ortho
            << ", determinant " << det;
        throw ValidationError(msg.str());
    }
}

std::array<double, 6> rotmat_to_6d(const Eigen::Matrix3d& R) {
    validate_rotation(R);
    return {R(0, 0), R(1, 0), R(2, 0), R(0, 1), R(1, 1), R(2, 1)};
}

Eigen::Matrix3d rotmat_from_6d(const std::array<double, 6>& v) {
    Eigen::Vector3d a(v[0], v[1], v[2]);
    Eigen::Vector3d b(v[3], v[4], v[5]);
    const double na = a.norm();
    if (na < 1e-12) {
        throw ValidationError("6d rotation: first column is numerically zero");
    }
    a /= na;
    b -= a.dot(b) * a;
    const double nb = b.norm();
    if (nb < 1e-12) {
        throw ValidationError("6d rotation: columns are numerically collinear");
    }
    b /= nb;
    Eigen::Matrix3d R;
    R.col(0) = a;
    R.col(1) = b;
    R.col(2) = a.cross(b);
    return R;
}

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& R) {
    const double tr = std::clamp((R.trace() - 1.0) * 0.5, -1.0, 1.0);
    const double angle = std::acos(tr);
    if (angle < 1e-10) {
        // First-order: skew part already equals angle * axis.
        return Eigen::Vector3d(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)) * 0.5;
    }
    if (angle > M_PI - 1e-6) {
        // Near pi the skew part degenerates; recover the axis from the
        // symmetric part R + I = 2(1 - cos) axis axis^T + ...
        Eigen::Matrix3d S = 0.5 * (R + Eigen::Matrix3d::Identity());
        int k = 0;
        S.diagonal().maxCoeff(&k);
        Eigen::Vector3d axis = S.col(k) / std::sqrt(std::max(S(k, k), 1e-16));
        axis.normalize();
        // Sign of the axis is fixed by the (possibly tiny) skew part.
        const Eigen::Vector3d skew(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
        if (skew.dot(axis) < 0.0) {
            axis = -axis;
        }
        return axis * angle;
    }
    const double scale = angle / (2.0 * std::sin(angle));
    return Eigen::Vector3d(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)) * scale;
}

Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w) {
    const double angle = w.norm();
    if (angle < 1e-12) {
        Eigen::Matrix3d K;
        K << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
        return Eigen::Matrix3d::Identity() + K;
    }
    const Eigen::Vector3d axis = w / angle;
    Eigen::Matrix3d K;
    K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * K * K;
}

}  // namespace mograph
