#pragma once

#include <Eigen/Core>
#include <array>

namespace mograph {

/// Orthonormality / determinant residual of R against SO(3); 0 for an exact
/// rotation matrix.
double rotation_residual(const Eigen::Matrix3d& R);

/// Throws ValidationError naming the offending residual when R is not a
/// rotation matrix within `tol`.
void validate_rotation(const Eigen::Matrix3d& R, double tol = 1e-6);

/// Continuous 6D encoding: first two columns of R, column-major
/// [r00 r10 r20 r01 r11 r21].
std::array<double, 6> rotmat_to_6d(const Eigen::Matrix3d& R);

/// Gram-Schmidt reconstruction of the 6D encoding back to SO(3).
Eigen::Matrix3d rotmat_from_6d(const std::array<double, 6>& v);

/// Axis-angle vector of a rotation matrix (matrix log), angle in [0, pi].
Eigen::Vector3d rotation_log(const Eigen::Matrix3d& R);

/// Rotation matrix of an axis-angle vector (matrix exp, Rodrigues).
Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w);

}  // namespace mograph
