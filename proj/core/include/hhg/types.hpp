#pragma once

#include <complex>

#include <Eigen/Dense>

namespace hhg {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace hhg
