#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace cvreal {

using Index = Eigen::Index;
using Complex = std::complex<double>;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace cvreal
