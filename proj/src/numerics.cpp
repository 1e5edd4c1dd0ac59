#include "cvreal/numerics.hpp"

#include <cmath>

namespace cvreal {

namespace {

constexpr double kDualSwitch = 2.0;

// Poisson-dual terms exp(-2 pi^2 n^2 w^2); below 1e-300 after n = 1 once
// w >= kDualSwitch.
template <class Term>
double dual_sum(double width, Term term) {
  double sum = 0.0;
  for (int n = 1; n <= 4; ++n) sum += 2.0 * term(static_cast<double>(n), std::exp(-2.0 * kPi * kPi * n * n * width * width));
  return sum;
}

// sum_k k^power exp(-k^2 / (2 w^2)) by direct summation, power 0 or 2.
double direct_sum(double width, int power) {
  const double a = 1.0 / (2.0 * width * width);
  double sum = power == 0 ? 1.0 : 0.0;
  for (long k = 1;; ++k) {
    const double kk = static_cast<double>(k);
    const double weight = power == 0 ? 1.0 : kk * kk;
    const double term = weight * std::exp(-a * kk * kk);
    sum += 2.0 * term;
    // Past the peak of k^power exp(-a k^2) successive ratios shrink, so the
    // tail is bounded by a geometric series with the current ratio.
    const double next_weight = power == 0 ? 1.0 : (kk + 1.0) * (kk + 1.0);
    const double ratio = next_weight / weight * std::exp(-a * (2.0 * kk + 1.0));
    if (ratio < 1.0 && 2.0 * term * ratio / (1.0 - ratio) <= 1e-15 * sum) break;
  }
  return sum;
}

}  // namespace

double theta3_gaussian_norm(double width) {
  if (width < 0.0 || std::isnan(width)) throw DomainError("width must be nonnegative");
  if (width == 0.0) return 1.0;
  if (width < kDualSwitch) return direct_sum(width, 0);
  const double scale = std::sqrt(2.0 * kPi) * width;
  return scale * (1.0 + dual_sum(width, [](double, double g) { return g; }));
}

double theta3_second_moment(double width) {
  if (width < 0.0 || std::isnan(width)) throw DomainError("width must be nonnegative");
  if (width == 0.0) return 0.0;
  if (width < kDualSwitch) return direct_sum(width, 2);
  const double w2 = width * width;
  const double scale = std::sqrt(2.0 * kPi) * width;
  return scale * (w2 + dual_sum(width, [&](double n, double g) { return (w2 - 4.0 * kPi * kPi * n * n * w2 * w2) * g; }));
}

double n_approx(double width) {
  if (width < 0.0 || std::isnan(width)) throw DomainError("width must be nonnegative");
  const auto narrow = [](double w) {
    if (w == 0.0) return 1.0;
    const double a = 1.0 / (2.0 * w * w);
    return 1.0 + 2.0 * (std::exp(-a) + std::exp(-4.0 * a) + std::exp(-9.0 * a));
  };
  const auto wide = [](double w) { return std::sqrt(2.0 * kPi * w * w); };
  if (width < 1.0) return narrow(width);
  if (width > 1.0) return wide(width);
  return std::max(narrow(width), wide(width));
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DimensionError("slope fit needs matching samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs distinct abscissae");
  return sxy / sxx;
}

}  // namespace cvreal
