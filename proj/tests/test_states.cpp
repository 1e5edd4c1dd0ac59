#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cvreal/error.hpp"
#include "cvreal/numerics.hpp"
#include "cvreal/states.hpp"

using namespace cvreal;

TEST_CASE("pure state validation") {
  const GridSpec g = make_grid(0.1, 5);
  CHECK_THROWS_AS(PureState(g, CVector::Ones(4) / 2.0), DimensionError);
  CHECK_THROWS_AS(PureState(g, CVector::Ones(5)), DomainError);
  CHECK_NOTHROW(PureState(g, CVector::Ones(5) / std::sqrt(5.0)));
  const PureState s(g, CVector::Ones(5) / std::sqrt(5.0));
  CHECK(std::abs(s[2] - Complex(1.0 / std::sqrt(5.0))) < 1e-15);
  CHECK_THROWS_AS(s[3], IndexError);
}

TEST_CASE("Gaussian state moments follow from its spec") {
  const GridSpec g = make_grid(0.1, 401);
  for (double w : {2.0, 5.0, 12.5}) {
    for (int kb : {0, -30, 41}) {
      for (int lb : {0, 3, -7}) {
        const PureState s = gaussian_state(g, {kb, lb, w});
        const Moments m = moments(s);
        CHECK(s.coeffs().norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.mean_q == doctest::Approx(kb * g.delta_q()).epsilon(1e-10));
        CHECK(m.sd_q == doctest::Approx(w * g.delta_q()).epsilon(1e-10));
        CHECK(m.mean_p == doctest::Approx(lb * g.delta_p()).epsilon(1e-9));
        // Minimum uncertainty: dQ dP = hbar / 2 when the lattice resolves the packet.
        CHECK(m.sd_q * m.sd_p == doctest::Approx(0.5 * g.hbar()).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("eta matches the moments of the discretized packet") {
  // Momentum width from the state and position width from eta.
  const GridSpec g = make_grid(1.0, 1001);
  for (double w : {0.3, 0.5, 1.0 / std::sqrt(2.0), 0.9, 1.0, 1.5, 3.0}) {
    const PureState s = gaussian_state(g, {0, 0, w});
    const Moments m = moments(s);
    CHECK(m.sd_q / (w * g.delta_q()) == doctest::Approx(eta(w)).epsilon(1e-10));
  }
}

TEST_CASE("eta values") {
  // sqrt(2 sum k^2 e^{-k^2} / theta_3(e^{-1})) * sqrt(2), evaluated to 30 digits with mpmath.
  CHECK(eta(1.0 / std::sqrt(2.0)) == doctest::Approx(0.998978609213250834).epsilon(1e-14));
  CHECK(std::abs(eta(1.0 / std::sqrt(2.0)) - 0.9989) < 5e-4);
  for (int i = 10; i <= 50; ++i) CHECK(std::abs(eta(0.1 * i) - 1.0) <= 1e-3);
  CHECK(eta(0.0) == 0.0);
  CHECK_THROWS_AS(eta(-0.1), DomainError);
  // Narrow packets occupy a single slot and have eta -> 0.
  CHECK(eta(0.05) < 1e-10);
  CHECK(eta_approx(2.0) == 1.0);
  CHECK(eta_approx(1.0) == 1.0);
  for (double w : {0.1, 0.4, 0.7071, 0.95}) CHECK(eta_approx(w) == doctest::Approx(eta(w)).epsilon(1e-3));
}

TEST_CASE("leakage and center validation") {
  const GridSpec g = make_grid(0.1, 41);
  CHECK_THROWS_AS(gaussian_state(g, {0, 0, 5.0}), LeakageError);
  CHECK_THROWS_AS(gaussian_state(g, {21, 0, 1.0}), IndexError);
  CHECK_THROWS_AS(gaussian_state(g, {0, 0, -1.0}), DomainError);
  CHECK(gaussian_leakage(g, {0, 0, 1.0}) < 1e-40);
  CHECK(gaussian_leakage(g, {0, 0, 5.0}) > 1e-8);
  CHECK_NOTHROW(gaussian_state(g, {0, 0, 3.0}));
  // Mass beyond |k| > 20 for a width-5 packet, by direct tail summation.
  double tail = 0.0, all = 0.0;
  for (int k = -400; k <= 400; ++k) {
    const double wgt = std::exp(-k * k / 50.0);
    all += wgt;
    if (std::abs(k) > 20) tail += wgt;
  }
  CHECK(gaussian_leakage(g, {0, 0, 5.0}) == doctest::Approx(tail / all).epsilon(1e-10));
}

TEST_CASE("uniform states") {
  const GridSpec g = make_grid(1.0, 11);
  CHECK_THROWS_AS(uniform_state(g, 4), DomainError);
  CHECK_THROWS_AS(uniform_state(g, 0), DomainError);
  CHECK_THROWS_AS(uniform_state(g, 13), DomainError);
  const PureState s = uniform_state(g, 5);
  for (int k = -5; k <= 5; ++k) {
    CHECK(std::norm(s[k]) == doctest::Approx(std::abs(k) <= 2 ? 0.2 : 0.0));
  }
}

TEST_CASE("window probabilities of a resolved Gaussian") {
  const GridSpec g = make_grid(0.05, 401);
  const double width = 20.0;
  const PureState s = gaussian_state(g, {0, 0, width});
  const double dq = width * g.delta_q();
  CHECK(window_probability(s, 0.0, dq) == doctest::Approx(std::erf(0.5 / std::sqrt(2.0))).epsilon(2e-4));
  const double wide = std::sqrt(2.0 * kPi * std::exp(1.0)) * dq;
  CHECK(window_probability(s, 0.0, wide) == doctest::Approx(std::erf(0.5 * std::sqrt(kPi * std::exp(1.0)))).epsilon(2e-4));
  CHECK(window_probability(s, 0.0, 1e6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(window_probability(s, 0.0, 0.0) == 0.0);
}

TEST_CASE("forward-difference momentum picks up an imaginary residual") {
  // hbar / (8 Delta^2 dq) + l^2 dp^2 dq / (2 hbar), to O(Delta^-4).
  for (int xi : {401, 1601}) {
    const GridSpec g = make_grid(0.1, xi);
    const double w = 16.0;
    for (int l : {0, 1, 3}) {
      const PureState s = gaussian_state(g, {0, l, w});
      const double im = forward_difference_mean_p(s).imag();
      const double pred = g.hbar() / (8 * w * w * g.delta_q()) + l * l * g.delta_p() * g.delta_p() * g.delta_q() / (2 * g.hbar());
      CHECK(im == doctest::Approx(pred).epsilon(1e-3));
      // A residual linear in l misses it once l > 1.
      const double linear = g.hbar() / (8 * w * w * g.delta_q()) + l * g.delta_p() * g.delta_p() * g.delta_q() / (2 * g.hbar());
      if (l == 3 && xi == 401) CHECK(std::abs(im - linear) / im > 0.05);
      // The spectral mean is real and equals l dp.
      CHECK(moments(s).mean_p == doctest::Approx(l * g.delta_p()).epsilon(1e-9));
    }
  }
}

TEST_CASE("coherent packet at an off-lattice center") {
  const GridSpec g = make_grid(0.05, 801);
  const PureState s = coherent_packet(g, 0.523, 1.7, 1.0);
  const Moments m = moments(s);
  CHECK(m.mean_q == doctest::Approx(0.523).epsilon(1e-10));
  CHECK(m.sd_q == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.mean_p == doctest::Approx(1.7).epsilon(1e-8));
  CHECK(m.sd_p == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(coherent_packet(g, 0.0, 0.0, 5.0), LeakageError);
  CHECK_THROWS_AS(coherent_packet(g, 100.0, 0.0, 1.0), IndexError);
}

TEST_CASE("density matrix of a pure state") {
  const GridSpec g = make_grid(0.1, 31);
  const CMatrix rho = density_matrix(gaussian_state(g, {2, 1, 2.0}));
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("text serialization round-trips exactly") {
  const GridSpec g = make_grid(0.1, 41);
  const PureState s = gaussian_state(g, {-2, 3, 1.7});
  std::stringstream buf;
  write_state(buf, s);
  const PureState back = read_state(buf, g);
  CHECK((back.coeffs() - s.coeffs()).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream bad("0 1.0\n");
  CHECK_THROWS_AS(read_state(bad, g), DomainError);
  std::stringstream out_of_range("21 1 0\n");
  CHECK_THROWS_AS(read_state(out_of_range, g), IndexError);
}
