#include <doctest.h>

#include <cmath>
#include <random>

#include "omfc/constants.hpp"
#include "omfc/core.hpp"

using namespace omfc;

namespace {
double hermitian_min_eig(const Mat2& s) {
  const double a = std::real(s.m00), d = std::real(s.m11);
  const double tr = a + d;
  const double det = a * d - std::norm(s.m01);
  return 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
}
}  // namespace

TEST_CASE("frequency grid construction") {
  CHECK_THROWS_AS(FrequencyGrid::from_band_hz(1.0, 1.0, 2, GridSpacing::linear),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid::from_band_hz(10.0, 1.0, 5, GridSpacing::linear),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid::from_band_hz(-1.0, 1.0, 5, GridSpacing::linear),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid::from_band_hz(1.0, 10.0, 1, GridSpacing::linear),
                  std::invalid_argument);

  const auto lin = FrequencyGrid::from_band_hz(1.0, 10.0, 2, GridSpacing::linear);
  CHECK(lin.size() == 2);
  CHECK(lin[0] == doctest::Approx(two_pi * 1.0).epsilon(1e-15));
  CHECK(lin[1] == doctest::Approx(two_pi * 10.0).epsilon(1e-15));

  const auto log3 =
      FrequencyGrid::from_band_hz(1.0, 100.0, 3, GridSpacing::logarithmic);
  CHECK(log3[0] == doctest::Approx(two_pi * 1.0).epsilon(1e-15));
  CHECK(log3[1] == doctest::Approx(two_pi * 10.0).epsilon(1e-14));
  CHECK(log3[2] == doctest::Approx(two_pi * 100.0).epsilon(1e-15));
}

TEST_CASE("rotation matrices") {
  const Mat2 id = rotation(0.0);
  CHECK(std::abs(id.m00 - 1.0) < 1e-15);
  CHECK(std::abs(id.m01) < 1e-15);

  const Mat2 quarter = rotation(pi / 2.0);
  CHECK(std::real(quarter.m01) == doctest::Approx(-1.0));
  CHECK(std::real(quarter.m10) == doctest::Approx(1.0));
  CHECK(std::abs(quarter.det() - 1.0) < 1e-15);

  // R(a) R(b) = R(a+b), and R(x) R(-x) = I.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double a = angle(rng), b = angle(rng);
    const Mat2 lhs = rotation(a) * rotation(b);
    const Mat2 rhs = rotation(a + b);
    CHECK((lhs - rhs).max_abs() < 1e-12);
    CHECK((rotation(a) * rotation(-a) - Mat2::identity()).max_abs() < 1e-12);
  }
}

TEST_CASE("squeezed spectra") {
  CHECK_THROWS_AS(squeezed_spectrum({-0.1, 0.0}), std::invalid_argument);

  const Mat2 vac = squeezed_spectrum({0.0, 0.0});
  CHECK((vac - Mat2::identity()).max_abs() < 1e-15);

  // 12 dB: r = ln(10^{12/20}), phase quadrature squeezed at angle 0.
  const SqueezedState s12 = SqueezedState::from_db(12.0);
  CHECK(s12.r == doctest::Approx(1.3815510557964275).epsilon(1e-12));
  const Mat2 m = squeezed_spectrum(s12);
  CHECK(std::real(m.m00) == doctest::Approx(std::pow(10.0, 1.2)).epsilon(1e-12));
  CHECK(std::real(m.m11) == doctest::Approx(std::pow(10.0, -1.2)).epsilon(1e-12));
  CHECK(std::abs(m.m01) < 1e-12);

  // Rotation by pi/2 swaps the quadratures.
  const Mat2 swapped = squeezed_spectrum({1.0, pi / 2.0});
  CHECK(std::real(swapped.m00) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(std::real(swapped.m11) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
}

TEST_CASE("dB conversions") {
  CHECK(db_from_variance(1.0) == doctest::Approx(0.0));
  CHECK(db_from_variance(std::pow(10.0, -1.2)) == doctest::Approx(-12.0));
  // 13 dB squeezing corresponds to variance about 0.05.
  CHECK(db_from_variance(0.05) == doctest::Approx(-13.0102999566).epsilon(1e-10));
  CHECK_THROWS_AS(db_from_variance(0.0), std::invalid_argument);
  CHECK_THROWS_AS(db_from_variance(-1.0), std::invalid_argument);

  for (double db = -60.0; db <= 60.0; db += 7.5)
    CHECK(db_from_variance(variance_from_db(db)) ==
          doctest::Approx(db).epsilon(1e-12));
}

TEST_CASE("propagate identities") {
  const auto grid = FrequencyGrid::from_band_hz(1.0, 100.0, 8,
                                                GridSpacing::logarithmic);
  const auto sq = SpectralDensity::uniform(
      grid, squeezed_spectrum(SqueezedState::from_db(12.0)));

  SUBCASE("identity transfer is a no-op") {
    const auto out = propagate(sq, QuadratureTransfer::uniform(grid, Mat2::identity()));
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((out.s[i] - sq.s[i]).max_abs() < 1e-15);
  }
  SUBCASE("zero transfer plus a vacuum channel gives vacuum") {
    NoiseChannel ch{QuadratureTransfer::uniform(grid, Mat2::identity()),
                    SpectralDensity::vacuum(grid)};
    const auto out = propagate(sq, QuadratureTransfer::uniform(grid, Mat2::zero()),
                               {ch});
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((out.s[i] - Mat2::identity()).max_abs() < 1e-15);
  }
  SUBCASE("rotations preserve the eigenvalue pair") {
    const auto out =
        propagate(sq, QuadratureTransfer::uniform(grid, rotation(0.7)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double tr = std::real(out.s[i].m00 + out.s[i].m11);
      const double det = std::real(out.s[i].det());
      CHECK(tr == doctest::Approx(std::pow(10.0, 1.2) + std::pow(10.0, -1.2))
                      .epsilon(1e-12));
      CHECK(det == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("grid mismatch is rejected") {
    const auto other = FrequencyGrid::from_band_hz(1.0, 100.0, 9,
                                                   GridSpacing::logarithmic);
    CHECK_THROWS_AS(
        propagate(sq, QuadratureTransfer::uniform(other, Mat2::identity())),
        std::invalid_argument);
  }
  SUBCASE("hermiticity and positivity are preserved") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      Mat2 t{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
             cplx(u(rng), u(rng))};
      const auto out = propagate(sq, QuadratureTransfer::uniform(grid, t));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(out.s[i].m01 - std::conj(out.s[i].m10)) < 1e-12);
        CHECK(hermitian_min_eig(out.s[i]) > -1e-12);
      }
    }
  }
  SUBCASE("a lossless unitary transfer maps vacuum to vacuum") {
    // Unitary built from a rotation and quadrature phases.
    const Mat2 u = rotation(0.3) * Mat2::diag(std::polar(1.0, 0.9),
                                              std::polar(1.0, -0.4));
    const auto out = propagate(SpectralDensity::vacuum(grid),
                               QuadratureTransfer::uniform(grid, u));
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((out.s[i] - Mat2::identity()).max_abs() < 1e-12);
  }
}

TEST_CASE("loss mixing") {
  const auto grid = FrequencyGrid::from_band_hz(1.0, 10.0, 4,
                                                GridSpacing::logarithmic);
  const auto t = QuadratureTransfer::uniform(grid, Mat2::identity());

  CHECK_THROWS_AS(mix_loss(t, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mix_loss(t, 1.0), std::invalid_argument);

  SUBCASE("zero loss leaves the transfer untouched") {
    const auto mixed = mix_loss(t, 0.0);
    CHECK(!mixed.vacuum.has_value());
    CHECK((mixed.transfer.m[0] - Mat2::identity()).max_abs() < 1e-15);
  }
  SUBCASE("loss preserves vacuum") {
    const auto mixed = mix_loss(t, 0.5);
    REQUIRE(mixed.vacuum.has_value());
    const auto out = propagate(SpectralDensity::vacuum(grid), mixed.transfer,
                               {*mixed.vacuum});
    for (std::size_t i = 0; i < grid.size(); ++i)
      CHECK((out.s[i] - Mat2::identity()).max_abs() < 1e-14);
  }
  SUBCASE("half a percent of loss on a 12 dB squeezed quadrature") {
    const auto mixed = mix_loss(t, 0.005);
    REQUIRE(mixed.vacuum.has_value());
    const auto out = propagate(
        SpectralDensity::uniform(grid,
                                 squeezed_spectrum(SqueezedState::from_db(12.0))),
        mixed.transfer, {*mixed.vacuum});
    // 0.995 * 10^{-1.2} + 0.005 (direct two-channel arithmetic)
    CHECK(std::real(out.s[0].m11) ==
          doctest::Approx(0.06778025577577924).epsilon(1e-12));
  }
}
