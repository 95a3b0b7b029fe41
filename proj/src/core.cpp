#include "omfc/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "omfc/constants.hpp"

namespace omfc {

FrequencyGrid::FrequencyGrid(std::vector<double> omega, GridSpacing spacing)
    : omega_(std::move(omega)), spacing_(spacing) {
  if (omega_.size() < 2)
    throw std::invalid_argument("frequency grid needs at least 2 points");
  double prev = 0.0;
  for (double w : omega_) {
    if (!std::isfinite(w) || w <= 0.0)
      throw std::invalid_argument("frequency grid points must be finite and > 0");
    if (w <= prev)
      throw std::invalid_argument("frequency grid must be strictly increasing");
    prev = w;
  }
}

FrequencyGrid FrequencyGrid::from_band_hz(double f_min_hz, double f_max_hz,
                                          std::size_t n, GridSpacing spacing) {
  if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz))
    throw std::invalid_argument(
        "grid bounds must satisfy 0 < f_min < f_max");
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> omega(n);
  if (spacing == GridSpacing::linear) {
    const double step = (f_max_hz - f_min_hz) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      omega[i] = two_pi * (f_min_hz + double(i) * step);
  } else {
    const double ratio = std::log(f_max_hz / f_min_hz) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      omega[i] = two_pi * f_min_hz * std::exp(double(i) * ratio);
  }
  // Pin the endpoints exactly regardless of rounding in the interior.
  omega.front() = two_pi * f_min_hz;
  omega.back() = two_pi * f_max_hz;
  return FrequencyGrid(std::move(omega), spacing);
}

double Mat2::max_abs() const {
  return std::max(std::max(std::abs(m00), std::abs(m01)),
                  std::max(std::abs(m10), std::abs(m11)));
}

Mat2 rotation(double angle) {
  if (!std::isfinite(angle))
    throw std::invalid_argument("rotation angle must be finite");
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

SqueezedState SqueezedState::from_db(double level_db, double angle) {
  if (level_db < 0.0)
    throw std::invalid_argument("squeeze level in dB must be >= 0");
  return {level_db / 20.0 * std::log(10.0), angle};
}

double SqueezedState::squeezed_variance() const { return std::exp(-2.0 * r); }
double SqueezedState::antisqueezed_variance() const {
  return std::exp(2.0 * r);
}

Mat2 squeezed_spectrum(const SqueezedState& state) {
  if (state.r < 0.0)
    throw std::invalid_argument("squeeze factor r must be >= 0");
  const Mat2 d = Mat2::diag(state.antisqueezed_variance(),
                            state.squeezed_variance());
  const Mat2 rot = rotation(state.angle);
  return rot * d * rot.adjoint();
}

double db_from_variance(double variance) {
  if (!(variance > 0.0))
    throw std::invalid_argument("variance must be > 0 for dB conversion");
  return 10.0 * std::log10(variance);
}

double variance_from_db(double db) { return std::pow(10.0, db / 10.0); }

QuadratureTransfer QuadratureTransfer::uniform(const FrequencyGrid& g,
                                               const Mat2& mat) {
  return {g, std::vector<Mat2>(g.size(), mat)};
}

SpectralDensity SpectralDensity::uniform(const FrequencyGrid& g,
                                         const Mat2& mat) {
  return {g, std::vector<Mat2>(g.size(), mat)};
}

SpectralDensity SpectralDensity::vacuum(const FrequencyGrid& g) {
  return uniform(g, Mat2::identity());
}

SpectralDensity propagate(const SpectralDensity& input,
                          const QuadratureTransfer& transfer,
                          const std::vector<NoiseChannel>& extra) {
  if (!(input.grid == transfer.grid))
    throw std::invalid_argument("propagate: grid mismatch");
  for (const auto& ch : extra) {
    if (!(ch.transfer.grid == input.grid) || !(ch.source.grid == input.grid))
      throw std::invalid_argument("propagate: channel grid mismatch");
  }
  SpectralDensity out{input.grid, std::vector<Mat2>(input.grid.size())};
  for (std::size_t i = 0; i < input.grid.size(); ++i) {
    Mat2 s = transfer.m[i] * input.s[i] * transfer.m[i].adjoint();
    for (const auto& ch : extra)
      s = s + ch.transfer.m[i] * ch.source.s[i] * ch.transfer.m[i].adjoint();
    out.s[i] = s;
  }
  return out;
}

LossMix mix_loss(const QuadratureTransfer& transfer, double power_loss) {
  if (!(power_loss >= 0.0) || power_loss >= 1.0)
    throw std::invalid_argument("power loss must lie in [0, 1)");
  if (power_loss == 0.0) return {transfer, std::nullopt};
  const double t = std::sqrt(1.0 - power_loss);
  QuadratureTransfer scaled{transfer.grid,
                            std::vector<Mat2>(transfer.grid.size())};
  for (std::size_t i = 0; i < transfer.m.size(); ++i)
    scaled.m[i] = cplx(t) * transfer.m[i];
  const Mat2 coupling = Mat2::diag(std::sqrt(power_loss),
                                   std::sqrt(power_loss));
  NoiseChannel vac{QuadratureTransfer::uniform(transfer.grid, coupling),
                   SpectralDensity::vacuum(transfer.grid)};
  return {std::move(scaled), std::move(vac)};
}

}  // namespace omfc
