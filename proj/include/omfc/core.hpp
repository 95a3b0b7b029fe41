#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace omfc {

using cplx = std::complex<double>;

enum class GridSpacing { linear, logarithmic };

/// Ordered set of sideband angular frequencies (rad/s). Strictly increasing,
/// all positive, at least two points. Value type: cheap to copy, immutable.
class FrequencyGrid {
 public:
  FrequencyGrid(std::vector<double> omega, GridSpacing spacing);

  /// Build a grid from an ordinary-frequency band [f_min, f_max] in Hz with
  /// n points (endpoints included). Internally stored as Omega = 2*pi*f.
  static FrequencyGrid from_band_hz(double f_min_hz, double f_max_hz,
                                    std::size_t n, GridSpacing spacing);

  const std::vector<double>& omega() const { return omega_; }
  double operator[](std::size_t i) const { return omega_[i]; }
  std::size_t size() const { return omega_.size(); }
  GridSpacing spacing() const { return spacing_; }

  bool operator==(const FrequencyGrid& other) const {
    return omega_ == other.omega_;
  }

 private:
  std::vector<double> omega_;
  GridSpacing spacing_;
};

/// 2x2 complex matrix acting on (amplitude, phase) quadrature pairs.
struct Mat2 {
  cplx m00{0.0}, m01{0.0}, m10{0.0}, m11{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }
  static Mat2 diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

  Mat2 adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }
  cplx det() const { return m00 * m11 - m01 * m10; }
  double max_abs() const;

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
  }
  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
  }
  friend Mat2 operator*(cplx s, const Mat2& a) {
    return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
  }
};

/// Real orthogonal quadrature rotation [[cos,-sin],[sin,cos]].
Mat2 rotation(double angle);

/// Gaussian squeezed state: r in e-folds, angle in rad. At angle 0 the phase
/// quadrature is squeezed (variance e^{-2r}) and the amplitude quadrature
/// anti-squeezed (e^{+2r}).
struct SqueezedState {
  double r = 0.0;
  double angle = 0.0;

  /// x dB of squeezing <-> squeezed-quadrature variance 10^{-x/10}.
  static SqueezedState from_db(double level_db, double angle = 0.0);
  double squeezed_variance() const;
  double antisqueezed_variance() const;
};

/// Single-sided quadrature spectral density of the state, vacuum = identity:
/// S = R(angle) diag(e^{+2r}, e^{-2r}) R(angle)^T. Throws for r < 0.
Mat2 squeezed_spectrum(const SqueezedState& state);

double db_from_variance(double variance);  // 10 log10(v); v > 0
double variance_from_db(double db);

/// Per-frequency 2x2 complex transfer matrix on a grid.
struct QuadratureTransfer {
  FrequencyGrid grid;
  std::vector<Mat2> m;

  static QuadratureTransfer uniform(const FrequencyGrid& g, const Mat2& mat);
};

/// Per-frequency 2x2 Hermitian spectral density on a grid (vacuum = I).
struct SpectralDensity {
  FrequencyGrid grid;
  std::vector<Mat2> s;

  static SpectralDensity uniform(const FrequencyGrid& g, const Mat2& mat);
  static SpectralDensity vacuum(const FrequencyGrid& g);
};

/// An independent noise input: coupling transfer and source spectrum.
struct NoiseChannel {
  QuadratureTransfer transfer;
  SpectralDensity source;
};

/// S_out = T S_in T^dag + sum_i N_i S_i N_i^dag. All operands must share the
/// grid; mismatch throws.
SpectralDensity propagate(const SpectralDensity& input,
                          const QuadratureTransfer& transfer,
                          const std::vector<NoiseChannel>& extra = {});

/// Result of splitting a transfer into a lossy branch plus vacuum admixture.
struct LossMix {
  QuadratureTransfer transfer;
  std::optional<NoiseChannel> vacuum;
};

/// Scale transfer by sqrt(1-eps) and append an independent vacuum channel of
/// amplitude sqrt(eps). eps = 0 returns the transfer unchanged, no channel.
LossMix mix_loss(const QuadratureTransfer& transfer, double power_loss);

}  // namespace omfc
