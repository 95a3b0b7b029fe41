#pragma once

#include <array>
#include <utility>

#include "omfc/core.hpp"

namespace omfc {

/// Main laser interferometer in the two-photon quadrature picture.
struct IfoParams {
  double test_mass_kg = 40.0;
  double arm_length_m = 4000.0;
  double arm_power_w = 8e5;
  double carrier_wavelength_m = 1.064e-6;
  double gamma_ifo = 0.0;          // effective detector half-bandwidth (rad/s)
  double itm_transmission = 0.014;
  double srm_transmission = 0.35;  // informational
  double circulator_loss = 0.005;  // single-trip, applied per pass
  double external_loss = 0.005;    // readout-side loss
  double omfc_offset_rad_s = 0.0;  // converter carrier separation, informational

  static IfoParams sample();  // reference parameters, calibrated bandwidth

  double carrier_omega() const;
  /// Bandwidth from the arm cavity alone, T_ITM c / (4 L).
  double arm_only_bandwidth() const;
  void validate() const;
};

/// Effective half-bandwidth that reproduces a target kappa^2 at one anchor
/// frequency (closed-form root of the defining quadratic).
double calibrated_gamma_ifo(const IfoParams& p, double kappa_sq_anchor,
                            double anchor_omega);

/// Ponderomotive coupling kappa = 16 w0 I_c g / (M W^2 (W^2 + g^2) L c).
/// Diverges at W = 0, which is rejected.
double kimble_kappa(const IfoParams& p, double omega);

/// Standard quantum limit as a strain power spectral density,
/// S_SQL = 8 hbar / (M W^2 L^2)  [1/Hz].
double sql_psd(const IfoParams& p, double omega);

/// Homodyne angle nulling the back-action quadrature: arctan(kappa).
double variational_angle(const IfoParams& p, double omega);

/// Per-frequency complex 2-vector (signal transfer into the quadratures,
/// already referenced to strain: units 1/sqrt(1/Hz)).
struct SignalVector {
  FrequencyGrid grid;
  std::vector<std::array<cplx, 2>> v;
};

/// Lossless in-out relation: b1 = e^{2ib} a1, b2 = e^{2ib}(a2 - kappa a1) +
/// e^{ib} sqrt(2 kappa) h/h_SQL, with b = arctan(W/gamma_ifo). The signal
/// vector carries the coefficient of h, i.e. the 1/h_SQL normalization.
std::pair<QuadratureTransfer, SignalVector> ifo_in_out(
    const IfoParams& p, const FrequencyGrid& grid);

struct LossyIfo {
  QuadratureTransfer transfer;
  SignalVector signal;
  std::vector<NoiseChannel> channels;
};

/// In-out relation with both outputs and the signal scaled by sqrt(1-eps)
/// plus an independent vacuum channel of amplitude sqrt(eps).
LossyIfo lossy_ifo_in_out(const IfoParams& p, const FrequencyGrid& grid,
                          double power_loss);

/// Strain-referenced noise PSD of the homodyne readout b_theta = b1 sin +
/// b2 cos at per-frequency angles theta: (w^dag S w)/|w . s|^2. Throws when
/// the signal projection vanishes (cos theta = 0 for a phase-carried signal).
std::vector<double> homodyne_readout(const SpectralDensity& propagated,
                                     const SignalVector& signal,
                                     const std::vector<double>& theta);

/// Same readout, but with the quadratic form evaluated per input channel as
/// (T^dag w)^dag S_in (T^dag w). Projecting before squaring avoids the
/// catastrophic cancellation of the evaded back-action term at large kappa.
std::vector<double> homodyne_readout(const QuadratureTransfer& transfer,
                                     const SpectralDensity& input,
                                     const std::vector<NoiseChannel>& channels,
                                     const SignalVector& signal,
                                     const std::vector<double>& theta);

/// Added readout noise from a homodyne-angle error delta_theta around the
/// variational angle, linearized: delta_b = (1+kappa^2) cos(theta_vr)
/// delta_theta a1. Valid for |delta_theta| < 0.1.
struct AngleErrorNoise {
  double added_psd = 0.0;       // strain-referenced, 1/Hz
  double shot_floor_psd = 0.0;  // S_SQL/(2 kappa) for comparison
};
AngleErrorNoise angle_error_noise(const IfoParams& p, double omega,
                                  double delta_theta);

/// Detuned filter cavity acting as the frequency-dependent rotator.
struct FilterParams {
  double detuning = 0.0;   // rad/s
  double bandwidth = 0.0;  // rad/s, > 0
};

/// Rotation angle in the parametrization with the sideband frequency in the
/// numerator: xi = atan2(2 W g, D^2 - W^2 + g^2). Rises from 0 at DC through
/// pi/2 at W^2 = D^2 + g^2.
double filter_rotation_angle(const FilterParams& f, double omega);

/// Quadrature rotation of a field reflected off the detuned cavity as a
/// function of sideband frequency: xi = atan2(2 D g, g^2 - D^2 + W^2).
/// Starts at 2 atan(D/g) at DC and falls to 0 at high frequency; this is the
/// dispersion the schemes use to track arctan(kappa).
double cavity_dispersion_angle(const FilterParams& f, double omega);

/// First-order rotation-angle shift from a detuning error,
/// dxi = dDelta / (W gamma_f).
double detuning_compensation(double delta_detuning, double omega,
                             double gamma_f);

/// Least-squares fit of (detuning, bandwidth) so that the cavity dispersion
/// tracks arctan(kappa) over [f_lo, f_hi] Hz. Deterministic.
FilterParams fit_filter_to_kappa(const IfoParams& p, double f_lo_hz,
                                 double f_hi_hz, int n_points);

}  // namespace omfc
