#pragma once

#include <complex>
#include <optional>

#include "omfc/core.hpp"

namespace omfc {

/// Numerical failure in a solver (maps to CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Physical parameters of the optomechanical frequency converter: two pumped
/// cavities sharing one mechanical oscillator.
struct OmfcParams {
  double mass_kg = 1e-6;            // oscillator mirror mass
  double omega_m = 0.0;             // mechanical angular frequency (rad/s)
  double q_m = 5e7;                 // mechanical quality factor
  double length_a_m = 1.0;          // cavity lengths
  double length_c_m = 1.0;
  double gamma_a = 1.5e5;           // cavity half-bandwidths (rad/s)
  double gamma_c = 1.5e5;
  double pump_power_a_w = 170.0;    // circulating pump powers
  double pump_power_c_w = 170.0;
  double pump_wavelength_m = 1.064e-6;
  double temperature_k = 1.0;       // environment temperature
  double round_trip_loss = 1e-5;    // cavity round-trip power loss
  std::optional<double> gamma_opt_override;     // rad/s, skips pump derivation
  std::optional<double> effective_loss_override;  // forces eps_OMFC(0)

  static OmfcParams sample();  // the reference parameter set

  /// Amplitude damping rate of the oscillator, omega_m / (2 Q_m).
  double gamma_m() const { return omega_m / (2.0 * q_m); }
  /// Mean thermal occupation k_B T / (hbar omega_m).
  double thermal_occupation() const;
  /// Resolved-sideband diagnostic gamma / omega_m (should be << 1).
  double sideband_ratio_a() const { return gamma_a / omega_m; }
  double sideband_ratio_c() const { return gamma_c / omega_m; }
  /// Bandwidth entering the finite-sideband corrections; the mean of the
  /// two cavities (they coincide for a symmetric converter).
  double mean_cavity_bandwidth() const { return 0.5 * (gamma_a + gamma_c); }
  double mean_cavity_length() const {
    return 0.5 * (length_a_m + length_c_m);
  }

  void validate() const;  // throws std::invalid_argument naming the field
};

/// Rates derived from OmfcParams.
struct OmfcRates {
  double x_zpf = 0.0;        // ground-state displacement (m)
  double coupling_a = 0.0;   // linearized coupling rates G-bar (rad/s)
  double coupling_c = 0.0;
  double gamma_opt_a = 0.0;  // optical damping rates G-bar^2/gamma (rad/s)
  double gamma_opt_c = 0.0;
  bool derived_from_pump = true;  // false when the override was applied

  /// Common optical damping rate; throws if the two sides are unmatched.
  double matched_gamma_opt() const;
};

/// x_zpf = sqrt(hbar/(2 m omega_m)); pump photon number N = P (2L/c)/(hbar
/// omega_pump); G-bar = (omega_pump/L) sqrt(N) x_zpf; gamma_opt = G-bar^2 /
/// gamma. If gamma_opt_override is set, both rates are pinned to it instead
/// and couplings are back-filled as sqrt(gamma_opt * gamma).
OmfcRates derive_rates(const OmfcParams& p);

/// Two-port frequency-domain scattering of the adiabatically-eliminated
/// converter, ports (c_in, a_in) -> (c_out, a_out):
///   c_out = [(ga - gc - i W) c_in + 2 sqrt(ga gc) a_in] / (ga + gc - i W)
/// with ga/gc the optical damping rates. Unitary at every frequency.
Mat2 adiabatic_in_out(const OmfcRates& r, double omega);

/// Matched-rate small-frequency limit [[-iW/2g, 1], [1, -iW/2g]]. Throws for
/// unmatched rates.
Mat2 ideal_conversion(const OmfcRates& r, double omega);

/// Thermal-bath coupling amplitudes into the two optical outputs.
struct ThermalCoupling {
  cplx into_c;
  cplx into_a;
};

/// into_c = 2i sqrt(gm gc)/(ga + gc - iW), into_a = -2i sqrt(gm ga)/(...).
/// Matched rates at W = 0 give magnitude sqrt(gm/g).
ThermalCoupling thermal_channel(const OmfcRates& r, double gamma_m,
                                double omega);

struct Mat3 {
  cplx m[3][3]{};
};

/// Exact frequency-domain solution of the three-mode linear system (no
/// adiabatic elimination), ports (a_in, c_in, b_th) -> (a_out, c_out, b_out).
/// Throws NumericalError at a degenerate frequency.
Mat3 solve_three_mode(double gamma_a, double gamma_c, double coupling_a,
                      double coupling_c, double gamma_m, double omega);
Mat3 full_three_mode_solve(const OmfcParams& p, const OmfcRates& r,
                           double omega);

/// Conversion rate c_out/a_in including the finite-sideband corrections
/// eps1 = gamma/(2 omega_m), eps2 = W/(2 omega_m), eps3 = W/gamma:
///   g (1 + eps2 + i eps1)/(1 - i eps3)^2
///   / [-i W (1 + eps2 + i eps1) + g/(1 - i eps3)]
/// Requires matched rates and matched cavity bandwidths.
cplx exact_conversion_rate(const OmfcParams& p, const OmfcRates& r,
                           double omega);

/// First-order expansion of the same rate around g/(g - iW).
cplx conversion_rate_leading_order(const OmfcParams& p, const OmfcRates& r,
                                   double omega);

/// Effective optical loss of the converter,
///   eps_OMFC = (c eps_rt / (L gamma)) * g^2/(g^2 + W^2),
/// with the DC value replaceable through effective_loss_override.
double effective_loss(const OmfcParams& p, const OmfcRates& r, double omega);

/// Thermal noise spectrum referred to the converted field (vacuum = 1):
///   S_th = (8 k_B T / (hbar g Q_m)) * g^2/(g^2 + W^2).
double thermal_noise_spectrum(const OmfcParams& p, const OmfcRates& r,
                              double omega);

/// Squeeze level (dB, positive = squeezed) of the converted field after the
/// two-port scattering with thermal (weighted by 2 nbar + 1) and effective
/// loss acting as independent channels.
double converted_squeeze_level_db(const OmfcParams& p, const OmfcRates& r,
                                  const SqueezedState& input, double omega);

enum class CriterionScheme { fd_squeezing, variational };

/// Thermal-noise feasibility margin: T/Q_m against hbar gamma_opt S_ref / k_B
/// with S_ref = e^{-2r} (squeezing filter) or 1 (variational readout).
struct ThermalCriterionReport {
  double t_over_q = 0.0;          // K
  double bound = 0.0;             // K
  double ratio = 0.0;             // t_over_q / bound
  double reference_spectrum = 1;  // S_ref used
  enum class Verdict { pass, marginal, fail } verdict = Verdict::pass;
};

/// PASS for ratio <= 0.1, MARGINAL up to 1, FAIL above ("much less than"
/// read as one decade).
ThermalCriterionReport thermal_criterion(const OmfcParams& p,
                                         const OmfcRates& r,
                                         CriterionScheme scheme,
                                         double squeeze_r);

}  // namespace omfc
