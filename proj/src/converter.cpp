#include "omfc/converter.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "omfc/constants.hpp"

namespace omfc {

namespace {
void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    std::ostringstream os;
    os << name << ": must be finite and > 0";
    throw std::invalid_argument(os.str());
  }
}
}  // namespace

OmfcParams OmfcParams::sample() {
  OmfcParams p;
  p.omega_m = two_pi * 1e6;
  p.gamma_opt_override = 1e5;
  return p;
}

double OmfcParams::thermal_occupation() const {
  return k_boltzmann * temperature_k / (hbar * omega_m);
}

void OmfcParams::validate() const {
  require_positive(mass_kg, "omfc mass_kg");
  require_positive(omega_m, "omfc mech frequency");
  require_positive(q_m, "omfc q_m");
  require_positive(length_a_m, "omfc length_a_m");
  require_positive(length_c_m, "omfc length_c_m");
  require_positive(gamma_a, "omfc gamma_a");
  require_positive(gamma_c, "omfc gamma_c");
  require_positive(pump_power_a_w, "omfc pump_power_a_w");
  require_positive(pump_power_c_w, "omfc pump_power_c_w");
  require_positive(pump_wavelength_m, "omfc pump_wavelength_m");
  if (!std::isfinite(temperature_k) || temperature_k < 0.0)
    throw std::invalid_argument("omfc temperature_k: must be >= 0");
  if (!(round_trip_loss >= 0.0) || round_trip_loss >= 1.0)
    throw std::invalid_argument("omfc round_trip_loss: must lie in [0, 1)");
  if (gamma_opt_override && !(*gamma_opt_override > 0.0))
    throw std::invalid_argument("omfc gamma_opt_override: must be > 0");
  if (effective_loss_override &&
      (!(*effective_loss_override >= 0.0) || *effective_loss_override >= 1.0))
    throw std::invalid_argument(
        "omfc effective_loss_override: must lie in [0, 1)");
}

double OmfcRates::matched_gamma_opt() const {
  if (std::abs(gamma_opt_a - gamma_opt_c) > 1e-9 * gamma_opt_a)
    throw std::invalid_argument(
        "operation requires matched optical damping rates");
  return gamma_opt_a;
}

OmfcRates derive_rates(const OmfcParams& p) {
  p.validate();
  OmfcRates r;
  r.x_zpf = std::sqrt(hbar / (2.0 * p.mass_kg * p.omega_m));
  if (p.gamma_opt_override) {
    r.gamma_opt_a = r.gamma_opt_c = *p.gamma_opt_override;
    r.coupling_a = std::sqrt(r.gamma_opt_a * p.gamma_a);
    r.coupling_c = std::sqrt(r.gamma_opt_c * p.gamma_c);
    r.derived_from_pump = false;
    return r;
  }
  const double omega_pump = two_pi * speed_of_light / p.pump_wavelength_m;
  auto coupling = [&](double power, double length) {
    const double round_trip = 2.0 * length / speed_of_light;
    const double n_photons = power * round_trip / (hbar * omega_pump);
    return omega_pump / length * std::sqrt(n_photons) * r.x_zpf;
  };
  r.coupling_a = coupling(p.pump_power_a_w, p.length_a_m);
  r.coupling_c = coupling(p.pump_power_c_w, p.length_c_m);
  r.gamma_opt_a = r.coupling_a * r.coupling_a / p.gamma_a;
  r.gamma_opt_c = r.coupling_c * r.coupling_c / p.gamma_c;
  r.derived_from_pump = true;
  return r;
}

Mat2 adiabatic_in_out(const OmfcRates& r, double omega) {
  const double ga = r.gamma_opt_a, gc = r.gamma_opt_c;
  if (!(ga + gc > 0.0))
    throw std::invalid_argument("adiabatic_in_out: needs gamma_opt_a + gamma_opt_c > 0");
  const cplx den(ga + gc, -omega);
  const cplx conv = 2.0 * std::sqrt(ga * gc) / den;
  return {cplx(ga - gc, -omega) / den, conv,  // c_out row
          conv, cplx(gc - ga, -omega) / den}; // a_out row
}

Mat2 ideal_conversion(const OmfcRates& r, double omega) {
  const double g = r.matched_gamma_opt();
  const cplx diag(0.0, -omega / (2.0 * g));
  return {diag, 1.0, 1.0, diag};
}

ThermalCoupling thermal_channel(const OmfcRates& r, double gamma_m,
                                double omega) {
  if (gamma_m < 0.0)
    throw std::invalid_argument("thermal_channel: gamma_m must be >= 0");
  const cplx den(r.gamma_opt_a + r.gamma_opt_c, -omega);
  const cplx i(0.0, 1.0);
  return {2.0 * i * std::sqrt(gamma_m * r.gamma_opt_c) / den,
          -2.0 * i * std::sqrt(gamma_m * r.gamma_opt_a) / den};
}

Mat3 solve_three_mode(double gamma_a, double gamma_c, double coupling_a,
                      double coupling_c, double gamma_m, double omega) {
  const cplx i(0.0, 1.0);
  const cplx da(gamma_a, -omega), dc(gamma_c, -omega), dm(gamma_m, -omega);
  const double ga2 = coupling_a * coupling_a, gc2 = coupling_c * coupling_c;
  const cplx chi = dm + ga2 / da + gc2 / dc;  // effective mechanical response
  const double scale = std::abs(dm) + ga2 / std::abs(da) + gc2 / std::abs(dc);
  if (std::abs(chi) < 1e-14 * scale || scale == 0.0) {
    std::ostringstream os;
    os << "three-mode solve degenerate at Omega = " << omega << " rad/s";
    throw NumericalError(os.str());
  }
  const double sa = std::sqrt(2.0 * gamma_a), sc = std::sqrt(2.0 * gamma_c),
               sm = std::sqrt(2.0 * gamma_m);
  // b = (ba a_in + bc c_in + bm b_th)/chi
  const cplx ba = -i * coupling_a * sa / da;
  const cplx bc = i * coupling_c * sc / dc;
  const cplx bm = sm;
  // a_out = (2 ga/da - 1) a_in - i sa Ga/da b ; c_out analogous; b_out =
  // sm b - b_th.
  const cplx fa = -i * sa * coupling_a / da;
  const cplx fc = i * sc * coupling_c / dc;
  Mat3 out;
  out.m[0][0] = cplx(gamma_a, omega) / da + fa * ba / chi;
  out.m[0][1] = fa * bc / chi;
  out.m[0][2] = fa * bm / chi;
  out.m[1][0] = fc * ba / chi;
  out.m[1][1] = cplx(gamma_c, omega) / dc + fc * bc / chi;
  out.m[1][2] = fc * bm / chi;
  out.m[2][0] = sm * ba / chi;
  out.m[2][1] = sm * bc / chi;
  out.m[2][2] = sm * bm / chi - 1.0;
  return out;
}

Mat3 full_three_mode_solve(const OmfcParams& p, const OmfcRates& r,
                           double omega) {
  return solve_three_mode(p.gamma_a, p.gamma_c, r.coupling_a, r.coupling_c,
                          p.gamma_m(), omega);
}

cplx exact_conversion_rate(const OmfcParams& p, const OmfcRates& r,
                           double omega) {
  const double g = r.matched_gamma_opt();
  const double gamma = p.mean_cavity_bandwidth();
  const cplx i(0.0, 1.0);
  const double e1 = gamma / (2.0 * p.omega_m);
  const double e2 = omega / (2.0 * p.omega_m);
  const double e3 = omega / gamma;
  const cplx one_m_ie3 = 1.0 - i * e3;
  const cplx corr = 1.0 + e2 + i * e1;
  return g * corr / (one_m_ie3 * one_m_ie3) /
         (-i * omega * corr + g / one_m_ie3);
}

cplx conversion_rate_leading_order(const OmfcParams& p, const OmfcRates& r,
                                   double omega) {
  const double g = r.matched_gamma_opt();
  const double gamma = p.mean_cavity_bandwidth();
  const cplx i(0.0, 1.0);
  const double e1 = gamma / (2.0 * p.omega_m);
  const double e2 = omega / (2.0 * p.omega_m);
  const double e3 = omega / gamma;
  const cplx lor = g / cplx(g, -omega);
  return lor * (1.0 + lor * (e2 + i * e1) +
                (i * g + 2.0 * omega) / cplx(g, -omega) * e3);
}

double effective_loss(const OmfcParams& p, const OmfcRates& r, double omega) {
  const double g = r.matched_gamma_opt();
  const double lorentz = g * g / (g * g + omega * omega);
  if (p.effective_loss_override) return *p.effective_loss_override * lorentz;
  return speed_of_light * p.round_trip_loss /
         (p.mean_cavity_length() * p.mean_cavity_bandwidth()) * lorentz;
}

double thermal_noise_spectrum(const OmfcParams& p, const OmfcRates& r,
                              double omega) {
  const double g = r.matched_gamma_opt();
  return 8.0 * k_boltzmann * p.temperature_k / (hbar * g * p.q_m) * g * g /
         (g * g + omega * omega);
}

double converted_squeeze_level_db(const OmfcParams& p, const OmfcRates& r,
                                  const SqueezedState& input, double omega) {
  const Mat2 s = adiabatic_in_out(r, omega);
  const double conv2 = std::norm(s.m01);  // |a_in -> c_out|^2
  const double refl2 = std::norm(s.m00);  // |c_in -> c_out|^2
  const ThermalCoupling th = thermal_channel(r, p.gamma_m(), omega);
  const double occupation = 2.0 * p.thermal_occupation() + 1.0;
  const double eps = effective_loss(p, r, omega);
  const double variance =
      (1.0 - eps) * (conv2 * input.squeezed_variance() + refl2 +
                     std::norm(th.into_c) * occupation) +
      eps;
  return -db_from_variance(variance);
}

ThermalCriterionReport thermal_criterion(const OmfcParams& p,
                                         const OmfcRates& r,
                                         CriterionScheme scheme,
                                         double squeeze_r) {
  if (squeeze_r < 0.0)
    throw std::invalid_argument("thermal_criterion: squeeze r must be >= 0");
  ThermalCriterionReport rep;
  rep.reference_spectrum = scheme == CriterionScheme::fd_squeezing
                               ? std::exp(-2.0 * squeeze_r)
                               : 1.0;
  rep.t_over_q = p.temperature_k / p.q_m;
  rep.bound = hbar * r.matched_gamma_opt() * rep.reference_spectrum /
              k_boltzmann;
  rep.ratio = rep.t_over_q / rep.bound;
  using V = ThermalCriterionReport::Verdict;
  rep.verdict = rep.ratio <= 0.1 ? V::pass
                                 : (rep.ratio <= 1.0 ? V::marginal : V::fail);
  return rep;
}

}  // namespace omfc
