#include "omfc/interferometer.hpp"

#include <cmath>
#include <stdexcept>

#include "omfc/constants.hpp"

namespace omfc {

IfoParams IfoParams::sample() {
  IfoParams p;
  p.omfc_offset_rad_s = two_pi * 15e6;
  p.gamma_ifo = calibrated_gamma_ifo(p, 4.5e4, two_pi * 3.1);
  return p;
}

double IfoParams::carrier_omega() const {
  return two_pi * speed_of_light / carrier_wavelength_m;
}

double IfoParams::arm_only_bandwidth() const {
  return itm_transmission * speed_of_light / (4.0 * arm_length_m);
}

void IfoParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(std::string(name) + ": must be > 0");
  };
  positive(test_mass_kg, "ifo test_mass_kg");
  positive(arm_length_m, "ifo arm_length_m");
  positive(arm_power_w, "ifo arm_power_w");
  positive(carrier_wavelength_m, "ifo carrier_wavelength_m");
  positive(gamma_ifo, "ifo gamma_ifo");
  auto unit_interval = [](double v, const char* name) {
    if (!(v >= 0.0) || v >= 1.0)
      throw std::invalid_argument(std::string(name) + ": must lie in [0, 1)");
  };
  unit_interval(itm_transmission, "ifo itm_transmission");
  unit_interval(srm_transmission, "ifo srm_transmission");
  unit_interval(circulator_loss, "ifo circulator_loss");
  unit_interval(external_loss, "ifo external_loss");
}

double calibrated_gamma_ifo(const IfoParams& p, double kappa_sq_anchor,
                            double anchor_omega) {
  if (!(kappa_sq_anchor > 0.0) || !(anchor_omega > 0.0))
    throw std::invalid_argument("calibration anchor must be positive");
  const double amp = 16.0 * p.carrier_omega() * p.arm_power_w /
                     (p.test_mass_kg * p.arm_length_m * speed_of_light);
  // kappa = amp g / (W^2 (W^2 + g^2)) = k0  =>  g^2 - (amp/(k0 W^2)) g + W^2 = 0
  const double b = amp / (std::sqrt(kappa_sq_anchor) * anchor_omega *
                          anchor_omega);
  const double disc = b * b - 4.0 * anchor_omega * anchor_omega;
  if (disc < 0.0)
    throw std::invalid_argument(
        "kappa anchor unreachable for these interferometer parameters");
  // Larger root: the detector-bandwidth branch.
  return 0.5 * (b + std::sqrt(disc));
}

double kimble_kappa(const IfoParams& p, double omega) {
  if (!(omega > 0.0))
    throw std::invalid_argument("kappa diverges at Omega = 0");
  return 16.0 * p.carrier_omega() * p.arm_power_w * p.gamma_ifo /
         (p.test_mass_kg * omega * omega *
          (omega * omega + p.gamma_ifo * p.gamma_ifo) * p.arm_length_m *
          speed_of_light);
}

double sql_psd(const IfoParams& p, double omega) {
  if (!(omega > 0.0))
    throw std::invalid_argument("SQL diverges at Omega = 0");
  return 8.0 * hbar /
         (p.test_mass_kg * omega * omega * p.arm_length_m * p.arm_length_m);
}

double variational_angle(const IfoParams& p, double omega) {
  return std::atan(kimble_kappa(p, omega));
}

std::pair<QuadratureTransfer, SignalVector> ifo_in_out(
    const IfoParams& p, const FrequencyGrid& grid) {
  QuadratureTransfer t{grid, std::vector<Mat2>(grid.size())};
  SignalVector s{grid, std::vector<std::array<cplx, 2>>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    const double kappa = kimble_kappa(p, omega);
    const double beta = std::atan(omega / p.gamma_ifo);
    const cplx e1b = std::polar(1.0, beta);
    const cplx e2b = e1b * e1b;
    t.m[i] = {e2b, 0.0, -kappa * e2b, e2b};
    const double h_sql = std::sqrt(sql_psd(p, omega));
    s.v[i] = {cplx(0.0), e1b * std::sqrt(2.0 * kappa) / h_sql};
  }
  return {std::move(t), std::move(s)};
}

LossyIfo lossy_ifo_in_out(const IfoParams& p, const FrequencyGrid& grid,
                          double power_loss) {
  auto [t, s] = ifo_in_out(p, grid);
  auto mixed = mix_loss(t, power_loss);
  const double amp = std::sqrt(1.0 - power_loss);
  for (auto& v : s.v) {
    v[0] *= amp;
    v[1] *= amp;
  }
  LossyIfo out{std::move(mixed.transfer), std::move(s), {}};
  if (mixed.vacuum) out.channels.push_back(std::move(*mixed.vacuum));
  return out;
}

std::vector<double> homodyne_readout(const SpectralDensity& propagated,
                                     const SignalVector& signal,
                                     const std::vector<double>& theta) {
  if (!(propagated.grid == signal.grid) ||
      theta.size() != propagated.grid.size())
    throw std::invalid_argument("homodyne_readout: grid mismatch");
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double sn = std::sin(theta[i]), cs = std::cos(theta[i]);
    const Mat2& s = propagated.s[i];
    const double noise =
        std::real(sn * sn * s.m00 + sn * cs * (s.m01 + s.m10) +
                  cs * cs * s.m11);
    const cplx proj = sn * signal.v[i][0] + cs * signal.v[i][1];
    const double sig2 = std::norm(proj);
    const double scale2 =
        std::norm(signal.v[i][0]) + std::norm(signal.v[i][1]);
    if (sig2 <= 1e-20 * scale2)
      throw std::invalid_argument(
          "homodyne_readout: signal projection vanishes at this angle");
    out[i] = noise / sig2;
  }
  return out;
}

namespace {
// v^dag S v for Hermitian S
double quad_form(const cplx& v0, const cplx& v1, const Mat2& s) {
  return std::real(std::conj(v0) * v0 * s.m00) +
         std::real(std::conj(v1) * v1 * s.m11) +
         2.0 * std::real(std::conj(v0) * s.m01 * v1);
}
}  // namespace

std::vector<double> homodyne_readout(const QuadratureTransfer& transfer,
                                     const SpectralDensity& input,
                                     const std::vector<NoiseChannel>& channels,
                                     const SignalVector& signal,
                                     const std::vector<double>& theta) {
  if (!(transfer.grid == input.grid) || !(transfer.grid == signal.grid) ||
      theta.size() != transfer.grid.size())
    throw std::invalid_argument("homodyne_readout: grid mismatch");
  for (const auto& ch : channels)
    if (!(ch.transfer.grid == transfer.grid) ||
        !(ch.source.grid == transfer.grid))
      throw std::invalid_argument("homodyne_readout: channel grid mismatch");
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const cplx sn(std::sin(theta[i])), cs(std::cos(theta[i]));
    auto project = [&](const Mat2& t) {
      // T^dag w with w = (sin, cos)
      return std::array<cplx, 2>{
          std::conj(t.m00) * sn + std::conj(t.m10) * cs,
          std::conj(t.m01) * sn + std::conj(t.m11) * cs};
    };
    const auto v = project(transfer.m[i]);
    double noise = quad_form(v[0], v[1], input.s[i]);
    for (const auto& ch : channels) {
      const auto u = project(ch.transfer.m[i]);
      noise += quad_form(u[0], u[1], ch.source.s[i]);
    }
    const cplx proj = sn * signal.v[i][0] + cs * signal.v[i][1];
    const double sig2 = std::norm(proj);
    const double scale2 =
        std::norm(signal.v[i][0]) + std::norm(signal.v[i][1]);
    if (sig2 <= 1e-20 * scale2)
      throw std::invalid_argument(
          "homodyne_readout: signal projection vanishes at this angle");
    out[i] = noise / sig2;
  }
  return out;
}

AngleErrorNoise angle_error_noise(const IfoParams& p, double omega,
                                  double delta_theta) {
  if (std::abs(delta_theta) >= 0.1)
    throw std::invalid_argument(
        "angle_error_noise: |delta_theta| must be < 0.1 (small-angle "
        "expansion)");
  const double kappa = kimble_kappa(p, omega);
  const double opk2 = 1.0 + kappa * kappa;
  const double sql = sql_psd(p, omega);
  AngleErrorNoise n;
  n.shot_floor_psd = sql / (2.0 * kappa);
  // Variance (1+k^2)^2 cos^2(theta_vr) dtheta^2, referenced to the signal
  // power 2 kappa cos^2(theta_vr).
  n.added_psd = opk2 * opk2 * delta_theta * delta_theta * sql / (2.0 * kappa);
  return n;
}

double filter_rotation_angle(const FilterParams& f, double omega) {
  if (!(f.bandwidth > 0.0))
    throw std::invalid_argument("filter bandwidth must be > 0");
  return std::atan2(2.0 * omega * f.bandwidth,
                    f.detuning * f.detuning - omega * omega +
                        f.bandwidth * f.bandwidth);
}

double cavity_dispersion_angle(const FilterParams& f, double omega) {
  if (!(f.bandwidth > 0.0))
    throw std::invalid_argument("filter bandwidth must be > 0");
  return std::atan2(2.0 * f.detuning * f.bandwidth,
                    f.bandwidth * f.bandwidth - f.detuning * f.detuning +
                        omega * omega);
}

double detuning_compensation(double delta_detuning, double omega,
                             double gamma_f) {
  if (!(omega > 0.0) || !(gamma_f > 0.0))
    throw std::invalid_argument(
        "detuning_compensation: omega and gamma_f must be > 0");
  return delta_detuning / (omega * gamma_f);
}

FilterParams fit_filter_to_kappa(const IfoParams& p, double f_lo_hz,
                                 double f_hi_hz, int n_points) {
  if (!(f_lo_hz > 0.0) || !(f_hi_hz > f_lo_hz) || n_points < 2)
    throw std::invalid_argument("fit_filter_to_kappa: bad fit band");
  std::vector<double> omegas(n_points);
  const double ratio = std::log(f_hi_hz / f_lo_hz) / double(n_points - 1);
  for (int i = 0; i < n_points; ++i)
    omegas[i] = two_pi * f_lo_hz * std::exp(double(i) * ratio);

  auto cost = [&](double detuning, double bandwidth) {
    FilterParams f{detuning, bandwidth};
    double c = 0.0;
    for (double w : omegas) {
      const double d = cavity_dispersion_angle(f, w) - variational_angle(p, w);
      c += d * d;
    }
    return c;
  };
  // kappa ~ (amp/g_ifo)/W^2 in-band, matched exactly by D = g =
  // sqrt(amp/(2 g_ifo)); refine both parameters by coordinate descent.
  const double amp = 16.0 * p.carrier_omega() * p.arm_power_w /
                     (p.test_mass_kg * p.arm_length_m * speed_of_light);
  double d0 = std::sqrt(amp / p.gamma_ifo / 2.0), g0 = d0;
  double step = 0.05 * d0;
  double best = cost(d0, g0);
  for (int iter = 0; iter < 200 && step > 1e-12 * d0; ++iter) {
    bool improved = false;
    const double cand[4][2] = {
        {d0 + step, g0}, {d0 - step, g0}, {d0, g0 + step}, {d0, g0 - step}};
    for (auto& c : cand) {
      if (!(c[0] > 0.0) || !(c[1] > 0.0)) continue;
      const double v = cost(c[0], c[1]);
      if (v < best) {
        best = v;
        d0 = c[0];
        g0 = c[1];
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return {d0, g0};
}

}  // namespace omfc
