#include "omfc/schemes.hpp"

#include <cmath>
#include <stdexcept>

#include "omfc/constants.hpp"

namespace omfc {

std::string to_string(SchemeMode m) {
  switch (m) {
    case SchemeMode::fd_squeezing: return "fd_squeezing";
    case SchemeMode::variational_readout: return "variational_readout";
    case SchemeMode::baseline_vacuum: return "baseline_vacuum";
    case SchemeMode::baseline_fixed_squeeze: return "baseline_fixed_squeeze";
  }
  return "?";
}

SchemeMode scheme_mode_from_string(const std::string& s) {
  if (s == "fd_squeezing") return SchemeMode::fd_squeezing;
  if (s == "variational_readout") return SchemeMode::variational_readout;
  if (s == "baseline_vacuum") return SchemeMode::baseline_vacuum;
  if (s == "baseline_fixed_squeeze") return SchemeMode::baseline_fixed_squeeze;
  throw std::invalid_argument("unknown scheme mode: " + s);
}

const char* component_name(NoiseComponent c) {
  switch (c) {
    case NoiseComponent::quantum_shot: return "quantum_shot";
    case NoiseComponent::quantum_backaction: return "quantum_backaction";
    case NoiseComponent::omfc_thermal: return "omfc_thermal";
    case NoiseComponent::omfc_loss: return "omfc_loss";
    case NoiseComponent::angle_error: return "angle_error";
    case NoiseComponent::external_loss: return "external_loss";
  }
  return "?";
}

namespace {

struct BudgetBuilder {
  explicit BudgetBuilder(const FrequencyGrid& g) : budget{g, {}, {}, {}, {}, {}} {
    budget.total.resize(g.size(), 0.0);
    for (auto& c : budget.components) c.resize(g.size(), 0.0);
    budget.sql.resize(g.size(), 0.0);
    budget.baseline.resize(g.size(), 0.0);
    budget.delta_theta.resize(g.size(), 0.0);
  }
  void add(std::size_t i, NoiseComponent c, double value) {
    budget.components[static_cast<int>(c)][i] += value;
    budget.total[i] += value;
  }
  NoiseBudget budget;
};

/// Everything the per-frequency assembly needs about the converter stage.
struct ConverterStage {
  double arg = 0.0;     // conversion phase (rad)
  double abs2 = 1.0;    // |conversion|^2
  double eps = 0.0;     // effective optical loss
  double s_th = 0.0;    // thermal spectrum, vacuum units
};

ConverterStage converter_stage(const SchemeConfig& cfg, const OmfcRates& rates,
                               double omega) {
  ConverterStage st;
  if (cfg.converter_ideal) return st;
  const cplx conv = exact_conversion_rate(cfg.omfc, rates, omega);
  st.arg = cfg.converter_phase_off ? 0.0 : std::arg(conv);
  st.abs2 = std::min(std::norm(conv), 1.0);  // gain > 1 is a phase artifact
  st.eps = effective_loss(cfg.omfc, rates, omega);
  st.s_th = thermal_noise_spectrum(cfg.omfc, rates, omega);
  return st;
}

double chain_rotation(const SchemeConfig& cfg, const ConverterStage& st,
                      double theta_v, double omega) {
  if (cfg.filter_realization == FilterRealization::perfect)
    return theta_v;  // the filter absorbs converter phase and offset
  return cavity_dispersion_angle(cfg.filter, omega) + st.arg + cfg.theta_dc;
}

}  // namespace

NoiseBudget variational_readout_budget(const SchemeConfig& cfg,
                                       const FrequencyGrid& grid) {
  if (cfg.mode != SchemeMode::variational_readout)
    throw std::invalid_argument("config mode is not variational_readout");
  cfg.ifo.validate();
  const OmfcRates rates = derive_rates(cfg.omfc);
  BudgetBuilder b(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    const double kappa = kimble_kappa(cfg.ifo, omega);
    const double theta_v = std::atan(kappa);
    const double opk2 = 1.0 + kappa * kappa;
    const double sql = sql_psd(cfg.ifo, omega);
    const double floor = sql / (2.0 * kappa);  // shot floor, 1/Hz
    const ConverterStage st = converter_stage(cfg, rates, omega);
    const double theta = chain_rotation(cfg, st, theta_v, omega);
    b.budget.delta_theta[i] = theta - theta_v;

    // Vacuum input at the dark port; all coefficients in shot-floor units.
    b.add(i, NoiseComponent::quantum_shot, floor);
    // Back-action leakage of the imperfection-free rotation chain.
    const double theta0 =
        cfg.filter_realization == FilterRealization::perfect
            ? theta_v
            : cavity_dispersion_angle(cfg.filter, omega);
    const double leak =
        (std::sin(theta0) - kappa * std::cos(theta0)) / std::cos(theta_v);
    b.add(i, NoiseComponent::quantum_backaction, leak * leak * floor);
    // Imperfection-induced rotation error, linearized around theta_vr, plus
    // uncorrelated rms jitter in quadrature.
    const double d_imp = theta - theta0;
    b.add(i, NoiseComponent::angle_error,
          opk2 * opk2 *
              (d_imp * d_imp + cfg.angle_jitter_rms * cfg.angle_jitter_rms) *
              floor);
    // Loss chain after the detector: circulator, converter, circulator,
    // readout. Fresh vacua are isotropic, so each contributes its loss
    // fraction referenced to the (small) projected signal.
    const double t1 = 1.0 - cfg.ifo.circulator_loss;
    const double t2 = st.abs2 * (1.0 - st.eps);
    const double t3 = 1.0 - cfg.ifo.circulator_loss;
    const double t5 = 1.0 - cfg.ifo.external_loss;
    b.add(i, NoiseComponent::omfc_loss, (1.0 - t2) / (t1 * t2) * opk2 * floor);
    b.add(i, NoiseComponent::omfc_thermal, st.s_th / (t1 * t2) * opk2 * floor);
    b.add(i, NoiseComponent::external_loss,
          (cfg.ifo.circulator_loss / t1 +
           cfg.ifo.circulator_loss / (t1 * t2 * t3) +
           cfg.ifo.external_loss / (t1 * t2 * t3 * t5)) *
              opk2 * floor);

    b.budget.sql[i] = sql;
    b.budget.baseline[i] = opk2 * floor;
  }
  return std::move(b.budget);
}

NoiseBudget fd_squeezing_budget(const SchemeConfig& cfg,
                                const FrequencyGrid& grid) {
  if (cfg.mode != SchemeMode::fd_squeezing)
    throw std::invalid_argument("config mode is not fd_squeezing");
  cfg.ifo.validate();
  const OmfcRates rates = derive_rates(cfg.omfc);
  const double v_sq = cfg.input_squeeze.squeezed_variance();
  const double v_anti = cfg.input_squeeze.antisqueezed_variance();
  BudgetBuilder b(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    const double kappa = kimble_kappa(cfg.ifo, omega);
    const double theta_v = std::atan(kappa);
    const double opk2 = 1.0 + kappa * kappa;
    const double sql = sql_psd(cfg.ifo, omega);
    const double floor = sql / (2.0 * kappa);
    const ConverterStage st = converter_stage(cfg, rates, omega);
    // Squeeze angle realized by filter + converter phase + offset; ideal is
    // arctan(kappa) so that the squeezed axis tracks the readout direction.
    const double theta_s = chain_rotation(cfg, st, theta_v, omega);
    const double d_theta = theta_s - theta_v;
    b.budget.delta_theta[i] = d_theta;

    // Squeezed path transmission: circulator, converter, circulator. The
    // signal enters at the main interferometer and is unaffected.
    const double t1 = 1.0 - cfg.ifo.circulator_loss;
    const double t2 = st.abs2 * (1.0 - st.eps);
    const double t3 = 1.0 - cfg.ifo.circulator_loss;
    const double eta = t1 * t2 * t3;
    const double cs = std::cos(d_theta), sn = std::sin(d_theta);
    const double jit2 = cfg.angle_jitter_rms * cfg.angle_jitter_rms;

    b.add(i, NoiseComponent::quantum_shot, eta * v_sq * cs * cs * floor);
    b.add(i, NoiseComponent::quantum_backaction,
          kappa * kappa * eta * v_sq * cs * cs * floor);
    b.add(i, NoiseComponent::angle_error,
          eta * opk2 * (v_anti * sn * sn + (v_anti - v_sq) * jit2) * floor);
    b.add(i, NoiseComponent::omfc_loss, (1.0 - t2) * t3 * opk2 * floor);
    b.add(i, NoiseComponent::omfc_thermal, st.s_th * t3 * opk2 * floor);
    const double e_ext = cfg.ifo.external_loss;
    b.add(i, NoiseComponent::external_loss,
          (cfg.ifo.circulator_loss * t2 * t3 + cfg.ifo.circulator_loss) *
                  opk2 * floor +
              e_ext / (1.0 - e_ext) * floor);

    b.budget.sql[i] = sql;
    b.budget.baseline[i] = opk2 * floor;
  }
  return std::move(b.budget);
}

NoiseBudget baseline_budget(const SchemeConfig& cfg,
                            const FrequencyGrid& grid) {
  if (cfg.mode != SchemeMode::baseline_vacuum &&
      cfg.mode != SchemeMode::baseline_fixed_squeeze)
    throw std::invalid_argument("config mode is not a baseline");
  cfg.ifo.validate();
  const bool squeezed = cfg.mode == SchemeMode::baseline_fixed_squeeze;
  const Mat2 s_in = squeezed ? squeezed_spectrum(cfg.input_squeeze)
                             : Mat2::identity();
  BudgetBuilder b(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    const double kappa = kimble_kappa(cfg.ifo, omega);
    const double sql = sql_psd(cfg.ifo, omega);
    const double floor = sql / (2.0 * kappa);
    const double th = cfg.readout_angle;
    const double cs = std::cos(th);
    if (cs == 0.0)
      throw std::invalid_argument("baseline readout angle nulls the signal");
    // b_theta noise, normalized to the signal power 2 kappa cos^2(theta).
    const double w1 = std::sin(th) - kappa * cs, w2 = cs;
    const double s11 = std::real(s_in.m00), s22 = std::real(s_in.m11);
    const double s12 = std::real(s_in.m01 + s_in.m10);
    b.add(i, NoiseComponent::quantum_shot, w2 * w2 * s22 / (cs * cs) * floor);
    b.add(i, NoiseComponent::quantum_backaction,
          (w1 * w1 * s11 + w1 * w2 * s12) / (cs * cs) * floor);
    b.budget.sql[i] = sql;
    b.budget.baseline[i] = (1.0 + kappa * kappa) * floor;
  }
  return std::move(b.budget);
}

NoiseBudget compute_budget(const SchemeConfig& cfg, const FrequencyGrid& grid) {
  switch (cfg.mode) {
    case SchemeMode::fd_squeezing: return fd_squeezing_budget(cfg, grid);
    case SchemeMode::variational_readout:
      return variational_readout_budget(cfg, grid);
    case SchemeMode::baseline_vacuum:
    case SchemeMode::baseline_fixed_squeeze:
      return baseline_budget(cfg, grid);
  }
  throw std::invalid_argument("unknown scheme mode");
}

std::vector<double> residual_angle_error(const SchemeConfig& cfg,
                                         const FrequencyGrid& grid) {
  const OmfcRates rates = derive_rates(cfg.omfc);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double omega = grid[i];
    const double theta_v = variational_angle(cfg.ifo, omega);
    const ConverterStage st = converter_stage(cfg, rates, omega);
    out[i] = chain_rotation(cfg, st, theta_v, omega) - theta_v;
  }
  return out;
}

}  // namespace omfc
