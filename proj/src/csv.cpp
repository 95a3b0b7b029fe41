#include "omfc/csv.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "omfc/constants.hpp"
#include "omfc/converter.hpp"

namespace omfc {

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

void write_metadata(std::ostream& os, const RunConfig& cfg) {
  os << "# generator = " << kVersion << "\n";
  for (const auto& [k, v] : cfg.echo()) os << "# " << k << " = " << v << "\n";
  // Derived-rate diagnostics (informational, not part of the configuration).
  const SchemeConfig sc = cfg.scheme_config();
  const OmfcRates rates = derive_rates(sc.omfc);
  os << "# derived.gamma_opt_a_rad_s = " << fmt_sci(rates.gamma_opt_a) << "\n";
  os << "# derived.gamma_opt_c_rad_s = " << fmt_sci(rates.gamma_opt_c) << "\n";
  os << "# derived.gamma_opt_source = "
     << (rates.derived_from_pump ? "pump_derivation_at_configured_wavelength"
                                 : "override")
     << "\n";
  os << "# derived.x_zpf_m = " << fmt_sci(rates.x_zpf) << "\n";
  os << "# derived.gamma_m_rad_s = " << fmt_sci(sc.omfc.gamma_m()) << "\n";
  os << "# derived.sideband_ratio_a = " << fmt_sci(sc.omfc.sideband_ratio_a())
     << "\n";
  os << "# derived.sideband_ratio_c = " << fmt_sci(sc.omfc.sideband_ratio_c())
     << "\n";
  os << "# derived.ifo_bandwidth_rad_s = " << fmt_sci(sc.ifo.gamma_ifo)
     << "\n";
  os << "# derived.ifo_arm_only_bandwidth_rad_s = "
     << fmt_sci(sc.ifo.arm_only_bandwidth()) << "\n";
}

void write_convert_csv(std::ostream& os, const RunConfig& cfg) {
  write_metadata(os, cfg);
  const SchemeConfig sc = cfg.scheme_config();
  const FrequencyGrid grid = cfg.grid();
  const OmfcRates rates = derive_rates(sc.omfc);
  os << "frequency_Hz,omega_rad_s,conversion_abs,conversion_arg_rad,"
        "effective_loss,thermal_spectrum_vac,squeeze_level_dB\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const cplx conv = exact_conversion_rate(sc.omfc, rates, w);
    os << fmt_sci(w / two_pi) << ',' << fmt_sci(w) << ','
       << fmt_sci(std::abs(conv)) << ',' << fmt_sci(std::arg(conv)) << ','
       << fmt_sci(effective_loss(sc.omfc, rates, w)) << ','
       << fmt_sci(thermal_noise_spectrum(sc.omfc, rates, w)) << ','
       << fmt_sci(converted_squeeze_level_db(sc.omfc, rates, sc.input_squeeze,
                                             w))
       << "\n";
  }
}

void write_sensitivity_csv(std::ostream& os, const RunConfig& cfg,
                           const NoiseBudget& budget, bool all_components) {
  write_metadata(os, cfg);
  os << "frequency_Hz,S_total_per_Hz";
  if (all_components)
    for (int c = 0; c < kNumComponents; ++c)
      os << ",S_" << component_name(NoiseComponent(c)) << "_per_Hz";
  os << ",S_sql_per_Hz,S_baseline_per_Hz,delta_theta_rad\n";
  for (std::size_t i = 0; i < budget.grid.size(); ++i) {
    os << fmt_sci(budget.grid[i] / two_pi) << ',' << fmt_sci(budget.total[i]);
    if (all_components)
      for (int c = 0; c < kNumComponents; ++c)
        os << ',' << fmt_sci(budget.components[c][i]);
    os << ',' << fmt_sci(budget.sql[i]) << ',' << fmt_sci(budget.baseline[i])
       << ',' << fmt_sci(budget.delta_theta[i]) << "\n";
  }
}

void write_criterion_report(std::ostream& os, const RunConfig& cfg) {
  write_metadata(os, cfg);
  const SchemeConfig sc = cfg.scheme_config();
  const OmfcRates rates = derive_rates(sc.omfc);
  const bool fd = sc.mode == SchemeMode::fd_squeezing ||
                  sc.mode == SchemeMode::baseline_fixed_squeeze;
  const auto rep = thermal_criterion(
      sc.omfc, rates,
      fd ? CriterionScheme::fd_squeezing : CriterionScheme::variational,
      sc.input_squeeze.r);
  const char* verdict =
      rep.verdict == ThermalCriterionReport::Verdict::pass
          ? "PASS"
          : (rep.verdict == ThermalCriterionReport::Verdict::marginal
                 ? "MARGINAL"
                 : "FAIL");
  os << "key,value\n";
  os << "scheme," << (fd ? "fd_squeezing" : "variational") << "\n";
  os << "gamma_opt_rad_s," << fmt_sci(rates.matched_gamma_opt()) << "\n";
  os << "reference_spectrum," << fmt_sci(rep.reference_spectrum) << "\n";
  os << "t_over_q_K," << fmt_sci(rep.t_over_q) << "\n";
  os << "bound_K," << fmt_sci(rep.bound) << "\n";
  os << "ratio," << fmt_sci(rep.ratio) << "\n";
  os << "verdict," << verdict << "\n";
  os << "# thermal criterion: T/Q_m must stay well below hbar*gamma_opt*S_ref/k_B\n";
  os << "# T/Q_m = " << fmt_sci(rep.t_over_q) << " K, bound = "
     << fmt_sci(rep.bound) << " K, ratio = " << fmt_sci(rep.ratio) << " -> "
     << verdict << "\n";
}

void write_tune_report(std::ostream& os, const RunConfig& cfg,
                       const TuneResult& result, double before_db,
                       double after_db, const TuneSpec& spec) {
  write_metadata(os, cfg);
  os << "# free =";
  for (std::size_t i = 0; i < spec.free_vars.size(); ++i)
    os << (i ? "," : " ") << to_string(spec.free_vars[i]);
  os << "\n";
  os << "# objective = "
     << (spec.objective == TuneObjective::degradation_at ? "degradation_at"
                                                         : "band_integrated")
     << "\n";
  os << "# degradation_at_" << fmt_sci(spec.f_ref_hz) << "_Hz_before_dB = "
     << fmt_sci(before_db) << "\n";
  os << "# degradation_at_" << fmt_sci(spec.f_ref_hz) << "_Hz_after_dB = "
     << fmt_sci(after_db) << "\n";
  os << "# tuned.filter.detuning_rad_s = " << fmt_sci(result.filter.detuning)
     << "\n";
  os << "# tuned.filter.bandwidth_rad_s = " << fmt_sci(result.filter.bandwidth)
     << "\n";
  os << "# tuned.theta_dc_rad = " << fmt_sci(result.theta_dc) << "\n";
  os << "# achieved_objective_dB = " << fmt_sci(result.objective_db) << "\n";
  os << "# evals = " << result.evals << "\n";
  os << "# converged = " << (result.converged ? "true" : "false") << "\n";
  os << "eval,detuning_rad_s,bandwidth_rad_s,theta_dc_rad,objective_dB\n";
  for (const auto& t : result.trace)
    os << t.eval << ',' << fmt_sci(t.detuning) << ',' << fmt_sci(t.bandwidth)
       << ',' << fmt_sci(t.theta_dc) << ',' << fmt_sci(t.objective_db) << "\n";
}

}  // namespace omfc
