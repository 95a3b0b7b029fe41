// Command-line frontend: frequency-domain quantum-noise budgets for an
// interferometric detector assisted by an optomechanical frequency converter.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "omfc/csv.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<double> fmin, fmax;
  std::optional<int> points;
  std::string out_path;
  std::string scheme;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--fmin", f.fmin, "grid lower edge (Hz)");
  cmd->add_option("--fmax", f.fmax, "grid upper edge (Hz)");
  cmd->add_option("--points", f.points, "number of grid points");
  cmd->add_option("--out", f.out_path, "output file (default: stdout)");
  cmd->add_option("--scheme", f.scheme,
                  "scheme mode: fd_squeezing | variational_readout | "
                  "baseline_vacuum | baseline_fixed_squeeze");
}

omfc::RunConfig load_config(const CommonFlags& f) {
  omfc::RunConfig cfg = f.config_path.empty()
                            ? omfc::RunConfig{}
                            : omfc::RunConfig::from_file(f.config_path);
  if (f.fmin) cfg.f_min_hz = *f.fmin;
  if (f.fmax) cfg.f_max_hz = *f.fmax;
  if (f.points) cfg.grid_points = *f.points;
  if (!f.scheme.empty()) {
    try {
      cfg.mode = omfc::scheme_mode_from_string(f.scheme);
    } catch (const std::invalid_argument& e) {
      throw omfc::ConfigError(std::string("--scheme: ") + e.what());
    }
  }
  cfg.resolve();
  return cfg;
}

int emit(const CommonFlags& f, const std::string& text) {
  if (f.out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(f.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << f.out_path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

int run_convert(const CommonFlags& f) {
  const omfc::RunConfig cfg = load_config(f);
  std::ostringstream os;
  omfc::write_convert_csv(os, cfg);
  return emit(f, os.str());
}

int run_sensitivity(const CommonFlags& f, bool all_components) {
  const omfc::RunConfig cfg = load_config(f);
  const omfc::NoiseBudget budget =
      omfc::compute_budget(cfg.scheme_config(), cfg.grid());
  std::ostringstream os;
  omfc::write_sensitivity_csv(os, cfg, budget, all_components);
  return emit(f, os.str());
}

int run_criterion(const CommonFlags& f) {
  const omfc::RunConfig cfg = load_config(f);
  std::ostringstream os;
  omfc::write_criterion_report(os, cfg);
  return emit(f, os.str());
}

int run_tune(const CommonFlags& f) {
  omfc::RunConfig cfg = load_config(f);
  const omfc::SchemeConfig sc = cfg.scheme_config();
  const omfc::TuneSpec spec = cfg.tune_spec();
  const double before = omfc::degradation_at_db(sc, spec.f_ref_hz);
  const omfc::TuneResult result = omfc::optimize(sc, spec);
  omfc::SchemeConfig tuned = sc;
  tuned.filter = result.filter;
  tuned.theta_dc = result.theta_dc;
  const double after = omfc::degradation_at_db(tuned, spec.f_ref_hz);
  std::ostringstream os;
  omfc::write_tune_report(os, cfg, result, before, after, spec);
  const int rc = emit(f, os.str());
  if (rc != 0) return rc;
  return result.converged ? 0 : 4;
}

int run_sweep(const CommonFlags& f, const std::string& key,
              const std::vector<double>& values) {
  if (values.empty()) throw omfc::ConfigError("--values: none given");
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) {
    omfc::RunConfig cfg = f.config_path.empty()
                              ? omfc::RunConfig{}
                              : omfc::RunConfig::from_file(f.config_path);
    if (f.fmin) cfg.f_min_hz = *f.fmin;
    if (f.fmax) cfg.f_max_hz = *f.fmax;
    if (f.points) cfg.grid_points = *f.points;
    if (!f.scheme.empty()) cfg.mode = omfc::scheme_mode_from_string(f.scheme);
    const double v = values[i];
    if (key == "omfc.gamma_a_rad_s") cfg.omfc.gamma_a = v;
    else if (key == "omfc.gamma_c_rad_s") cfg.omfc.gamma_c = v;
    else if (key == "omfc.round_trip_loss") cfg.omfc.round_trip_loss = v;
    else if (key == "omfc.temperature_k") cfg.omfc.temperature_k = v;
    else if (key == "omfc.q_m") cfg.omfc.q_m = v;
    else if (key == "omfc.gamma_opt_override_rad_s") cfg.omfc.gamma_opt_override = v;
    else if (key == "omfc.pump_power_a_w") cfg.omfc.pump_power_a_w = v;
    else if (key == "omfc.pump_power_c_w") cfg.omfc.pump_power_c_w = v;
    else if (key == "ifo.arm_power_w") cfg.ifo.arm_power_w = v;
    else if (key == "ifo.circulator_loss") cfg.ifo.circulator_loss = v;
    else if (key == "ifo.external_loss") cfg.ifo.external_loss = v;
    else if (key == "scheme.input_squeeze_db") cfg.input_squeeze_db = v;
    else if (key == "scheme.angle_jitter_rms_rad") cfg.angle_jitter_rms_rad = v;
    else
      throw omfc::ConfigError("sweep: unknown or unsupported parameter: " + key);
    cfg.resolve();
    os << "# sweep " << key << " = " << omfc::fmt_sci(v) << "\n";
    omfc::write_convert_csv(os, cfg);
    if (i + 1 < values.size()) os << "\n";
  }
  return emit(f, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-noise budgets for a frequency-converter-assisted "
               "interferometric detector"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string sweep_key;
  std::vector<double> sweep_values;

  auto* convert = app.add_subcommand(
      "convert", "converter transfer, loss, thermal and squeeze-level table");
  add_common(convert, flags);
  auto* sensitivity = app.add_subcommand(
      "sensitivity", "strain noise PSD for the selected scheme");
  add_common(sensitivity, flags);
  auto* budget = app.add_subcommand(
      "budget", "sensitivity with every noise component column");
  add_common(budget, flags);
  auto* criterion =
      app.add_subcommand("criterion", "thermal-noise feasibility report");
  add_common(criterion, flags);
  auto* tune = app.add_subcommand(
      "tune", "optimize filter parameters / homodyne offset");
  add_common(tune, flags);
  auto* sweep = app.add_subcommand(
      "sweep", "stacked converter tables over one scalar parameter");
  add_common(sweep, flags);
  sweep->add_option("--param", sweep_key, "dotted config key to sweep")
      ->required();
  sweep->add_option("--values", sweep_values, "values to sweep over")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (convert->parsed()) return run_convert(flags);
    if (sensitivity->parsed()) return run_sensitivity(flags, false);
    if (budget->parsed()) return run_sensitivity(flags, true);
    if (criterion->parsed()) return run_criterion(flags);
    if (tune->parsed()) return run_tune(flags);
    if (sweep->parsed()) return run_sweep(flags, sweep_key, sweep_values);
  } catch (const omfc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const omfc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
