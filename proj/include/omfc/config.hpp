#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omfc/schemes.hpp"
#include "omfc/tuning.hpp"

namespace omfc {

inline constexpr const char* kVersion = "omfc-budget 1.0.0";

/// Configuration rejected (maps to CLI exit code 2). The message names the
/// offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BandwidthMode { calibrated, arm_only, explicit_value };
enum class FilterParamMode { auto_fit, explicit_value };
enum class ThetaDcMode { design, explicit_value };

/// The full run configuration: every field optional in the document, with
/// the sample parameter set as defaults. resolve() derives the dependent
/// quantities (detector bandwidth, filter fit, homodyne offset).
struct RunConfig {
  // omfc
  OmfcParams omfc = OmfcParams::sample();
  double mech_freq_hz = 1e6;
  // ifo
  IfoParams ifo = IfoParams::sample();
  BandwidthMode bandwidth_mode = BandwidthMode::calibrated;
  std::optional<double> explicit_bandwidth_rad_s;
  double kappa_sq_anchor = 4.5e4;
  double kappa_anchor_freq_hz = 3.1;
  // filter
  FilterParamMode filter_mode = FilterParamMode::auto_fit;
  std::optional<double> filter_detuning_rad_s;
  std::optional<double> filter_bandwidth_rad_s;
  FilterRealization filter_realization = FilterRealization::detuned_cavity;
  double filter_fit_lo_hz = 1.0;
  double filter_fit_hi_hz = 30.0;
  ThetaDcMode theta_dc_mode = ThetaDcMode::design;
  std::optional<double> theta_dc_rad;
  double theta_dc_design_freq_hz = 22.0;
  // scheme
  SchemeMode mode = SchemeMode::fd_squeezing;
  double input_squeeze_db = 12.0;
  double input_squeeze_angle_rad = 0.0;
  double readout_angle_rad = 0.0;
  double angle_jitter_rms_rad = 0.0;
  bool converter_ideal = false;
  // grid
  double f_min_hz = 1.0;
  double f_max_hz = 5000.0;
  int grid_points = 200;
  GridSpacing spacing = GridSpacing::logarithmic;
  // tune
  std::vector<TuneVariable> tune_free = {TuneVariable::theta_dc};
  std::optional<std::vector<TuneBounds>> tune_bounds;
  TuneObjective tune_objective = TuneObjective::band_integrated;
  double tune_f_ref_hz = 3.0;
  double tune_band_lo_hz = 1.0;
  double tune_band_hi_hz = 30.0;
  int tune_band_points = 25;
  double tune_tolerance_db = 1e-4;
  int tune_max_evals = 400;

  /// Parse a JSON document; unknown keys and ill-typed values raise
  /// ConfigError naming the key. Missing file or bad JSON also raise.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  /// Fill in the derived quantities and validate everything. Must be called
  /// before scheme_config()/tune_spec().
  void resolve();

  /// The resolved scheme configuration (resolve() first).
  SchemeConfig scheme_config() const;
  FrequencyGrid grid() const;
  TuneSpec tune_spec() const;

  /// Fully-resolved flattened key/value pairs, fixed order; values formatted
  /// so that feeding them back reproduces this configuration exactly.
  std::vector<std::pair<std::string, std::string>> echo() const;

 private:
  bool resolved_ = false;
  FilterParams resolved_filter_;
  double resolved_theta_dc_ = 0.0;
};

}  // namespace omfc
