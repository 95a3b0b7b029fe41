#pragma once

#include <functional>
#include <vector>

#include "omfc/schemes.hpp"

namespace omfc {

enum class TuneVariable { filter_detuning, filter_bandwidth, theta_dc };
enum class TuneObjective { degradation_at, band_integrated };

const char* to_string(TuneVariable v);
TuneVariable tune_variable_from_string(const std::string& s);

struct TuneBounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct TuneSpec {
  std::vector<TuneVariable> free_vars;
  std::vector<TuneBounds> bounds;  // parallel to free_vars
  TuneObjective objective = TuneObjective::band_integrated;
  double f_ref_hz = 3.0;
  double band_lo_hz = 1.0;
  double band_hi_hz = 30.0;
  int band_points = 25;
  double tolerance_db = 1e-4;
  int max_evals = 400;

  /// Default spec: trim the DC homodyne offset within +-0.5 mrad of the
  /// configured value, band-integrated objective over 1-30 Hz.
  static TuneSpec defaults(const SchemeConfig& cfg);
};

/// Sensitivity penalty caused by the converter rotation error: the ratio of
/// the budget total to the same budget with the rotation error, DC offset,
/// and jitter removed (losses and thermal noise stay). In dB.
double degradation_at_db(const SchemeConfig& cfg, double f_ref_hz);

/// Mean of degradation_at_db over a log-spaced band grid.
double band_degradation_db(const SchemeConfig& cfg, double f_lo_hz,
                           double f_hi_hz, int n_points);

struct TuneTracePoint {
  int eval = 0;
  double detuning = 0.0;
  double bandwidth = 0.0;
  double theta_dc = 0.0;
  double objective_db = 0.0;
};

struct TuneResult {
  FilterParams filter;
  double theta_dc = 0.0;
  double objective_db = 0.0;
  int evals = 0;
  bool converged = false;
  std::vector<TuneTracePoint> trace;
};

/// Deterministic derivative-free minimization: coarse scan over the bounded
/// box, then bounded Nelder-Mead refinement. The incumbent best never
/// worsens; ties keep the first point in scan order. Runs out of max_evals
/// -> best-so-far with converged = false.
TuneResult optimize(const SchemeConfig& cfg, const TuneSpec& spec);

/// Same machinery on an arbitrary objective (used by tests).
struct BoxResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
  bool converged = false;
  std::vector<std::pair<std::vector<double>, double>> trace;
};
BoxResult minimize_box(const std::function<double(const std::vector<double>&)>& f,
                       const std::vector<TuneBounds>& bounds, double tolerance,
                       int max_evals);

}  // namespace omfc
