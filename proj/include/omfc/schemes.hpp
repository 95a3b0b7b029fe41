#pragma once

#include <array>
#include <string>

#include "omfc/converter.hpp"
#include "omfc/interferometer.hpp"

namespace omfc {

enum class SchemeMode {
  fd_squeezing,
  variational_readout,
  baseline_vacuum,
  baseline_fixed_squeeze,
};

enum class FilterRealization {
  perfect,         // rotation tracks arctan(kappa) exactly
  detuned_cavity,  // cavity dispersion with the configured FilterParams
};

std::string to_string(SchemeMode m);
SchemeMode scheme_mode_from_string(const std::string& s);

/// Full description of one detector configuration.
struct SchemeConfig {
  SchemeMode mode = SchemeMode::fd_squeezing;
  OmfcParams omfc;
  IfoParams ifo;
  FilterParams filter;
  FilterRealization filter_realization = FilterRealization::detuned_cavity;
  SqueezedState input_squeeze;   // fd_squeezing and baseline_fixed_squeeze
  double theta_dc = 0.0;         // constant offset in the rotation chain (rad)
  double angle_jitter_rms = 0.0; // rms homodyne/squeeze angle jitter (rad)
  double readout_angle = 0.0;    // fixed readout quadrature for baselines
  bool converter_ideal = false;  // zero converter imperfections entirely
  bool converter_phase_off = false;  // drop only the conversion phase
};

enum class NoiseComponent : int {
  quantum_shot = 0,
  quantum_backaction,
  omfc_thermal,
  omfc_loss,
  angle_error,
  external_loss,
};
inline constexpr int kNumComponents = 6;
const char* component_name(NoiseComponent c);

/// Strain-referenced noise decomposition on a grid. The total is assembled
/// as the sum of the components, so additivity holds by construction.
struct NoiseBudget {
  FrequencyGrid grid;
  std::vector<double> total;  // 1/Hz
  std::array<std::vector<double>, kNumComponents> components;
  std::vector<double> sql;          // S_SQL(W)
  std::vector<double> baseline;     // vacuum phase-quadrature detector
  std::vector<double> delta_theta;  // realized minus ideal rotation (rad)

  const std::vector<double>& component(NoiseComponent c) const {
    return components[static_cast<int>(c)];
  }
};

/// Squeezed input filtered to a frequency-dependent angle, converted, and
/// injected into the detector; fixed phase-quadrature readout.
NoiseBudget fd_squeezing_budget(const SchemeConfig& cfg,
                                const FrequencyGrid& grid);

/// Detector output converted and rotated by the filter; fixed homodyne.
/// Vacuum input at the detector port.
NoiseBudget variational_readout_budget(const SchemeConfig& cfg,
                                       const FrequencyGrid& grid);

/// Reference detector without the converter: vacuum or fixed-angle squeezed
/// input, fixed readout quadrature, lossless.
NoiseBudget baseline_budget(const SchemeConfig& cfg,
                            const FrequencyGrid& grid);

/// Dispatch on cfg.mode.
NoiseBudget compute_budget(const SchemeConfig& cfg, const FrequencyGrid& grid);

/// Realized rotation minus arctan(kappa) per frequency (signed; the sharp
/// dips of its magnitude mark exact-match frequencies).
std::vector<double> residual_angle_error(const SchemeConfig& cfg,
                                         const FrequencyGrid& grid);

}  // namespace omfc
