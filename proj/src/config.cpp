#include "omfc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "omfc/constants.hpp"

namespace omfc {

namespace {

using nlohmann::json;

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Section {
 public:
  Section(const json& j, std::string prefix)
      : obj_(&j), prefix_(std::move(prefix)) {
    if (!j.is_object())
      throw ConfigError("config section '" + prefix_ + "' must be an object");
  }
  ~Section() = default;

  void finish() const {
    for (auto it = obj_->begin(); it != obj_->end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError("unknown config key: " + prefix_ + it.key());
  }

  void number(const char* key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number())
        throw ConfigError("config key " + prefix_ + key + ": expected a number");
      out = v->get<double>();
    }
  }
  void integer(const char* key, int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer())
        throw ConfigError("config key " + prefix_ + key +
                          ": expected an integer");
      out = v->get<int>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean())
        throw ConfigError("config key " + prefix_ + key + ": expected a bool");
      out = v->get<bool>();
    }
  }
  void optional_number(const char* key, std::optional<double>& out) {
    if (const json* v = get(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number()) {
        out = v->get<double>();
      } else {
        throw ConfigError("config key " + prefix_ + key +
                          ": expected a number or null");
      }
    }
  }
  void string(const char* key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string())
        throw ConfigError("config key " + prefix_ + key + ": expected a string");
      out = v->get<std::string>();
    }
  }
  const json* get(const char* key) {
    seen_.insert(key);
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

 private:
  const json* obj_;
  std::string prefix_;
  mutable std::set<std::string> seen_;
};

template <typename Enum>
Enum parse_enum(const std::string& value, const char* key,
                std::initializer_list<std::pair<const char*, Enum>> table) {
  for (const auto& [name, e] : table)
    if (value == name) return e;
  std::ostringstream os;
  os << "config key " << key << ": unknown value '" << value << "' (expected";
  for (const auto& [name, e] : table) os << " '" << name << "'";
  os << ")";
  throw ConfigError(os.str());
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");

  RunConfig c;
  std::set<std::string> top_seen;
  auto section = [&](const char* name) -> const json* {
    top_seen.insert(name);
    auto it = doc.find(name);
    return it == doc.end() ? nullptr : &*it;
  };

  if (const json* j = section("omfc")) {
    Section s(*j, "omfc.");
    s.number("mass_kg", c.omfc.mass_kg);
    s.number("mech_freq_hz", c.mech_freq_hz);
    s.number("q_m", c.omfc.q_m);
    s.number("length_a_m", c.omfc.length_a_m);
    s.number("length_c_m", c.omfc.length_c_m);
    s.number("gamma_a_rad_s", c.omfc.gamma_a);
    s.number("gamma_c_rad_s", c.omfc.gamma_c);
    s.number("pump_power_a_w", c.omfc.pump_power_a_w);
    s.number("pump_power_c_w", c.omfc.pump_power_c_w);
    s.number("pump_wavelength_m", c.omfc.pump_wavelength_m);
    s.number("temperature_k", c.omfc.temperature_k);
    s.number("round_trip_loss", c.omfc.round_trip_loss);
    s.optional_number("gamma_opt_override_rad_s", c.omfc.gamma_opt_override);
    s.optional_number("effective_loss_override",
                      c.omfc.effective_loss_override);
    s.finish();
  }
  if (const json* j = section("ifo")) {
    Section s(*j, "ifo.");
    s.number("test_mass_kg", c.ifo.test_mass_kg);
    s.number("arm_length_m", c.ifo.arm_length_m);
    s.number("arm_power_w", c.ifo.arm_power_w);
    s.number("carrier_wavelength_m", c.ifo.carrier_wavelength_m);
    s.number("itm_transmission", c.ifo.itm_transmission);
    s.number("srm_transmission", c.ifo.srm_transmission);
    s.number("circulator_loss", c.ifo.circulator_loss);
    s.number("external_loss", c.ifo.external_loss);
    double offset_hz = c.ifo.omfc_offset_rad_s / two_pi;
    s.number("omfc_offset_hz", offset_hz);
    c.ifo.omfc_offset_rad_s = two_pi * offset_hz;
    std::string mode;
    s.string("bandwidth_mode", mode);
    if (!mode.empty())
      c.bandwidth_mode = parse_enum<BandwidthMode>(
          mode, "ifo.bandwidth_mode",
          {{"calibrated", BandwidthMode::calibrated},
           {"arm_only", BandwidthMode::arm_only},
           {"explicit", BandwidthMode::explicit_value}});
    s.optional_number("bandwidth_rad_s", c.explicit_bandwidth_rad_s);
    s.number("kappa_sq_anchor", c.kappa_sq_anchor);
    s.number("kappa_anchor_freq_hz", c.kappa_anchor_freq_hz);
    s.finish();
  }
  if (const json* j = section("filter")) {
    Section s(*j, "filter.");
    std::string mode;
    s.string("mode", mode);
    if (!mode.empty())
      c.filter_mode = parse_enum<FilterParamMode>(
          mode, "filter.mode", {{"auto_fit", FilterParamMode::auto_fit},
                                {"explicit", FilterParamMode::explicit_value}});
    s.optional_number("detuning_rad_s", c.filter_detuning_rad_s);
    s.optional_number("bandwidth_rad_s", c.filter_bandwidth_rad_s);
    std::string realization;
    s.string("realization", realization);
    if (!realization.empty())
      c.filter_realization = parse_enum<FilterRealization>(
          realization, "filter.realization",
          {{"cavity", FilterRealization::detuned_cavity},
           {"perfect", FilterRealization::perfect}});
    s.number("fit_lo_hz", c.filter_fit_lo_hz);
    s.number("fit_hi_hz", c.filter_fit_hi_hz);
    std::string tmode;
    s.string("theta_dc_mode", tmode);
    if (!tmode.empty())
      c.theta_dc_mode = parse_enum<ThetaDcMode>(
          tmode, "filter.theta_dc_mode",
          {{"design", ThetaDcMode::design},
           {"explicit", ThetaDcMode::explicit_value}});
    s.optional_number("theta_dc_rad", c.theta_dc_rad);
    s.number("theta_dc_design_freq_hz", c.theta_dc_design_freq_hz);
    s.finish();
  }
  if (const json* j = section("scheme")) {
    Section s(*j, "scheme.");
    std::string mode;
    s.string("mode", mode);
    if (!mode.empty()) {
      try {
        c.mode = scheme_mode_from_string(mode);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key scheme.mode: ") + e.what());
      }
    }
    s.number("input_squeeze_db", c.input_squeeze_db);
    s.number("input_squeeze_angle_rad", c.input_squeeze_angle_rad);
    s.number("readout_angle_rad", c.readout_angle_rad);
    s.number("angle_jitter_rms_rad", c.angle_jitter_rms_rad);
    s.boolean("converter_ideal", c.converter_ideal);
    s.finish();
  }
  if (const json* j = section("grid")) {
    Section s(*j, "grid.");
    s.number("f_min_hz", c.f_min_hz);
    s.number("f_max_hz", c.f_max_hz);
    s.integer("points", c.grid_points);
    std::string spacing;
    s.string("spacing", spacing);
    if (!spacing.empty())
      c.spacing = parse_enum<GridSpacing>(
          spacing, "grid.spacing", {{"linear", GridSpacing::linear},
                                    {"logarithmic", GridSpacing::logarithmic}});
    s.finish();
  }
  if (const json* j = section("tune")) {
    Section s(*j, "tune.");
    if (const json* free = s.get("free")) {
      if (!free->is_array())
        throw ConfigError("config key tune.free: expected an array of strings");
      c.tune_free.clear();
      for (const auto& v : *free) {
        if (!v.is_string())
          throw ConfigError("config key tune.free: expected an array of strings");
        try {
          c.tune_free.push_back(tune_variable_from_string(v.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("config key tune.free: ") + e.what());
        }
      }
    }
    if (const json* b = s.get("bounds")) {
      if (!b->is_array())
        throw ConfigError(
            "config key tune.bounds: expected an array of [lo, hi] pairs");
      std::vector<TuneBounds> bounds;
      for (const auto& v : *b) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
            !v[1].is_number())
          throw ConfigError(
              "config key tune.bounds: expected an array of [lo, hi] pairs");
        bounds.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      c.tune_bounds = std::move(bounds);
    }
    std::string objective;
    s.string("objective", objective);
    if (!objective.empty())
      c.tune_objective = parse_enum<TuneObjective>(
          objective, "tune.objective",
          {{"degradation_at", TuneObjective::degradation_at},
           {"band_integrated", TuneObjective::band_integrated}});
    s.number("f_ref_hz", c.tune_f_ref_hz);
    s.number("band_lo_hz", c.tune_band_lo_hz);
    s.number("band_hi_hz", c.tune_band_hi_hz);
    s.integer("band_points", c.tune_band_points);
    s.number("tolerance_db", c.tune_tolerance_db);
    s.integer("max_evals", c.tune_max_evals);
    s.finish();
  }
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!top_seen.count(it.key()))
      throw ConfigError("unknown config key: " + it.key());
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void RunConfig::resolve() {
  omfc.omega_m = two_pi * mech_freq_hz;
  omfc.validate();

  switch (bandwidth_mode) {
    case BandwidthMode::calibrated:
      ifo.gamma_ifo = calibrated_gamma_ifo(ifo, kappa_sq_anchor,
                                           two_pi * kappa_anchor_freq_hz);
      break;
    case BandwidthMode::arm_only:
      ifo.gamma_ifo = ifo.arm_only_bandwidth();
      break;
    case BandwidthMode::explicit_value:
      if (!explicit_bandwidth_rad_s)
        throw ConfigError(
            "config key ifo.bandwidth_rad_s: required when bandwidth_mode is "
            "'explicit'");
      ifo.gamma_ifo = *explicit_bandwidth_rad_s;
      break;
  }
  ifo.validate();

  if (filter_mode == FilterParamMode::explicit_value) {
    if (!filter_detuning_rad_s || !filter_bandwidth_rad_s)
      throw ConfigError(
          "config keys filter.detuning_rad_s and filter.bandwidth_rad_s: "
          "required when filter.mode is 'explicit'");
    resolved_filter_ = {*filter_detuning_rad_s, *filter_bandwidth_rad_s};
  } else {
    resolved_filter_ =
        fit_filter_to_kappa(ifo, filter_fit_lo_hz, filter_fit_hi_hz, 25);
    if (filter_detuning_rad_s) resolved_filter_.detuning = *filter_detuning_rad_s;
    if (filter_bandwidth_rad_s)
      resolved_filter_.bandwidth = *filter_bandwidth_rad_s;
  }
  if (!(resolved_filter_.bandwidth > 0.0))
    throw ConfigError("config key filter.bandwidth_rad_s: must be > 0");

  if (theta_dc_mode == ThetaDcMode::explicit_value) {
    if (!theta_dc_rad)
      throw ConfigError(
          "config key filter.theta_dc_rad: required when theta_dc_mode is "
          "'explicit'");
    resolved_theta_dc_ = *theta_dc_rad;
  } else {
    // Design value: cancel the converter rotation at the design frequency.
    const OmfcRates rates = derive_rates(omfc);
    resolved_theta_dc_ = -std::arg(exact_conversion_rate(
        omfc, rates, two_pi * theta_dc_design_freq_hz));
  }

  if (input_squeeze_db < 0.0)
    throw ConfigError("config key scheme.input_squeeze_db: must be >= 0");
  if (angle_jitter_rms_rad < 0.0 || angle_jitter_rms_rad >= 0.1)
    throw ConfigError(
        "config key scheme.angle_jitter_rms_rad: must lie in [0, 0.1)");
  if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz))
    throw ConfigError("config keys grid.f_min_hz/f_max_hz: need 0 < min < max");
  if (grid_points < 2)
    throw ConfigError("config key grid.points: must be >= 2");
  if (tune_max_evals < 1)
    throw ConfigError("config key tune.max_evals: must be >= 1");
  if (!(tune_band_lo_hz > 0.0) || !(tune_band_hi_hz > tune_band_lo_hz))
    throw ConfigError("config keys tune.band_lo_hz/band_hi_hz: need 0 < lo < hi");
  if (tune_bounds && tune_bounds->size() != tune_free.size())
    throw ConfigError(
        "config key tune.bounds: must have one [lo, hi] pair per entry of "
        "tune.free");
  resolved_ = true;
}

SchemeConfig RunConfig::scheme_config() const {
  if (!resolved_) throw std::logic_error("RunConfig::resolve() not called");
  SchemeConfig s;
  s.mode = mode;
  s.omfc = omfc;
  s.ifo = ifo;
  s.filter = resolved_filter_;
  s.filter_realization = filter_realization;
  s.input_squeeze =
      SqueezedState::from_db(input_squeeze_db, input_squeeze_angle_rad);
  s.theta_dc = resolved_theta_dc_;
  s.angle_jitter_rms = angle_jitter_rms_rad;
  s.readout_angle = readout_angle_rad;
  s.converter_ideal = converter_ideal;
  return s;
}

FrequencyGrid RunConfig::grid() const {
  if (!resolved_) throw std::logic_error("RunConfig::resolve() not called");
  return FrequencyGrid::from_band_hz(f_min_hz, f_max_hz,
                                     std::size_t(grid_points), spacing);
}

TuneSpec RunConfig::tune_spec() const {
  if (!resolved_) throw std::logic_error("RunConfig::resolve() not called");
  TuneSpec spec;
  spec.free_vars = tune_free;
  if (tune_bounds) {
    spec.bounds = *tune_bounds;
  } else {
    for (TuneVariable v : tune_free) {
      switch (v) {
        case TuneVariable::filter_detuning:
          spec.bounds.push_back({0.9 * resolved_filter_.detuning,
                                 1.1 * resolved_filter_.detuning});
          break;
        case TuneVariable::filter_bandwidth:
          spec.bounds.push_back({0.9 * resolved_filter_.bandwidth,
                                 1.1 * resolved_filter_.bandwidth});
          break;
        case TuneVariable::theta_dc:
          spec.bounds.push_back(
              {resolved_theta_dc_ - 5e-4, resolved_theta_dc_ + 5e-4});
          break;
      }
    }
  }
  spec.objective = tune_objective;
  spec.f_ref_hz = tune_f_ref_hz;
  spec.band_lo_hz = tune_band_lo_hz;
  spec.band_hi_hz = tune_band_hi_hz;
  spec.band_points = tune_band_points;
  spec.tolerance_db = tune_tolerance_db;
  spec.max_evals = tune_max_evals;
  return spec;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  if (!resolved_) throw std::logic_error("RunConfig::resolve() not called");
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [&](const std::string& k, double v) { out.emplace_back(k, fmt_full(v)); };
  auto str = [&](const std::string& k, const std::string& v) {
    out.emplace_back(k, v);
  };
  num("omfc.mass_kg", omfc.mass_kg);
  num("omfc.mech_freq_hz", mech_freq_hz);
  num("omfc.q_m", omfc.q_m);
  num("omfc.length_a_m", omfc.length_a_m);
  num("omfc.length_c_m", omfc.length_c_m);
  num("omfc.gamma_a_rad_s", omfc.gamma_a);
  num("omfc.gamma_c_rad_s", omfc.gamma_c);
  num("omfc.pump_power_a_w", omfc.pump_power_a_w);
  num("omfc.pump_power_c_w", omfc.pump_power_c_w);
  num("omfc.pump_wavelength_m", omfc.pump_wavelength_m);
  num("omfc.temperature_k", omfc.temperature_k);
  num("omfc.round_trip_loss", omfc.round_trip_loss);
  str("omfc.gamma_opt_override_rad_s",
      omfc.gamma_opt_override ? fmt_full(*omfc.gamma_opt_override) : "null");
  str("omfc.effective_loss_override",
      omfc.effective_loss_override ? fmt_full(*omfc.effective_loss_override)
                                   : "null");
  num("ifo.test_mass_kg", ifo.test_mass_kg);
  num("ifo.arm_length_m", ifo.arm_length_m);
  num("ifo.arm_power_w", ifo.arm_power_w);
  num("ifo.carrier_wavelength_m", ifo.carrier_wavelength_m);
  num("ifo.itm_transmission", ifo.itm_transmission);
  num("ifo.srm_transmission", ifo.srm_transmission);
  num("ifo.circulator_loss", ifo.circulator_loss);
  num("ifo.external_loss", ifo.external_loss);
  num("ifo.omfc_offset_hz", ifo.omfc_offset_rad_s / two_pi);
  str("ifo.bandwidth_mode", "explicit");  // resolved value pinned below
  num("ifo.bandwidth_rad_s", ifo.gamma_ifo);
  num("ifo.kappa_sq_anchor", kappa_sq_anchor);
  num("ifo.kappa_anchor_freq_hz", kappa_anchor_freq_hz);
  str("filter.mode", "explicit");
  num("filter.detuning_rad_s", resolved_filter_.detuning);
  num("filter.bandwidth_rad_s", resolved_filter_.bandwidth);
  str("filter.realization",
      filter_realization == FilterRealization::perfect ? "perfect" : "cavity");
  num("filter.fit_lo_hz", filter_fit_lo_hz);
  num("filter.fit_hi_hz", filter_fit_hi_hz);
  str("filter.theta_dc_mode", "explicit");
  num("filter.theta_dc_rad", resolved_theta_dc_);
  num("filter.theta_dc_design_freq_hz", theta_dc_design_freq_hz);
  str("scheme.mode", to_string(mode));
  num("scheme.input_squeeze_db", input_squeeze_db);
  num("scheme.input_squeeze_angle_rad", input_squeeze_angle_rad);
  num("scheme.readout_angle_rad", readout_angle_rad);
  num("scheme.angle_jitter_rms_rad", angle_jitter_rms_rad);
  str("scheme.converter_ideal", converter_ideal ? "true" : "false");
  num("grid.f_min_hz", f_min_hz);
  num("grid.f_max_hz", f_max_hz);
  out.emplace_back("grid.points", std::to_string(grid_points));
  str("grid.spacing",
      spacing == GridSpacing::linear ? "linear" : "logarithmic");
  {
    std::string free;
    for (std::size_t i = 0; i < tune_free.size(); ++i)
      free += std::string(i ? "," : "") + to_string(tune_free[i]);
    str("tune.free", free);
  }
  if (tune_bounds) {
    std::string b = "[";
    for (std::size_t i = 0; i < tune_bounds->size(); ++i)
      b += std::string(i ? ",[" : "[") + fmt_full((*tune_bounds)[i].lo) + "," +
           fmt_full((*tune_bounds)[i].hi) + "]";
    str("tune.bounds", b + "]");
  }
  str("tune.objective", tune_objective == TuneObjective::degradation_at
                            ? "degradation_at"
                            : "band_integrated");
  num("tune.f_ref_hz", tune_f_ref_hz);
  num("tune.band_lo_hz", tune_band_lo_hz);
  num("tune.band_hi_hz", tune_band_hi_hz);
  out.emplace_back("tune.band_points", std::to_string(tune_band_points));
  num("tune.tolerance_db", tune_tolerance_db);
  out.emplace_back("tune.max_evals", std::to_string(tune_max_evals));
  return out;
}

}  // namespace omfc
