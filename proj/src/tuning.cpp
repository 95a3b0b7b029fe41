#include "omfc/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "omfc/constants.hpp"

namespace omfc {

const char* to_string(TuneVariable v) {
  switch (v) {
    case TuneVariable::filter_detuning: return "filter_detuning";
    case TuneVariable::filter_bandwidth: return "filter_bandwidth";
    case TuneVariable::theta_dc: return "theta_dc";
  }
  return "?";
}

TuneVariable tune_variable_from_string(const std::string& s) {
  if (s == "filter_detuning") return TuneVariable::filter_detuning;
  if (s == "filter_bandwidth") return TuneVariable::filter_bandwidth;
  if (s == "theta_dc") return TuneVariable::theta_dc;
  throw std::invalid_argument("unknown tune variable: " + s);
}

TuneSpec TuneSpec::defaults(const SchemeConfig& cfg) {
  TuneSpec spec;
  spec.free_vars = {TuneVariable::theta_dc};
  spec.bounds = {{cfg.theta_dc - 5e-4, cfg.theta_dc + 5e-4}};
  return spec;
}

namespace {

SchemeConfig reference_config(SchemeConfig cfg) {
  cfg.converter_phase_off = true;
  cfg.theta_dc = 0.0;
  cfg.angle_jitter_rms = 0.0;
  return cfg;
}

double degradation_on_grid(const SchemeConfig& cfg, const FrequencyGrid& grid,
                           std::size_t index) {
  const NoiseBudget with = compute_budget(cfg, grid);
  const NoiseBudget ideal = compute_budget(reference_config(cfg), grid);
  return 10.0 *
         std::log10(with.total[index] / ideal.total[index]);
}

}  // namespace

double degradation_at_db(const SchemeConfig& cfg, double f_ref_hz) {
  if (!(f_ref_hz > 0.0))
    throw std::invalid_argument("degradation_at: f_ref must be > 0");
  // Two-point grid; only the first point is read.
  FrequencyGrid g({two_pi * f_ref_hz, two_pi * f_ref_hz * 1.0001},
                  GridSpacing::linear);
  return degradation_on_grid(cfg, g, 0);
}

double band_degradation_db(const SchemeConfig& cfg, double f_lo_hz,
                           double f_hi_hz, int n_points) {
  FrequencyGrid grid = FrequencyGrid::from_band_hz(
      f_lo_hz, f_hi_hz, std::size_t(n_points), GridSpacing::logarithmic);
  const NoiseBudget with = compute_budget(cfg, grid);
  const NoiseBudget ideal = compute_budget(reference_config(cfg), grid);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sum += 10.0 * std::log10(with.total[i] / ideal.total[i]);
  return sum / double(grid.size());
}

BoxResult minimize_box(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<TuneBounds>& bounds, double tolerance, int max_evals) {
  const std::size_t dim = bounds.size();
  if (dim == 0) throw std::invalid_argument("minimize_box: no free variables");
  for (const auto& b : bounds)
    if (!(b.lo < b.hi))
      throw std::invalid_argument("minimize_box: bounds must be ordered");

  BoxResult res;
  res.value = std::numeric_limits<double>::infinity();
  int evals = 0;
  auto clamp = [&](std::vector<double> x) {
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = std::clamp(x[i], bounds[i].lo, bounds[i].hi);
    return x;
  };
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++evals;
    res.trace.emplace_back(x, v);
    if (v < res.value) {  // strict: ties keep the first-found point
      res.value = v;
      res.x = x;
    }
    return v;
  };

  // Coarse scan: fixed lattice, row-major order.
  const int per_dim = dim == 1 ? 11 : (dim == 2 ? 9 : 7);
  std::vector<int> idx(dim, 0);
  bool done = false;
  while (!done && evals < max_evals) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = bounds[i].lo +
             (bounds[i].hi - bounds[i].lo) * double(idx[i]) / (per_dim - 1);
    eval(x);
    std::size_t d = 0;
    while (d < dim && ++idx[d] == per_dim) idx[d++] = 0;
    done = d == dim;
  }

  // Nelder-Mead refinement around the scan incumbent, clamped to the box.
  std::vector<std::vector<double>> simplex(dim + 1, res.x);
  std::vector<double> fx(dim + 1, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < dim; ++i) {
    const double step = (bounds[i].hi - bounds[i].lo) / double(per_dim - 1);
    simplex[i + 1][i] = std::clamp(simplex[i + 1][i] + step, bounds[i].lo,
                                   bounds[i].hi);
    if (simplex[i + 1][i] == simplex[0][i])  // at the upper edge: step down
      simplex[i + 1][i] = std::clamp(simplex[0][i] - step, bounds[i].lo,
                                     bounds[i].hi);
  }
  for (std::size_t i = 0; i <= dim && evals < max_evals; ++i)
    fx[i] = eval(simplex[i]);

  auto order = [&]() {
    std::vector<std::size_t> p(dim + 1);
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(),
                     [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    std::vector<std::vector<double>> s2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
      s2[i] = simplex[p[i]];
      f2[i] = fx[p[i]];
    }
    simplex.swap(s2);
    fx.swap(f2);
  };

  while (evals < max_evals) {
    order();
    if (std::abs(fx[dim] - fx[0]) <= tolerance) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / dim;
    auto blend = [&](double coef) {
      std::vector<double> x(dim);
      for (std::size_t j = 0; j < dim; ++j)
        x[j] = centroid[j] + coef * (centroid[j] - simplex[dim][j]);
      return clamp(x);
    };
    const auto xr = blend(1.0);
    const double fr = eval(xr);
    if (fr < fx[0]) {
      const auto xe = blend(2.0);
      if (evals < max_evals && eval(xe) < fr) {
        simplex[dim] = xe;
        fx[dim] = res.trace.back().second;
      } else {
        simplex[dim] = xr;
        fx[dim] = fr;
      }
    } else if (fr < fx[dim - 1]) {
      simplex[dim] = xr;
      fx[dim] = fr;
    } else {
      const auto xc = blend(fr < fx[dim] ? 0.5 : -0.5);
      const double fc = evals < max_evals ? eval(xc) : fr;
      if (fc < std::min(fr, fx[dim])) {
        simplex[dim] = xc;
        fx[dim] = fc;
      } else {
        for (std::size_t i = 1; i <= dim && evals < max_evals; ++i) {
          for (std::size_t j = 0; j < dim; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          fx[i] = eval(simplex[i]);
        }
      }
    }
  }
  res.evals = evals;
  return res;
}

TuneResult optimize(const SchemeConfig& cfg, const TuneSpec& spec) {
  if (spec.free_vars.empty())
    throw std::invalid_argument("optimize: no free variables");
  if (spec.free_vars.size() != spec.bounds.size())
    throw std::invalid_argument("optimize: bounds do not match free variables");

  auto apply = [&](const std::vector<double>& x) {
    SchemeConfig c = cfg;
    for (std::size_t i = 0; i < spec.free_vars.size(); ++i) {
      switch (spec.free_vars[i]) {
        case TuneVariable::filter_detuning: c.filter.detuning = x[i]; break;
        case TuneVariable::filter_bandwidth: c.filter.bandwidth = x[i]; break;
        case TuneVariable::theta_dc: c.theta_dc = x[i]; break;
      }
    }
    return c;
  };
  auto objective = [&](const std::vector<double>& x) {
    const SchemeConfig c = apply(x);
    return spec.objective == TuneObjective::degradation_at
               ? degradation_at_db(c, spec.f_ref_hz)
               : band_degradation_db(c, spec.band_lo_hz, spec.band_hi_hz,
                                     spec.band_points);
  };

  const BoxResult box =
      minimize_box(objective, spec.bounds, spec.tolerance_db, spec.max_evals);
  TuneResult out;
  const SchemeConfig best = apply(box.x);
  out.filter = best.filter;
  out.theta_dc = best.theta_dc;
  out.objective_db = box.value;
  out.evals = box.evals;
  out.converged = box.converged;
  out.trace.reserve(box.trace.size());
  for (std::size_t i = 0; i < box.trace.size(); ++i) {
    const SchemeConfig c = apply(box.trace[i].first);
    out.trace.push_back({int(i), c.filter.detuning, c.filter.bandwidth,
                         c.theta_dc, box.trace[i].second});
  }
  return out;
}

}  // namespace omfc
