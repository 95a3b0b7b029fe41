#pragma once

#include <ostream>
#include <string>

#include "omfc/config.hpp"
#include "omfc/schemes.hpp"
#include "omfc/tuning.hpp"

namespace omfc {

/// Scientific notation with 12 significant digits (deterministic).
std::string fmt_sci(double v);

/// '# key = value' metadata lines: generator version plus the fully-resolved
/// configuration.
void write_metadata(std::ostream& os, const RunConfig& cfg);

/// Converter table: frequency, conversion rate, loss, thermal, squeeze level.
void write_convert_csv(std::ostream& os, const RunConfig& cfg);

/// Budget tables. 'sensitivity' carries total + references; 'budget' adds
/// every component column.
void write_sensitivity_csv(std::ostream& os, const RunConfig& cfg,
                           const NoiseBudget& budget, bool all_components);

/// Criterion report: human-readable lines plus 'key,value' rows.
void write_criterion_report(std::ostream& os, const RunConfig& cfg);

/// Tuning result summary plus the evaluation trace.
void write_tune_report(std::ostream& os, const RunConfig& cfg,
                       const TuneResult& untuned_to_tuned, double before_db,
                       double after_db, const TuneSpec& spec);

}  // namespace omfc
