#pragma once

// Cross-scale analysis: success tables, scaling exponents, variance-collapse
// ratios, and per-report policy statistics over a set of validation reports
// taken at different corpus scales, exported as CSV tables.

#include <string>
#include <utility>
#include <vector>

#include "rodbench/metrics.hpp"
#include "rodbench/validate.hpp"

namespace rodbench {

struct ScaleReport {
  long scale = 0;  // corpus size behind the report
  ValidationReport report;
};

// Returns (filename, content) pairs:
//   success.csv      scale,band_pct,successes,total,rate
//   scaling.csv      scale_from,scale_to,band_pct,s_from,s_to,ln_ratio,
//                    decades,alpha_per_decade
//   collapse.csv     scale_from,scale_to,var_from,var_to,ratio,infinite
//   policy_stats.csv scale,parsed_runs,excluded,kl_vs_training_nats,
//                    entropy_nats,severe_total,failure_concentration
//   cdf_<scale>.csv  error_pct,cumulative_fraction
// Undefined quantities (zero base rate, no severe failures, no parsed runs)
// appear as the literal token "undefined". All reports must share one band
// configuration; `training` is the corpus mixture KL is measured against.
std::vector<std::pair<std::string, std::string>> cross_scale_tables(
    const std::vector<ScaleReport>& entries,
    const MixtureWeights& training = {});

}  // namespace rodbench
