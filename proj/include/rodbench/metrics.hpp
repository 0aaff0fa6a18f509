#pragma once

// Quantitative formulas over batch results: tolerance-band success, scaling
// exponent, order-statistic quantiles, variance collapse, KL divergence,
// policy entropy, failure concentration, regime stratification, and CDF
// export. All logarithms are natural (nats).

#include <array>
#include <optional>
#include <vector>

#include "rodbench/scenario.hpp"

namespace rodbench {

// Finite error values with the count of sentinel/invalid runs excluded from
// distribution statistics (they still count in success denominators).
struct ErrorDistribution {
  std::vector<double> errors;  // finite, >= 0, result order preserved
  long excluded_count = 0;
};

ErrorDistribution error_distribution(const std::vector<RunResult>& results);

// Fraction of runs with error <= band; invalid/sentinel runs count in the
// denominator. Throws std::domain_error on empty input or band <= 0.
double success_rate(const std::vector<RunResult>& results, double band_pct);
double success_rate(const std::vector<double>& error_pcts, double band_pct);

// alpha = ln(S_large / S_small) / decades. Both rates must lie in [0, 1];
// S_small = 0 makes the exponent undefined (nullopt). `decades` is the
// data-scale span in factors of ten (1 for a single 10x step).
std::optional<double> scaling_exponent(double s_small, double s_large,
                                       double decades = 1.0);

// Q_q = inf{e : Pr[E <= e] >= q}, realized as the order statistic at index
// ceil(q*n) - 1 of the sorted sample (lower value at ties; no
// interpolation). q in (0, 1]; empty input throws.
double quantile(std::vector<double> errors, double q);

struct VarianceCollapse {
  double ratio = 1.0;
  bool infinite = false;  // large-scale distribution is constant
};

// Population-variance ratio Var(small scale) / Var(large scale).
VarianceCollapse variance_collapse(const std::vector<double>& small_scale,
                                   const std::vector<double>& large_scale);

double population_variance(const std::vector<double>& values);

// Probability per actuation family, ordered single_b1, single_b2,
// simultaneous, sequential.
using PolicyDistribution = std::array<double, 4>;

// Runtime actuation distribution over runs that produced a parsed vector.
// Throws std::domain_error when no run parsed.
PolicyDistribution family_distribution(const std::vector<RunResult>& results);

PolicyDistribution mixture_distribution(const MixtureWeights& mixture);

// Sum p*ln(p/q) with 0*ln(0/q) = 0. Throws std::domain_error when p places
// mass on a family with q = 0 (names the family) or when either argument is
// not a distribution.
double kl_divergence(const PolicyDistribution& p, const PolicyDistribution& q);

// -Sum p*ln(p) with 0*ln(0) = 0.
double policy_entropy(const PolicyDistribution& p);

struct FailureConcentration {
  bool defined = false;  // false when there are no severe failures (0/0)
  double value = 0.0;    // max family share of severe failures, in [1/4, 1]
  std::array<long, 4> counts{};
  long total = 0;
};

FailureConcentration failure_concentration(
    const std::array<long, 4>& severe_counts);

std::array<long, 4> severe_by_family(const std::vector<RunResult>& results);

// Per-regime success at each band. Throws std::domain_error when any run's
// |delta| falls outside (0, 0.5] (placement error).
struct RegimeBandTable {
  struct Row {
    long total = 0;
    std::vector<long> successes;  // parallel to bands
  };
  std::vector<double> bands_pct;
  std::array<Row, 3> rows;  // small, medium, large
};

RegimeBandTable stratify_by_regime(const std::vector<RunResult>& results,
                                   const std::vector<double>& bands_pct);

// Right-continuous empirical CDF: one step per distinct error value,
// cumulative fraction over the finite sample. Input must be nonempty and
// finite.
struct CdfPoint {
  double error_pct;
  double fraction;
};

std::vector<CdfPoint> cdf_export(const std::vector<double>& errors);

}  // namespace rodbench
