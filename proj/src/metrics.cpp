#include "rodbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rodbench {

ErrorDistribution error_distribution(const std::vector<RunResult>& results) {
  ErrorDistribution out;
  out.errors.reserve(results.size());
  for (const auto& r : results) {
    if (std::isfinite(r.error_pct))
      out.errors.push_back(r.error_pct);
    else
      ++out.excluded_count;
  }
  return out;
}

double success_rate(const std::vector<RunResult>& results, double band_pct) {
  if (results.empty())
    throw std::domain_error("success_rate: empty result set");
  if (!(band_pct > 0.0)) throw std::domain_error("success_rate: band <= 0");
  long ok = 0;
  for (const auto& r : results)
    if (r.error_pct <= band_pct) ++ok;
  return static_cast<double>(ok) / static_cast<double>(results.size());
}

double success_rate(const std::vector<double>& error_pcts, double band_pct) {
  if (error_pcts.empty())
    throw std::domain_error("success_rate: empty result set");
  if (!(band_pct > 0.0)) throw std::domain_error("success_rate: band <= 0");
  long ok = 0;
  for (double e : error_pcts)
    if (e <= band_pct) ++ok;
  return static_cast<double>(ok) / static_cast<double>(error_pcts.size());
}

std::optional<double> scaling_exponent(double s_small, double s_large,
                                       double decades) {
  if (!(s_small >= 0.0) || s_small > 1.0 || !(s_large >= 0.0) || s_large > 1.0)
    throw std::domain_error("scaling_exponent: rates must lie in [0, 1]");
  if (!(decades > 0.0))
    throw std::domain_error("scaling_exponent: decades must be positive");
  if (s_small == 0.0) return std::nullopt;  // undefined, reported as such
  return std::log(s_large / s_small) / decades;
}

double quantile(std::vector<double> errors, double q) {
  if (errors.empty()) throw std::domain_error("quantile: empty sample");
  if (!(q > 0.0) || q > 1.0)
    throw std::domain_error("quantile: q must lie in (0, 1]");
  std::sort(errors.begin(), errors.end());
  const auto n = static_cast<double>(errors.size());
  auto idx = static_cast<std::size_t>(
      std::ceil(q * n - 1e-12));  // 1-based rank, guard exact multiples
  if (idx == 0) idx = 1;
  return errors[idx - 1];
}

double population_variance(const std::vector<double>& values) {
  if (values.empty())
    throw std::domain_error("variance: empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

VarianceCollapse variance_collapse(const std::vector<double>& small_scale,
                                   const std::vector<double>& large_scale) {
  const double num = population_variance(small_scale);
  const double den = population_variance(large_scale);
  VarianceCollapse out;
  if (den == 0.0) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.infinite = true;
  } else {
    out.ratio = num / den;
  }
  return out;
}

PolicyDistribution family_distribution(const std::vector<RunResult>& results) {
  std::array<long, 4> counts{};
  long total = 0;
  for (const auto& r : results) {
    if (!r.parse_ok) continue;
    ++counts[static_cast<std::size_t>(r.family_executed)];
    ++total;
  }
  if (total == 0)
    throw std::domain_error("family_distribution: no parsed runs");
  PolicyDistribution p{};
  for (std::size_t i = 0; i < 4; ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return p;
}

PolicyDistribution mixture_distribution(const MixtureWeights& mixture) {
  PolicyDistribution q{mixture.single_b1, mixture.single_b2,
                       mixture.simultaneous, mixture.sequential};
  double sum = 0.0;
  for (double w : q) {
    if (w < 0.0)
      throw std::domain_error("mixture_distribution: negative weight");
    sum += w;
  }
  if (!(sum > 0.0))
    throw std::domain_error("mixture_distribution: all weights zero");
  for (double& w : q) w /= sum;
  return q;
}

namespace {

void check_distribution(const PolicyDistribution& p, const char* name) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0))
      throw std::domain_error(std::string(name) + ": negative probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::domain_error(std::string(name) + ": probabilities sum to " +
                            format_num(sum) + ", not 1");
}

constexpr const char* kFamilyOrder[4] = {"single_b1", "single_b2",
                                         "simultaneous", "sequential"};

}  // namespace

double kl_divergence(const PolicyDistribution& p, const PolicyDistribution& q) {
  check_distribution(p, "kl_divergence: p");
  check_distribution(q, "kl_divergence: q");
  double kl = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (p[i] == 0.0) continue;  // 0*ln(0/q) = 0
    if (q[i] == 0.0)
      throw std::domain_error(
          std::string("kl_divergence: q has no support on ") +
          kFamilyOrder[i]);
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double policy_entropy(const PolicyDistribution& p) {
  check_distribution(p, "policy_entropy");
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

FailureConcentration failure_concentration(
    const std::array<long, 4>& severe_counts) {
  FailureConcentration out;
  out.counts = severe_counts;
  long max_count = 0;
  for (long c : severe_counts) {
    if (c < 0)
      throw std::domain_error("failure_concentration: negative count");
    out.total += c;
    max_count = std::max(max_count, c);
  }
  if (out.total == 0) return out;  // 0/0: undefined, flag stays false
  out.defined = true;
  out.value = static_cast<double>(max_count) / static_cast<double>(out.total);
  return out;
}

std::array<long, 4> severe_by_family(const std::vector<RunResult>& results) {
  std::array<long, 4> counts{};
  for (const auto& r : results)
    if (r.severe_failure)
      ++counts[static_cast<std::size_t>(r.family_executed)];
  return counts;
}

RegimeBandTable stratify_by_regime(const std::vector<RunResult>& results,
                                   const std::vector<double>& bands_pct) {
  RegimeBandTable table;
  table.bands_pct = bands_pct;
  for (auto& row : table.rows) row.successes.assign(bands_pct.size(), 0);
  for (const auto& r : results) {
    const Regime reg = regime_of(r.p_target_delta);  // throws on placement
    auto& row = table.rows[static_cast<std::size_t>(reg)];
    ++row.total;
    for (std::size_t b = 0; b < bands_pct.size(); ++b)
      if (r.error_pct <= bands_pct[b]) ++row.successes[b];
  }
  return table;
}

std::vector<CdfPoint> cdf_export(const std::vector<double>& errors) {
  if (errors.empty()) throw std::domain_error("cdf_export: empty sample");
  std::vector<double> sorted = errors;
  for (double e : sorted)
    if (!std::isfinite(e))
      throw std::domain_error("cdf_export: non-finite error value");
  std::sort(sorted.begin(), sorted.end());
  std::vector<CdfPoint> out;
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const bool last_of_value =
        i + 1 == sorted.size() || sorted[i + 1] != sorted[i];
    if (last_of_value)
      out.push_back(CdfPoint{sorted[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

}  // namespace rodbench
