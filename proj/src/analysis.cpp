#include "rodbench/analysis.hpp"

#include <cmath>
#include <sstream>

namespace rodbench {

namespace {

constexpr const char* kUndefined = "undefined";

std::string csv_num(double v) { return format_num(v); }

}  // namespace

std::vector<std::pair<std::string, std::string>> cross_scale_tables(
    const std::vector<ScaleReport>& entries, const MixtureWeights& training) {
  if (entries.empty())
    throw std::invalid_argument("cross_scale_tables: no reports");
  const auto& bands = entries.front().report.cfg.bands_pct;
  for (const auto& e : entries)
    if (e.report.cfg.bands_pct != bands)
      throw std::invalid_argument(
          "cross_scale_tables: mismatched band configs across reports");

  const PolicyDistribution train_dist = mixture_distribution(training);

  // Per-entry precomputation.
  struct Derived {
    std::vector<double> rates;        // per band
    ErrorDistribution dist;
    bool has_variance = false;
    double variance = 0.0;
  };
  std::vector<Derived> derived(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& results = entries[i].report.results;
    for (double b : bands)
      derived[i].rates.push_back(success_rate(results, b));
    derived[i].dist = error_distribution(results);
    if (derived[i].dist.errors.size() >= 1) {
      derived[i].variance = population_variance(derived[i].dist.errors);
      derived[i].has_variance = true;
    }
  }

  std::vector<std::pair<std::string, std::string>> out;

  {
    std::ostringstream os;
    os << "scale,band_pct,successes,total,rate\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto total = static_cast<long>(entries[i].report.results.size());
      for (std::size_t b = 0; b < bands.size(); ++b) {
        const long ok = std::lround(derived[i].rates[b] * total);
        os << entries[i].scale << "," << csv_num(bands[b]) << "," << ok << ","
           << total << "," << csv_num(derived[i].rates[b]) << "\n";
      }
    }
    out.emplace_back("success.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "scale_from,scale_to,band_pct,s_from,s_to,ln_ratio,decades,"
          "alpha_per_decade\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        const double decades =
            std::log10(static_cast<double>(entries[j].scale) /
                       static_cast<double>(entries[i].scale));
        for (std::size_t b = 0; b < bands.size(); ++b) {
          const double s_from = derived[i].rates[b];
          const double s_to = derived[j].rates[b];
          os << entries[i].scale << "," << entries[j].scale << ","
             << csv_num(bands[b]) << "," << csv_num(s_from) << ","
             << csv_num(s_to) << ",";
          if (s_from == 0.0) {
            os << kUndefined << "," << csv_num(decades) << "," << kUndefined;
          } else {
            const double ln_ratio = std::log(s_to / s_from);
            os << csv_num(ln_ratio) << "," << csv_num(decades) << ",";
            if (ln_ratio == 0.0)
              os << csv_num(0.0);  // flat scaling regardless of span
            else if (decades > 0.0)
              os << csv_num(ln_ratio / decades);
            else
              os << kUndefined;
          }
          os << "\n";
        }
      }
    }
    out.emplace_back("scaling.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "scale_from,scale_to,var_from,var_to,ratio,infinite\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        os << entries[i].scale << "," << entries[j].scale << ",";
        if (!derived[i].has_variance || !derived[j].has_variance) {
          os << kUndefined << "," << kUndefined << "," << kUndefined << ",0\n";
          continue;
        }
        const auto vc = variance_collapse(derived[i].dist.errors,
                                          derived[j].dist.errors);
        os << csv_num(derived[i].variance) << ","
           << csv_num(derived[j].variance) << "," << csv_num(vc.ratio) << ","
           << (vc.infinite ? 1 : 0) << "\n";
      }
    }
    out.emplace_back("collapse.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "scale,parsed_runs,excluded,kl_vs_training_nats,entropy_nats,"
          "severe_total,failure_concentration\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& results = entries[i].report.results;
      long parsed = 0;
      for (const auto& r : results)
        if (r.parse_ok) ++parsed;
      os << entries[i].scale << "," << parsed << ","
         << derived[i].dist.excluded_count << ",";
      if (parsed > 0) {
        const auto p = family_distribution(results);
        os << csv_num(kl_divergence(p, train_dist)) << ","
           << csv_num(policy_entropy(p)) << ",";
      } else {
        os << kUndefined << "," << kUndefined << ",";
      }
      const auto fc = failure_concentration(severe_by_family(results));
      os << fc.total << ","
         << (fc.defined ? csv_num(fc.value) : std::string(kUndefined)) << "\n";
    }
    out.emplace_back("policy_stats.csv", os.str());
  }

  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::ostringstream os;
    os << "error_pct,cumulative_fraction\n";
    if (!derived[i].dist.errors.empty())
      for (const auto& pt : cdf_export(derived[i].dist.errors))
        os << csv_num(pt.error_pct) << "," << csv_num(pt.fraction) << "\n";
    out.emplace_back("cdf_" + std::to_string(entries[i].scale) + ".csv",
                     os.str());
  }

  return out;
}

}  // namespace rodbench
