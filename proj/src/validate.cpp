#include "rodbench/validate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace rodbench {

namespace {

constexpr std::array<FailureKind, 10> kAllFailureKinds = {
    FailureKind::none,           FailureKind::parse_token_count,
    FailureKind::parse_non_numeric, FailureKind::parse_non_finite,
    FailureKind::invalid_vector, FailureKind::diverged,
    FailureKind::timeout,        FailureKind::transport,
    FailureKind::error_response, FailureKind::malformed_frame};

constexpr std::array<ActuationFamily, 4> kAllFamilies = {
    ActuationFamily::single_b1, ActuationFamily::single_b2,
    ActuationFamily::simultaneous, ActuationFamily::sequential};

FailureKind parse_failure_kind(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::token_count: return FailureKind::parse_token_count;
    case ParseErrorKind::non_numeric: return FailureKind::parse_non_numeric;
    case ParseErrorKind::non_finite: return FailureKind::parse_non_finite;
    case ParseErrorKind::none: break;
  }
  return FailureKind::none;
}

bool transport_class(FailureKind k) {
  return k == FailureKind::timeout || k == FailureKind::transport ||
         k == FailureKind::malformed_frame;
}

template <typename Work>
void run_workers(std::size_t n, int parallelism, Work&& work) {
  const int workers = std::max(
      1, std::min<int>(parallelism, static_cast<int>(std::min<std::size_t>(
                                        n, 1u << 10))));
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(static_cast<std::size_t>(workers));
  auto loop = [&](int w) {
    try {
      for (;;) {
        const std::size_t id = next.fetch_add(1);
        if (id >= n) return;
        work(static_cast<std::size_t>(id), w);
      }
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(w)] = ex.what();
    }
  };
  if (workers == 1) {
    loop(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(loop, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error("batch worker failed: " + e);
}

void finish_report(ValidationReport& report, double abort_fraction) {
  enforce_report_postconditions(report);
  long transport_fails = 0;
  for (const auto& r : report.results)
    if (transport_class(r.failure)) ++transport_fails;
  const auto total = static_cast<long>(report.results.size());
  if (static_cast<double>(transport_fails) >
      abort_fraction * static_cast<double>(total)) {
    std::ostringstream os;
    os << "batch aborted: " << transport_fails << " of " << total
       << " runs failed at the transport layer (threshold "
       << format_num(abort_fraction * 100.0) << "%)";
    throw TransportOverload(os.str(), transport_fails, total);
  }
}

}  // namespace

const char* report_regime_label(double delta) {
  const double m = std::abs(delta);
  if (!(m > 0.0) || m > 0.5 || !std::isfinite(delta)) return "out_of_range";
  return regime_name(regime_of(delta));
}

ValidationReport batch_validate(const Corpus& corpus,
                                const PolicyFactory& factory,
                                const Engine& engine, const RunConfig& cfg,
                                const BatchOptions& opts) {
  cfg.validate();
  const std::size_t n = corpus.scenarios.size();
  if (n == 0) throw std::domain_error("batch_validate: empty corpus");

  const int workers =
      std::max(1, std::min<int>(opts.parallelism, static_cast<int>(n)));
  std::vector<std::unique_ptr<Policy>> policies;
  policies.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) policies.push_back(factory());

  ValidationReport report;
  report.policy_name = policies[0]->name();
  report.source_label = opts.source_label;
  report.corpus_fingerprint = corpus.fingerprint;
  report.harness_fp = harness_fingerprint(engine, cfg);
  report.cfg = cfg;
  report.results.resize(n);

  run_workers(n, workers, [&](std::size_t id, int w) {
    const Scenario& sc = corpus.scenarios[id];
    ProposalRequest req{sc.id, sc.p_init, sc.p_target_delta, cfg.window_s};
    Proposal pr;
    try {
      pr = policies[static_cast<std::size_t>(w)]->propose(req);
    } catch (const std::exception& ex) {
      pr = Proposal{FailureKind::error_response, "", ex.what()};
    }

    RunResult r;
    if (pr.failure != FailureKind::none) {
      r = failure_result(cfg, sc.id, sc.p_init, sc.p_target_delta, pr.failure);
      r.family_executed = sc.family;  // no vector: attribute the label family
      r.family_from_label = true;
    } else {
      const ParseResult parsed = parse_schema(pr.payload);
      if (!parsed.ok) {
        r = failure_result(cfg, sc.id, sc.p_init, sc.p_target_delta,
                           parse_failure_kind(parsed.error));
        r.family_executed = sc.family;
        r.family_from_label = true;
      } else {
        r = execute_one(engine, sc.p_init, sc.p_target_delta, parsed.line.cv,
                        cfg, sc.id);
      }
    }
    report.results[id] = std::move(r);
  });

  finish_report(report, opts.transport_abort_fraction);
  return report;
}

ValidationReport batch_validate_ramp(const RampCorpus& corpus,
                                     const Engine& engine,
                                     const RunConfig& cfg,
                                     const BatchOptions& opts) {
  cfg.validate();
  const std::size_t n = corpus.scenarios.size();
  if (n == 0) throw std::domain_error("batch_validate_ramp: empty corpus");

  ValidationReport report;
  report.policy_name = "ramp-replay";
  report.source_label = opts.source_label;
  report.corpus_fingerprint = corpus.fingerprint;
  report.harness_fp = harness_fingerprint(engine, cfg);
  report.cfg = cfg;
  report.results.resize(n);

  run_workers(n, opts.parallelism, [&](std::size_t id, int) {
    const RampScenario& sc = corpus.scenarios[id];
    report.results[id] = execute_ramp(engine, sc.p_init, sc.p_target_delta,
                                      sc.command, cfg, sc.id);
  });

  finish_report(report, opts.transport_abort_fraction);
  return report;
}

void enforce_report_postconditions(const ValidationReport& report) {
  const auto& cfg = report.cfg;
  const std::size_t n = report.results.size();
  const std::size_t nbands = cfg.bands_pct.size();
  std::array<long, 4> family_attempts{};
  std::vector<long> band_success(nbands, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const RunResult& r = report.results[i];
    if (r.band_success.size() != nbands)
      throw std::logic_error("postcondition: band flag arity mismatch");
    bool prev = false;
    for (std::size_t b = 0; b < nbands; ++b) {
      // Bands ascend; success inside a narrow band implies success in every
      // wider one, so flags must be nondecreasing left to right.
      if (prev && !r.band_success[b])
        throw std::logic_error("postcondition: band monotonicity violated");
      prev = r.band_success[b];
      if (r.band_success[b]) ++band_success[b];
    }
    if (!(r.error_pct >= 0.0))
      throw std::logic_error("postcondition: negative error");
    const bool severe_expected = r.error_pct > cfg.severe_threshold_pct;
    if (r.severe_failure != severe_expected)
      throw std::logic_error("postcondition: severe flag inconsistent");
    if (!r.parse_ok && r.proposal_valid)
      throw std::logic_error("postcondition: valid proposal without parse");
    ++family_attempts[static_cast<std::size_t>(r.family_executed)];
  }

  long total_attempts = 0;
  for (long a : family_attempts) total_attempts += a;
  if (total_attempts != static_cast<long>(n))
    throw std::logic_error("postcondition: family counts not conserved");
  for (std::size_t b = 0; b < nbands; ++b) {
    const long failures = static_cast<long>(n) - band_success[b];
    if (band_success[b] < 0 || failures < 0 ||
        band_success[b] + failures != static_cast<long>(n))
      throw std::logic_error("postcondition: band counts not conserved");
  }
}

std::string write_report_text(const ValidationReport& report) {
  const auto& cfg = report.cfg;
  const std::size_t n = report.results.size();
  const std::size_t nbands = cfg.bands_pct.size();

  // Tallies.
  std::vector<long> band_success(nbands, 0);
  struct RegimeRow {
    long total = 0;
    std::vector<long> successes;
  };
  const char* regime_labels[4] = {"small", "medium", "large", "out_of_range"};
  std::array<RegimeRow, 4> regimes;
  for (auto& row : regimes) row.successes.assign(nbands, 0);
  struct FamilyRow {
    long attempts = 0, parse_ok = 0, valid = 0, severe = 0, from_label = 0;
  };
  std::array<FamilyRow, 4> families;
  std::array<long, 10> kind_counts{};
  std::array<long, 4> runtime_counts{};
  long parse_ok_total = 0;
  long finite_errors = 0, excluded = 0;

  auto regime_index = [&](double delta) {
    const std::string label = report_regime_label(delta);
    for (int i = 0; i < 4; ++i)
      if (label == regime_labels[i]) return i;
    return 3;
  };

  for (const auto& r : report.results) {
    for (std::size_t b = 0; b < nbands; ++b)
      if (r.band_success[b]) ++band_success[b];
    const int reg = regime_index(r.p_target_delta);
    ++regimes[static_cast<std::size_t>(reg)].total;
    for (std::size_t b = 0; b < nbands; ++b)
      if (r.band_success[b])
        ++regimes[static_cast<std::size_t>(reg)].successes[b];
    auto& fam = families[static_cast<std::size_t>(r.family_executed)];
    ++fam.attempts;
    if (r.parse_ok) ++fam.parse_ok;
    if (r.proposal_valid) ++fam.valid;
    if (r.severe_failure) ++fam.severe;
    if (r.family_from_label) ++fam.from_label;
    for (std::size_t k = 0; k < kAllFailureKinds.size(); ++k)
      if (r.failure == kAllFailureKinds[k]) ++kind_counts[k];
    if (r.parse_ok) {
      ++parse_ok_total;
      ++runtime_counts[static_cast<std::size_t>(r.family_executed)];
    }
    if (std::isfinite(r.error_pct))
      ++finite_errors;
    else
      ++excluded;
  }

  std::ostringstream os;
  os << "# rodbench validation report v1\n";
  os << "policy=" << report.policy_name << "\n";
  os << "source=" << (report.source_label.empty() ? "-" : report.source_label)
     << "\n";
  os << "runs=" << n << "\n";
  os << "corpus_fingerprint="
     << (report.corpus_fingerprint.empty() ? "-" : report.corpus_fingerprint)
     << "\n";
  os << "harness_fingerprint=" << report.harness_fp << "\n";

  os << "[config]\n";
  os << "horizon=" << format_num(cfg.horizon_s) << "\n";
  os << "window=" << (cfg.window_s ? format_num(*cfg.window_s) : "none")
     << "\n";
  os << "dt=" << format_num(cfg.dt_s) << "\n";
  os << "bands=";
  for (std::size_t b = 0; b < nbands; ++b)
    os << (b ? "," : "") << format_num(cfg.bands_pct[b]);
  os << "\n";
  os << "severe_threshold=" << format_num(cfg.severe_threshold_pct) << "\n";

  os << "[bands]\n";
  for (std::size_t b = 0; b < nbands; ++b) {
    os << "band=" << format_num(cfg.bands_pct[b])
       << " successes=" << band_success[b] << " total=" << n << " rate="
       << format_num(static_cast<double>(band_success[b]) /
                     static_cast<double>(n))
       << "\n";
  }

  os << "[regimes]\n";
  for (int reg = 0; reg < 4; ++reg) {
    const auto& row = regimes[static_cast<std::size_t>(reg)];
    for (std::size_t b = 0; b < nbands; ++b) {
      os << "regime=" << regime_labels[reg]
         << " band=" << format_num(cfg.bands_pct[b])
         << " successes=" << row.successes[b] << " total=" << row.total
         << " rate="
         << format_num(row.total ? static_cast<double>(row.successes[b]) /
                                       static_cast<double>(row.total)
                                 : 0.0)
         << "\n";
    }
  }

  os << "[families]\n";
  for (std::size_t f = 0; f < 4; ++f) {
    os << "family=" << family_name(kAllFamilies[f])
       << " attempts=" << families[f].attempts
       << " parse_ok=" << families[f].parse_ok
       << " valid=" << families[f].valid << " severe=" << families[f].severe
       << " from_label=" << families[f].from_label << "\n";
  }

  os << "[failure_kinds]\n";
  for (std::size_t k = 0; k < kAllFailureKinds.size(); ++k)
    os << "kind=" << failure_kind_name(kAllFailureKinds[k])
       << " count=" << kind_counts[k] << "\n";

  os << "[runtime_distribution]\n";
  for (std::size_t f = 0; f < 4; ++f) {
    os << "family=" << family_name(kAllFamilies[f])
       << " count=" << runtime_counts[f] << " fraction="
       << format_num(parse_ok_total
                         ? static_cast<double>(runtime_counts[f]) /
                               static_cast<double>(parse_ok_total)
                         : 0.0)
       << "\n";
  }

  os << "[parsing]\n";
  os << "parse_ok=" << parse_ok_total << " total=" << n << " rate="
     << format_num(static_cast<double>(parse_ok_total) /
                   static_cast<double>(n))
     << "\n";

  os << "[errors]\n";
  os << "finite=" << finite_errors << " excluded=" << excluded << "\n";
  {
    int col = 0;
    for (const auto& r : report.results) {
      if (!std::isfinite(r.error_pct)) continue;
      os << format_num(r.error_pct);
      if (++col == 20) {
        os << "\n";
        col = 0;
      } else {
        os << " ";
      }
    }
    if (col != 0) os << "\n";
  }

  os << "[runs]\n";
  for (const auto& r : report.results) {
    os << "id=" << r.scenario_id << " p_init=" << format_num(r.p_init)
       << " delta=" << format_num(r.p_target_delta)
       << " family=" << family_name(r.family_executed)
       << " regime=" << report_regime_label(r.p_target_delta)
       << " achieved=" << format_num(r.achieved_power)
       << " error_pct=" << format_num(r.error_pct) << " bands=";
    for (std::size_t b = 0; b < nbands; ++b) os << (r.band_success[b] ? 1 : 0);
    os << " failure=" << failure_kind_name(r.failure)
       << " parse=" << (r.parse_ok ? 1 : 0)
       << " valid=" << (r.proposal_valid ? 1 : 0)
       << " severe=" << (r.severe_failure ? 1 : 0)
       << " degenerate=" << (r.degenerate_motion ? 1 : 0)
       << " from_label=" << (r.family_from_label ? 1 : 0) << "\n";
  }
  return os.str();
}

void write_report(const ValidationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << write_report_text(report);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::pair<std::string, std::string> split_kv(const std::string& tok,
                                             std::size_t lineno) {
  const auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::runtime_error("report line " + std::to_string(lineno) +
                             ": malformed field '" + tok + "'");
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

double num_field(const std::string& text, const std::string& key,
                 std::size_t lineno) {
  const auto n = parse_number(text);
  if (!n.parsed)
    throw std::runtime_error("report line " + std::to_string(lineno) +
                             ": field '" + key + "' is not numeric");
  return n.value;
}

}  // namespace

ValidationReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line != "# rodbench validation report v1")
    throw std::runtime_error(path + ": not a validation report");
  ++lineno;

  ValidationReport report;
  std::string section;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line;
      continue;
    }
    if (section.empty()) {
      const auto [k, v] = split_kv(line, lineno);
      if (k == "policy") report.policy_name = v;
      else if (k == "source") report.source_label = v == "-" ? "" : v;
      else if (k == "corpus_fingerprint")
        report.corpus_fingerprint = v == "-" ? "" : v;
      else if (k == "harness_fingerprint") report.harness_fp = v;
      // runs= is implied by the [runs] section length
      continue;
    }
    if (section == "[config]") {
      const auto [k, v] = split_kv(line, lineno);
      if (k == "horizon") report.cfg.horizon_s = num_field(v, k, lineno);
      else if (k == "window")
        report.cfg.window_s =
            v == "none" ? std::nullopt
                        : std::optional<double>(num_field(v, k, lineno));
      else if (k == "dt") report.cfg.dt_s = num_field(v, k, lineno);
      else if (k == "severe_threshold")
        report.cfg.severe_threshold_pct = num_field(v, k, lineno);
      else if (k == "bands") {
        report.cfg.bands_pct.clear();
        std::string item;
        std::istringstream bs(v);
        while (std::getline(bs, item, ','))
          report.cfg.bands_pct.push_back(num_field(item, k, lineno));
      }
      continue;
    }
    if (section == "[runs]") {
      RunResult r;
      std::string bands_bits;
      for (const auto& tok : split_ws(line)) {
        const auto [k, v] = split_kv(tok, lineno);
        if (k == "id") r.scenario_id = static_cast<long>(num_field(v, k, lineno));
        else if (k == "p_init") r.p_init = num_field(v, k, lineno);
        else if (k == "delta") r.p_target_delta = num_field(v, k, lineno);
        else if (k == "family") {
          const auto fam = family_from_name(v);
          if (!fam)
            throw std::runtime_error("report line " + std::to_string(lineno) +
                                     ": unknown family");
          r.family_executed = *fam;
        } else if (k == "achieved") r.achieved_power = num_field(v, k, lineno);
        else if (k == "error_pct") r.error_pct = num_field(v, k, lineno);
        else if (k == "bands") bands_bits = v;
        else if (k == "failure") {
          bool found = false;
          for (auto kind : kAllFailureKinds)
            if (v == failure_kind_name(kind)) {
              r.failure = kind;
              found = true;
            }
          if (!found)
            throw std::runtime_error("report line " + std::to_string(lineno) +
                                     ": unknown failure kind");
        } else if (k == "parse") r.parse_ok = v == "1";
        else if (k == "valid") r.proposal_valid = v == "1";
        else if (k == "severe") r.severe_failure = v == "1";
        else if (k == "degenerate") r.degenerate_motion = v == "1";
        else if (k == "from_label") r.family_from_label = v == "1";
      }
      r.band_success.clear();
      for (char c : bands_bits) r.band_success.push_back(c == '1');
      report.results.push_back(std::move(r));
      continue;
    }
    // Aggregate sections are recomputable from [runs]; skip on read.
  }
  if (report.results.empty())
    throw std::runtime_error(path + ": report has no runs");
  report.cfg.validate();
  enforce_report_postconditions(report);
  return report;
}

}  // namespace rodbench
