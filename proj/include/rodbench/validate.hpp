#pragma once

// Batch validation: every corpus scenario is posed to a policy exactly once,
// each proposal is parsed, validated, executed, and scored in isolation, and
// the results are assembled into a stable-text report. Aggregates are
// independent of the parallelism degree; reports are byte-identical across
// worker counts.

#include <string>
#include <vector>

#include "rodbench/policy.hpp"

namespace rodbench {

struct BatchOptions {
  int parallelism = 1;
  // Abort threshold for transport-class failures (timeout/transport/
  // malformed_frame), checked once at completion so partial progress never
  // depends on scheduling.
  double transport_abort_fraction = 0.5;
  std::string source_label;  // free text echoed into the report
};

struct TransportOverload : std::runtime_error {
  TransportOverload(const std::string& msg, long failures_, long total_)
      : std::runtime_error(msg), failures(failures_), total(total_) {}
  long failures;
  long total;
};

struct ValidationReport {
  std::string policy_name;
  std::string source_label;
  std::string corpus_fingerprint;  // harness fingerprint at generation time
  std::string harness_fp;          // engine + run settings at validation time
  RunConfig cfg;
  std::vector<RunResult> results;  // ascending scenario-id order
};

// Pose every scenario to a per-worker policy instance, score each proposal,
// and enforce the global postconditions. Throws TransportOverload when more
// than `transport_abort_fraction` of runs failed at the transport layer.
ValidationReport batch_validate(const Corpus& corpus,
                                const PolicyFactory& factory,
                                const Engine& engine, const RunConfig& cfg,
                                const BatchOptions& opts = {});

// Replay a ramp corpus through the two-parameter reactivity mode (no policy:
// each scenario executes its own recorded command).
ValidationReport batch_validate_ramp(const RampCorpus& corpus,
                                     const Engine& engine,
                                     const RunConfig& cfg,
                                     const BatchOptions& opts = {});

// Stable-text report: config echo, aggregate tables (bands, regimes,
// families, failure kinds, runtime distribution, parsing), the raw error
// list, and one line per run. Contains no timing, so equal batches produce
// equal bytes.
std::string write_report_text(const ValidationReport& report);
void write_report(const ValidationReport& report, const std::string& path);
ValidationReport read_report(const std::string& path);

// Global postconditions enforced on every finished batch (also exposed for
// tests): per-run band monotonicity and severe-flag consistency, family
// count conservation, and per-band success/failure conservation. Throws
// std::logic_error on violation.
void enforce_report_postconditions(const ValidationReport& report);

// Report-facing regime label: the three scenario bins plus "out_of_range"
// for labels outside (0, 0.5] (possible in ramp corpora).
const char* report_regime_label(double delta);

}  // namespace rodbench
