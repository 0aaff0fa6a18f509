#pragma once

// Closed-loop run execution: a control vector (or a reactivity ramp command)
// is executed against a freshly initialized critical engine and scored as
// relative terminal-power error against the scenario target.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rodbench/actuation.hpp"
#include "rodbench/kinetics.hpp"

namespace rodbench {

struct RunConfig {
  double horizon_s = 100.0;
  std::optional<double> window_s;  // evaluation time; horizon when unset
  double dt_s = 1.0e-3;
  std::vector<double> bands_pct = {1.0, 2.0, 3.0, 5.0, 10.0};
  double severe_threshold_pct = 10.0;

  double eval_time() const { return window_s ? *window_s : horizon_s; }
  void validate() const;
};

// Canonical text of run settings; combined with the engine text for corpus
// fingerprints since labels depend on horizon and step size.
std::string run_canonical_text(const RunConfig& cfg);
std::string harness_fingerprint(const Engine& engine, const RunConfig& cfg);

enum class FailureKind {
  none,            // executed normally
  parse_token_count,
  parse_non_numeric,
  parse_non_finite,
  invalid_vector,  // parsed but failed structural validation
  diverged,        // integrator blow-up
  timeout,         // external policy did not answer in time
  transport,       // session/pipe failure
  error_response,  // policy answered ERROR
  malformed_frame  // response frame did not match the grammar
};

const char* failure_kind_name(FailureKind k);

inline constexpr double kErrorSentinel = std::numeric_limits<double>::infinity();

struct RunResult {
  long scenario_id = -1;
  double p_init = 1.0;
  double p_target_delta = 0.0;
  bool parse_ok = true;
  bool proposal_valid = true;
  FailureKind failure = FailureKind::none;
  double achieved_power = std::numeric_limits<double>::quiet_NaN();
  // Relative terminal error in percent; +inf sentinel for runs that never
  // produced a physical outcome (unparseable/invalid/diverged/transport).
  double error_pct = kErrorSentinel;
  std::vector<bool> band_success;  // parallel to RunConfig::bands_pct
  bool severe_failure = true;
  ActuationFamily family_executed = ActuationFamily::single_b2;
  bool family_from_label = false;  // no executed vector; label family used
  bool degenerate_motion = false;
};

// Terminal (or windowed) power for a vector executed closed-loop from the
// critical initial state. Throws IntegrationDiverged on blow-up; the caller
// must have validated the vector.
double achieved_power(const Engine& engine, const ControlVector& cv,
                      const RunConfig& cfg);

// Execute and score one proposal against target p_init * (1 + delta).
// Invalid vectors are not executed: they score the +inf sentinel and fail
// every band.
RunResult execute_one(const Engine& engine, double p_init, double p_target_delta,
                      const ControlVector& cv, const RunConfig& cfg,
                      long scenario_id = -1);

// Two-parameter ramp-and-hold mode: external reactivity trace, banks parked.
struct RampCommand {
  double rho_insert_pcm = 0.0;
  double duration_s = 1.0;
};

RunResult execute_ramp(const Engine& engine, double p_init, double p_target_delta,
                       const RampCommand& cmd, const RunConfig& cfg,
                       long scenario_id = -1);

// Shared scoring arithmetic: relative error percent and band flags.
double relative_error_pct(double achieved, double target);
void score_result(RunResult& r, double achieved, const RunConfig& cfg);

// Sentinel-scored result for a run that produced no physical outcome
// (parse/validation/transport failure or divergence): +inf error, every band
// failed, severe. parse_ok stays true only for post-parse kinds.
RunResult failure_result(const RunConfig& cfg, long id, double p_init,
                         double delta, FailureKind kind);

}  // namespace rodbench
