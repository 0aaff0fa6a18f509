#include "rodbench/execution.hpp"

#include <sstream>

#include "rodbench/util.hpp"

namespace rodbench {

void RunConfig::validate() const {
  if (!(horizon_s > 0.0) || !std::isfinite(horizon_s))
    throw std::invalid_argument("run config: horizon must be positive");
  if (!(dt_s > 0.0)) throw std::invalid_argument("run config: dt must be positive");
  if (window_s && (!(*window_s > 0.0) || *window_s > horizon_s))
    throw std::invalid_argument("run config: window must lie in (0, horizon]");
  if (bands_pct.empty()) throw std::invalid_argument("run config: no tolerance bands");
  double prev = 0.0;
  for (double b : bands_pct) {
    if (!(b > prev))
      throw std::invalid_argument("run config: bands must be positive and ascending");
    prev = b;
  }
  if (!(severe_threshold_pct > 0.0))
    throw std::invalid_argument("run config: severe threshold must be positive");
}

std::string run_canonical_text(const RunConfig& cfg) {
  std::ostringstream os;
  os << "run v1\nhorizon=" << format_wide(cfg.horizon_s)
     << "\nwindow=" << (cfg.window_s ? format_wide(*cfg.window_s) : "none")
     << "\ndt=" << format_wide(cfg.dt_s) << "\nbands=";
  for (std::size_t i = 0; i < cfg.bands_pct.size(); ++i)
    os << (i ? "," : "") << format_wide(cfg.bands_pct[i]);
  os << "\nsevere=" << format_wide(cfg.severe_threshold_pct) << "\n";
  return os.str();
}

std::string harness_fingerprint(const Engine& engine, const RunConfig& cfg) {
  return hex16(fnv1a64(engine_canonical_text(engine) + run_canonical_text(cfg)));
}

const char* failure_kind_name(FailureKind k) {
  switch (k) {
    case FailureKind::none: return "none";
    case FailureKind::parse_token_count: return "parse_token_count";
    case FailureKind::parse_non_numeric: return "parse_non_numeric";
    case FailureKind::parse_non_finite: return "parse_non_finite";
    case FailureKind::invalid_vector: return "invalid_vector";
    case FailureKind::diverged: return "diverged";
    case FailureKind::timeout: return "timeout";
    case FailureKind::transport: return "transport";
    case FailureKind::error_response: return "error_response";
    case FailureKind::malformed_frame: return "malformed_frame";
  }
  return "?";
}

namespace {

// State-independent part of net reactivity during a rod run: bank worths
// along the motion plan minus the criticality bias. The feedback term is
// applied inside the integrator stage by stage.
struct RodProgram {
  const Engine* engine;
  MotionPlan plan;
  double w1_init, w1_target, w2_init, w2_target;

  double operator()(double t) const {
    double w1;
    if (t <= plan.bank1.start || plan.bank1.target == plan.bank1.init)
      w1 = w1_init;
    else if (t >= plan.bank1.arrival)
      w1 = w1_target;
    else
      w1 = bank_reactivity(engine->bank1.worth, plan.bank1.position_at(t));
    double w2;
    if (t <= plan.bank2.start || plan.bank2.target == plan.bank2.init)
      w2 = w2_init;
    else if (t >= plan.bank2.arrival)
      w2 = w2_target;
    else
      w2 = bank_reactivity(engine->bank2.worth, plan.bank2.position_at(t));
    return w1 + w2 - engine->bias_pcm;
  }
};

RodProgram make_program(const Engine& engine, const ControlVector& cv) {
  RodProgram p;
  p.engine = &engine;
  p.plan = plan_motion(cv, engine.bank1.init_position, engine.bank2.init_position);
  p.w1_init = bank_reactivity(engine.bank1.worth, engine.bank1.init_position);
  p.w1_target = bank_reactivity(engine.bank1.worth, cv.b1_pos);
  p.w2_init = bank_reactivity(engine.bank2.worth, engine.bank2.init_position);
  p.w2_target = bank_reactivity(engine.bank2.worth, cv.b2_pos);
  return p;
}

}  // namespace

double achieved_power(const Engine& engine, const ControlVector& cv,
                      const RunConfig& cfg) {
  cfg.validate();
  const RodProgram program = make_program(engine, cv);
  ReactorState s0 = steady_state_init(engine.params, 1.0);
  double probe = s0.power;
  integrate_final(s0, engine.params, program, cfg.horizon_s, cfg.dt_s,
                  cfg.eval_time(), &probe);
  return probe;
}

double relative_error_pct(double achieved, double target) {
  if (!(target > 0.0))
    throw std::domain_error("scoring: target power must be positive");
  return std::abs(achieved - target) / target * 100.0;
}

void score_result(RunResult& r, double achieved, const RunConfig& cfg) {
  const double target = r.p_init * (1.0 + r.p_target_delta);
  r.achieved_power = achieved;
  r.error_pct = relative_error_pct(achieved, target);
  r.band_success.assign(cfg.bands_pct.size(), false);
  for (std::size_t i = 0; i < cfg.bands_pct.size(); ++i)
    r.band_success[i] = r.error_pct <= cfg.bands_pct[i];
  r.severe_failure = r.error_pct > cfg.severe_threshold_pct;
}

RunResult failure_result(const RunConfig& cfg, long id, double p_init,
                         double delta, FailureKind kind) {
  RunResult r;
  r.scenario_id = id;
  r.p_init = p_init;
  r.p_target_delta = delta;
  r.failure = kind;
  // parse_ok means "an eight-number payload was obtained and parsed"; it
  // survives validation failures and divergence but nothing upstream of them.
  r.parse_ok = kind == FailureKind::invalid_vector || kind == FailureKind::diverged;
  r.proposal_valid = false;
  r.error_pct = kErrorSentinel;
  r.band_success.assign(cfg.bands_pct.size(), false);
  r.severe_failure = true;
  return r;
}

RunResult execute_one(const Engine& engine, double p_init, double p_target_delta,
                      const ControlVector& cv, const RunConfig& cfg,
                      long scenario_id) {
  cfg.validate();
  const auto violations = validate(cv, engine);
  if (!violations.empty()) {
    RunResult r = failure_result(cfg, scenario_id, p_init, p_target_delta,
                                  FailureKind::invalid_vector);
    // Classification needs no validity; record what the vector asked for.
    const auto cls =
        classify(cv, engine.bank1.init_position, engine.bank2.init_position);
    r.family_executed = cls.family;
    r.degenerate_motion = cls.degenerate;
    return r;
  }

  RunResult r;
  r.scenario_id = scenario_id;
  r.p_init = p_init;
  r.p_target_delta = p_target_delta;
  const auto cls =
      classify(cv, engine.bank1.init_position, engine.bank2.init_position);
  r.family_executed = cls.family;
  r.degenerate_motion = cls.degenerate;
  try {
    const double achieved = achieved_power(engine, cv, cfg);
    score_result(r, achieved, cfg);
  } catch (const IntegrationDiverged&) {
    r = failure_result(cfg, scenario_id, p_init, p_target_delta,
                        FailureKind::diverged);
    r.family_executed = cls.family;
    r.degenerate_motion = cls.degenerate;
  }
  return r;
}

RunResult execute_ramp(const Engine& engine, double p_init, double p_target_delta,
                       const RampCommand& cmd, const RunConfig& cfg,
                       long scenario_id) {
  cfg.validate();
  RunResult r;
  r.scenario_id = scenario_id;
  r.p_init = p_init;
  r.p_target_delta = p_target_delta;
  r.degenerate_motion = true;  // banks stay parked in ramp mode
  try {
    const ReactivityTrace trace =
        ramp_hold_trace(cmd.rho_insert_pcm, cmd.duration_s, cfg.horizon_s);
    ReactorState s0 = steady_state_init(engine.params, 1.0);
    double probe = s0.power;
    integrate_final(
        s0, engine.params, [&](double t) { return trace.at(t); }, cfg.horizon_s,
        cfg.dt_s, cfg.eval_time(), &probe);
    score_result(r, probe, cfg);
  } catch (const IntegrationDiverged&) {
    r = failure_result(cfg, scenario_id, p_init, p_target_delta,
                        FailureKind::diverged);
  }
  return r;
}

}  // namespace rodbench
