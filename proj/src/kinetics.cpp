#include "rodbench/kinetics.hpp"

#include <numbers>
#include <sstream>

#include "rodbench/util.hpp"

namespace rodbench {

void KineticsParams::validate() const {
  for (double b : beta)
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::invalid_argument("kinetics: group beta must be positive");
  for (double l : lambda)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("kinetics: group lambda must be positive");
  if (!(generation_time > 0.0) || !std::isfinite(generation_time))
    throw std::invalid_argument("kinetics: generation time must be positive");
  if (!std::isfinite(power_coeff) || power_coeff < 0.0)
    throw std::invalid_argument("kinetics: power coefficient must be >= 0");
}

double bank_reactivity(const WorthCurve& curve, double position) {
  if (!(curve.total_worth >= 0.0) || !(curve.travel > 0.0))
    throw std::domain_error("bank_reactivity: bad worth curve");
  if (!(position >= 0.0) || !(position <= curve.travel))
    throw std::domain_error("bank_reactivity: position outside [0, travel]");
  const double z = (curve.travel - position) / curve.travel;
  switch (curve.shape) {
    case WorthShape::s_curve: {
      const double two_pi = 2.0 * std::numbers::pi;
      return -curve.total_worth * (z - std::sin(two_pi * z) / two_pi);
    }
    case WorthShape::linear:
      return -curve.total_worth * z;
  }
  throw std::domain_error("bank_reactivity: unknown shape");
}

Engine Engine::make(const KineticsParams& params, const RodBankConfig& bank1,
                    const RodBankConfig& bank2) {
  params.validate();
  Engine e;
  e.params = params;
  e.bank1 = bank1;
  e.bank2 = bank2;
  e.bias_pcm = bank_reactivity(bank1.worth, bank1.init_position) +
               bank_reactivity(bank2.worth, bank2.init_position);
  return e;
}

Engine default_engine() {
  RodBankConfig b1;
  b1.worth = WorthCurve{1500.0, 180.0, WorthShape::s_curve};
  b1.init_position = 180.0;
  RodBankConfig b2;
  b2.worth = WorthCurve{1500.0, 180.0, WorthShape::linear};
  b2.init_position = 100.0;
  return Engine::make(KineticsParams{}, b1, b2);
}

double total_reactivity(const Engine& engine, double pos1, double pos2,
                        double power, double external_pcm) {
  return bank_reactivity(engine.bank1.worth, pos1) +
         bank_reactivity(engine.bank2.worth, pos2) + external_pcm -
         engine.bias_pcm - engine.params.power_coeff * (power - 1.0);
}

ReactorState steady_state_init(const KineticsParams& params, double power0) {
  params.validate();
  if (!(power0 > 0.0) || !std::isfinite(power0))
    throw std::domain_error("steady_state_init: power must be positive");
  ReactorState s;
  s.t = 0.0;
  s.power = power0;
  for (int i = 0; i < kNumGroups; ++i)
    s.precursors[i] = params.beta[i] * power0 /
                      (params.generation_time * params.lambda[i]);
  return s;
}

double ReactivityTrace::at(double t) const {
  if (samples.empty()) throw std::domain_error("reactivity trace is empty");
  if (t <= samples.front().first) return samples.front().second;
  if (t >= samples.back().first) return samples.back().second;
  // Linear scan: traces in this harness have a handful of knots.
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (t <= samples[i].first) {
      const auto& [t0, r0] = samples[i - 1];
      const auto& [t1, r1] = samples[i];
      return r0 + (r1 - r0) * (t - t0) / (t1 - t0);
    }
  }
  return samples.back().second;
}

ReactivityTrace ramp_hold_trace(double rho_insert_pcm, double duration_s,
                                double horizon_s) {
  if (!std::isfinite(rho_insert_pcm))
    throw std::domain_error("ramp_hold_trace: non-finite insertion");
  if (!(duration_s > 0.0))
    throw std::domain_error("ramp_hold_trace: duration must be positive");
  if (!(horizon_s >= duration_s))
    throw std::domain_error("ramp_hold_trace: horizon shorter than ramp");
  ReactivityTrace tr;
  tr.samples.push_back({0.0, 0.0});
  tr.samples.push_back({duration_s, rho_insert_pcm});
  if (horizon_s > duration_s) tr.samples.push_back({horizon_s, rho_insert_pcm});
  return tr;
}

namespace {

template <class RhoExt>
std::vector<ReactorState> integrate_impl(const ReactorState& start,
                                         const KineticsParams& params,
                                         RhoExt&& rho_ext, double horizon_s,
                                         double dt_s, int stride) {
  if (stride < 1) throw std::domain_error("integrate: stride must be >= 1");
  std::vector<ReactorState> out;
  out.push_back(start);
  if (horizon_s == 0.0) return out;
  const long n = std::max(1L, static_cast<long>(std::ceil(horizon_s / dt_s - 1e-9)));
  out.reserve(static_cast<std::size_t>(n / stride) + 2);
  ReactorState s = start;
  for (long i = 0; i < n; ++i) {
    const double t0 = static_cast<double>(i) * dt_s;
    const double t1 = (i + 1 == n) ? horizon_s : static_cast<double>(i + 1) * dt_s;
    // One step at a time through the shared kernel keeps this path and the
    // batch path numerically identical.
    ReactorState stepped = s;
    stepped.t = 0.0;
    auto shifted = [&](double tau) { return rho_ext(t0 + tau); };
    stepped = integrate_final(stepped, params, shifted, t1 - t0, t1 - t0);
    s.power = stepped.power;
    s.precursors = stepped.precursors;
    s.t = t1;
    if ((i + 1) % stride == 0 || i + 1 == n) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<ReactorState> integrate(const ReactorState& start,
                                    const KineticsParams& params,
                                    const ReactivityTrace& rho_ext,
                                    double horizon_s, double dt_s, int stride) {
  return integrate_impl(
      start, params, [&](double t) { return rho_ext.at(t); }, horizon_s, dt_s,
      stride);
}

std::vector<ReactorState> integrate(const ReactorState& start,
                                    const KineticsParams& params,
                                    const std::function<double(double)>& rho_ext,
                                    double horizon_s, double dt_s, int stride) {
  if (!rho_ext) throw std::domain_error("integrate: null reactivity callback");
  return integrate_impl(start, params, rho_ext, horizon_s, dt_s, stride);
}

std::string engine_canonical_text(const Engine& engine) {
  std::ostringstream os;
  os << "kinetics v1\n";
  os << "beta=";
  for (int i = 0; i < kNumGroups; ++i)
    os << (i ? "," : "") << format_wide(engine.params.beta[i]);
  os << "\nlambda=";
  for (int i = 0; i < kNumGroups; ++i)
    os << (i ? "," : "") << format_wide(engine.params.lambda[i]);
  os << "\ngeneration_time=" << format_wide(engine.params.generation_time);
  os << "\npower_coeff=" << format_wide(engine.params.power_coeff);
  auto bank = [&](const char* name, const RodBankConfig& b) {
    os << "\n" << name
       << ".shape=" << (b.worth.shape == WorthShape::s_curve ? "s_curve" : "linear")
       << " worth=" << format_wide(b.worth.total_worth)
       << " travel=" << format_wide(b.worth.travel)
       << " init=" << format_wide(b.init_position);
  };
  bank("bank1", engine.bank1);
  bank("bank2", engine.bank2);
  os << "\nbias=" << format_wide(engine.bias_pcm) << "\n";
  return os.str();
}

std::string kinetics_fingerprint(const Engine& engine) {
  return hex16(fnv1a64(engine_canonical_text(engine)));
}

}  // namespace rodbench
