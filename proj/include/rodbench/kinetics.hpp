#pragma once

// Point-reactor kinetics engine: six delayed-neutron groups, integral rod-bank
// worth curves, linear power-coefficient feedback, and a fixed-step RK4
// integrator. Everything here is a pure function of its inputs; identical
// inputs produce bit-identical outputs.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rodbench {

inline constexpr int kNumGroups = 6;
inline constexpr double kPcm = 1.0e-5;  // absolute reactivity per pcm

struct KineticsParams {
  // Canonical thermal-reactor group constants.
  std::array<double, kNumGroups> beta{21.1e-5, 140.2e-5, 125.4e-5,
                                      252.8e-5, 74.3e-5,  27.0e-5};
  std::array<double, kNumGroups> lambda{0.0124, 0.0305, 0.1110,
                                        0.3010, 1.1400, 3.0100};
  double generation_time = 2.0e-5;  // s
  // Linear feedback, pcm per unit fractional power deviation from 1.0.
  // Gives a closed-form settled power: P = 1 + rho_pcm / power_coeff.
  double power_coeff = 2000.0;

  double beta_total() const {
    double s = 0.0;
    for (double b : beta) s += b;
    return s;
  }

  // Explicit RK4 is stable for dt up to ~2*generation_time/beta_total.
  double dt_stability_bound() const { return 2.0 * generation_time / beta_total(); }

  void validate() const;
};

struct ReactorState {
  double t = 0.0;
  double power = 1.0;  // normalized to rated power
  std::array<double, kNumGroups> precursors{};
};

enum class WorthShape { s_curve, linear };

// Integral worth vs. insertion fraction z = (travel - position) / travel.
// position = travel is fully withdrawn (zero worth), position = 0 is fully
// inserted (-total_worth).
struct WorthCurve {
  double total_worth = 1500.0;  // pcm
  double travel = 180.0;        // steps
  WorthShape shape = WorthShape::s_curve;
};

double bank_reactivity(const WorthCurve& curve, double position);

struct RodBankConfig {
  WorthCurve worth;
  double init_position = 0.0;  // steps
};

// Engine = kinetics constants + two rod banks + criticality bias. The bias is
// the total rod worth at the initial positions; subtracting it makes the
// initial configuration exactly critical at power 1.0.
struct Engine {
  KineticsParams params;
  RodBankConfig bank1;
  RodBankConfig bank2;
  double bias_pcm = 0.0;

  static Engine make(const KineticsParams& params, const RodBankConfig& bank1,
                     const RodBankConfig& bank2);
};

// Bank 1 starts fully withdrawn on the flat top of an S-curve (nearly zero
// differential worth); bank 2 starts mid-stroke with uniform differential
// worth, so it is the effective actuator for small corrections.
Engine default_engine();

// Net reactivity in pcm at the given bank positions and power, including the
// criticality bias and the power-feedback term.
double total_reactivity(const Engine& engine, double pos1, double pos2,
                        double power, double external_pcm = 0.0);

// Equilibrium precursor populations for a given power; advancing this state
// under zero net reactivity leaves power unchanged.
ReactorState steady_state_init(const KineticsParams& params, double power0);

// Piecewise-linear reactivity trace (t_s, rho_pcm); held constant beyond the
// endpoints. Sample times must be strictly increasing.
struct ReactivityTrace {
  std::vector<std::pair<double, double>> samples;
  double at(double t) const;
};

// Linear ramp from 0 to rho_insert_pcm over duration_s, then held to horizon.
ReactivityTrace ramp_hold_trace(double rho_insert_pcm, double duration_s,
                                double horizon_s);

struct IntegrationDiverged : std::runtime_error {
  explicit IntegrationDiverged(double t)
      : std::runtime_error("power diverged at t = " + std::to_string(t) + " s"),
        at_time(t) {}
  double at_time;
};

namespace detail {

struct Deriv {
  double dP;
  std::array<double, kNumGroups> dC;
};

// rho_ext_pcm excludes the feedback term; feedback is applied here from the
// stage's own power so every RK4 stage sees a consistent net reactivity.
inline Deriv prke_rhs(double P, const std::array<double, kNumGroups>& C,
                      double rho_ext_pcm, const KineticsParams& k,
                      double beta_tot,
                      const std::array<double, kNumGroups>& beta_over_gen) {
  Deriv d;
  const double rho = kPcm * (rho_ext_pcm - k.power_coeff * (P - 1.0));
  double src = 0.0;
  for (int i = 0; i < kNumGroups; ++i) src += k.lambda[i] * C[i];
  d.dP = ((rho - beta_tot) / k.generation_time) * P + src;
  for (int i = 0; i < kNumGroups; ++i)
    d.dC[i] = beta_over_gen[i] * P - k.lambda[i] * C[i];
  return d;
}

}  // namespace detail

// Fixed-step RK4 from state.t (assumed 0) to horizon_s. The final step is
// shortened if needed so the last sample lands on t = horizon_s exactly.
// If probe_power is non-null, *probe_power receives power at t = probe_t
// (linear interpolation between the bracketing steps).
// Throws IntegrationDiverged when power leaves [finite, <= 1e6].
template <class RhoExt>
ReactorState integrate_final(ReactorState s, const KineticsParams& k,
                             RhoExt&& rho_ext, double horizon_s, double dt_s,
                             double probe_t = -1.0,
                             double* probe_power = nullptr) {
  k.validate();
  if (!(dt_s > 0.0)) throw std::domain_error("integrate: dt must be positive");
  if (dt_s > k.dt_stability_bound() * (1.0 + 1e-12))
    throw std::domain_error("integrate: dt exceeds RK4 stability bound");
  if (!(horizon_s >= 0.0)) throw std::domain_error("integrate: negative horizon");

  const double beta_tot = k.beta_total();
  std::array<double, kNumGroups> bog;
  for (int i = 0; i < kNumGroups; ++i) bog[i] = k.beta[i] / k.generation_time;

  if (probe_power && probe_t <= 0.0) *probe_power = s.power;
  if (horizon_s == 0.0) return s;

  const long n = std::max(1L, static_cast<long>(std::ceil(horizon_s / dt_s - 1e-9)));
  double P = s.power;
  std::array<double, kNumGroups> C = s.precursors;
  double r0 = rho_ext(0.0);

  for (long i = 0; i < n; ++i) {
    const double t0 = static_cast<double>(i) * dt_s;
    const double t1 = (i + 1 == n) ? horizon_s : static_cast<double>(i + 1) * dt_s;
    const double h = t1 - t0;
    const double rh = rho_ext(t0 + 0.5 * h);
    const double r1 = rho_ext(t1);

    const double P_before = P;
    auto k1 = detail::prke_rhs(P, C, r0, k, beta_tot, bog);
    double P2 = P + 0.5 * h * k1.dP;
    std::array<double, kNumGroups> C2;
    for (int g = 0; g < kNumGroups; ++g) C2[g] = C[g] + 0.5 * h * k1.dC[g];
    auto k2 = detail::prke_rhs(P2, C2, rh, k, beta_tot, bog);
    double P3 = P + 0.5 * h * k2.dP;
    std::array<double, kNumGroups> C3;
    for (int g = 0; g < kNumGroups; ++g) C3[g] = C[g] + 0.5 * h * k2.dC[g];
    auto k3 = detail::prke_rhs(P3, C3, rh, k, beta_tot, bog);
    double P4 = P + h * k3.dP;
    std::array<double, kNumGroups> C4;
    for (int g = 0; g < kNumGroups; ++g) C4[g] = C[g] + h * k3.dC[g];
    auto k4 = detail::prke_rhs(P4, C4, r1, k, beta_tot, bog);

    P += (h / 6.0) * (k1.dP + 2.0 * k2.dP + 2.0 * k3.dP + k4.dP);
    for (int g = 0; g < kNumGroups; ++g)
      C[g] += (h / 6.0) * (k1.dC[g] + 2.0 * k2.dC[g] + 2.0 * k3.dC[g] + k4.dC[g]);

    if (!std::isfinite(P) || P > 1e6) throw IntegrationDiverged(t1);

    if (probe_power && probe_t > t0 && probe_t <= t1) {
      const double f = (probe_t - t0) / h;
      *probe_power = P_before + f * (P - P_before);
    }
    r0 = r1;
  }

  s.t = horizon_s;
  s.power = P;
  s.precursors = C;
  return s;
}

// Trajectory-returning variants used by tests and inspection tools; the final
// sample always lands on t = horizon_s exactly.
std::vector<ReactorState> integrate(const ReactorState& start,
                                    const KineticsParams& params,
                                    const ReactivityTrace& rho_ext,
                                    double horizon_s, double dt_s,
                                    int stride = 1);
std::vector<ReactorState> integrate(const ReactorState& start,
                                    const KineticsParams& params,
                                    const std::function<double(double)>& rho_ext,
                                    double horizon_s, double dt_s,
                                    int stride = 1);

// Canonical text form of an engine config; basis for fingerprints.
std::string engine_canonical_text(const Engine& engine);

// Stable 16-hex-digit hash of the engine configuration.
std::string kinetics_fingerprint(const Engine& engine);

}  // namespace rodbench
