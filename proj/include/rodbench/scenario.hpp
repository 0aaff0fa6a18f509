#pragma once

// Scenario synthesis: inverse-solved control vectors labeled with the power
// shift they achieve, assembled into corpora with a controlled family mixture
// and full determinism under a master seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rodbench/execution.hpp"
#include "rodbench/util.hpp"

namespace rodbench {

enum class Regime { small, medium, large };

const char* regime_name(Regime r);
std::optional<Regime> regime_from_name(const std::string& name);

// |delta| bins: small (0.01, 0.10), medium [0.10, 0.30), large [0.30, 0.50].
// Throws std::domain_error outside (0, 0.5].
Regime regime_of(double delta);

struct Scenario {
  long id = 0;
  double p_init = 1.0;
  double p_target_delta = 0.0;
  ActuationFamily family = ActuationFamily::single_b2;
  ControlVector control;
  Regime regime = Regime::small;
  std::uint64_t seed = 0;  // per-scenario child seed used for synthesis
};

struct MixtureWeights {
  double single_b1 = 0.30;
  double single_b2 = 0.30;
  double simultaneous = 0.30;
  double sequential = 0.10;
};

struct Corpus {
  std::uint64_t master_seed = 0;
  MixtureWeights mixture;
  std::string fingerprint;  // engine + run settings hash at generation time
  long resample_count = 0;
  long positive_count = 0;
  long negative_count = 0;
  std::vector<Scenario> scenarios;
};

// Signed target draw: regime by weight, magnitude uniform within the bin,
// sign uniform. Weights need not be normalized; all-zero weights are an error.
double sample_target(Rng& rng, double w_small, double w_medium, double w_large);

struct InfeasibleTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solve a control vector of the given family achieving terminal power
// 1 + delta. Free parameters (start times, speeds, two-bank worth split,
// sequential gap) are drawn from rng; positions come from a worth-curve
// seed refined by forward-simulation bisection (at most 40 forward runs).
// The returned vector is quantized to the schema grid, classifies as the
// requested family, and was verified closed-loop to within 0.35% of target.
// Throws InfeasibleTarget when the (delta, family) pair exceeds the banks'
// authority, GenerationError when refinement fails.
ControlVector inverse_solve(double delta, ActuationFamily family,
                            const Engine& engine, const RunConfig& cfg,
                            Rng& rng);

// Deterministic corpus: family sequence by largest-remainder quota (so any
// prefix keeps the mixture), per-scenario child seeds derived from
// (master_seed, id), infeasible draws resampled with fresh targets (at most
// 100 attempts per scenario). Parallelism changes nothing but wall time.
Corpus build_corpus(std::size_t n, std::uint64_t master_seed,
                    const MixtureWeights& mixture, const Engine& engine,
                    const RunConfig& cfg, int parallelism = 1);

// Family assigned to index `id` under the quota sequence.
ActuationFamily quota_family(std::size_t id, const MixtureWeights& mixture);

std::string write_corpus_text(const Corpus& corpus);
void write_corpus(const Corpus& corpus, const std::string& path);
Corpus read_corpus(const std::string& path);

// Ramp-and-hold corpus (two-parameter external-reactivity mode).
struct RampScenario {
  long id = 0;
  double p_init = 1.0;
  double p_target_delta = 0.0;  // recorded from forward execution
  RampCommand command;
  std::uint64_t seed = 0;
};

struct RampCorpus {
  std::uint64_t master_seed = 0;
  std::string fingerprint;
  std::vector<RampScenario> scenarios;
};

// Insertions sampled uniformly in [-2000, -10] pcm, durations in [3, 40] s;
// the label is the power shift the command actually produces at the horizon.
RampCorpus build_ramp_corpus(std::size_t n, std::uint64_t master_seed,
                             const Engine& engine, const RunConfig& cfg,
                             int parallelism = 1);

std::string write_ramp_corpus_text(const RampCorpus& corpus);
void write_ramp_corpus(const RampCorpus& corpus, const std::string& path);
RampCorpus read_ramp_corpus(const std::string& path);

}  // namespace rodbench
