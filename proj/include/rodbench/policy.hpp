#pragma once

// Policy backends behind one proposal interface: proportional baseline with
// saturation spillover, nearest-neighbor table lookup, oracle replay, and an
// external child-process session speaking the newline-delimited wire
// protocol. Every policy answers a request with an eight-number schema
// payload (or a typed failure); parsing and validation happen downstream in
// the batch scorer, so all backends share one scoring path.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rodbench/scenario.hpp"

namespace rodbench {

struct ProposalRequest {
  long id = 0;
  double p_init = 1.0;
  double p_target_delta = 0.0;
  std::optional<double> window_s;
};

struct Proposal {
  // none: `payload` holds the schema text. Other kinds: the request produced
  // no payload and `error` says why.
  FailureKind failure = FailureKind::none;
  std::string payload;
  std::string error;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual Proposal propose(const ProposalRequest& req) = 0;
};

// ---------------------------------------------------------------------------
// Proportional baseline (single-gain displacement controller).

struct CalibrationPoint {
  double delta = 0.0;
  double displacement = 0.0;  // steps, signed; positive = withdrawal
  bool saturated = false;     // displacement pinned at the stroke boundary
};

struct ProportionalConfig {
  double gain = 0.0;       // steps per unit fractional power change
  double rod_speed = 2.0;  // steps/s
  std::vector<CalibrationPoint> points;
  double fit_residual = 0.0;  // RMS of (displacement - gain*delta)
};

/// Six symmetric one-bank scenarios (deltas +-0.10, +-0.20, +-0.30): bisect
// the bank-2 displacement that lands each target (saturation boundary when
// out of reach), then least-squares displacement = gain * delta through the
// origin.
ProportionalConfig calibrate_proportional(const Engine& engine,
                                          const RunConfig& cfg);

// Displacement d = gain * delta applied to bank 2 from its init, clamped to
// the stroke; insertion demand beyond the clamp spills over to bank 1;
// withdrawal demand beyond the clamp is dropped (no headroom above the top).
ControlVector proportional_vector(const Engine& engine,
                                  const ProportionalConfig& cfg, double delta);

// Calibration file round-trip (text; one key per line, then one line per
// calibration point). Parse errors carry the offending line number.
std::string write_calibration_text(const ProportionalConfig& cfg);
void write_calibration(const ProportionalConfig& cfg, const std::string& path);
ProportionalConfig read_calibration(const std::string& path);

class ProportionalPolicy final : public Policy {
 public:
  ProportionalPolicy(const Engine& engine, ProportionalConfig cfg);
  std::string name() const override { return "proportional"; }
  Proposal propose(const ProposalRequest& req) override;

  const ProportionalConfig& config() const { return cfg_; }

 private:
  Engine engine_;
  ProportionalConfig cfg_;
};

// ---------------------------------------------------------------------------
// Nearest-neighbor table policy (data-scaling stand-in). Only k = 1 is
// supported; constructing with any other k throws.

class KnnPolicy final : public Policy {
 public:
  KnnPolicy(const Corpus& corpus, int k = 1);
  std::string name() const override { return "knn"; }
  Proposal propose(const ProposalRequest& req) override;

 private:
  struct Entry {
    double delta;
    std::string payload;
  };
  std::vector<Entry> entries_;  // corpus order = ascending id
};

// ---------------------------------------------------------------------------
// Oracle replay: answers with the corpus scenario labeled by the request id.

class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(const Corpus& corpus);
  std::string name() const override { return "oracle"; }
  Proposal propose(const ProposalRequest& req) override;

 private:
  std::vector<std::pair<long, std::string>> by_id_;  // sorted by id
};

// ---------------------------------------------------------------------------
// Null policy: proposes no rod motion at all (both banks parked). Useful as
// a negative control; its success rate equals the fraction of targets inside
// the band.

class NullPolicy final : public Policy {
 public:
  explicit NullPolicy(const Engine& engine);
  std::string name() const override { return "null"; }
  Proposal propose(const ProposalRequest& req) override;

 private:
  std::string payload_tail_;  // six control numbers at init
};

// ---------------------------------------------------------------------------
// External policy session over a child process (wire protocol).
//
// Request:  "PROPOSE <id> <p_init> <p_target_delta> [<window_s>]\n"
// Response: "RESULT <id> <eight-number schema line>\n"
//        or "ERROR <id> <reason>\n"
// Session closes on end-of-stream. Responses carrying a different id than
// the pending request are stale leftovers (e.g. answers that arrived after
// their deadline) and are skipped.

struct TransportConfig {
  std::vector<std::string> argv;  // child command line
  double timeout_s = 30.0;        // per-request deadline
  std::optional<double> window_s; // forwarded with every request when set
};

class ExternalPolicy final : public Policy {
 public:
  explicit ExternalPolicy(TransportConfig cfg);  // spawns the child
  ~ExternalPolicy() override;
  ExternalPolicy(const ExternalPolicy&) = delete;
  ExternalPolicy& operator=(const ExternalPolicy&) = delete;

  std::string name() const override { return "external"; }
  Proposal propose(const ProposalRequest& req) override;

  // Frame accounting: requests == responses + timeouts + transport errors.
  long requests_sent() const;
  long responses_seen() const;
  long timeouts_seen() const;
  long transport_errors_seen() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---------------------------------------------------------------------------
// Factories. batch_validate takes a factory so each worker can own a policy
// instance (external sessions are serial per connection).

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

struct PolicyOptions {
  std::optional<double> proportional_gain;  // unset: calibrate on demand
  int knn_k = 1;
  std::vector<std::string> external_argv;
  double timeout_s = 30.0;
  std::optional<double> window_s;
};

// name: "oracle" | "knn" | "proportional" | "null" | "external".
// `reference` is required for oracle/knn.
PolicyFactory make_policy_factory(const std::string& name, const Engine& engine,
                                  const RunConfig& cfg, const Corpus* reference,
                                  const PolicyOptions& options = {});

}  // namespace rodbench
