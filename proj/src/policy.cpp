#include "rodbench/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rodbench {

namespace {

std::string make_payload(double p_init, double delta, const ControlVector& cv) {
  return serialize_schema(SchemaLine{p_init, delta, cv});
}

ControlVector parked_vector(const Engine& engine, double rod_speed) {
  ControlVector cv;
  cv.b1_pos = engine.bank1.init_position;
  cv.b1_time = 0.0;
  cv.b1_speed = rod_speed;
  cv.b2_pos = engine.bank2.init_position;
  cv.b2_time = 0.0;
  cv.b2_speed = rod_speed;
  return cv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Proportional baseline.

ProportionalConfig calibrate_proportional(const Engine& engine,
                                          const RunConfig& cfg) {
  cfg.validate();
  ProportionalConfig out;
  out.rod_speed = 2.0;

  const double init2 = engine.bank2.init_position;
  const double lo_d = -init2;                              // full insertion
  const double hi_d = engine.bank2.worth.travel - init2;   // full withdrawal

  auto eval = [&](double d) {
    ControlVector cv = parked_vector(engine, out.rod_speed);
    cv.b2_pos = init2 + d;
    return achieved_power(engine, cv, cfg);
  };

  const double deltas[6] = {-0.30, -0.20, -0.10, 0.10, 0.20, 0.30};
  for (double delta : deltas) {
    const double target = 1.0 + delta;
    CalibrationPoint pt;
    pt.delta = delta;
    double glo = eval(lo_d) - target;
    double ghi = eval(hi_d) - target;
    if (glo > 0.0) {  // even full insertion leaves power above target
      pt.displacement = lo_d;
      pt.saturated = true;
    } else if (ghi < 0.0) {  // full withdrawal cannot reach the target
      pt.displacement = hi_d;
      pt.saturated = true;
    } else {
      double lo = lo_d, hi = hi_d;
      for (int i = 0; i < 60 && hi - lo > 1e-4; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double gm = eval(mid) - target;
        if (std::abs(gm) <= 1e-6) {
          lo = hi = mid;
          break;
        }
        if (gm > 0.0)
          hi = mid;
        else
          lo = mid;
      }
      pt.displacement = 0.5 * (lo + hi);
    }
    out.points.push_back(pt);
  }

  double num = 0.0, den = 0.0;
  for (const auto& pt : out.points) {
    num += pt.displacement * pt.delta;
    den += pt.delta * pt.delta;
  }
  if (!(den > 0.0))
    throw std::runtime_error("calibration: degenerate delta set");
  out.gain = num / den;
  double ss = 0.0;
  for (const auto& pt : out.points) {
    const double r = pt.displacement - out.gain * pt.delta;
    ss += r * r;
  }
  out.fit_residual = std::sqrt(ss / static_cast<double>(out.points.size()));
  if (!std::isfinite(out.gain))
    throw std::runtime_error("calibration: non-finite gain");
  return out;
}

ControlVector proportional_vector(const Engine& engine,
                                  const ProportionalConfig& cfg, double delta) {
  ControlVector cv = parked_vector(engine, cfg.rod_speed);
  const double init1 = engine.bank1.init_position;
  const double init2 = engine.bank2.init_position;
  const double raw2 = init2 + cfg.gain * delta;
  cv.b2_pos = std::clamp(raw2, 0.0, engine.bank2.worth.travel);
  if (raw2 < 0.0) {
    // Insertion demand beyond bank 2's stroke spills over to bank 1.
    cv.b1_pos = std::clamp(init1 + raw2, 0.0, engine.bank1.worth.travel);
  }
  // Withdrawal demand beyond the top of the stroke has nowhere to go and is
  // dropped; the saturated proposal is still emitted and scored.
  return cv;
}

std::string write_calibration_text(const ProportionalConfig& cfg) {
  std::string out = "# rodbench proportional calibration v1\n";
  out += "gain=" + format_num(cfg.gain) + "\n";
  out += "rod_speed=" + format_num(cfg.rod_speed) + "\n";
  out += "fit_residual=" + format_num(cfg.fit_residual) + "\n";
  for (const auto& pt : cfg.points) {
    out += "point delta=" + format_num(pt.delta) +
           " displacement=" + format_num(pt.displacement) +
           " saturated=" + (pt.saturated ? std::string("1") : std::string("0")) +
           "\n";
  }
  return out;
}

void write_calibration(const ProportionalConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open calibration file for writing: " +
                             path);
  out << write_calibration_text(cfg);
  if (!out) throw std::runtime_error("calibration write failed: " + path);
}

namespace {

[[noreturn]] void calibration_error(const std::string& path, long line_no,
                                    const std::string& what) {
  throw std::runtime_error("calibration file " + path + ":" +
                           std::to_string(line_no) + ": " + what);
}

double calibration_num(const std::string& path, long line_no,
                       const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0)
    calibration_error(path, line_no, "expected " + prefix + "..., got '" +
                                         token + "'");
  const NumberToken num = parse_number(token.substr(prefix.size()));
  if (!num.parsed || !num.finite)
    calibration_error(path, line_no, "bad number in '" + token + "'");
  return num.value;
}

}  // namespace

ProportionalConfig read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open calibration file: " + path);
  ProportionalConfig cfg;
  cfg.points.clear();
  std::string line;
  long line_no = 0;
  bool saw_magic = false, saw_gain = false, saw_speed = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "# rodbench proportional calibration v1")
        calibration_error(path, line_no, "unrecognized calibration header");
      saw_magic = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "point") {
      if (toks.size() != 4)
        calibration_error(path, line_no, "point line needs 3 fields");
      CalibrationPoint pt;
      pt.delta = calibration_num(path, line_no, toks[1], "delta");
      pt.displacement = calibration_num(path, line_no, toks[2], "displacement");
      const double sat = calibration_num(path, line_no, toks[3], "saturated");
      if (sat != 0.0 && sat != 1.0)
        calibration_error(path, line_no, "saturated must be 0 or 1");
      pt.saturated = sat == 1.0;
      cfg.points.push_back(pt);
    } else if (toks.size() == 1 && toks[0].rfind("gain=", 0) == 0) {
      cfg.gain = calibration_num(path, line_no, toks[0], "gain");
      saw_gain = true;
    } else if (toks.size() == 1 && toks[0].rfind("rod_speed=", 0) == 0) {
      cfg.rod_speed = calibration_num(path, line_no, toks[0], "rod_speed");
      saw_speed = true;
    } else if (toks.size() == 1 && toks[0].rfind("fit_residual=", 0) == 0) {
      cfg.fit_residual = calibration_num(path, line_no, toks[0], "fit_residual");
    } else {
      calibration_error(path, line_no, "unrecognized line '" + line + "'");
    }
  }
  if (!saw_magic)
    throw std::runtime_error("calibration file " + path + ": empty file");
  if (!saw_gain || !saw_speed)
    throw std::runtime_error("calibration file " + path +
                             ": missing gain= or rod_speed=");
  return cfg;
}

ProportionalPolicy::ProportionalPolicy(const Engine& engine,
                                       ProportionalConfig cfg)
    : engine_(engine), cfg_(std::move(cfg)) {
  if (!std::isfinite(cfg_.gain))
    throw std::invalid_argument("proportional policy: non-finite gain");
}

Proposal ProportionalPolicy::propose(const ProposalRequest& req) {
  const ControlVector cv =
      proportional_vector(engine_, cfg_, req.p_target_delta);
  return Proposal{FailureKind::none,
                  make_payload(req.p_init, req.p_target_delta, cv), ""};
}

// ---------------------------------------------------------------------------
// Nearest-neighbor policy.

KnnPolicy::KnnPolicy(const Corpus& corpus, int k) {
  if (k != 1)
    throw std::invalid_argument("knn policy: only k = 1 is supported");
  if (corpus.scenarios.empty())
    throw std::domain_error("knn policy: empty corpus");
  entries_.reserve(corpus.scenarios.size());
  for (const auto& sc : corpus.scenarios)
    entries_.push_back(Entry{sc.p_target_delta, ""});
  for (std::size_t i = 0; i < corpus.scenarios.size(); ++i) {
    const auto& sc = corpus.scenarios[i];
    entries_[i].payload = serialize_schema(SchemaLine{
        sc.p_init, sc.p_target_delta, sc.control});
  }
}

Proposal KnnPolicy::propose(const ProposalRequest& req) {
  // Entries are in ascending-id order, so a strict '<' keeps the lowest id
  // on distance ties.
  std::size_t best = 0;
  double best_d = std::abs(req.p_target_delta - entries_[0].delta);
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    const double d = std::abs(req.p_target_delta - entries_[i].delta);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  // Answer the posed request: query targets up front, neighbor's controls.
  const auto parsed = parse_schema(entries_[best].payload);
  return Proposal{FailureKind::none,
                  make_payload(req.p_init, req.p_target_delta, parsed.line.cv),
                  ""};
}

// ---------------------------------------------------------------------------
// Oracle replay.

OraclePolicy::OraclePolicy(const Corpus& corpus) {
  by_id_.reserve(corpus.scenarios.size());
  for (const auto& sc : corpus.scenarios)
    by_id_.emplace_back(sc.id, serialize_schema(SchemaLine{
                                   sc.p_init, sc.p_target_delta, sc.control}));
  std::sort(by_id_.begin(), by_id_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

Proposal OraclePolicy::propose(const ProposalRequest& req) {
  const auto it = std::lower_bound(
      by_id_.begin(), by_id_.end(), req.id,
      [](const auto& e, long id) { return e.first < id; });
  if (it == by_id_.end() || it->first != req.id)
    throw std::domain_error("oracle policy: unknown scenario id " +
                            std::to_string(req.id));
  return Proposal{FailureKind::none, it->second, ""};
}

// ---------------------------------------------------------------------------
// Null policy.

NullPolicy::NullPolicy(const Engine& engine) {
  const ControlVector cv = parked_vector(engine, 2.0);
  payload_tail_ = " " + format_num(cv.b1_pos) + " " + format_num(cv.b1_time) +
                  " " + format_num(cv.b1_speed) + " " + format_num(cv.b2_pos) +
                  " " + format_num(cv.b2_time) + " " + format_num(cv.b2_speed);
}

Proposal NullPolicy::propose(const ProposalRequest& req) {
  return Proposal{FailureKind::none,
                  format_num(req.p_init) + " " + format_num(req.p_target_delta) +
                      payload_tail_,
                  ""};
}

// ---------------------------------------------------------------------------
// Factory.

PolicyFactory make_policy_factory(const std::string& name, const Engine& engine,
                                  const RunConfig& cfg, const Corpus* reference,
                                  const PolicyOptions& options) {
  if (name == "oracle") {
    if (!reference)
      throw std::invalid_argument("oracle policy requires a reference corpus");
    const Corpus& corpus = *reference;
    return [&corpus]() -> std::unique_ptr<Policy> {
      return std::make_unique<OraclePolicy>(corpus);
    };
  }
  if (name == "knn") {
    if (!reference)
      throw std::invalid_argument("knn policy requires a reference corpus");
    const Corpus& corpus = *reference;
    const int k = options.knn_k;
    return [&corpus, k]() -> std::unique_ptr<Policy> {
      return std::make_unique<KnnPolicy>(corpus, k);
    };
  }
  if (name == "proportional") {
    ProportionalConfig pc;
    if (options.proportional_gain) {
      pc.gain = *options.proportional_gain;
      pc.rod_speed = 2.0;
    } else {
      pc = calibrate_proportional(engine, cfg);
    }
    return [engine, pc]() -> std::unique_ptr<Policy> {
      return std::make_unique<ProportionalPolicy>(engine, pc);
    };
  }
  if (name == "null") {
    return [engine]() -> std::unique_ptr<Policy> {
      return std::make_unique<NullPolicy>(engine);
    };
  }
  if (name == "external") {
    if (options.external_argv.empty())
      throw std::invalid_argument("external policy requires a command");
    TransportConfig tc;
    tc.argv = options.external_argv;
    tc.timeout_s = options.timeout_s;
    tc.window_s = options.window_s ? options.window_s : cfg.window_s;
    return [tc]() -> std::unique_ptr<Policy> {
      return std::make_unique<ExternalPolicy>(tc);
    };
  }
  throw std::invalid_argument("unknown policy: " + name);
}

}  // namespace rodbench
