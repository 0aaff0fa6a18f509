#include "rodbench/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace rodbench {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::small: return "small";
    case Regime::medium: return "medium";
    case Regime::large: return "large";
  }
  return "?";
}

std::optional<Regime> regime_from_name(const std::string& name) {
  if (name == "small") return Regime::small;
  if (name == "medium") return Regime::medium;
  if (name == "large") return Regime::large;
  return std::nullopt;
}

Regime regime_of(double delta) {
  const double m = std::abs(delta);
  if (!(m > 0.0) || m > 0.5)
    throw std::domain_error("regime_of: |delta| outside (0, 0.5]");
  if (m < 0.10) return Regime::small;
  if (m < 0.30) return Regime::medium;
  return Regime::large;
}

double sample_target(Rng& rng, double w_small, double w_medium, double w_large) {
  if (w_small < 0.0 || w_medium < 0.0 || w_large < 0.0)
    throw std::domain_error("sample_target: negative regime weight");
  const double sum = w_small + w_medium + w_large;
  if (!(sum > 0.0)) throw std::domain_error("sample_target: all weights zero");
  const double u = rng.uniform01() * sum;
  double lo = 0.30, hi = 0.50;
  if (u < w_small) {
    lo = 0.01;
    hi = 0.10;
  } else if (u < w_small + w_medium) {
    lo = 0.10;
    hi = 0.30;
  }
  const double mag = rng.uniform(lo, hi);
  return (rng.bit() ? 1.0 : -1.0) * mag;
}

namespace {

double quantize_num(double v) { return parse_number(format_num(v)).value; }

// Monotone worth-curve inversion; returns the position whose worth is closest
// to w_target, clamped to the physical stroke.
double invert_worth(const WorthCurve& c, double w_target) {
  if (w_target <= bank_reactivity(c, 0.0)) return 0.0;
  if (w_target >= 0.0) return c.travel;
  double lo = 0.0, hi = c.travel;
  for (int i = 0; i < 200 && hi - lo > 1e-10 * c.travel; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bank_reactivity(c, mid) < w_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Labels are verified to this relative tolerance before a vector is accepted;
// replay through the same engine and run settings reproduces the same number.
constexpr double kVerifyTolRel = 0.0035;
constexpr int kForwardBudget = 40;

struct SolveCtx {
  const Engine& engine;
  const RunConfig& cfg;
  double target_power;
  int evals = 0;

  double forward(const ControlVector& cv) {
    if (++evals > kForwardBudget)
      throw GenerationError("inverse solve: forward-evaluation budget exhausted");
    return achieved_power(engine, cv, cfg);
  }
};

// Requested worth change must sit inside the bank's stroke authority, with a
// 2% margin so labels never ride the exact edge of feasibility.
void require_headroom(const RodBankConfig& bank, const char* name,
                      double need_pcm) {
  const double w_init = bank_reactivity(bank.worth, bank.init_position);
  if (need_pcm < 0.0) {
    const double room = -bank.worth.total_worth - w_init;  // <= 0
    if (need_pcm < 0.98 * room)
      throw InfeasibleTarget(std::string(name) + " cannot remove " +
                             format_num(-need_pcm) + " pcm (insertion headroom " +
                             format_num(-room) + " pcm)");
  } else {
    const double room = -w_init;  // >= 0
    if (need_pcm > 0.98 * room)
      throw InfeasibleTarget(std::string(name) + " cannot add " +
                             format_num(need_pcm) + " pcm (withdrawal headroom " +
                             format_num(room) + " pcm)");
  }
}

// Bisection on one bank's target position; power is monotone increasing in
// position (withdrawal raises power). Accepts early when the forward result
// is within tolerance of the target.
double bisect_position(SolveCtx& s, ControlVector cv, bool move_b1, double lo,
                       double hi, double seed_pos) {
  auto with_pos = [&](double p) {
    ControlVector c = cv;
    (move_b1 ? c.b1_pos : c.b2_pos) = p;
    return c;
  };
  const double tol = 7.5e-4 * s.target_power;
  auto g = [&](double p) { return s.forward(with_pos(p)) - s.target_power; };
  const WorthCurve& worth =
      move_b1 ? s.engine.bank1.worth : s.engine.bank2.worth;

  seed_pos = std::clamp(seed_pos, lo, hi);
  double gs = g(seed_pos);
  if (std::abs(gs) <= tol) return seed_pos;

  // The static-worth seed misses only by the residual settling transient.
  // One Newton step through the settled gain (dP/dworth = 1/power_coeff)
  // usually lands inside tolerance and saves the whole bisection descent.
  if (s.engine.params.power_coeff > 0.0) {
    const double corrected = std::clamp(
        invert_worth(worth, bank_reactivity(worth, seed_pos) -
                                s.engine.params.power_coeff * gs),
        lo, hi);
    if (std::abs(corrected - seed_pos) > 1e-9) {
      const double gc = g(corrected);
      if (std::abs(gc) <= tol) return corrected;
      if ((gs > 0.0) == (gc > 0.0)) {
        // Same side of the target: keep the tighter point (power rises with
        // position, so overshoots bound from above, undershoots from below).
        const bool tighter =
            gs > 0.0 ? corrected < seed_pos : corrected > seed_pos;
        if (tighter) {
          seed_pos = corrected;
          gs = gc;
        }
      } else {
        // Opposite sides: the root is bracketed between the two probes.
        lo = std::min(seed_pos, corrected);
        hi = std::max(seed_pos, corrected);
        while (hi - lo > 1e-3) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if (std::abs(gm) <= tol) return mid;
          if (gm > 0.0)
            hi = mid;
          else
            lo = mid;
        }
        return 0.5 * (lo + hi);
      }
    }
  }

  if (gs > 0.0) {
    hi = seed_pos;
    const double glo = g(lo);
    if (std::abs(glo) <= tol) return lo;
    if (glo > 0.0)
      throw GenerationError("inverse solve: target below reachable power");
  } else {
    lo = seed_pos;
    const double ghi = g(hi);
    if (std::abs(ghi) <= tol) return hi;
    if (ghi < 0.0)
      throw GenerationError("inverse solve: target above reachable power");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (std::abs(gm) <= tol) return mid;
    if (gm > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

ControlVector vector_at_init(const Engine& e) {
  ControlVector cv;
  cv.b1_pos = e.bank1.init_position;
  cv.b1_time = 0.0;
  cv.b1_speed = 2.0;
  cv.b2_pos = e.bank2.init_position;
  cv.b2_time = 0.0;
  cv.b2_speed = 2.0;
  return cv;
}

ControlVector solve_single(SolveCtx& s, Rng& rng, bool is_b1, double need_pcm) {
  const RodBankConfig& bank = is_b1 ? s.engine.bank1 : s.engine.bank2;
  require_headroom(bank, is_b1 ? "bank1" : "bank2", need_pcm);
  const double t = rng.uniform(0.0, 10.0);
  const double v = rng.uniform(1.0, 4.0);
  ControlVector cv = vector_at_init(s.engine);
  if (is_b1) {
    cv.b1_time = t;
    cv.b1_speed = v;
  } else {
    cv.b2_time = t;
    cv.b2_speed = v;
  }
  const double w_init = bank_reactivity(bank.worth, bank.init_position);
  const double seed_pos = invert_worth(bank.worth, w_init + need_pcm);
  const double lo = need_pcm < 0.0 ? 0.0 : bank.init_position;
  const double hi = need_pcm < 0.0 ? bank.init_position : bank.worth.travel;
  const double pos = bisect_position(s, cv, is_b1, lo, hi, seed_pos);
  (is_b1 ? cv.b1_pos : cv.b2_pos) = pos;
  return cv;
}

ControlVector solve_two_bank(SolveCtx& s, Rng& rng, bool sequential,
                             double need_pcm) {
  const double f = rng.uniform(0.3, 0.7);
  double t1, t2;
  if (sequential) {
    const double t_first = rng.uniform(0.0, 10.0);
    const double gap = rng.uniform(2.0, 10.0);
    const bool b1_leads = rng.bit();
    t1 = b1_leads ? t_first : t_first + gap;
    t2 = b1_leads ? t_first + gap : t_first;
  } else {
    t1 = t2 = rng.uniform(0.0, 10.0);
  }
  const double v1 = rng.uniform(1.0, 4.0);
  const double v2 = rng.uniform(1.0, 4.0);

  const double need1 = f * need_pcm;
  const double need2 = need_pcm - need1;
  require_headroom(s.engine.bank1, "bank1", need1);
  require_headroom(s.engine.bank2, "bank2", need2);

  ControlVector cv = vector_at_init(s.engine);
  cv.b1_time = t1;
  cv.b1_speed = v1;
  cv.b2_time = t2;
  cv.b2_speed = v2;
  const double w1i =
      bank_reactivity(s.engine.bank1.worth, s.engine.bank1.init_position);
  const double w2i =
      bank_reactivity(s.engine.bank2.worth, s.engine.bank2.init_position);
  cv.b1_pos = invert_worth(s.engine.bank1.worth, w1i + need1);
  const double seed2 = invert_worth(s.engine.bank2.worth, w2i + need2);
  // Bank 2 absorbs whatever the transient leaves unmet (bank 1 may still be
  // traveling at the horizon), so its refinement range is the full stroke.
  cv.b2_pos =
      bisect_position(s, cv, false, 0.0, s.engine.bank2.worth.travel, seed2);
  return cv;
}

}  // namespace

ControlVector inverse_solve(double delta, ActuationFamily family,
                            const Engine& engine, const RunConfig& cfg,
                            Rng& rng) {
  cfg.validate();
  const double m = std::abs(delta);
  if (!(m > 0.0) || m > 0.5 || !std::isfinite(delta))
    throw std::domain_error("inverse_solve: |delta| outside (0, 0.5]");

  SolveCtx ctx{engine, cfg, 1.0 + delta};
  const double need_pcm = engine.params.power_coeff * delta;

  ControlVector cv;
  switch (family) {
    case ActuationFamily::single_b1:
      cv = solve_single(ctx, rng, true, need_pcm);
      break;
    case ActuationFamily::single_b2:
      cv = solve_single(ctx, rng, false, need_pcm);
      break;
    case ActuationFamily::simultaneous:
      cv = solve_two_bank(ctx, rng, false, need_pcm);
      break;
    case ActuationFamily::sequential:
      cv = solve_two_bank(ctx, rng, true, need_pcm);
      break;
  }

  cv = quantize(cv);
  const auto cls = classify(cv, engine.bank1.init_position,
                            engine.bank2.init_position);
  if (cls.degenerate || cls.family != family)
    throw GenerationError("inverse solve: solved vector classifies as " +
                          std::string(family_name(cls.family)) +
                          ", wanted " + family_name(family));
  if (!validate(cv, engine).empty())
    throw GenerationError("inverse solve: solved vector failed validation");
  const double ach = ctx.forward(cv);
  const double err = std::abs(ach - ctx.target_power) / ctx.target_power;
  if (err > kVerifyTolRel)
    throw GenerationError("inverse solve: verification miss (" +
                          format_num(err * 100.0) + "%)");
  return cv;
}

ActuationFamily quota_family(std::size_t id, const MixtureWeights& mixture) {
  const double w[4] = {mixture.single_b1, mixture.single_b2,
                       mixture.simultaneous, mixture.sequential};
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0) throw std::domain_error("mixture: negative weight");
    sum += x;
  }
  if (!(sum > 0.0)) throw std::domain_error("mixture: all weights zero");
  std::size_t counts[4] = {0, 0, 0, 0};
  int pick = 0;
  for (std::size_t k = 0; k <= id; ++k) {
    double best = -1e300;
    pick = 0;
    for (int fidx = 0; fidx < 4; ++fidx) {
      const double deficit =
          (w[fidx] / sum) * static_cast<double>(k + 1) -
          static_cast<double>(counts[fidx]);
      if (deficit > best + 1e-12) {
        best = deficit;
        pick = fidx;
      }
    }
    ++counts[pick];
  }
  static constexpr ActuationFamily kOrder[4] = {
      ActuationFamily::single_b1, ActuationFamily::single_b2,
      ActuationFamily::simultaneous, ActuationFamily::sequential};
  return kOrder[pick];
}

namespace {

constexpr int kMaxAttemptsPerScenario = 100;

Scenario make_scenario(long id, ActuationFamily family, std::uint64_t master,
                       const Engine& engine, const RunConfig& cfg,
                       int& attempts_used) {
  const std::uint64_t seed = child_seed(master, static_cast<std::uint64_t>(id));
  Rng rng(seed);
  for (int attempt = 1; attempt <= kMaxAttemptsPerScenario; ++attempt) {
    const double delta = quantize_num(sample_target(rng, 1.0, 1.0, 1.0));
    try {
      ControlVector cv = inverse_solve(delta, family, engine, cfg, rng);
      attempts_used = attempt;
      Scenario sc;
      sc.id = id;
      sc.p_init = 1.0;
      sc.p_target_delta = delta;
      sc.family = family;
      sc.control = cv;
      sc.regime = regime_of(delta);
      sc.seed = seed;
      return sc;
    } catch (const InfeasibleTarget&) {
      continue;  // fresh target next attempt
    } catch (const GenerationError&) {
      continue;
    }
  }
  throw GenerationError("scenario " + std::to_string(id) +
                        ": resample budget exhausted (" +
                        std::to_string(kMaxAttemptsPerScenario) + " attempts)");
}

}  // namespace

Corpus build_corpus(std::size_t n, std::uint64_t master_seed,
                    const MixtureWeights& mixture, const Engine& engine,
                    const RunConfig& cfg, int parallelism) {
  if (n == 0) throw std::domain_error("build_corpus: empty corpus");
  cfg.validate();

  // Family sequence once, up front (quota keeps every prefix on-mixture).
  std::vector<ActuationFamily> families(n);
  {
    const double w[4] = {mixture.single_b1, mixture.single_b2,
                         mixture.simultaneous, mixture.sequential};
    double sum = 0.0;
    for (double x : w) {
      if (x < 0.0) throw std::domain_error("mixture: negative weight");
      sum += x;
    }
    if (!(sum > 0.0)) throw std::domain_error("mixture: all weights zero");
    std::size_t counts[4] = {0, 0, 0, 0};
    static constexpr ActuationFamily kOrder[4] = {
        ActuationFamily::single_b1, ActuationFamily::single_b2,
        ActuationFamily::simultaneous, ActuationFamily::sequential};
    for (std::size_t k = 0; k < n; ++k) {
      double best = -1e300;
      int pick = 0;
      for (int fidx = 0; fidx < 4; ++fidx) {
        const double deficit =
            (w[fidx] / sum) * static_cast<double>(k + 1) -
            static_cast<double>(counts[fidx]);
        if (deficit > best + 1e-12) {
          best = deficit;
          pick = fidx;
        }
      }
      ++counts[pick];
      families[k] = kOrder[pick];
    }
  }

  std::vector<Scenario> scenarios(n);
  std::vector<int> attempts(n, 0);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  const int workers =
      std::max(1, std::min<int>(parallelism, static_cast<int>(n)));

  auto work = [&]() {
    for (;;) {
      const std::size_t id = next.fetch_add(1);
      if (id >= n) return;
      try {
        scenarios[id] = make_scenario(static_cast<long>(id), families[id],
                                      master_seed, engine, cfg, attempts[id]);
      } catch (const std::exception& ex) {
        errors[id] = ex.what();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  for (std::size_t id = 0; id < n; ++id)
    if (!errors[id].empty()) throw GenerationError(errors[id]);

  Corpus corpus;
  corpus.master_seed = master_seed;
  corpus.mixture = mixture;
  corpus.fingerprint = harness_fingerprint(engine, cfg);
  corpus.scenarios = std::move(scenarios);
  for (std::size_t id = 0; id < n; ++id) {
    corpus.resample_count += attempts[id] - 1;
    if (corpus.scenarios[id].p_target_delta > 0.0)
      ++corpus.positive_count;
    else
      ++corpus.negative_count;
  }
  return corpus;
}

std::string write_corpus_text(const Corpus& corpus) {
  std::ostringstream os;
  os << "# rodbench corpus v1\n";
  os << "# seed=" << corpus.master_seed << " n=" << corpus.scenarios.size()
     << " mixture=" << format_num(corpus.mixture.single_b1) << ","
     << format_num(corpus.mixture.single_b2) << ","
     << format_num(corpus.mixture.simultaneous) << ","
     << format_num(corpus.mixture.sequential)
     << " fingerprint=" << corpus.fingerprint
     << " resamples=" << corpus.resample_count << " signs=+"
     << corpus.positive_count << "/-" << corpus.negative_count << "\n";
  for (const auto& sc : corpus.scenarios) {
    SchemaLine line{sc.p_init, sc.p_target_delta, sc.control};
    os << "id=" << sc.id << " p_init=" << format_num(sc.p_init)
       << " p_target_delta=" << format_num(sc.p_target_delta)
       << " family=" << family_name(sc.family)
       << " regime=" << regime_name(sc.regime) << " seed=" << sc.seed
       << " schema=" << serialize_schema(line) << "\n";
  }
  return os.str();
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << write_corpus_text(corpus);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

struct KvLine {
  std::vector<std::pair<std::string, std::string>> fields;
  std::string schema;  // raw payload after "schema=" when present
};

KvLine parse_kv_line(const std::string& line, std::size_t lineno) {
  KvLine out;
  std::string head = line;
  const auto spos = line.find("schema=");
  if (spos != std::string::npos) {
    head = line.substr(0, spos);
    out.schema = line.substr(spos + 7);
  }
  for (const auto& tok : split_ws(head)) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": malformed field '" + tok + "'");
    out.fields.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return out;
}

std::string kv_get(const KvLine& kv, const std::string& key, std::size_t lineno) {
  for (const auto& [k, v] : kv.fields)
    if (k == key) return v;
  throw std::runtime_error("line " + std::to_string(lineno) +
                           ": missing field '" + key + "'");
}

double kv_num(const KvLine& kv, const std::string& key, std::size_t lineno) {
  const auto tok = kv_get(kv, key, lineno);
  const auto n = parse_number(tok);
  if (!n.parsed || !n.finite)
    throw std::runtime_error("line " + std::to_string(lineno) + ": field '" +
                             key + "' is not a number: '" + tok + "'");
  return n.value;
}

}  // namespace

Corpus read_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line) || line != "# rodbench corpus v1")
    throw std::runtime_error(path + ": not a corpus file (bad magic line)");
  ++lineno;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw std::runtime_error(path + ": missing corpus header");
  ++lineno;

  Corpus corpus;
  {
    const KvLine kv = parse_kv_line(line.substr(2), lineno);
    corpus.master_seed = static_cast<std::uint64_t>(
        std::strtoull(kv_get(kv, "seed", lineno).c_str(), nullptr, 10));
    const auto mix = kv_get(kv, "mixture", lineno);
    double w[4];
    if (std::sscanf(mix.c_str(), "%lf,%lf,%lf,%lf", &w[0], &w[1], &w[2], &w[3]) != 4)
      throw std::runtime_error(path + ": bad mixture in header");
    corpus.mixture = MixtureWeights{w[0], w[1], w[2], w[3]};
    corpus.fingerprint = kv_get(kv, "fingerprint", lineno);
    corpus.resample_count =
        static_cast<long>(kv_num(kv, "resamples", lineno));
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const KvLine kv = parse_kv_line(line, lineno);
    if (kv.schema.empty())
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": record without schema payload");
    const auto parsed = parse_schema(kv.schema);
    if (!parsed.ok)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": bad schema payload: " + parsed.message);
    Scenario sc;
    sc.id = static_cast<long>(kv_num(kv, "id", lineno));
    sc.p_init = kv_num(kv, "p_init", lineno);
    sc.p_target_delta = kv_num(kv, "p_target_delta", lineno);
    const auto fam = family_from_name(kv_get(kv, "family", lineno));
    if (!fam)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown family");
    sc.family = *fam;
    const auto reg = regime_from_name(kv_get(kv, "regime", lineno));
    if (!reg)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown regime");
    sc.regime = *reg;
    sc.seed = static_cast<std::uint64_t>(
        std::strtoull(kv_get(kv, "seed", lineno).c_str(), nullptr, 10));
    sc.control = parsed.line.cv;
    if (parsed.line.p_init != sc.p_init ||
        parsed.line.p_target_delta != sc.p_target_delta)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": record fields disagree with schema payload");
    if (sc.regime != regime_of(sc.p_target_delta))
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": regime label disagrees with delta");
    corpus.scenarios.push_back(sc);
    if (sc.p_target_delta > 0.0)
      ++corpus.positive_count;
    else
      ++corpus.negative_count;
  }

  for (std::size_t i = 0; i < corpus.scenarios.size(); ++i)
    if (corpus.scenarios[i].id != static_cast<long>(i))
      throw std::runtime_error(path + ": scenario ids not dense 0..n-1");
  if (corpus.scenarios.empty())
    throw std::runtime_error(path + ": corpus has no scenarios");
  return corpus;
}

RampCorpus build_ramp_corpus(std::size_t n, std::uint64_t master_seed,
                             const Engine& engine, const RunConfig& cfg,
                             int parallelism) {
  if (n == 0) throw std::domain_error("build_ramp_corpus: empty corpus");
  cfg.validate();
  RampCorpus corpus;
  corpus.master_seed = master_seed;
  corpus.fingerprint = harness_fingerprint(engine, cfg);
  corpus.scenarios.resize(n);

  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(n);
  auto work = [&]() {
    for (;;) {
      const std::size_t id = next.fetch_add(1);
      if (id >= n) return;
      try {
        const std::uint64_t seed = child_seed(master_seed, id);
        Rng rng(seed);
        RampCommand cmd;
        cmd.rho_insert_pcm = quantize_num(rng.uniform(-2000.0, -10.0));
        cmd.duration_s = quantize_num(rng.uniform(3.0, 40.0));
        RunResult probe = execute_ramp(engine, 1.0, 0.0, cmd, cfg,
                                       static_cast<long>(id));
        if (probe.failure != FailureKind::none)
          throw GenerationError("ramp scenario diverged");
        RampScenario sc;
        sc.id = static_cast<long>(id);
        sc.p_init = 1.0;
        sc.p_target_delta = quantize_num(probe.achieved_power - 1.0);
        sc.command = cmd;
        sc.seed = seed;
        corpus.scenarios[id] = sc;
      } catch (const std::exception& ex) {
        errors[id] = ex.what();
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(parallelism, static_cast<int>(n)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::size_t id = 0; id < n; ++id)
    if (!errors[id].empty()) throw GenerationError(errors[id]);
  return corpus;
}

std::string write_ramp_corpus_text(const RampCorpus& corpus) {
  std::ostringstream os;
  os << "# rodbench ramp-corpus v1\n";
  os << "# seed=" << corpus.master_seed << " n=" << corpus.scenarios.size()
     << " fingerprint=" << corpus.fingerprint << "\n";
  for (const auto& sc : corpus.scenarios) {
    os << "id=" << sc.id << " p_init=" << format_num(sc.p_init)
       << " p_target_delta=" << format_num(sc.p_target_delta)
       << " rho_insert=" << format_num(sc.command.rho_insert_pcm)
       << " duration=" << format_num(sc.command.duration_s)
       << " seed=" << sc.seed << "\n";
  }
  return os.str();
}

void write_ramp_corpus(const RampCorpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << write_ramp_corpus_text(corpus);
  if (!out) throw std::runtime_error("write failed: " + path);
}

RampCorpus read_ramp_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus: " + path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line) || line != "# rodbench ramp-corpus v1")
    throw std::runtime_error(path + ": not a ramp corpus file");
  ++lineno;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw std::runtime_error(path + ": missing header");
  ++lineno;
  RampCorpus corpus;
  {
    const KvLine kv = parse_kv_line(line.substr(2), lineno);
    corpus.master_seed = static_cast<std::uint64_t>(
        std::strtoull(kv_get(kv, "seed", lineno).c_str(), nullptr, 10));
    corpus.fingerprint = kv_get(kv, "fingerprint", lineno);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const KvLine kv = parse_kv_line(line, lineno);
    RampScenario sc;
    sc.id = static_cast<long>(kv_num(kv, "id", lineno));
    sc.p_init = kv_num(kv, "p_init", lineno);
    sc.p_target_delta = kv_num(kv, "p_target_delta", lineno);
    sc.command.rho_insert_pcm = kv_num(kv, "rho_insert", lineno);
    sc.command.duration_s = kv_num(kv, "duration", lineno);
    sc.seed = static_cast<std::uint64_t>(
        std::strtoull(kv_get(kv, "seed", lineno).c_str(), nullptr, 10));
    corpus.scenarios.push_back(sc);
  }
  for (std::size_t i = 0; i < corpus.scenarios.size(); ++i)
    if (corpus.scenarios[i].id != static_cast<long>(i))
      throw std::runtime_error(path + ": scenario ids not dense 0..n-1");
  if (corpus.scenarios.empty())
    throw std::runtime_error(path + ": corpus has no scenarios");
  return corpus;
}

}  // namespace rodbench
