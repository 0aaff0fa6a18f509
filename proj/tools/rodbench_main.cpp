// Command-line front end: corpus generation, proportional calibration,
// batch validation, and cross-scale reporting.
//
// Exit codes: 0 success, 2 configuration error, 3 generation error,
// 4 transport error, 5 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rodbench/analysis.hpp"
#include "rodbench/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeneration = 3;
constexpr int kExitTransport = 4;
constexpr int kExitInternal = 5;
constexpr std::size_t kMinCorpusSize = 10;

using namespace rodbench;

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value pairs
};

HarnessConfig resolve_config(const CommonFlags& flags) {
  HarnessConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (const char* env_out = std::getenv("RODBENCH_OUT"))
    if (*env_out) cfg.out_dir = env_out;  // env overrides output dir only
  return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "Config file (flat key=value lines)");
  cmd->add_option("--set", flags.overrides,
                  "Override one config key (key=value; repeatable)")
      ->take_all();
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return (std::filesystem::path(dir) / name).string();
}

void require_readable(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw ConfigError("cannot open input file: " + path);
}

// Input files that fail to parse are user errors, not internal ones.
template <class Fn>
auto read_input(const std::string& what, const std::string& path, Fn&& fn)
    -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::exception& ex) {
    throw ConfigError("bad " + what + " file '" + path + "': " + ex.what());
  }
}

// Output paths are user-supplied too: create missing parent directories and
// report unwritable destinations as configuration errors.
template <class Fn>
void write_output(const std::string& path, Fn&& fn) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + parent.string() +
                      "': " + ec.message());
  try {
    fn();
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
}

void spot_check(const Corpus& corpus, const Engine& engine,
                const RunConfig& run) {
  // Oracle-soundness spot check over a 1% sample (at least one scenario).
  const std::size_t n = corpus.scenarios.size();
  const std::size_t count = std::max<std::size_t>(1, n / 100);
  const std::size_t stride = std::max<std::size_t>(1, n / count);
  double max_err = 0.0;
  long checked = 0;
  for (std::size_t i = 0; i < n; i += stride) {
    const auto& sc = corpus.scenarios[i];
    const RunResult r = execute_one(engine, sc.p_init, sc.p_target_delta,
                                    sc.control, run, sc.id);
    max_err = std::max(max_err, r.error_pct);
    ++checked;
  }
  std::cout << "spot_check runs=" << checked
            << " max_error_pct=" << format_num(max_err)
            << " within_1pct=" << (max_err <= 1.0 ? "yes" : "no") << "\n";
}

int cmd_gen_corpus(const HarnessConfig& cfg, const std::string& out_path,
                   int parallel) {
  if (cfg.size < kMinCorpusSize)
    throw ConfigError("size " + std::to_string(cfg.size) +
                      " is below the minimum of " +
                      std::to_string(kMinCorpusSize));
  const Engine engine = cfg.make_engine();
  const Corpus corpus = build_corpus(cfg.size, cfg.seed, cfg.mixture, engine,
                                     cfg.run, parallel);
  const std::string path =
      out_path.empty() ? join_path(cfg.out_dir, "corpus.txt") : out_path;
  write_output(path, [&] { write_corpus(corpus, path); });

  std::array<long, 4> fam_counts{};
  std::array<long, 3> regime_counts{};
  for (const auto& sc : corpus.scenarios) {
    ++fam_counts[static_cast<std::size_t>(sc.family)];
    ++regime_counts[static_cast<std::size_t>(sc.regime)];
  }
  std::cout << effective_config_text(cfg);
  std::cout << "corpus=" << path << "\n";
  std::cout << "fingerprint=" << corpus.fingerprint << "\n";
  std::cout << "families single_b1=" << fam_counts[0]
            << " single_b2=" << fam_counts[1]
            << " simultaneous=" << fam_counts[2]
            << " sequential=" << fam_counts[3] << "\n";
  std::cout << "regimes small=" << regime_counts[0]
            << " medium=" << regime_counts[1] << " large=" << regime_counts[2]
            << "\n";
  std::cout << "resamples=" << corpus.resample_count << " signs=+"
            << corpus.positive_count << "/-" << corpus.negative_count << "\n";
  spot_check(corpus, engine, cfg.run);
  return kExitOk;
}

int cmd_gen_ramp_corpus(const HarnessConfig& cfg, const std::string& out_path,
                        int parallel) {
  if (cfg.size < kMinCorpusSize)
    throw ConfigError("size " + std::to_string(cfg.size) +
                      " is below the minimum of " +
                      std::to_string(kMinCorpusSize));
  const Engine engine = cfg.make_engine();
  const RampCorpus corpus =
      build_ramp_corpus(cfg.size, cfg.seed, engine, cfg.run, parallel);
  const std::string path =
      out_path.empty() ? join_path(cfg.out_dir, "ramp_corpus.txt") : out_path;
  write_output(path, [&] { write_ramp_corpus(corpus, path); });
  std::cout << effective_config_text(cfg);
  std::cout << "ramp_corpus=" << path << "\n";
  std::cout << "fingerprint=" << corpus.fingerprint << "\n";
  std::cout << "scenarios=" << corpus.scenarios.size() << "\n";
  return kExitOk;
}

int cmd_calibrate(const HarnessConfig& cfg, const std::string& out_path) {
  const Engine engine = cfg.make_engine();
  const ProportionalConfig cal = calibrate_proportional(engine, cfg.run);
  const std::string path =
      out_path.empty() ? join_path(cfg.out_dir, "calibration.txt") : out_path;
  write_output(path, [&] { write_calibration(cal, path); });
  std::cout << effective_config_text(cfg);
  std::cout << "calibration=" << path << "\n";
  std::cout << "gain=" << format_num(cal.gain)
            << " rod_speed=" << format_num(cal.rod_speed)
            << " fit_residual=" << format_num(cal.fit_residual) << "\n";
  for (const auto& pt : cal.points)
    std::cout << "point delta=" << format_num(pt.delta)
              << " displacement=" << format_num(pt.displacement)
              << " saturated=" << (pt.saturated ? 1 : 0) << "\n";
  return kExitOk;
}

int cmd_validate(HarnessConfig cfg, const std::string& corpus_path,
                 const std::string& train_path,
                 const std::string& calibration_path, bool ramp_mode,
                 long runs, int parallel, const std::string& out_path) {
  require_readable(corpus_path);
  const Engine engine = cfg.make_engine();

  BatchOptions opts;
  opts.parallelism = parallel;
  opts.source_label = std::filesystem::path(corpus_path).filename().string();

  ValidationReport report;
  if (ramp_mode) {
    if (!train_path.empty())
      throw ConfigError("--train has no effect in --ramp replay mode");
    RampCorpus corpus = read_input("ramp corpus", corpus_path,
                                   [&] { return read_ramp_corpus(corpus_path); });
    if (runs > 0 && static_cast<std::size_t>(runs) < corpus.scenarios.size())
      corpus.scenarios.resize(static_cast<std::size_t>(runs));
    report = batch_validate_ramp(corpus, engine, cfg.run, opts);
  } else {
    Corpus corpus = read_input("corpus", corpus_path,
                               [&] { return read_corpus(corpus_path); });
    if (runs > 0 && static_cast<std::size_t>(runs) < corpus.scenarios.size())
      corpus.scenarios.resize(static_cast<std::size_t>(runs));
    // Retrieval policies hold a pointer to the reference corpus, so a
    // separate training corpus must outlive the whole batch.
    Corpus train;
    const Corpus* reference = &corpus;
    if (!train_path.empty()) {
      require_readable(train_path);
      train = read_input("training corpus", train_path,
                         [&] { return read_corpus(train_path); });
      reference = &train;
    }
    if (!calibration_path.empty()) {
      require_readable(calibration_path);
      cfg.proportional_gain =
          read_input("calibration", calibration_path, [&] {
            return read_calibration(calibration_path);
          }).gain;
    }
    const PolicyFactory factory = make_policy_factory(
        cfg.policy, engine, cfg.run, reference, cfg.policy_options());
    report = batch_validate(corpus, factory, engine, cfg.run, opts);
  }

  const std::string path =
      out_path.empty() ? join_path(cfg.out_dir, "report.txt") : out_path;
  write_output(path, [&] { write_report(report, path); });
  std::cout << effective_config_text(cfg);
  std::cout << "report=" << path << "\n";
  std::cout << "policy=" << report.policy_name
            << " runs=" << report.results.size() << "\n";
  for (std::size_t b = 0; b < report.cfg.bands_pct.size(); ++b) {
    std::cout << "band=" << format_num(report.cfg.bands_pct[b])
              << " rate=" << format_num(success_rate(report.results,
                                                     report.cfg.bands_pct[b]))
              << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& report_paths,
               const std::vector<long>& scales, const std::string& out_dir) {
  if (scales.size() != report_paths.size())
    throw ConfigError("--scales arity must match --reports");
  std::vector<ScaleReport> entries;
  for (std::size_t i = 0; i < report_paths.size(); ++i) {
    require_readable(report_paths[i]);
    ScaleReport e;
    e.scale = scales[i];
    e.report = read_input("report", report_paths[i],
                          [&] { return read_report(report_paths[i]); });
    entries.push_back(std::move(e));
  }
  const auto tables = cross_scale_tables(entries);
  for (const auto& [name, content] : tables) {
    const std::string path = join_path(out_dir, name);
    write_output(path, [&] {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open for writing: " + path);
      out << content;
      if (!out) throw std::runtime_error("write failed: " + path);
    });
    std::cout << "table=" << path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rodbench: rod-bank control benchmark (corpus generation, closed-loop "
      "validation, cross-scale analysis)"};
  app.require_subcommand(1);

  CommonFlags gen_flags, ramp_flags, cal_flags, val_flags;
  std::string gen_out, ramp_out, cal_out, val_out;
  std::size_t gen_size = 0, ramp_size = 0;
  std::uint64_t gen_seed = 0, ramp_seed = 0;
  int gen_parallel = 1, ramp_parallel = 1, val_parallel = 1;

  auto* gen = app.add_subcommand("gen-corpus", "Generate a labeled corpus");
  add_common(gen, gen_flags);
  gen->add_option("--size", gen_size, "Number of scenarios");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Corpus output path");
  gen->add_option("--parallel", gen_parallel, "Worker threads");

  auto* ramp =
      app.add_subcommand("gen-ramp-corpus", "Generate a ramp-and-hold corpus");
  add_common(ramp, ramp_flags);
  ramp->add_option("--size", ramp_size, "Number of scenarios");
  ramp->add_option("--seed", ramp_seed, "Master seed");
  ramp->add_option("--out", ramp_out, "Corpus output path");
  ramp->add_option("--parallel", ramp_parallel, "Worker threads");

  auto* cal = app.add_subcommand(
      "calibrate", "Calibrate the proportional baseline (six-point fit)");
  add_common(cal, cal_flags);
  cal->add_option("--out", cal_out, "Calibration output path");

  auto* val = app.add_subcommand("validate", "Run a closed-loop batch");
  add_common(val, val_flags);
  std::string val_corpus, val_train, val_policy, val_policy_cmd,
      val_calibration;
  long val_runs = 0;
  bool val_ramp = false;
  double val_timeout = 0.0;
  val->add_option("--corpus", val_corpus, "Corpus file to validate against")
      ->required();
  val->add_option("--train", val_train,
                  "Training corpus for retrieval policies (defaults to the "
                  "validated corpus)");
  val->add_option("--policy", val_policy,
                  "Policy: oracle | knn | proportional | null | external");
  val->add_option("--policy-cmd", val_policy_cmd,
                  "External policy command line");
  val->add_option("--calibration", val_calibration,
                  "Calibration file for the proportional policy");
  val->add_option("--runs", val_runs, "Validate only the first N scenarios");
  val->add_option("--parallel", val_parallel, "Worker threads");
  val->add_option("--timeout", val_timeout, "External policy timeout (s)");
  val->add_flag("--ramp", val_ramp, "Corpus is a ramp corpus (replay mode)");
  val->add_option("--out", val_out, "Report output path");

  auto* rep = app.add_subcommand("report", "Cross-scale analysis tables");
  std::vector<std::string> rep_reports;
  std::vector<long> rep_scales;
  std::string rep_out_dir = ".";
  rep->add_option("--reports", rep_reports, "Report files (repeat or comma)")
      ->required()
      ->delimiter(',');
  rep->add_option("--scales", rep_scales, "Corpus scale per report")
      ->required()
      ->delimiter(',');
  rep->add_option("--out-dir", rep_out_dir, "Output directory for tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);  // --help prints usage and exits 0
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);  // prints the usage message
    return kExitConfig;
  }

  try {
    if (gen->parsed()) {
      HarnessConfig cfg = resolve_config(gen_flags);
      if (gen->count("--size")) cfg.size = gen_size;
      if (gen->count("--seed")) cfg.seed = gen_seed;
      return cmd_gen_corpus(cfg, gen_out, gen_parallel);
    }
    if (ramp->parsed()) {
      HarnessConfig cfg = resolve_config(ramp_flags);
      if (ramp->count("--size")) cfg.size = ramp_size;
      if (ramp->count("--seed")) cfg.seed = ramp_seed;
      return cmd_gen_ramp_corpus(cfg, ramp_out, ramp_parallel);
    }
    if (cal->parsed()) {
      return cmd_calibrate(resolve_config(cal_flags), cal_out);
    }
    if (val->parsed()) {
      HarnessConfig cfg = resolve_config(val_flags);
      if (!val_policy.empty()) cfg.policy = val_policy;
      if (!val_policy_cmd.empty()) cfg.external_cmd = val_policy_cmd;
      if (val_timeout > 0.0) cfg.timeout_s = val_timeout;
      return cmd_validate(cfg, val_corpus, val_train, val_calibration,
                          val_ramp, val_runs, val_parallel, val_out);
    }
    if (rep->parsed()) {
      if (const char* env_out = std::getenv("RODBENCH_OUT"))
        if (*env_out && rep_out_dir == ".") rep_out_dir = env_out;
      return cmd_report(rep_reports, rep_scales, rep_out_dir);
    }
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const CLI::Error& ex) {
    std::cerr << "usage error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleTarget& ex) {
    std::cerr << "generation error: " << ex.what() << "\n";
    return kExitGeneration;
  } catch (const GenerationError& ex) {
    std::cerr << "generation error: " << ex.what() << "\n";
    return kExitGeneration;
  } catch (const TransportOverload& ex) {
    std::cerr << "transport error: " << ex.what() << "\n";
    return kExitTransport;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
