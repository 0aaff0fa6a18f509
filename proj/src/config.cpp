#include "rodbench/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rodbench {

Engine HarnessConfig::make_engine() const {
  return Engine::make(params, bank1, bank2);
}

PolicyOptions HarnessConfig::policy_options() const {
  PolicyOptions opts;
  opts.proportional_gain = proportional_gain;
  opts.knn_k = knn_k;
  opts.external_argv = split_command(external_cmd);
  opts.timeout_s = timeout_s;
  opts.window_s = run.window_s;
  return opts;
}

namespace {

double num_value(const std::string& key, const std::string& value) {
  const auto n = parse_number(value);
  if (!n.parsed || !n.finite)
    throw ConfigError("config: key '" + key + "' needs a finite number, got '" +
                      value + "'");
  return n.value;
}

std::vector<double> num_list(const std::string& key, const std::string& value,
                             std::size_t expected = 0) {
  std::vector<double> out;
  std::istringstream is(value);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(num_value(key, item));
  if (expected && out.size() != expected)
    throw ConfigError("config: key '" + key + "' needs " +
                      std::to_string(expected) + " comma-separated values");
  return out;
}

WorthShape shape_value(const std::string& key, const std::string& value) {
  if (value == "s_curve") return WorthShape::s_curve;
  if (value == "linear") return WorthShape::linear;
  throw ConfigError("config: key '" + key + "' must be s_curve or linear");
}

const char* shape_name(WorthShape s) {
  return s == WorthShape::s_curve ? "s_curve" : "linear";
}

}  // namespace

void apply_config_kv(HarnessConfig& cfg, const std::string& key,
                     const std::string& value) {
  // Kinetics.
  if (key == "beta") {
    const auto v = num_list(key, value, kNumGroups);
    for (std::size_t i = 0; i < kNumGroups; ++i) cfg.params.beta[i] = v[i];
  } else if (key == "lambda") {
    const auto v = num_list(key, value, kNumGroups);
    for (std::size_t i = 0; i < kNumGroups; ++i) cfg.params.lambda[i] = v[i];
  } else if (key == "generation_time") {
    cfg.params.generation_time = num_value(key, value);
  } else if (key == "power_coeff") {
    cfg.params.power_coeff = num_value(key, value);
  }
  // Banks.
  else if (key == "bank1_worth") cfg.bank1.worth.total_worth = num_value(key, value);
  else if (key == "bank1_travel") cfg.bank1.worth.travel = num_value(key, value);
  else if (key == "bank1_shape") cfg.bank1.worth.shape = shape_value(key, value);
  else if (key == "bank1_init") cfg.bank1.init_position = num_value(key, value);
  else if (key == "bank2_worth") cfg.bank2.worth.total_worth = num_value(key, value);
  else if (key == "bank2_travel") cfg.bank2.worth.travel = num_value(key, value);
  else if (key == "bank2_shape") cfg.bank2.worth.shape = shape_value(key, value);
  else if (key == "bank2_init") cfg.bank2.init_position = num_value(key, value);
  // Run settings.
  else if (key == "horizon") cfg.run.horizon_s = num_value(key, value);
  else if (key == "window") {
    if (value == "none")
      cfg.run.window_s.reset();
    else
      cfg.run.window_s = num_value(key, value);
  } else if (key == "dt") cfg.run.dt_s = num_value(key, value);
  else if (key == "bands") cfg.run.bands_pct = num_list(key, value);
  else if (key == "severe_threshold")
    cfg.run.severe_threshold_pct = num_value(key, value);
  // Corpus.
  else if (key == "size") {
    const double v = num_value(key, value);
    if (v < 1 || v != std::floor(v))
      throw ConfigError("config: size must be a positive integer");
    cfg.size = static_cast<std::size_t>(v);
  } else if (key == "seed") {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end != value.c_str() + value.size() || value.empty())
      throw ConfigError("config: seed must be a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "mixture") {
    const auto v = num_list(key, value, 4);
    cfg.mixture = MixtureWeights{v[0], v[1], v[2], v[3]};
  }
  // Policy.
  else if (key == "policy") cfg.policy = value;
  else if (key == "knn_k") {
    const double v = num_value(key, value);
    if (v < 1 || v != std::floor(v))
      throw ConfigError("config: knn_k must be a positive integer");
    cfg.knn_k = static_cast<int>(v);
  } else if (key == "proportional_gain") {
    if (value == "auto")
      cfg.proportional_gain.reset();
    else
      cfg.proportional_gain = num_value(key, value);
  } else if (key == "external_cmd") cfg.external_cmd = value;
  else if (key == "timeout") cfg.timeout_s = num_value(key, value);
  // Output.
  else if (key == "out_dir") cfg.out_dir = value;
  else
    throw ConfigError("config: unknown key '" + key + "'");
}

HarnessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  HarnessConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // Trim.
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto ke = key.find_last_not_of(" \t");
    key = key.substr(0, ke + 1);
    const auto vb = value.find_first_not_of(" \t");
    value = vb == std::string::npos ? "" : value.substr(vb);
    try {
      apply_config_kv(cfg, key, value);
    } catch (const ConfigError& ex) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return cfg;
}

std::string effective_config_text(const HarnessConfig& cfg) {
  std::ostringstream os;
  os << "# effective configuration\n";
  os << "beta=";
  for (std::size_t i = 0; i < kNumGroups; ++i)
    os << (i ? "," : "") << format_num(cfg.params.beta[i]);
  os << "\nlambda=";
  for (std::size_t i = 0; i < kNumGroups; ++i)
    os << (i ? "," : "") << format_num(cfg.params.lambda[i]);
  os << "\ngeneration_time=" << format_num(cfg.params.generation_time);
  os << "\npower_coeff=" << format_num(cfg.params.power_coeff);
  os << "\nbank1_worth=" << format_num(cfg.bank1.worth.total_worth)
     << "\nbank1_travel=" << format_num(cfg.bank1.worth.travel)
     << "\nbank1_shape=" << shape_name(cfg.bank1.worth.shape)
     << "\nbank1_init=" << format_num(cfg.bank1.init_position);
  os << "\nbank2_worth=" << format_num(cfg.bank2.worth.total_worth)
     << "\nbank2_travel=" << format_num(cfg.bank2.worth.travel)
     << "\nbank2_shape=" << shape_name(cfg.bank2.worth.shape)
     << "\nbank2_init=" << format_num(cfg.bank2.init_position);
  os << "\nhorizon=" << format_num(cfg.run.horizon_s);
  os << "\nwindow="
     << (cfg.run.window_s ? format_num(*cfg.run.window_s) : "none");
  os << "\ndt=" << format_num(cfg.run.dt_s);
  os << "\nbands=";
  for (std::size_t i = 0; i < cfg.run.bands_pct.size(); ++i)
    os << (i ? "," : "") << format_num(cfg.run.bands_pct[i]);
  os << "\nsevere_threshold=" << format_num(cfg.run.severe_threshold_pct);
  os << "\nsize=" << cfg.size;
  os << "\nseed=" << cfg.seed;
  os << "\nmixture=" << format_num(cfg.mixture.single_b1) << ","
     << format_num(cfg.mixture.single_b2) << ","
     << format_num(cfg.mixture.simultaneous) << ","
     << format_num(cfg.mixture.sequential);
  os << "\npolicy=" << cfg.policy;
  os << "\nknn_k=" << cfg.knn_k;
  os << "\nproportional_gain="
     << (cfg.proportional_gain ? format_num(*cfg.proportional_gain) : "auto");
  os << "\nexternal_cmd=" << cfg.external_cmd;
  os << "\ntimeout=" << format_num(cfg.timeout_s);
  os << "\nout_dir=" << cfg.out_dir << "\n";
  return os.str();
}

std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quote = false;
  bool has_token = false;
  for (char c : cmd) {
    if (c == '"') {
      in_quote = !in_quote;
      has_token = true;
      continue;
    }
    if (!in_quote && (c == ' ' || c == '\t')) {
      if (has_token) {
        out.push_back(cur);
        cur.clear();
        has_token = false;
      }
      continue;
    }
    cur += c;
    has_token = true;
  }
  if (in_quote) throw ConfigError("command: unterminated quote");
  if (has_token) out.push_back(cur);
  return out;
}

}  // namespace rodbench
