#pragma once

// Small deterministic utilities shared across the harness: seeded RNG with
// portable uniform mappings, stable number formatting for the text formats,
// and an FNV-1a hash used for config fingerprints.

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace rodbench {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Per-item seed derivation: results for item `id` must not depend on how work
// is scheduled across threads, so each item gets its own stream.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t id) {
  return splitmix64(splitmix64(master) ^ (id + 0x517CC1B727220A95ull));
}

// mt19937_64 has a fully specified sequence; the uniform mappings below avoid
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bit() { return (gen_() & 1ull) != 0; }

  // index in [0, n)
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// Schema-facing number formatting: 6 significant digits, byte-stable.
inline std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  if (std::strcmp(buf, "-0") == 0) return "0";
  return buf;
}

// Wider formatting for derived diagnostics (error percentages, rates) where
// 6 digits would lose information worth keeping in reports.
inline std::string format_wide(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  if (std::strcmp(buf, "-0") == 0) return "0";
  return buf;
}

// Strict token -> double parse. Rejects partial consumption ("1.5x") and
// empty tokens; non-finite values parse but are reported as such so callers
// can distinguish "not a number" from "a number out of range".
struct NumberToken {
  bool parsed = false;   // token consumed entirely as a number
  bool finite = false;
  double value = 0.0;
};

inline NumberToken parse_number(const std::string& tok) {
  NumberToken out;
  if (tok.empty()) return out;
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) return out;
  out.parsed = true;
  out.value = v;
  out.finite = std::isfinite(v);
  return out;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) toks.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace rodbench
