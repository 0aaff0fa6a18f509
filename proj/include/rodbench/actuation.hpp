#pragma once

// Control-vector schema, actuation-family taxonomy, and rod motion plans.
// A proposal is six numbers per bank pair: target position, start time, and
// speed for each bank; the wire form prefixes initial power and target delta.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rodbench/kinetics.hpp"

namespace rodbench {

struct ControlVector {
  double b1_pos = 0.0;    // steps, [0, travel]
  double b1_time = 0.0;   // s, >= 0
  double b1_speed = 0.0;  // steps/s, > 0 when bank 1 moves
  double b2_pos = 0.0;
  double b2_time = 0.0;
  double b2_speed = 0.0;

  bool operator==(const ControlVector&) const = default;
};

enum class ActuationFamily { single_b1, single_b2, simultaneous, sequential };

const char* family_name(ActuationFamily f);
std::optional<ActuationFamily> family_from_name(const std::string& name);

// A bank "moves" when its target is at least one step away from its initial
// position; sub-step nudges are treated as stationary for taxonomy purposes.
inline constexpr double kMoveThresholdSteps = 1.0;

struct ClassifiedFamily {
  ActuationFamily family;
  bool degenerate = false;  // neither bank moves; binned as single_b2
};

// Taxonomy from the vector alone: which banks move, and for two-bank motion
// whether the start times coincide (simultaneous) or differ (sequential).
ClassifiedFamily classify(const ControlVector& cv, double init_b1, double init_b2);

struct Violation {
  std::string field;
  std::string message;
};

// Structural validation against an engine's bank geometry. Empty result means
// the vector is executable. Speeds are only constrained for banks that move.
std::vector<Violation> validate(const ControlVector& cv, const Engine& engine);

// Piecewise-linear motion: hold at init until start, ramp at constant speed,
// hold at target from arrival on.
struct BankMotion {
  double init = 0.0;
  double target = 0.0;
  double start = 0.0;
  double speed = 1.0;
  double arrival = 0.0;

  double position_at(double t) const;
};

struct MotionPlan {
  BankMotion bank1;
  BankMotion bank2;
};

// Requires a valid vector (positive speed whenever target != init).
MotionPlan plan_motion(const ControlVector& cv, double init_b1, double init_b2);

// Wire schema: "p_init p_target_delta b1_pos b1_time b1_speed b2_pos b2_time
// b2_speed", whitespace-separated, 6 significant digits.
struct SchemaLine {
  double p_init = 1.0;
  double p_target_delta = 0.0;
  ControlVector cv;
};

enum class ParseErrorKind { none, token_count, non_numeric, non_finite };

struct ParseResult {
  bool ok = false;
  ParseErrorKind error = ParseErrorKind::none;
  std::string message;
  SchemaLine line;
};

ParseResult parse_schema(const std::string& text);
std::string serialize_schema(const SchemaLine& line);

// Round a vector onto the 6-significant-digit schema grid. Vectors stored in
// corpora are quantized first so that what a file round-trips is exactly what
// was verified.
ControlVector quantize(const ControlVector& cv);

}  // namespace rodbench
