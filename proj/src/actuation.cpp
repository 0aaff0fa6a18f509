#include "rodbench/actuation.hpp"

#include <cmath>

#include "rodbench/util.hpp"

namespace rodbench {

const char* family_name(ActuationFamily f) {
  switch (f) {
    case ActuationFamily::single_b1: return "single_b1";
    case ActuationFamily::single_b2: return "single_b2";
    case ActuationFamily::simultaneous: return "simultaneous";
    case ActuationFamily::sequential: return "sequential";
  }
  return "?";
}

std::optional<ActuationFamily> family_from_name(const std::string& name) {
  if (name == "single_b1") return ActuationFamily::single_b1;
  if (name == "single_b2") return ActuationFamily::single_b2;
  if (name == "simultaneous") return ActuationFamily::simultaneous;
  if (name == "sequential") return ActuationFamily::sequential;
  return std::nullopt;
}

ClassifiedFamily classify(const ControlVector& cv, double init_b1, double init_b2) {
  const bool m1 = std::abs(cv.b1_pos - init_b1) >= kMoveThresholdSteps;
  const bool m2 = std::abs(cv.b2_pos - init_b2) >= kMoveThresholdSteps;
  if (m1 && m2) {
    if (cv.b1_time == cv.b2_time) return {ActuationFamily::simultaneous, false};
    return {ActuationFamily::sequential, false};
  }
  if (m1) return {ActuationFamily::single_b1, false};
  if (m2) return {ActuationFamily::single_b2, false};
  return {ActuationFamily::single_b2, true};  // no motion at all
}

namespace {

void check_bank(std::vector<Violation>& out, const char* prefix, double pos,
                double time, double speed, double travel, double init) {
  if (!std::isfinite(pos) || pos < 0.0 || pos > travel)
    out.push_back({std::string(prefix) + "_pos",
                   "position outside [0, " + format_num(travel) + "]"});
  if (!std::isfinite(time) || time < 0.0)
    out.push_back({std::string(prefix) + "_time", "start time must be >= 0"});
  const bool moves = std::isfinite(pos) && pos != init;
  if (moves && (!std::isfinite(speed) || speed <= 0.0))
    out.push_back({std::string(prefix) + "_speed",
                   "speed must be positive on a moving bank"});
  if (!std::isfinite(speed))
    out.push_back({std::string(prefix) + "_speed", "speed must be finite"});
}

}  // namespace

std::vector<Violation> validate(const ControlVector& cv, const Engine& engine) {
  std::vector<Violation> out;
  check_bank(out, "b1", cv.b1_pos, cv.b1_time, cv.b1_speed,
             engine.bank1.worth.travel, engine.bank1.init_position);
  check_bank(out, "b2", cv.b2_pos, cv.b2_time, cv.b2_speed,
             engine.bank2.worth.travel, engine.bank2.init_position);
  return out;
}

double BankMotion::position_at(double t) const {
  if (t <= start || target == init) return init;
  if (t >= arrival) return target;
  const double dir = target > init ? 1.0 : -1.0;
  return init + dir * speed * (t - start);
}

MotionPlan plan_motion(const ControlVector& cv, double init_b1, double init_b2) {
  auto mk = [](double init, double pos, double time, double speed) {
    BankMotion m;
    m.init = init;
    m.target = pos;
    m.start = time;
    m.speed = speed;
    if (pos == init) {
      m.arrival = time;  // constant plan
      m.speed = speed > 0.0 ? speed : 1.0;
    } else {
      if (!(speed > 0.0))
        throw std::domain_error("plan_motion: moving bank needs positive speed");
      m.arrival = time + std::abs(pos - init) / speed;
    }
    return m;
  };
  MotionPlan plan;
  plan.bank1 = mk(init_b1, cv.b1_pos, cv.b1_time, cv.b1_speed);
  plan.bank2 = mk(init_b2, cv.b2_pos, cv.b2_time, cv.b2_speed);
  return plan;
}

ParseResult parse_schema(const std::string& text) {
  ParseResult r;
  const auto toks = split_ws(text);
  if (toks.size() != 8) {
    r.error = ParseErrorKind::token_count;
    r.message = "expected 8 fields, got " + std::to_string(toks.size());
    return r;
  }
  double v[8];
  for (std::size_t i = 0; i < 8; ++i) {
    const auto n = parse_number(toks[i]);
    if (!n.parsed) {
      r.error = ParseErrorKind::non_numeric;
      r.message = "field " + std::to_string(i + 1) + " is not a number: '" +
                  toks[i] + "'";
      return r;
    }
    if (!n.finite) {
      r.error = ParseErrorKind::non_finite;
      r.message = "field " + std::to_string(i + 1) + " is not finite";
      return r;
    }
    v[i] = n.value;
  }
  r.ok = true;
  r.line.p_init = v[0];
  r.line.p_target_delta = v[1];
  r.line.cv = ControlVector{v[2], v[3], v[4], v[5], v[6], v[7]};
  return r;
}

std::string serialize_schema(const SchemaLine& line) {
  std::string out = format_num(line.p_init);
  out += ' ';
  out += format_num(line.p_target_delta);
  const double f[6] = {line.cv.b1_pos,  line.cv.b1_time, line.cv.b1_speed,
                       line.cv.b2_pos,  line.cv.b2_time, line.cv.b2_speed};
  for (double x : f) {
    out += ' ';
    out += format_num(x);
  }
  return out;
}

ControlVector quantize(const ControlVector& cv) {
  auto q = [](double v) {
    return parse_number(format_num(v)).value;
  };
  return ControlVector{q(cv.b1_pos),  q(cv.b1_time), q(cv.b1_speed),
                       q(cv.b2_pos),  q(cv.b2_time), q(cv.b2_speed)};
}

}  // namespace rodbench
