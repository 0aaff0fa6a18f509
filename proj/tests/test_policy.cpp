#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "rodbench/policy.hpp"

using namespace rodbench;

namespace {

Scenario make_scn(long id, double delta, double b2_pos) {
  Scenario sc;
  sc.id = id;
  sc.p_init = 1.0;
  sc.p_target_delta = delta;
  sc.family = ActuationFamily::single_b2;
  sc.control = ControlVector{180.0, 0.0, 2.0, b2_pos, 0.0, 2.0};
  sc.regime = regime_of(delta);
  sc.seed = 0;
  return sc;
}

Corpus tiny_corpus() {
  Corpus c;
  c.master_seed = 1;
  c.fingerprint = "test";
  c.scenarios = {make_scn(0, -0.125, 70.0), make_scn(1, -0.375, 30.0),
                 make_scn(2, -0.25, 50.0)};
  return c;
}

ProposalRequest req_for(long id, double delta) {
  ProposalRequest r;
  r.id = id;
  r.p_init = 1.0;
  r.p_target_delta = delta;
  return r;
}

}  // namespace

TEST_CASE("proportional displacement arithmetic") {
  const Engine e = default_engine();

  SUBCASE("plain insertion within the stroke") {
    ProportionalConfig cfg;
    cfg.gain = 160.0;
    const ControlVector cv = proportional_vector(e, cfg, -0.10);
    CHECK(cv.b2_pos == doctest::Approx(84.0));   // 100 - 16
    CHECK(cv.b1_pos == doctest::Approx(180.0));  // untouched
    CHECK(cv.b2_time == 0.0);
    CHECK(cv.b2_speed == doctest::Approx(2.0));
  }

  SUBCASE("insertion overflow spills to bank 1") {
    ProportionalConfig cfg;
    cfg.gain = 400.0;
    const ControlVector cv = proportional_vector(e, cfg, -0.50);
    CHECK(cv.b2_pos == doctest::Approx(0.0));   // clamped at full insertion
    CHECK(cv.b1_pos == doctest::Approx(80.0));  // 180 - remaining 100
  }

  SUBCASE("withdrawal overflow is dropped at the top of the stroke") {
    ProportionalConfig cfg;
    cfg.gain = 400.0;
    const ControlVector cv = proportional_vector(e, cfg, 0.50);
    CHECK(cv.b2_pos == doctest::Approx(180.0));
    CHECK(cv.b1_pos == doctest::Approx(180.0));  // no spillover upward
  }
}

TEST_CASE("calibration fits a symmetric gain on the default engine") {
  const Engine e = default_engine();
  RunConfig cfg;
  const ProportionalConfig cal = calibrate_proportional(e, cfg);

  REQUIRE(cal.points.size() == 6);
  const double expect_deltas[] = {-0.30, -0.20, -0.10, 0.10, 0.20, 0.30};
  for (int i = 0; i < 6; ++i)
    CHECK(cal.points[i].delta == doctest::Approx(expect_deltas[i]));

  // Mid-stroke with a uniform worth curve: no point saturates, and each
  // point's implied gain sits within 15% of the least-squares fit.
  CHECK(std::isfinite(cal.gain));
  CHECK(cal.gain > 0.0);
  for (const auto& pt : cal.points) {
    CHECK(!pt.saturated);
    const double pointwise = pt.displacement / pt.delta;
    CHECK(std::abs(pointwise - cal.gain) <= 0.15 * cal.gain);
  }
  // The ideal settled-state gain is travel/worth * power_coeff = 240 steps
  // per unit power; the finite-horizon fit lands close to it.
  CHECK(cal.gain == doctest::Approx(240.0).epsilon(0.05));
  CHECK(cal.rod_speed == doctest::Approx(2.0));
}

TEST_CASE("calibration marks saturated points at the stroke boundary") {
  // Bank 2 nearly inserted: deep negative deltas cannot be landed.
  Engine e = default_engine();
  e = Engine::make(e.params, e.bank1,
                   RodBankConfig{e.bank2.worth, 20.0});
  RunConfig cfg;
  const ProportionalConfig cal = calibrate_proportional(e, cfg);
  REQUIRE(cal.points.size() == 6);
  bool any_saturated = false;
  for (const auto& pt : cal.points) {
    if (pt.saturated) {
      any_saturated = true;
      // Saturated displacement sits at a stroke boundary.
      const bool at_edge =
          pt.displacement == doctest::Approx(-20.0) ||
          pt.displacement == doctest::Approx(160.0);
      CHECK(at_edge);
    }
  }
  CHECK(any_saturated);
  CHECK(std::isfinite(cal.gain));
}

TEST_CASE("proportional policy emits a parseable payload") {
  const Engine e = default_engine();
  ProportionalConfig pc;
  pc.gain = 160.0;
  ProportionalPolicy policy(e, pc);
  const Proposal p = policy.propose(req_for(5, -0.10));
  CHECK(p.failure == FailureKind::none);
  const ParseResult r = parse_schema(p.payload);
  REQUIRE(r.ok);
  CHECK(r.line.p_init == 1.0);
  CHECK(r.line.p_target_delta == -0.10);
  CHECK(r.line.cv.b2_pos == doctest::Approx(84.0));
}

TEST_CASE("knn policy: k = 1 only, ties break to the lowest id") {
  const Corpus c = tiny_corpus();

  CHECK_THROWS_AS(KnnPolicy(c, 2), std::invalid_argument);
  CHECK_THROWS_AS(KnnPolicy(c, 0), std::invalid_argument);
  Corpus empty;
  CHECK_THROWS_AS(KnnPolicy(empty, 1), std::domain_error);

  KnnPolicy policy(c, 1);

  SUBCASE("exact match") {
    const Proposal p = policy.propose(req_for(100, -0.375));
    const ParseResult r = parse_schema(p.payload);
    REQUIRE(r.ok);
    CHECK(r.line.cv.b2_pos == doctest::Approx(30.0));  // id 1's vector
    // The payload echoes the request target, not the neighbor's.
    CHECK(r.line.p_target_delta == -0.375);
  }

  SUBCASE("nearest by |delta| distance") {
    const Proposal p = policy.propose(req_for(100, -0.27));
    const ParseResult r = parse_schema(p.payload);
    REQUIRE(r.ok);
    CHECK(r.line.cv.b2_pos == doctest::Approx(50.0));  // id 2 at -0.25
  }

  SUBCASE("exact tie picks the lower id") {
    // -0.25 sits exactly 0.125 from both -0.125 (id 0) and -0.375 (id 1)
    // in binary arithmetic; the scan keeps the first (lowest id).
    Corpus two;
    two.scenarios = {make_scn(0, -0.125, 70.0), make_scn(1, -0.375, 30.0)};
    KnnPolicy p2(two, 1);
    const Proposal p = p2.propose(req_for(100, -0.25));
    const ParseResult r = parse_schema(p.payload);
    REQUIRE(r.ok);
    CHECK(r.line.cv.b2_pos == doctest::Approx(70.0));  // id 0 wins the tie
  }
}

TEST_CASE("oracle policy replays by id and rejects unknown ids") {
  const Corpus c = tiny_corpus();
  OraclePolicy policy(c);

  const Proposal p = policy.propose(req_for(1, -0.375));
  const ParseResult r = parse_schema(p.payload);
  REQUIRE(r.ok);
  CHECK(r.line.cv.b2_pos == doctest::Approx(30.0));

  CHECK_THROWS_AS(policy.propose(req_for(999, -0.2)), std::domain_error);
}

TEST_CASE("null policy proposes no motion") {
  const Engine e = default_engine();
  NullPolicy policy(e);
  const Proposal p = policy.propose(req_for(0, -0.3));
  const ParseResult r = parse_schema(p.payload);
  REQUIRE(r.ok);
  CHECK(r.line.cv.b1_pos == doctest::Approx(180.0));
  CHECK(r.line.cv.b2_pos == doctest::Approx(100.0));
  const auto cls = classify(r.line.cv, 180.0, 100.0);
  CHECK(cls.degenerate);
}

TEST_CASE("calibration file round-trip and parse errors") {
  ProportionalConfig cfg;
  cfg.gain = 242.821;
  cfg.rod_speed = 2.0;
  cfg.fit_residual = 0.201329;
  cfg.points = {{-0.3, -73.2236, false}, {0.3, 72.6141, true}};

  const std::string path = "/tmp/rodbench_test_cal_" +
                           std::to_string(::getpid()) + ".txt";
  write_calibration(cfg, path);
  const ProportionalConfig back = read_calibration(path);
  CHECK(back.gain == cfg.gain);
  CHECK(back.rod_speed == cfg.rod_speed);
  CHECK(back.fit_residual == cfg.fit_residual);
  REQUIRE(back.points.size() == 2);
  CHECK(back.points[0].delta == cfg.points[0].delta);
  CHECK(back.points[1].saturated == true);
  CHECK(write_calibration_text(back) == write_calibration_text(cfg));
  std::remove(path.c_str());

  SUBCASE("missing header is rejected") {
    {
      std::ofstream out(path);
      out << "gain=100\nrod_speed=2\n";
    }
    CHECK_THROWS_AS(read_calibration(path), std::runtime_error);
    std::remove(path.c_str());
  }
  SUBCASE("bad number is rejected with its line") {
    {
      std::ofstream out(path);
      out << "# rodbench proportional calibration v1\n"
          << "gain=abc\nrod_speed=2\n";
    }
    try {
      read_calibration(path);
      CHECK(false);
    } catch (const std::runtime_error& ex) {
      CHECK(std::string(ex.what()).find(":2:") != std::string::npos);
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("policy factory dispatch") {
  const Engine e = default_engine();
  RunConfig cfg;
  const Corpus c = tiny_corpus();

  PolicyOptions opt;
  opt.proportional_gain = 160.0;

  for (const char* name : {"oracle", "knn", "null", "proportional"}) {
    const auto factory = make_policy_factory(name, e, cfg, &c, opt);
    const auto policy = factory();
    CHECK(policy->name() == name);
  }

  // Pinned gain is used as-is (no calibration run).
  const auto factory = make_policy_factory("proportional", e, cfg, nullptr, opt);
  const auto policy = factory();
  const Proposal p = policy->propose(req_for(0, -0.10));
  const ParseResult r = parse_schema(p.payload);
  REQUIRE(r.ok);
  CHECK(r.line.cv.b2_pos == doctest::Approx(84.0));

  CHECK_THROWS_AS(make_policy_factory("bogus", e, cfg, &c, opt),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_policy_factory("oracle", e, cfg, nullptr, opt),
                  std::invalid_argument);
  // External requires a command line.
  CHECK_THROWS_AS(make_policy_factory("external", e, cfg, nullptr, opt),
                  std::invalid_argument);
}
