#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "rodbench/validate.hpp"

using namespace rodbench;

namespace {

const Engine& engine() {
  static const Engine e = default_engine();
  return e;
}

const RunConfig& run_cfg() {
  static const RunConfig cfg;
  return cfg;
}

// One small shared corpus; generating it once keeps the suite fast.
const Corpus& corpus() {
  static const Corpus c =
      build_corpus(12, 2718, MixtureWeights{}, engine(), run_cfg(), 4);
  return c;
}

const std::string& corpus_file() {
  static const std::string path = [] {
    const std::string p =
        "/tmp/rodbench_test_val_corpus_" + std::to_string(::getpid()) + ".txt";
    write_corpus(corpus(), p);
    return p;
  }();
  return path;
}

PolicyFactory external_factory(std::vector<std::string> argv,
                               double timeout_s = 30.0) {
  return [argv = std::move(argv), timeout_s] {
    TransportConfig tc;
    tc.argv = argv;
    tc.timeout_s = timeout_s;
    return std::make_unique<ExternalPolicy>(tc);
  };
}

PolicyFactory shell_factory(const std::string& script, double timeout_s = 30.0) {
  return external_factory({"/bin/sh", "-c", script}, timeout_s);
}

}  // namespace

TEST_CASE("oracle batch passes and satisfies the postconditions") {
  const auto factory =
      make_policy_factory("oracle", engine(), run_cfg(), &corpus());
  const ValidationReport rep =
      batch_validate(corpus(), factory, engine(), run_cfg());
  CHECK(rep.policy_name == "oracle");
  REQUIRE(rep.results.size() == corpus().scenarios.size());
  for (std::size_t i = 0; i < rep.results.size(); ++i) {
    CHECK(rep.results[i].scenario_id == static_cast<long>(i));
    CHECK(rep.results[i].failure == FailureKind::none);
    CHECK(rep.results[i].error_pct < 1.0);
  }
  CHECK_NOTHROW(enforce_report_postconditions(rep));
}

TEST_CASE("reports are byte-identical across parallelism") {
  const auto factory =
      make_policy_factory("oracle", engine(), run_cfg(), &corpus());
  BatchOptions serial, wide;
  serial.parallelism = 1;
  serial.source_label = "x";
  wide.parallelism = 4;
  wide.source_label = "x";
  const ValidationReport a =
      batch_validate(corpus(), factory, engine(), run_cfg(), serial);
  const ValidationReport b =
      batch_validate(corpus(), factory, engine(), run_cfg(), wide);
  CHECK(write_report_text(a) == write_report_text(b));
}

TEST_CASE("report file round-trip preserves bytes") {
  const auto factory =
      make_policy_factory("null", engine(), run_cfg(), nullptr);
  const ValidationReport rep =
      batch_validate(corpus(), factory, engine(), run_cfg());
  const std::string path =
      "/tmp/rodbench_test_report_" + std::to_string(::getpid()) + ".txt";
  write_report(rep, path);
  const ValidationReport back = read_report(path);
  CHECK(write_report_text(back) == write_report_text(rep));
  std::remove(path.c_str());
}

TEST_CASE("external loopback replay matches the oracle") {
  const auto factory = external_factory(
      {RODBENCH_LOOPBACK_BIN, "--corpus", corpus_file()});
  const ValidationReport rep =
      batch_validate(corpus(), factory, engine(), run_cfg());
  for (const auto& r : rep.results) {
    CHECK(r.failure == FailureKind::none);
    CHECK(r.error_pct < 1.0);
  }
}

TEST_CASE("wire counters balance across fault injection") {
  TransportConfig tc;
  tc.argv = {RODBENCH_FAULT_BIN, "--corpus", corpus_file(),
             "--short-every", "3", "--garbage-every", "4",
             "--timeout-every", "5"};
  tc.timeout_s = 0.25;
  ExternalPolicy policy(tc);

  int expect_short = 0, expect_garbage = 0, expect_timeout = 0, expect_ok = 0;
  for (long id = 0; id < 12; ++id) {
    ProposalRequest req;
    req.id = id;
    req.p_init = 1.0;
    req.p_target_delta = corpus().scenarios[id].p_target_delta;
    const Proposal p = policy.propose(req);

    // Mirror the injector's precedence: short > garbage > timeout.
    FailureKind expected;
    if (id % 3 == 0) {
      expected = FailureKind::none;  // short payload still parses downstream
      ++expect_short;
    } else if (id % 4 == 0) {
      expected = FailureKind::none;  // garbage too: fails only at parse time
      ++expect_garbage;
    } else if (id % 5 == 0) {
      expected = FailureKind::timeout;
      ++expect_timeout;
    } else {
      expected = FailureKind::none;
      ++expect_ok;
    }
    CHECK(p.failure == expected);
    if (expected == FailureKind::none) {
      const ParseResult pr = parse_schema(p.payload);
      if (id % 3 == 0) {
        CHECK(!pr.ok);
        CHECK(pr.error == ParseErrorKind::token_count);
      } else if (id % 4 == 0) {
        CHECK(!pr.ok);
        CHECK(pr.error == ParseErrorKind::non_numeric);
      } else {
        CHECK(pr.ok);
      }
    }
  }
  CHECK(policy.requests_sent() == 12);
  CHECK(policy.timeouts_seen() == expect_timeout);
  CHECK(policy.transport_errors_seen() == 0);
  CHECK(policy.responses_seen() + policy.timeouts_seen() +
            policy.transport_errors_seen() ==
        policy.requests_sent());
}

TEST_CASE("batch classifies injected faults and attributes family by label") {
  BatchOptions opts;
  opts.parallelism = 2;
  const auto factory = external_factory(
      {RODBENCH_FAULT_BIN, "--corpus", corpus_file(), "--short-every", "4"});
  const ValidationReport rep =
      batch_validate(corpus(), factory, engine(), run_cfg(), opts);
  for (const auto& r : rep.results) {
    if (r.scenario_id % 4 == 0) {
      CHECK(r.failure == FailureKind::parse_token_count);
      CHECK(!r.parse_ok);
      CHECK(r.family_from_label);
      // Label attribution: the family comes from the corpus scenario.
      CHECK(r.family_executed ==
            corpus().scenarios[static_cast<std::size_t>(r.scenario_id)].family);
    } else {
      CHECK(r.failure == FailureKind::none);
    }
  }
  CHECK_NOTHROW(enforce_report_postconditions(rep));
}

TEST_CASE("dead child: transport overload aborts the batch") {
  const auto factory = external_factory({"/bin/true"});
  CHECK_THROWS_AS(
      batch_validate(corpus(), factory, engine(), run_cfg()),
      TransportOverload);

  // Raising the abort threshold lets the batch finish with transport rows.
  BatchOptions opts;
  opts.transport_abort_fraction = 1.1;
  const ValidationReport rep =
      batch_validate(corpus(), factory, engine(), run_cfg(), opts);
  for (const auto& r : rep.results) {
    CHECK(r.failure == FailureKind::transport);
    CHECK(!r.parse_ok);
  }
}

TEST_CASE("stale frames are skipped; unaddressed frames are malformed") {
  SUBCASE("stale id then the real answer") {
    const auto factory = shell_factory(
        "while read req; do set -- $req; "
        "echo \"RESULT 99999 1 0 0 0 0 0 0 0\"; "
        "echo \"RESULT $2 $3 $4 180 0 2 100 0 2\"; done");
    const ValidationReport rep =
        batch_validate(corpus(), factory, engine(), run_cfg());
    // The stale frame is ignored, the real frame echoes a parked vector.
    for (const auto& r : rep.results) {
      CHECK((r.failure == FailureKind::none ||
             r.failure == FailureKind::invalid_vector));
      CHECK(r.parse_ok);
    }
  }

  SUBCASE("unaddressed frame") {
    BatchOptions opts;
    opts.transport_abort_fraction = 1.1;  // malformed frames are transport-class
    const auto factory =
        shell_factory("while read req; do echo HELLO; done");
    const ValidationReport rep =
        batch_validate(corpus(), factory, engine(), run_cfg(), opts);
    for (const auto& r : rep.results)
      CHECK(r.failure == FailureKind::malformed_frame);
  }

  SUBCASE("error responses carry through") {
    const auto factory = shell_factory(
        "while read req; do set -- $req; "
        "echo \"ERROR $2 no vector available\"; done");
    const ValidationReport rep =
        batch_validate(corpus(), factory, engine(), run_cfg());
    for (const auto& r : rep.results) {
      CHECK(r.failure == FailureKind::error_response);
      CHECK(!r.parse_ok);
      CHECK(!r.proposal_valid);
    }
  }
}

TEST_CASE("in-process policy exceptions become error responses") {
  // The oracle throws on unknown ids; shrink the corpus it knows about.
  Corpus known = corpus();
  known.scenarios.resize(6);
  const auto factory =
      make_policy_factory("oracle", engine(), run_cfg(), &known);
  const ValidationReport rep =
      batch_validate(corpus(), factory, engine(), run_cfg());
  for (const auto& r : rep.results) {
    if (r.scenario_id < 6)
      CHECK(r.failure == FailureKind::none);
    else
      CHECK(r.failure == FailureKind::error_response);
  }
}

TEST_CASE("postcondition tampering is detected") {
  const auto factory =
      make_policy_factory("null", engine(), run_cfg(), nullptr);
  const ValidationReport good =
      batch_validate(corpus(), factory, engine(), run_cfg());

  SUBCASE("band monotonicity") {
    ValidationReport bad = good;
    REQUIRE(bad.results[0].band_success.size() >= 2);
    bad.results[0].band_success[0] = true;
    bad.results[0].band_success[1] = false;
    CHECK_THROWS_AS(enforce_report_postconditions(bad), std::logic_error);
  }
  SUBCASE("severe flag") {
    ValidationReport bad = good;
    bad.results[0].severe_failure = !bad.results[0].severe_failure;
    CHECK_THROWS_AS(enforce_report_postconditions(bad), std::logic_error);
  }
  SUBCASE("valid without parse") {
    ValidationReport bad = good;
    bad.results[0].parse_ok = false;
    bad.results[0].proposal_valid = true;
    CHECK_THROWS_AS(enforce_report_postconditions(bad), std::logic_error);
  }
  SUBCASE("band arity") {
    ValidationReport bad = good;
    bad.results[0].band_success.pop_back();
    CHECK_THROWS_AS(enforce_report_postconditions(bad), std::logic_error);
  }
}

TEST_CASE("regime labels for reports") {
  CHECK(std::string(report_regime_label(-0.05)) == "small");
  CHECK(std::string(report_regime_label(0.2)) == "medium");
  CHECK(std::string(report_regime_label(-0.45)) == "large");
  CHECK(std::string(report_regime_label(0.9)) == "out_of_range");
  CHECK(std::string(report_regime_label(0.0)) == "out_of_range");
}

TEST_CASE("ramp corpora replay through the batch path") {
  const RampCorpus rc = build_ramp_corpus(6, 11, engine(), run_cfg(), 2);
  const ValidationReport rep =
      batch_validate_ramp(rc, engine(), run_cfg());
  CHECK(rep.policy_name == "ramp-replay");
  REQUIRE(rep.results.size() == 6);
  for (const auto& r : rep.results) {
    CHECK(r.failure == FailureKind::none);
    CHECK(r.error_pct < 0.35);
    CHECK(r.degenerate_motion);
  }
  CHECK_NOTHROW(enforce_report_postconditions(rep));
}
