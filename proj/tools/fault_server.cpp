// Fault-injecting wire-protocol server: behaves like the loopback server but
// corrupts responses for ids matching the injection moduli. Used to verify
// that the harness classifies transport-level and parse-level failures
// exactly.
//
// Injection rules (checked in this order, first match wins):
//   --short-every N    id % N == 0  -> RESULT with a truncated payload
//   --garbage-every M  id % M == 0  -> RESULT with one non-numeric token
//   --timeout-every K  id % K == 0  -> no response at all for that request
//
// A modulus of 0 disables that rule. Everything else is answered like the
// loopback server (parked vector, or corpus replay with --corpus).

#include <cstdlib>
#include <iostream>
#include <string>
#include <unordered_map>

#include "CLI11.hpp"
#include "rodbench/scenario.hpp"

namespace {

using namespace rodbench;

bool parse_request_id(const std::vector<std::string>& toks, long& id) {
  if (toks.size() < 4 || toks[0] != "PROPOSE") return false;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(toks[1].c_str(), &end, 10);
  if (end != toks[1].c_str() + toks[1].size() || errno == ERANGE) return false;
  id = v;
  return true;
}

bool hits(long id, long modulus) { return modulus > 0 && id % modulus == 0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rodbench-fault: loopback server with fault injection"};
  std::string corpus_path;
  long short_every = 0, garbage_every = 0, timeout_every = 0;
  app.add_option("--corpus", corpus_path,
                 "Replay control vectors from this corpus by scenario id");
  app.add_option("--short-every", short_every,
                 "Truncate the payload when id % N == 0");
  app.add_option("--garbage-every", garbage_every,
                 "Corrupt one payload token when id % N == 0");
  app.add_option("--timeout-every", timeout_every,
                 "Stay silent when id % N == 0");
  CLI11_PARSE(app, argc, argv);

  std::unordered_map<long, std::string> replay;
  if (!corpus_path.empty()) {
    try {
      const Corpus corpus = read_corpus(corpus_path);
      for (const auto& sc : corpus.scenarios)
        replay.emplace(sc.id, serialize_schema(SchemaLine{
                                  sc.p_init, sc.p_target_delta, sc.control}));
    } catch (const std::exception& ex) {
      std::cerr << "rodbench-fault: " << ex.what() << "\n";
      return 2;
    }
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    long id = 0;
    if (!parse_request_id(toks, id)) continue;

    std::string payload;
    if (replay.empty()) {
      payload = toks[2] + " " + toks[3] + " 180 0 2 100 0 2";
    } else {
      const auto it = replay.find(id);
      if (it == replay.end()) {
        std::cout << "ERROR " << id << " unknown scenario id\n" << std::flush;
        continue;
      }
      payload = it->second;
    }

    if (hits(id, short_every)) {
      // Keep only the first five payload tokens: wrong arity downstream.
      const std::vector<std::string> ptoks = split_ws(payload);
      std::string cut;
      for (std::size_t i = 0; i < ptoks.size() && i < 5; ++i) {
        if (i) cut += " ";
        cut += ptoks[i];
      }
      std::cout << "RESULT " << id << " " << cut << "\n" << std::flush;
    } else if (hits(id, garbage_every)) {
      // Right arity, one token not a number.
      std::vector<std::string> ptoks = split_ws(payload);
      if (ptoks.size() > 2) ptoks[2] = "notanumber";
      std::string bad;
      for (std::size_t i = 0; i < ptoks.size(); ++i) {
        if (i) bad += " ";
        bad += ptoks[i];
      }
      std::cout << "RESULT " << id << " " << bad << "\n" << std::flush;
    } else if (hits(id, timeout_every)) {
      // Silence: the harness must time this request out.
    } else {
      std::cout << "RESULT " << id << " " << payload << "\n" << std::flush;
    }
  }
  return 0;
}
