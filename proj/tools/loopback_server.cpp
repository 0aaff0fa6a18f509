// Loopback wire-protocol server for exercising the external-policy path.
//
// Speaks the line protocol on stdin/stdout:
//   request:  PROPOSE <id> <p_init> <p_target_delta> [<window_s>]
//   response: RESULT <id> <8-number control payload>
//             ERROR <id> <reason>
//
// Default mode echoes a parked control vector (banks at their default init
// positions, zero start times, speed 2). With --corpus it replays the stored
// control vector for each requested scenario id and answers ERROR for ids
// outside the corpus. Exits cleanly on stdin EOF.

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

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rodbench-loopback: echo/replay server for the wire protocol"};
  std::string corpus_path;
  app.add_option("--corpus", corpus_path,
                 "Replay control vectors from this corpus by scenario id");
  CLI11_PARSE(app, argc, argv);

  std::unordered_map<long, std::string> replay;
  if (!corpus_path.empty()) {
    try {
      const Corpus corpus = read_corpus(corpus_path);
      for (const auto& sc : corpus.scenarios)
        replay.emplace(sc.id, serialize_schema(SchemaLine{
                                  sc.p_init, sc.p_target_delta, sc.control}));
    } catch (const std::exception& ex) {
      std::cerr << "rodbench-loopback: " << ex.what() << "\n";
      return 2;
    }
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> toks = split_ws(line);
    if (toks.empty()) continue;
    long id = 0;
    if (!parse_request_id(toks, id)) continue;  // not addressable; drop
    if (replay.empty()) {
      // Parked vector: both banks hold their default init positions.
      std::cout << "RESULT " << id << " " << toks[2] << " " << toks[3]
                << " 180 0 2 100 0 2\n"
                << std::flush;
      continue;
    }
    const auto it = replay.find(id);
    if (it == replay.end()) {
      std::cout << "ERROR " << id << " unknown scenario id\n" << std::flush;
    } else {
      std::cout << "RESULT " << id << " " << it->second << "\n" << std::flush;
    }
  }
  return 0;
}
