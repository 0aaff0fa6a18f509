// External policy session: child process speaking the newline-delimited
// proposal protocol over stdin/stdout pipes, with a per-request deadline.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <mutex>

#include "rodbench/policy.hpp"

namespace rodbench {

namespace {

std::once_flag g_sigpipe_once;

bool write_all(int fd, const std::string& text) {
  const char* p = text.data();
  std::size_t left = text.size();
  while (left > 0) {
    const ssize_t k = ::write(fd, p, left);
    if (k < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    p += k;
    left -= static_cast<std::size_t>(k);
  }
  return true;
}

bool parse_id(const std::string& tok, long& out) {
  if (tok.empty()) return false;
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (errno != 0 || end != tok.c_str() + tok.size()) return false;
  out = v;
  return true;
}

std::string join_from(const std::vector<std::string>& toks, std::size_t start) {
  std::string out;
  for (std::size_t i = start; i < toks.size(); ++i) {
    if (i > start) out += ' ';
    out += toks[i];
  }
  return out;
}

}  // namespace

struct ExternalPolicy::Impl {
  TransportConfig cfg;
  pid_t pid = -1;
  int wfd = -1;  // our writes -> child's stdin
  int rfd = -1;  // child's stdout -> our reads
  std::string buf;
  bool broken = false;
  long sent = 0, responses = 0, timeouts = 0, transport_errors = 0;

  ~Impl() {
    if (wfd >= 0) ::close(wfd);
    if (rfd >= 0) ::close(rfd);
    if (pid > 0) {
      int status = 0;
      bool reaped = false;
      for (int i = 0; i < 100; ++i) {  // ~1 s grace after stdin EOF
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid || (r < 0 && errno == ECHILD)) {
          reaped = true;
          break;
        }
        ::usleep(10000);
      }
      if (!reaped) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
      }
    }
  }
};

ExternalPolicy::ExternalPolicy(TransportConfig cfg)
    : impl_(std::make_unique<Impl>()) {
  std::call_once(g_sigpipe_once, [] { std::signal(SIGPIPE, SIG_IGN); });
  if (cfg.argv.empty())
    throw std::invalid_argument("external policy: empty command line");
  if (!(cfg.timeout_s > 0.0))
    throw std::invalid_argument("external policy: timeout must be positive");
  impl_->cfg = std::move(cfg);

  int to_child[2] = {-1, -1};
  int from_child[2] = {-1, -1};
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
    throw std::runtime_error("external policy: pipe() failed");

  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("external policy: fork() failed");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    std::vector<char*> argv;
    argv.reserve(impl_->cfg.argv.size() + 1);
    for (const auto& a : impl_->cfg.argv)
      argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  impl_->pid = pid;
  impl_->wfd = to_child[1];
  impl_->rfd = from_child[0];
}

ExternalPolicy::~ExternalPolicy() = default;

long ExternalPolicy::requests_sent() const { return impl_->sent; }
long ExternalPolicy::responses_seen() const { return impl_->responses; }
long ExternalPolicy::timeouts_seen() const { return impl_->timeouts; }
long ExternalPolicy::transport_errors_seen() const {
  return impl_->transport_errors;
}

Proposal ExternalPolicy::propose(const ProposalRequest& req) {
  Impl& im = *impl_;
  ++im.sent;
  if (im.broken) {
    ++im.transport_errors;
    return Proposal{FailureKind::transport, "", "policy session closed"};
  }

  std::string line = "PROPOSE " + std::to_string(req.id) + " " +
                     format_num(req.p_init) + " " +
                     format_num(req.p_target_delta);
  const auto window = req.window_s ? req.window_s : im.cfg.window_s;
  if (window) line += " " + format_num(*window);
  line += "\n";
  if (!write_all(im.wfd, line)) {
    im.broken = true;
    ++im.transport_errors;
    return Proposal{FailureKind::transport, "", "request write failed: " +
                                                    std::string(strerror(errno))};
  }

  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(
                         std::chrono::duration<double>(im.cfg.timeout_s));

  for (;;) {
    const auto nl = im.buf.find('\n');
    if (nl != std::string::npos) {
      std::string frame = im.buf.substr(0, nl);
      im.buf.erase(0, nl + 1);
      if (!frame.empty() && frame.back() == '\r') frame.pop_back();
      const auto toks = split_ws(frame);
      if (toks.empty()) continue;
      long fid = -1;
      const bool addressed = (toks[0] == "RESULT" || toks[0] == "ERROR") &&
                             toks.size() >= 2 && parse_id(toks[1], fid);
      if (!addressed) {
        ++im.transport_errors;
        return Proposal{FailureKind::malformed_frame, "",
                        "unrecognized frame: " + frame.substr(0, 80)};
      }
      if (fid != req.id) continue;  // stale answer to an expired request
      ++im.responses;
      if (toks[0] == "RESULT")
        return Proposal{FailureKind::none, join_from(toks, 2), ""};
      return Proposal{FailureKind::error_response, "", join_from(toks, 2)};
    }

    const auto now = clock::now();
    if (now >= deadline) {
      ++im.timeouts;
      return Proposal{FailureKind::timeout, "",
                      "no response within " + format_num(im.cfg.timeout_s) +
                          " s"};
    }
    const auto remain_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count();
    struct pollfd pfd{};
    pfd.fd = im.rfd;
    pfd.events = POLLIN;
    const int pr =
        ::poll(&pfd, 1, static_cast<int>(std::max<long long>(1, remain_ms)));
    if (pr == 0) continue;  // re-check deadline at loop top
    if (pr < 0) {
      if (errno == EINTR) continue;
      im.broken = true;
      ++im.transport_errors;
      return Proposal{FailureKind::transport, "",
                      std::string("poll failed: ") + strerror(errno)};
    }
    char chunk[4096];
    const ssize_t k = ::read(im.rfd, chunk, sizeof chunk);
    if (k > 0) {
      im.buf.append(chunk, static_cast<std::size_t>(k));
    } else if (k == 0) {
      im.broken = true;
      ++im.transport_errors;
      return Proposal{FailureKind::transport, "",
                      "policy session closed (end of stream)"};
    } else if (errno != EINTR) {
      im.broken = true;
      ++im.transport_errors;
      return Proposal{FailureKind::transport, "",
                      std::string("read failed: ") + strerror(errno)};
    }
  }
}

}  // namespace rodbench
