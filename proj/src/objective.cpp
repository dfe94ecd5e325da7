#include "boah/objective.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <mutex>

#include "boah/error.hpp"
#include "boah/space_json.hpp"

extern char** environ;

namespace boah {

namespace {

std::atomic<std::uint64_t> g_evaluations{0};

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ObjectiveError, what); }

void write_all(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return;  // child closed stdin early; its exit status decides
    }
    off += static_cast<std::size_t>(n);
  }
}

double run_child(const std::vector<std::string>& argv, const std::string& input, std::chrono::milliseconds timeout) {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) fail("pipe failed");
  Fd in_r(in_pipe[0]), in_w(in_pipe[1]);
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) fail("pipe failed");
  Fd out_r(out_pipe[0]), out_w(out_pipe[1]);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_r.fd, STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_w.fd, STDOUT_FILENO);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) fail("cannot start '" + argv[0] + "': " + std::strerror(rc));
  in_r.reset();
  out_w.reset();

  write_all(in_w.fd, input);
  in_w.reset();

  std::string output;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    int wait_ms = -1;
    if (timeout.count() > 0) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(left.count());
    }
    pollfd p{out_r.fd, POLLIN, 0};
    const int pr = ::poll(&p, 1, wait_ms);
    if (pr < 0 && errno == EINTR) continue;
    if (pr == 0) continue;
    const ssize_t n = ::read(out_r.fd, buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  if (timed_out) ::kill(pid, SIGKILL);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) fail("'" + argv[0] + "' timed out");
  if (WIFSIGNALED(status)) fail("'" + argv[0] + "' killed by signal " + std::to_string(WTERMSIG(status)));
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    fail("'" + argv[0] + "' exited with status " + std::to_string(WEXITSTATUS(status)));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(output);
  } catch (const nlohmann::json::exception&) {
    fail("objective output is not JSON");
  }
  if (!reply.is_object() || !reply.contains("loss") || !reply["loss"].is_number())
    fail("objective output lacks a numeric \"loss\"");
  const double loss = reply["loss"].get<double>();
  if (!std::isfinite(loss)) fail("objective loss is not finite");
  return loss;
}

}  // namespace

std::uint64_t objective_evaluations() noexcept { return g_evaluations.load(); }
void note_objective_evaluation() noexcept { g_evaluations.fetch_add(1); }

Objective make_command_objective(std::shared_ptr<const DesignSpace> space, CommandOptions options) {
  if (options.argv.empty()) throw Error(ErrorKind::ConfigurationError, "objective command is empty");
  ignore_sigpipe_once();
  return [space = std::move(space), options = std::move(options)](const Configuration& config, double budget,
                                                                   std::uint64_t seed) {
    note_objective_evaluation();
    ordered_json msg;
    msg["config"] = config_values_to_json(*space, config);
    msg["budget"] = budget;
    msg["seed"] = seed;
    return run_child(options.argv, msg.dump() + "\n", options.timeout);
  };
}

}  // namespace boah
