#include "mpf/external_adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mpf/dataset.hpp"

extern char** environ;

namespace mpf {

using nlohmann::json;

ExternalAdapter::ExternalAdapter(Options opts) : opts_(std::move(opts)) {
  if (opts_.command.empty()) throw ValidationError("external predictor needs a command");
  if (opts_.timeout.count() <= 0) throw ValidationError("external predictor timeout must be positive");
  // A dead child must surface as EPIPE, not kill the host.
  ::signal(SIGPIPE, SIG_IGN);
}

ExternalAdapter::~ExternalAdapter() { stop(); }

void ExternalAdapter::start() const {
  int in_pipe[2];
  int out_pipe[2];
  // Close-on-exec so no other child inherits these ends and holds them open.
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw AdapterError(std::string("pipe: ") + std::strerror(errno), "");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw AdapterError(std::string("pipe: ") + std::strerror(errno), "");
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  // Own process group, so stopping also reaches whatever the shell started.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  std::string sh = "/bin/sh";
  std::string flag = "-c";
  // exec drops the intermediate shell for simple commands.
  std::string cmd = "exec " + opts_.command;
  char* argv[] = {sh.data(), flag.data(), cmd.data(), nullptr};
  pid_t pid = -1;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw AdapterError("cannot spawn '" + opts_.command + "': " + std::strerror(rc), "");
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  pending_.clear();
}

void ExternalAdapter::stop() const {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(-pid_, SIGKILL);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  pid_ = -1;
  pending_.clear();
}

std::string ExternalAdapter::read_line() const {
  const auto deadline = std::chrono::steady_clock::now() + opts_.timeout;
  char buf[4096];
  for (;;) {
    if (auto nl = pending_.find('\n'); nl != std::string::npos) {
      std::string line = pending_.substr(0, nl);
      pending_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw AdapterError("external predictor timed out", pending_);
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw AdapterError(std::string("poll: ") + std::strerror(errno), pending_);
    }
    if (ready == 0) throw AdapterError("external predictor timed out", pending_);
    const ssize_t got = ::read(from_child_, buf, sizeof buf);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw AdapterError(std::string("read: ") + std::strerror(errno), pending_);
    }
    if (got == 0) throw AdapterError("external predictor closed its output mid-response", pending_);
    pending_.append(buf, static_cast<std::size_t>(got));
  }
}

TrajectorySamples ExternalAdapter::sample(const PredictionScene& scene, int n, int horizon, std::uint64_t seed) const {
  std::lock_guard lock(mu_);
  try {
    if (pid_ < 0) start();
    const std::string request =
        json{{"scene", scene_to_json(scene)}, {"N", n}, {"T", horizon}, {"seed", seed}}.dump() + "\n";
    std::size_t written = 0;
    while (written < request.size()) {
      const ssize_t w = ::write(to_child_, request.data() + written, request.size() - written);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw AdapterError(std::string("write: ") + std::strerror(errno), "");
      }
      written += static_cast<std::size_t>(w);
    }

    const std::string line = read_line();
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw AdapterError(std::string("malformed response: ") + e.what(), line);
    }
    if (!doc.is_object() || !doc.contains("samples") || !doc["samples"].is_array())
      throw AdapterError("response lacks a 'samples' array", line);

    TrajectorySamples out;
    out.source_label = name();
    for (const auto& js : doc["samples"]) {
      if (!js.is_array()) throw AdapterError("sample is not an array", line);
      Trajectory traj;
      traj.dt = scene.dt;
      int k = 1;
      for (const auto& st : js) {
        if (!st.is_object()) throw AdapterError("state is not an object", line);
        AgentState s;
        try {
          s.x = st.at("x").get<double>();
          s.y = st.at("y").get<double>();
          s.heading = wrap_angle(st.at("heading").get<double>());
          s.speed = st.at("v").get<double>();
        } catch (const json::exception& e) {
          throw AdapterError(std::string("bad state: ") + e.what(), line);
        }
        s.t = scene.t + k++;
        traj.states.push_back(s);
      }
      out.samples.push_back(std::move(traj));
    }
    if (out.samples.size() != static_cast<std::size_t>(n))
      throw AdapterError("expected " + std::to_string(n) + " samples, got " + std::to_string(out.samples.size()), line);
    try {
      validate(out, scene.t, horizon, scene.dt);
    } catch (const ValidationError& e) {
      throw AdapterError(std::string("invalid samples: ") + e.what(), line);
    }
    return out;
  } catch (const AdapterError&) {
    stop();
    throw;
  }
}

}  // namespace mpf
