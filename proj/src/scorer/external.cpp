// SPDX-License-Identifier: Apache-2.0
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "selo/image_io.hpp"
#include "selo/scorer.hpp"

namespace selo {

struct ExternalScorer::CachedImage {
  std::filesystem::path path;
  RgbImage pixels;
};

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static const bool once = [] {
    struct sigaction sa {};
    sa.sa_handler = SIG_IGN;
    sigemptyset(&sa.sa_mask);
    sigaction(SIGPIPE, &sa, nullptr);
    return true;
  }();
  (void)once;
}

void close_fd(int& fd) noexcept {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

ExternalScorer::ExternalScorer(const std::vector<std::string>& command,
                               const std::map<std::string, std::string>& env, ExternalOptions options)
    : options_(options) {
  if (command.empty()) throw Error(Errc::SpawnFailure, "empty scorer command");
  if (options_.batch < 1) throw Error(Errc::InvalidArgument, "external batch size must be >= 1");
  ignore_sigpipe();

  int in_pipe[2];
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(Errc::SpawnFailure, errno_text("pipe"));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(Errc::SpawnFailure, errno_text("pipe"));
  }
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw Error(Errc::SpawnFailure, errno_text("pipe"));
  }

  std::vector<std::string> args = command;
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    throw Error(Errc::SpawnFailure, errno_text("fork"));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    for (const auto& [k, v] : env) ::setenv(k.c_str(), v.c_str(), 1);
    ::execvp(argv[0], argv.data());
    const int code = errno;
    [[maybe_unused]] auto n = ::write(err_pipe[1], &code, sizeof code);
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(err_pipe[0], &exec_errno, sizeof exec_errno);
  } while (got < 0 && errno == EINTR);
  ::close(err_pipe[0]);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    shutdown();
    throw Error(Errc::SpawnFailure, "cannot execute '" + command.front() + "': " + std::strerror(exec_errno));
  }

  try {
    const std::string line = read_line();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error(Errc::HandshakeMismatch, "handshake is not JSON: " + line);
    }
    if (!j.is_object() || !j.contains("proto") || !j["proto"].is_number_integer()) {
      throw Error(Errc::HandshakeMismatch, "handshake lacks an integer proto field: " + line);
    }
    handshake_.proto = j["proto"].get<int>();
    if (handshake_.proto != 1) {
      throw Error(Errc::HandshakeMismatch, "unsupported protocol version " + std::to_string(handshake_.proto));
    }
    handshake_.name = j.value("name", command.front());
    handshake_.concurrent = j.value("concurrent", false);
  } catch (...) {
    shutdown();
    throw;
  }
  spdlog::debug("external scorer '{}' ready (pid {})", handshake_.name, pid_);
}

ExternalScorer::~ExternalScorer() { shutdown(); }

void ExternalScorer::shutdown() noexcept {
  close_fd(to_child_);
  if (pid_ > 0) {
    int status = 0;
    const auto deadline = Clock::now() + std::chrono::seconds(2);
    pid_t r = 0;
    while ((r = ::waitpid(pid_, &status, WNOHANG)) == 0 && Clock::now() < deadline) {
      ::usleep(5000);
    }
    if (r == 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
  close_fd(from_child_);
}

void ExternalScorer::write_line(const std::string& line) {
  if (to_child_ < 0 || broken_) throw Error(Errc::ProtocolError, "external scorer session is closed");
  std::string data = line;
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw Error(Errc::ProtocolError, errno_text("write to external scorer"));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string ExternalScorer::read_line() {
  if (from_child_ < 0 || broken_) throw Error(Errc::ProtocolError, "external scorer session is closed");
  const auto deadline = Clock::now() + options_.timeout;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) {
      broken_ = true;
      throw Error(Errc::Timeout, "external scorer did not answer within " +
                                     std::to_string(options_.timeout.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw Error(Errc::ProtocolError, errno_text("poll"));
    }
    if (rc == 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      broken_ = true;
      throw Error(Errc::ProtocolError, errno_text("read from external scorer"));
    }
    if (n == 0) {
      broken_ = true;
      throw Error(Errc::ProtocolError, "external scorer closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string ExternalScorer::exchange_raw(const std::string& line) {
  write_line(line);
  return read_line();
}

std::vector<double> ExternalScorer::score(const std::string& query, std::span<const Tile> tiles,
                                          const RasterRef& image) {
  if (options_.payload == TilePayload::PngBase64 && (!image_ || image_->path != image.path)) {
    auto cached = std::make_shared<CachedImage>();
    cached->path = image.path;
    cached->pixels = read_rgb_image(image.path);
    image_ = std::move(cached);
  }
  const std::string image_name = image.path.string();
  std::vector<double> out(tiles.size(), 0.0);
  std::unordered_map<std::int64_t, std::size_t> pending;
  std::size_t sent = 0;
  std::size_t done = 0;
  std::string first_error;

  auto send = [&](std::size_t i) {
    const Tile& t = tiles[i];
    const std::int64_t id = next_id_++;
    nlohmann::json req = {{"id", id}, {"query", query}, {"image", image_name},
                          {"x0", t.x0}, {"y0", t.y0}, {"side", t.side}};
    if (options_.payload == TilePayload::PngBase64) {
      req["png_b64"] = base64_encode(encode_rgb_png(crop(image_->pixels, t.x0, t.y0, t.side, t.side)));
    }
    pending.emplace(id, i);
    write_line(req.dump());
  };

  const auto window = static_cast<std::size_t>(options_.batch);
  while (done < tiles.size()) {
    while (sent < tiles.size() && pending.size() < window) send(sent++);
    const std::string line = read_line();
    nlohmann::json resp;
    try {
      resp = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      broken_ = true;
      throw Error(Errc::ProtocolError, "malformed response: " + line);
    }
    if (!resp.is_object() || !resp.contains("id") || !resp["id"].is_number_integer()) {
      broken_ = true;
      throw Error(Errc::ProtocolError, "response without an integer id: " + line);
    }
    const auto it = pending.find(resp["id"].get<std::int64_t>());
    if (it == pending.end()) {
      broken_ = true;
      throw Error(Errc::ProtocolError, "response for unknown id: " + line);
    }
    if (resp.contains("error")) {
      // Keep draining so the session stays in sync for the next call.
      if (first_error.empty()) {
        first_error = "external scorer error for tile " + std::to_string(it->second) + ": " + resp["error"].dump();
      }
      pending.erase(it);
      ++done;
      continue;
    }
    if (!resp.contains("score") || !resp["score"].is_number()) {
      broken_ = true;
      throw Error(Errc::ProtocolError, "response without a numeric score: " + line);
    }
    const double s = resp["score"].get<double>();
    if (!std::isfinite(s)) throw Error(Errc::ScorerFailed, "external scorer returned a non-finite score");
    out[it->second] = s;
    pending.erase(it);
    ++done;
  }
  if (!first_error.empty()) throw Error(Errc::ScorerFailed, first_error);
  return out;
}

std::unique_ptr<ExternalScorer> spawn_external_scorer(const std::vector<std::string>& command,
                                                      const std::map<std::string, std::string>& env,
                                                      ExternalOptions options) {
  return std::make_unique<ExternalScorer>(command, env, options);
}

}  // namespace selo
