#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>

namespace cyclerw {

using Clock = std::chrono::steady_clock;

// Wall-clock limit plus an optional cooperative cancellation flag.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(Clock::time_point at, const std::atomic<bool>* cancel = nullptr)
      : at_(at), cancel_(cancel) {}
  static Deadline after(std::chrono::milliseconds d, const std::atomic<bool>* cancel = nullptr) {
    return Deadline(Clock::now() + d, cancel);
  }
  static Deadline never() { return Deadline(); }

  bool expired() const {
    if (cancel_ && cancel_->load(std::memory_order_relaxed)) return true;
    return at_ && Clock::now() >= *at_;
  }
  std::chrono::milliseconds remaining() const;
  // The earlier of this deadline and now + d, keeping the cancellation flag.
  Deadline sooner(std::chrono::milliseconds d) const;
  const std::atomic<bool>* cancel_flag() const { return cancel_; }

 private:
  std::optional<Clock::time_point> at_;
  const std::atomic<bool>* cancel_ = nullptr;
};

struct ProcessResult {
  bool started = false;
  bool timed_out = false;
  int exit_code = -1;  // -1 when killed by a signal
  std::string out;
  std::string err;
};

// Runs `command` through /bin/sh in its own process group. The group is
// killed when the deadline expires.
ProcessResult run_shell(const std::string& command, const Deadline& deadline);

// Quotes a string for /bin/sh.
std::string shell_quote(const std::string& s);

// Replaces every `{key}` in the template.
std::string fill_template(std::string tmpl, const std::string& key, const std::string& value);

// A file under the system temp directory removed on destruction.
class TempFile {
 public:
  TempFile(const std::string& suffix, const std::string& contents);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace cyclerw
