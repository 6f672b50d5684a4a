#pragma once

#include <chrono>
#include <mutex>
#include <string>

#include "mpf/errors.hpp"
#include "mpf/predictor.hpp"

namespace mpf {

/// Protocol, timeout, or I/O failure talking to an external predictor.
/// Carries whatever the child had sent so far.
class AdapterError : public RuntimeFailure {
 public:
  AdapterError(const std::string& what, std::string raw_payload)
      : RuntimeFailure(what), payload_(std::move(raw_payload)) {}

  const std::string& raw_payload() const { return payload_; }

 private:
  std::string payload_;
};

/// Drives a child process speaking line-delimited JSON on stdin/stdout:
///
///   request:  {"scene": {...}, "N": int, "T": int, "seed": int}
///   response: {"samples": [[{"x", "y", "heading", "v"} x T] x N]}
///
/// The child is started lazily via /bin/sh -c and restarted after any
/// failure. Calls are serialized.
class ExternalAdapter final : public Predictor {
 public:
  struct Options {
    std::string command;
    std::chrono::milliseconds timeout{5000};
    std::string label{"external"};
  };

  explicit ExternalAdapter(Options opts);
  ~ExternalAdapter() override;

  ExternalAdapter(const ExternalAdapter&) = delete;
  ExternalAdapter& operator=(const ExternalAdapter&) = delete;

  std::string name() const override { return opts_.label; }
  TrajectorySamples sample(const PredictionScene& scene, int n, int horizon, std::uint64_t seed) const override;

 private:
  void start() const;
  void stop() const;
  std::string read_line() const;

  Options opts_;
  mutable std::mutex mu_;
  mutable int pid_{-1};
  mutable int to_child_{-1};
  mutable int from_child_{-1};
  mutable std::string pending_;
};

}  // namespace mpf
