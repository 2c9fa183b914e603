#pragma once

#include <json.hpp>

#include <chrono>
#include <functional>
#include <string>

namespace coda_ica::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kNumericalError = 3 };

/// Wall-clock sections recorded under "timings_ms".
class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()), last_(start_) {}
  /// Milliseconds since the previous lap (or construction).
  double lap();
  double total() const;

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_;
  Clock::time_point last_;
};

/// Runs `body` and maps library exceptions onto exit codes. The metadata is
/// written to <out_dir>/run_meta.json whatever the outcome.
int run_with_meta(const std::string& command, const std::string& out_dir, nlohmann::ordered_json meta,
                  const std::function<void(nlohmann::ordered_json&)>& body);

nlohmann::ordered_json versions();

}  // namespace coda_ica::cli
