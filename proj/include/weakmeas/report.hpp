#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "weakmeas/problem.hpp"
#include "weakmeas/tolerances.hpp"

namespace weakmeas {

/// Raised after a report was produced when the numerics did not converge.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, nlohmann::ordered_json report)
      : std::runtime_error(what), report_(std::move(report)) {}

  const nlohmann::ordered_json& report() const noexcept { return report_; }

 private:
  nlohmann::ordered_json report_;
};

struct CommandOptions {
  Tolerances tol = kDefaultTolerances;
};

struct ScanOptions {
  double theta_start = 0.0;
  double theta_end = 0.0;
  int points = 0;
};

nlohmann::ordered_json cmd_weak_values(const ProblemSpec& problem, const CommandOptions& options);
nlohmann::ordered_json cmd_fisher(const ProblemSpec& problem, const CommandOptions& options);
/// Throws NumericFailure (carrying the report) when the likelihood search does not converge.
nlohmann::ordered_json cmd_simulate(const ProblemSpec& problem, const CommandOptions& options);
/// Sweeps the rotated qubit basis over theta_k = start + k (end - start) / points.
nlohmann::ordered_json cmd_scan(const ProblemSpec& problem, const ScanOptions& scan,
                                const CommandOptions& options);

/// Structured document form: two-space indented, shortest round-trip decimal for doubles.
std::string render_document(const nlohmann::ordered_json& report);
/// CSV rendering of a scan report's rows.
std::string render_scan_csv(const nlohmann::ordered_json& report);

}  // namespace weakmeas
