#pragma once

// Checks a trajectory log against the convergence properties of the
// partition and agent dynamics.

#include <string>
#include <vector>

#include "coverage/simulate.hpp"

namespace coverage {

enum class CheckStatus { kPass, kFail, kInconclusive };

struct CheckResult {
  std::string name;
  std::string bound;
  double worst_margin = 0.0;  ///< bound minus worst observed value; negative on failure
  CheckStatus status = CheckStatus::kPass;
  bool gating = true;  ///< diagnostics are reported but do not decide the verdict
  std::string note;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
  /// One line per check: name, bound, worst margin, verdict.
  std::string to_text() const;
};

std::string to_string(CheckStatus status);

/// Horizon below which unmet convergence trends are reported as inconclusive.
inline constexpr double kTrendHorizon = 100.0;
/// Threshold for ‖φ̇‖, max ‖ṗ‖ and max ‖ċ‖ at the end of the log.
inline constexpr double kTrendThreshold = 1e-4;

VerificationReport verify_invariants(const TrajectoryLog& log, const ScenarioConfig& config);
VerificationReport verify_invariants(const TrajectoryLog& log, const ScenarioConfig& config,
                                     const Domain& domain);

/// Sample-based estimate of sup ‖e_η‖ over bar angles and positions in Ω.
double eta_error_bound(const Domain& domain, std::size_t agent_count, int angle_samples = 64,
                       int point_samples = 64);

}  // namespace coverage
