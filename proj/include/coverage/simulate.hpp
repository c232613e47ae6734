#pragma once

// Scenario description, trajectory logging and the scenario runner.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coverage/dynamics.hpp"
#include "coverage/search.hpp"

namespace coverage {

struct ScenarioConfig {
  PolarCurve inner{1.0, {}, {}};
  PolarCurve outer{2.0, {}, {}};
  int validation_grid = kDefaultGridSize;
  DensityField density = DensityField::uniform();

  std::size_t agent_count = 2;
  std::optional<std::vector<double>> initial_phases;
  std::optional<std::vector<Vec2>> initial_positions;
  std::uint64_t seed = 1;

  double kappa_phi = 0.03;
  double kappa_p = 0.1;

  double dt = 0.01;
  double t_end = 100.0;
  int log_stride = 100;

  CostModel cost = CostModel::squared_distance();
  std::optional<SearchConfig> search;
  std::vector<double> snapshot_times;

  AnnularRegion region() const { return AnnularRegion(inner, outer, Vec2::Zero(), validation_grid); }
  Domain domain() const { return Domain(region(), density); }

  /// Total number of integrator steps, ⌈t_end / dt⌉.
  long step_count() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// The bundled reference case: 8 agents, r_in = 1 + 0.5 sin 2θ,
/// r_out = 3 + 0.5 cos 2θ, ρ = exp(sin²θ + cos θ) + 0.01 r, κ_p = 0.1, κ_φ = 0.03.
ScenarioConfig case_study_scenario(std::uint64_t seed = 1);

/// Circular annulus (1, 2) with unit density.
ScenarioConfig uniform_annulus_scenario(std::size_t agents, std::uint64_t seed = 1);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Checks numeric ranges and shapes; throws ConfigError naming the field.
void validate(const ScenarioConfig& config);

/// Initial phases and positions: explicit ones are validated, missing ones are
/// drawn from the seeded generator (phases sorted, positions by rejection
/// sampling inside Ω).
CoupledState initial_state(const ScenarioConfig& config, const Domain& domain);

struct TrajectoryRecord {
  double t = 0.0;
  std::vector<double> phi_wrapped;
  std::vector<double> phi_unwrapped;
  std::vector<Vec2> p;
  std::vector<double> m;
  double V = 0.0;
  double J = 0.0;
  std::vector<Vec2> centroids;
  double phi_rate_norm = 0.0;  ///< ‖φ̇‖
  double max_speed = 0.0;      ///< max_i ‖ṗ_i‖
  double H = 0.0;              ///< Σ m_i ‖p_i − c_{E_i}‖²
  bool excursion = false;      ///< some agent outside Ω
  int halvings = 0;            ///< guard halvings since the previous record
};

struct TrajectoryLog {
  std::size_t agent_count = 0;
  std::vector<TrajectoryRecord> records;
};

/// Record for state x at time t under `system`.
TrajectoryRecord make_record(const CoupledSystem& system, const CoupledState& x, double t);

/// Fills the derived fields (wrapped phases, centroids, rates, excursion) of
/// records that carry only t, φ, p, m, V, J and H.
void complete_records(TrajectoryLog& log, const CoupledSystem& system);

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, TrajectoryLog partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const TrajectoryLog& partial() const { return partial_; }

 private:
  TrajectoryLog partial_;
};

/// Integrates the coupled dynamics to t_end, logging every log_stride steps
/// and at t_end.
TrajectoryLog run_scenario(const ScenarioConfig& config);
TrajectoryLog run_scenario(const ScenarioConfig& config, const Domain& domain);

}  // namespace coverage
