#include "coverage/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace coverage {

long ScenarioConfig::step_count() const {
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

ScenarioConfig case_study_scenario(std::uint64_t seed) {
  ScenarioConfig c;
  c.inner = PolarCurve{1.0, {}, {0.0, 0.5}};
  c.outer = PolarCurve{3.0, {0.0, 0.5}, {}};
  c.density = DensityField::case_study(1.0, 0.01);
  c.agent_count = 8;
  c.kappa_phi = 0.03;
  c.kappa_p = 0.1;
  c.dt = 0.01;
  c.t_end = 100.0;
  c.log_stride = 100;
  c.seed = seed;
  c.snapshot_times = {0.0, 4.0, 8.0, 12.0};
  return c;
}

ScenarioConfig uniform_annulus_scenario(std::size_t agents, std::uint64_t seed) {
  ScenarioConfig c;
  c.inner = PolarCurve{1.0, {}, {}};
  c.outer = PolarCurve{2.0, {}, {}};
  c.density = DensityField::uniform(1.0);
  c.agent_count = agents;
  c.seed = seed;
  return c;
}

void validate(const ScenarioConfig& c) {
  if (c.agent_count < 1) throw ConfigError("agents.count", "must be at least 1");
  if (!(c.kappa_phi >= 0.0)) throw ConfigError("gains.kappa_phi", "must be non-negative");
  if (!(c.kappa_p > 0.0)) throw ConfigError("gains.kappa_p", "must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("integrator.dt", "must be positive");
  if (!(c.t_end >= c.dt)) throw ConfigError("integrator.t_end", "must be at least dt");
  if (c.log_stride < 1) throw ConfigError("integrator.log_stride", "must be at least 1");
  if (c.initial_phases && c.initial_phases->size() != c.agent_count) {
    throw ConfigError("agents.initial_phases", "expected one phase per agent");
  }
  if (c.initial_positions && c.initial_positions->size() != c.agent_count) {
    throw ConfigError("agents.initial_positions", "expected one position per agent");
  }
  if (c.search) {
    if (!(c.search->t_epsilon > 0.0)) throw ConfigError("search.T_epsilon", "must be positive");
    if (!c.search->k_star && !c.search->epsilon_p) {
      throw ConfigError("search", "needs epsilon_p or K_star");
    }
    if (c.search->k_star && *c.search->k_star < 1) {
      throw ConfigError("search.K_star", "must be positive");
    }
    if (c.search->epsilon_p && !(*c.search->epsilon_p > 0.0)) {
      throw ConfigError("search.epsilon_p", "must be positive");
    }
  }
  for (double t : c.snapshot_times) {
    if (!(t >= 0.0)) throw ConfigError("output.snapshot_times", "must be non-negative");
    if (t > c.t_end + 1e-9) {
      throw ConfigError("output.snapshot_times",
                        "snapshot time out of range: " + std::to_string(t) + " > t_end");
    }
  }
}

CoupledState initial_state(const ScenarioConfig& config, const Domain& domain) {
  const std::size_t n = config.agent_count;
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CoupledState x;
  if (config.initial_phases) {
    try {
      x.phi = PartitionState::from_phases(*config.initial_phases, config.kappa_phi).unwrapped();
    } catch (const InvalidPartition& e) {
      throw ConfigError("agents.initial_phases", e.what());
    }
  } else {
    for (int attempt = 0;; ++attempt) {
      std::vector<double> phases(n);
      for (double& v : phases) v = kTwoPi * unit(rng);
      std::sort(phases.begin(), phases.end());
      try {
        x.phi = PartitionState::from_phases(phases, config.kappa_phi).unwrapped();
        break;
      } catch (const InvalidPartition&) {
        if (attempt > 100) throw;
      }
    }
  }

  const AnnularRegion& region = domain.region();
  if (config.initial_positions) {
    x.p = *config.initial_positions;
    for (std::size_t i = 0; i < n; ++i) {
      if (!contains(region, x.p[i])) {
        throw ConfigError("agents.initial_positions",
                          "agent " + std::to_string(i + 1) + " starts outside the region");
      }
    }
  } else {
    const double r = region.max_outer_radius();
    std::uniform_real_distribution<double> coord(-r, r);
    while (x.p.size() < n) {
      const Vec2 q = region.origin() + Vec2(coord(rng), coord(rng));
      if (contains(region, q)) x.p.push_back(q);
    }
  }
  return x;
}

TrajectoryRecord make_record(const CoupledSystem& system, const CoupledState& x, double t) {
  const Evaluation ev = system.evaluate(x);
  TrajectoryRecord r;
  r.t = t;
  r.phi_unwrapped = x.phi;
  r.phi_wrapped.resize(x.size());
  std::transform(x.phi.begin(), x.phi.end(), r.phi_wrapped.begin(), wrap_angle);
  r.p = x.p;
  r.m = ev.workloads.m;
  r.V = lyapunov_V(ev.workloads);
  const PartitionState part = system.partition(x);
  r.J = cost_J(part, AgentState{x.p, ev.targets, system.kappa_p()}, system.domain(),
               system.cost());
  r.centroids = ev.centroids;
  double rate2 = 0.0;
  for (double v : ev.phi_rates) rate2 += v * v;
  r.phi_rate_norm = std::sqrt(rate2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.max_speed = std::max(r.max_speed, system.kappa_p() * (x.p[i] - ev.targets[i]).norm());
    r.excursion = r.excursion || !contains(system.domain().region(), x.p[i]);
  }
  r.H = centroid_energy(r.m, r.p, r.centroids);
  return r;
}

void complete_records(TrajectoryLog& log, const CoupledSystem& system) {
  for (TrajectoryRecord& rec : log.records) {
    const TrajectoryRecord full = make_record(system, CoupledState{rec.phi_unwrapped, rec.p}, rec.t);
    rec.phi_wrapped = full.phi_wrapped;
    rec.centroids = full.centroids;
    rec.phi_rate_norm = full.phi_rate_norm;
    rec.max_speed = full.max_speed;
    rec.excursion = full.excursion;
  }
}

TrajectoryLog run_scenario(const ScenarioConfig& config) {
  validate(config);
  const Domain domain = config.domain();
  return run_scenario(config, domain);
}

TrajectoryLog run_scenario(const ScenarioConfig& config, const Domain& domain) {
  validate(config);
  const CoupledSystem system(domain, config.cost, config.kappa_phi, config.kappa_p);
  CoupledState x = initial_state(config, domain);

  TrajectoryLog log;
  log.agent_count = config.agent_count;
  log.records.push_back(make_record(system, x, 0.0));

  const long steps = config.step_count();
  int halvings = 0;
  for (long s = 1; s <= steps; ++s) {
    const bool last = s == steps;
    const double h = last ? config.t_end - static_cast<double>(steps - 1) * config.dt : config.dt;
    try {
      StepOutcome out = guarded_step(system, x, h);
      halvings += out.halvings;
      x = std::move(out.state);
    } catch (const IntegrationError& e) {
      throw ScenarioError(std::string("integration failed at t=") +
                              std::to_string(static_cast<double>(s - 1) * config.dt) + ": " +
                              e.what(),
                          log);
    }
    if (s % config.log_stride == 0 || last) {
      log.records.push_back(
          make_record(system, x, last ? config.t_end : static_cast<double>(s) * config.dt));
      log.records.back().halvings = halvings;
      halvings = 0;
    }
  }
  return log;
}

}  // namespace coverage
