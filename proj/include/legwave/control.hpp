#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "legwave/batch.hpp"
#include "legwave/contact_sim.hpp"

namespace legwave {

enum class ControlMode { open_loop, feedback };

struct ControllerConfig {
  double k_p = 60.0;       ///< degrees per unit of contact-ratio error
  double gamma_set = 0.9;  ///< set point
  double av_min = 0.0;
  double av_max = 25.0;
  int update_every = 1;    ///< cycles between amplitude updates
  ControlMode mode = ControlMode::feedback;
  double open_loop_av = 0.0;  ///< held amplitude in open-loop mode

  void validate() const;
};

/// clamp(k_p (gamma_set - gamma_s), av_min, av_max)
double update_av(const ControllerConfig& cc, double gamma_s);

struct TrialRecord {
  std::vector<double> gamma_s;  ///< sensor contact ratio of each cycle
  std::vector<double> a_v;      ///< amplitude commanded during each cycle
  std::vector<double> v_ratio;
  std::vector<double> displacement;

  int cycles() const noexcept { return static_cast<int>(v_ratio.size()); }
  double mean_speed() const;
  double speed_variance() const;
  double distance() const;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Walks the terrain one cycle at a time. In feedback mode the amplitude
/// starts at av_min and is recomputed from the last cycle's sensor reading
/// every `update_every` cycles.
TrialRecord run_trial(const GaitConfig& cfg, const RobotGeometry& geom, const TerrainGrid& terrain,
                      const ControllerConfig& cc, int cycles, int steps, SensorModel sensor,
                      std::uint64_t seed, WalkOptions options = {});

/// `cycle,gamma_s,a_v_deg,v_ratio,displacement_cm` rows then a `summary` row.
void write_trial_csv(std::ostream& os, const TrialRecord& rec);

struct Scenario {
  std::string name;
  ControllerConfig controller;
  double r_g = 0.32;
};

struct ScenarioStats {
  std::string name;
  double r_g = 0.0;
  double mean_speed = 0.0;
  /// Per-cycle speed variance pooled over every cycle of every seed.
  double speed_variance = 0.0;
  double mean_gamma = 0.0;
  double mean_av = 0.0;
  std::vector<double> seed_speed;  ///< mean speed per seed, seed order
  /// Paired against the first scenario: seeds where this one is faster,
  /// slower, and the one-sided sign-test p of "faster".
  int wins = 0;
  int losses = 0;
  double sign_p = 1.0;
};

struct Comparison {
  std::vector<ScenarioStats> scenarios;
  /// trials[s][k]: scenario s on seed k.
  std::vector<std::vector<TrialRecord>> trials;
};

/// Runs every scenario on every seed; a seed maps to the same terrain in
/// each scenario with equal r_g.
Comparison compare_controllers(const WalkSetup& setup, std::span<const Scenario> scenarios,
                               std::span<const std::uint64_t> seeds, Exec exec = Exec::parallel);

/// Feedback scenarios differing only in update_every, preceded by the
/// open-loop baseline at the base config's open_loop_av.
std::vector<Scenario> modulation_sweep(const ControllerConfig& base, double r_g,
                                       std::span<const int> update_every);

/// name,r_g,mean_speed,speed_variance,mean_gamma,mean_av,wins,losses,sign_p
void write_comparison_csv(std::ostream& os, const Comparison& cmp);

std::string to_string(ControlMode mode);
ControlMode control_mode_from_string(const std::string& s);

}  // namespace legwave
