#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "legwave/gait.hpp"
#include "legwave/kinematics.hpp"
#include "legwave/prob_models.hpp"
#include "legwave/rng.hpp"
#include "legwave/terrain.hpp"

namespace legwave {

/// Binary per-sample noise model of a foot contact sensor.
struct SensorModel {
  double flip_prob = 0.0;  ///< independent bit-flip probability per sample
  int latch_steps = 0;     ///< a change must persist latch_steps + 1 samples to be reported

  void validate() const;
};

enum class MapKind { ideal, measured };

/// Leg x time contact bits. Legs are numbered left 1..n then right n+1..2n.
struct ContactMap {
  int legs = 0;
  int steps = 0;
  int cycles = 0;
  MapKind kind = MapKind::measured;
  std::vector<std::uint8_t> bits;  ///< index t * legs + leg (both 0-based)

  ContactMap() = default;
  ContactMap(int legs_, int steps_, int cycles_, MapKind kind_);

  long long samples() const noexcept { return static_cast<long long>(steps) * cycles; }
  bool at(int leg, long long t) const { return bits[static_cast<std::size_t>(t * legs + leg)] != 0; }
  void set(int leg, long long t, bool v) { bits[static_cast<std::size_t>(t * legs + leg)] = v ? 1 : 0; }
  /// Appends one cycle of zeros.
  void grow_cycle();
};

/// Side and pair index (1-based) of map leg `leg` (0-based).
Side map_leg_side(const GaitConfig& cfg, int leg);
int map_leg_pair(const GaitConfig& cfg, int leg);

ContactMap ideal_contact_map(const GaitConfig& cfg, int steps, int cycles);

/// Share of ideal-contact samples that the measured map keeps, averaged over
/// (leg, cycle) cells. Throws std::invalid_argument on a shape mismatch.
double measure_gamma(const ContactMap& ideal, const ContactMap& measured);

/// CSV with header `cycle,step,leg_1..leg_2n`, one row per sample.
void write_contact_map_csv(std::ostream& os, const ContactMap& map);

enum class LossCause { lifted, too_deep, deformed };
const char* to_string(LossCause cause) noexcept;

struct LossEvent {
  int leg = 0;         ///< 1-based map leg
  long long step = 0;  ///< global sample index
  LossCause cause = LossCause::too_deep;
};

struct WalkOptions {
  /// Speed ratio below which the kinematic advance is floored, so a robot
  /// that lost all thrust still creeps onto new footholds.
  double min_advance_ratio = 0.1;
  double initial_speed_ratio = 1.0;
  double force_velocity_coeff = kForceVelocityCoeff;
};

struct CycleOutcome {
  double gamma_measured = 0.0;
  double gamma_true = 0.0;
  double v_ratio = 0.0;
  double displacement = 0.0;
  int too_deep = 0;
  int deformed = 0;
  int lifted = 0;
  int retraction_samples = 0;
};

struct WalkResult {
  ContactMap ideal;
  ContactMap truth;
  ContactMap measured;
  std::vector<double> gamma_per_cycle;  ///< from the measured (sensor) map
  std::vector<double> gamma_true_per_cycle;
  std::vector<double> forward_speed_ratio;
  std::vector<double> displacement;
  std::vector<LossEvent> loss_events;
  long long retraction_samples = 0;

  double mean_gamma() const;
  double mean_speed_ratio() const;
};

/// Body advance per cycle on flat ground scaled by a speed ratio.
double advance_per_cycle(const GaitConfig& cfg, const RobotGeometry& geom, double v_ratio);

/// Uniform per-step forward displacement for one cycle at the given speed
/// ratio (the kinematic advance used to index terrain blocks).
std::vector<double> advance_model(const GaitConfig& cfg, const RobotGeometry& geom, int steps,
                                  double v_ratio = 1.0);

/// Terrain rows needed to walk `cycles` cycles without leaving the grid.
int required_rows(const GaitConfig& cfg, const RobotGeometry& geom, int cycles, double block_size);

/// Thrown when the commanded advance runs past the last terrain row.
class WalkOffTerrain : public std::out_of_range {
 public:
  WalkOffTerrain(int cycle, int row);
  int cycle() const noexcept { return cycle_; }

 private:
  int cycle_;
};

/// Steps the robot across a terrain one gait cycle at a time.
///
/// Each stance takes one foothold at touchdown: the block under the foot in
/// world coordinates, compared with the adjacent block behind it along the
/// travel direction. Every retraction sample then applies the loss rules:
///   lifted    lift > lift_slack
///   too_deep  dH <= 0 and -dH > reach
///   deformed  dH > 0 and dH - max(lift, 0) > recoverable_height(d_s)
/// Protraction samples are recorded as no contact and never count toward
/// gamma.
class Walker {
 public:
  Walker(const GaitConfig& cfg, const RobotGeometry& geom, const TerrainGrid& terrain, int steps,
         SensorModel sensor, std::uint64_t seed, WalkOptions options = {});

  CycleOutcome step_cycle(double a_v);

  int cycles_done() const noexcept { return cycle_; }
  double body_position() const noexcept { return body_x_; }

  /// Moves the accumulated record out of the walker.
  WalkResult take_result();

 private:
  struct Sample {
    bool stance = false;
    bool onset = false;
    Point2 foot;
    double recoverable = 0.0;
    double thrust_cos = 1.0;
    double thrust_weight = 0.0;
    double unit_pitch = 0.0;  ///< module pitch for a_v = 1 degree
  };

  const Sample& sample(int leg, int k) const {
    return table_[static_cast<std::size_t>(leg) * static_cast<std::size_t>(steps_) +
                  static_cast<std::size_t>(k)];
  }

  GaitConfig cfg_;
  RobotGeometry geom_;
  const TerrainGrid* terrain_;
  int steps_;
  SensorModel sensor_;
  WalkOptions options_;
  Rng sensor_rng_;
  int legs_;
  double stride_;
  std::vector<Sample> table_;
  std::vector<double> thrust_norm_;

  int cycle_ = 0;
  double body_x_ = 0.0;
  double v_prev_ = 1.0;
  std::vector<double> foothold_dh_;
  std::vector<std::uint8_t> latch_out_;
  std::vector<int> latch_count_;
  WalkResult result_;
};

/// Runs `cycles` cycles at the gait's own vertical amplitude.
WalkResult simulate_walk(const GaitConfig& cfg, const RobotGeometry& geom,
                         const TerrainGrid& terrain, int cycles, int steps, SensorModel sensor,
                         std::uint64_t seed, WalkOptions options = {});

/// `seed,r_g,a_v,cycle,gamma,v_ratio` rows, one per cycle.
void write_walk_summary_header(std::ostream& os);
void write_walk_summary_rows(std::ostream& os, std::uint64_t seed, double r_g, double a_v,
                             const WalkResult& result);

}  // namespace legwave
