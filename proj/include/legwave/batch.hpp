#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <memory>
#include <span>
#include <vector>

#include "legwave/contact_sim.hpp"
#include "legwave/prob_models.hpp"

namespace legwave {

/// Serial execution is the reference; parallel runs must match it exactly.
enum class Exec { serial, parallel };

/// Calls fn(i) for i in [0, n). Each index must write only its own output
/// slot. If any call throws, the exception from the lowest index is
/// rethrown after the loop, whichever mode ran.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Terrain seed paired with a trial seed, so scenarios that share a seed
/// walk the same ground.
std::uint64_t terrain_seed(std::uint64_t seed) noexcept;

struct WalkSetup {
  GaitConfig cfg;
  RobotGeometry geom;
  int cycles = 30;
  int steps = 64;
  SensorModel sensor;
  WalkOptions options;
  int cols = 5;
  double block_size = 10.0;
  /// Fresh terrain per trial seed; when false every trial walks the same grid.
  bool reseed_terrain = true;
};

struct WalkJob {
  double r_g = 0.0;
  double a_v = 0.0;
  std::uint64_t seed = 0;
  /// Terrain to walk; generated from r_g and the seed when null.
  std::shared_ptr<const TerrainGrid> terrain;
};

struct WalkSummary {
  double r_g = 0.0;
  double a_v = 0.0;
  std::uint64_t seed = 0;
  double mean_gamma = 0.0;  ///< sensor-measured
  double mean_gamma_true = 0.0;
  double mean_speed = 0.0;
  std::vector<double> gamma_per_cycle;
  std::vector<double> gamma_true_per_cycle;
  std::vector<double> speed_per_cycle;
  long long too_deep = 0;
  long long deformed = 0;
  long long lifted = 0;
  long long retraction_samples = 0;

  friend bool operator==(const WalkSummary&, const WalkSummary&) = default;
};

TerrainGrid terrain_for(const WalkSetup& setup, double r_g, std::uint64_t seed);

WalkSummary run_walk(const WalkSetup& setup, const WalkJob& job);
std::vector<WalkSummary> run_walks(const WalkSetup& setup, std::span<const WalkJob> jobs,
                                   Exec exec = Exec::parallel);

struct ModelRow {
  double r_g = 0.0;
  double a_v = 0.0;
  LossModelOutput loss;
  FrictionPrediction band;

  friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

struct ModelSweepInput {
  double r_g = 0.0;
  HeightDeltaModel model;
};

/// One row per (terrain, a_v), terrain-major.
std::vector<ModelRow> model_sweep(const GaitConfig& cfg, const RobotGeometry& geom,
                                  std::span<const ModelSweepInput> terrains,
                                  std::span<const double> av_grid, int m, int slip_bins,
                                  double coeff = kForceVelocityCoeff, Exec exec = Exec::parallel);

}  // namespace legwave
