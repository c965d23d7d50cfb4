#pragma once

#include <span>
#include <vector>

#include "legwave/gait.hpp"
#include "legwave/kinematics.hpp"
#include "legwave/terrain.hpp"

namespace legwave {

/// Slope of the speed / normalised-friction law.
inline constexpr double kForceVelocityCoeff = 1.065;
inline constexpr double kSpeedRatioMax = 1.2;

struct WeightVector {
  std::vector<double> w;
};

/// Band of normalised friction and speed predicted for one contact ratio.
struct FrictionPrediction {
  double gamma = 0.0;
  double f_norm_min = 0.0;
  double f_norm_max = 0.0;
  double v_ratio_min = 0.0;
  double v_ratio_max = 0.0;

  double v_mid() const noexcept { return 0.5 * (v_ratio_min + v_ratio_max); }

  friend bool operator==(const FrictionPrediction&, const FrictionPrediction&) = default;
};

/// Extreme points of the friction objective with the weights that attain
/// them.
struct FrictionExtremes {
  double f_min = 0.0;
  double f_max = 0.0;
  WeightVector w_min;
  WeightVector w_max;
};

/// Normalised friction for per-bin contact weights:
/// sum_i w_i cos(beta_i) Pr(beta_i) - (1 - sum_i w_i Pr(beta_i)).
double friction_objective(const SlipDistribution& dist, std::span<const double> w);

/// Minimises and maximises friction_objective over
/// { w in [0,1]^B : sum_i Pr(beta_i) w_i = gamma }.
///
/// The objective is linear and the feasible set is a box cut by one
/// hyperplane, so an optimum sits at a vertex with at most one fractional
/// weight. Filling probability mass in order of decreasing (increasing)
/// cos(beta) reaches it directly.
FrictionExtremes friction_extremes(const SlipDistribution& dist, double gamma);

/// Friction band only; the speed fields are left at zero.
FrictionPrediction friction_bounds(const SlipDistribution& dist, double gamma);

/// clamp(coeff * f_norm, 0, 1.2)
double speed_from_friction(double f_norm, double coeff = kForceVelocityCoeff);

FrictionPrediction predict_speed_band(const SlipDistribution& dist, double gamma,
                                      double coeff = kForceVelocityCoeff);

struct LossModelOutput {
  double p_loss1 = 0.0;  ///< terrain drops below the foot's reach
  double p_loss2 = 0.0;  ///< terrain rise deforms the leg beyond recovery
  double p_loss = 0.0;
  double gamma = 1.0;
  double gamma_ideal = 1.0;
  double p_e = 0.0;

  friend bool operator==(const LossModelOutput&, const LossModelOutput&) = default;
};

/// Contact-loss probabilities averaged over m retraction samples.
///
/// Per sample: a foot lifted beyond the compliance slack is lost on either
/// branch; otherwise the drop branch loses when |dH| exceeds the reach and
/// the rise branch loses when dH exceeds the recoverable height plus the
/// (non-negative) lift.
LossModelOutput predict_gamma(const RobotGeometry& geom, const GaitConfig& cfg,
                              const HeightDeltaModel& model, int m);

struct OptimalAv {
  double a_v = 0.0;
  FrictionPrediction band;
  LossModelOutput loss;
};

/// Grid search for the vertical amplitude maximising the midpoint of the
/// predicted speed band; ties go to the smaller amplitude.
OptimalAv optimal_av(const RobotGeometry& geom, const GaitConfig& cfg,
                     const HeightDeltaModel& model, std::span<const double> av_grid, int m = 64,
                     int slip_bins = 36, double coeff = kForceVelocityCoeff);

}  // namespace legwave
