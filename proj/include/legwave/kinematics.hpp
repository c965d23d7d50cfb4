#pragma once

#include <vector>

#include "legwave/gait.hpp"

namespace legwave {

/// Robot dimensions (cm, N, cm/s). Only h_l carries a measured value; the
/// other lengths are configuration assumptions.
struct RobotGeometry {
  double h_l = 7.0;            ///< reachable depth below the support plane at zero pitch
  double h_l2 = 6.0;           ///< distal link length governing deformation recovery
  double d_l = 5.0;            ///< horizontal offset from pitch joint to foot
  double module_length = 10.0;
  double leg_length = 10.0;
  double lift_slack = 4.0;     ///< foot lift absorbed by leg compliance before it leaves flat ground
  double mu = 0.5;
  double f_w = 1.0;
  double v_open = 1.0;
  double c_fv = 1.0;

  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct SlipDistribution {
  std::vector<double> bin_centers;  ///< degrees, strictly increasing over [-180, 180]
  std::vector<double> probs;
  int bin_count = 0;

  /// sum_i cos(beta_i) Pr(beta_i): normalised flat-ground friction.
  double mean_cos() const;
};

/// Retraction-period samples of one leg. `times` are stance-local phases in
/// radians starting at touchdown.
struct RetractionProfile {
  std::vector<double> times;
  std::vector<double> d_s;
  std::vector<double> lift;
  std::vector<double> reach;
};

/// Stance kinematics of one leg tabulated on a fine phase grid.
///
/// Positions are in the body-mean frame: x forward along the body axis,
/// y to the left, origin at the first body joint, body advance removed. The
/// foot is the shoulder (module centre) plus the leg vector, both rotated by
/// the module's lateral angle.
class StanceTable {
 public:
  StanceTable(const GaitConfig& cfg, const RobotGeometry& geom, Side side, int leg,
              int resolution = 2048);

  double stance_end() const noexcept { return stance_end_; }
  int resolution() const noexcept { return resolution_; }

  Point2 foot(double phase) const;
  /// Cumulative rearward foot displacement since touchdown (non-decreasing).
  double retraction(double phase) const;
  /// Cosine of the angle between the thrust direction (opposite to the foot
  /// velocity in the module frame) and the forward axis.
  double thrust_cos(double phase) const;
  /// Module-frame path length of the foot between two stance phases; the
  /// weight a stretch of stance carries in the slip distribution.
  double slip_length(double from, double to) const;
  /// Arc length of the whole stance path.
  double arc_length() const noexcept { return arc_length_; }
  double total_retraction() const noexcept { return retraction_.back(); }

 private:
  int segment(double phase) const noexcept;

  double stance_end_;
  int resolution_;
  std::vector<Point2> points_;
  std::vector<double> retraction_;
  std::vector<double> seg_cos_;
  std::vector<double> slip_arc_;
  double arc_length_ = 0.0;
};

/// Foot position at an arbitrary stance-local phase (body-mean frame).
Point2 stance_foot_position(const GaitConfig& cfg, const RobotGeometry& geom, Side side, int leg,
                            double stance_phase);

/// Vertical body angle (degrees) of the module carrying the leg at a
/// stance-local phase.
double stance_pitch(const GaitConfig& cfg, Side side, int leg, double stance_phase);

/// Stance path of one foot, `steps` samples from touchdown to liftoff
/// inclusive.
std::vector<Point2> foot_trajectory(const GaitConfig& cfg, const RobotGeometry& geom, int leg,
                                    int steps, Side side = Side::left);

/// Arc-length weighted histogram of thrust angles along the stance path.
/// Throws std::domain_error when the foot does not move.
SlipDistribution slip_distribution(const GaitConfig& cfg, const RobotGeometry& geom, int bins,
                                   int leg = 1, Side side = Side::left, int steps = 4096);

/// Lowest reachable foot depth below the support plane for a module pitch.
double foot_reach(const RobotGeometry& geom, double pitch_deg) noexcept;

RetractionProfile retraction_profile(const GaitConfig& cfg, const RobotGeometry& geom, int m,
                                     int leg = 1, Side side = Side::left);

/// Largest step-up that retraction of the compliant distal link can recover,
/// saturating once d_s reaches h_l2.
double recoverable_height(const RobotGeometry& geom, double d_s);

/// Contact ratio on flat ground: share of retraction samples whose lift stays
/// within the compliance slack.
double ideal_gamma(const GaitConfig& cfg, const RobotGeometry& geom, int m);

/// Body advance per cycle on flat ground, equal to the total rearward stance
/// sweep of one foot.
double flat_stride(const GaitConfig& cfg, const RobotGeometry& geom);

}  // namespace legwave
