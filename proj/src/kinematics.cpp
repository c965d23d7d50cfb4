#include "legwave/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace legwave {

namespace {

double contact_phase_of(const GaitConfig& cfg, Side side, int leg, double stance_phase) {
  return stance_phase + cfg.lag(leg) - (side == Side::right ? kPi : 0.0);
}

// Foot position relative to the leg's own body joint.
Point2 local_foot(const GaitConfig& cfg, const RobotGeometry& geom, Side side, int leg,
                  double stance_phase) {
  const double tau_c = contact_phase_of(cfg, side, leg, stance_phase);
  const double tau_b = cfg.body_phase(tau_c);
  const double theta = deg2rad(cfg.theta_leg_amp) * std::cos(stance_phase / (2.0 * cfg.duty));
  const double psi = deg2rad(body_yaw(cfg, tau_b, leg));
  const double c = std::cos(psi);
  const double s = std::sin(psi);
  const double lateral = side == Side::left ? 1.0 : -1.0;
  // module frame: shoulder at (-module_length/2, 0), leg vector (sin, +-cos)
  const double mx = -0.5 * geom.module_length + geom.leg_length * std::sin(theta);
  const double my = lateral * geom.leg_length * std::cos(theta);
  return {c * mx - s * my, s * mx + c * my};
}

// Leg vector alone, in the frame of the module carrying the leg.
Point2 module_foot(const GaitConfig& cfg, const RobotGeometry& geom, Side side, double stance_phase) {
  const double theta = deg2rad(cfg.theta_leg_amp) * std::cos(stance_phase / (2.0 * cfg.duty));
  const double lateral = side == Side::left ? 1.0 : -1.0;
  return {geom.leg_length * std::sin(theta), lateral * geom.leg_length * std::cos(theta)};
}

void check_leg(const GaitConfig& cfg, int leg) {
  if (leg < 1 || leg > cfg.n_pairs) throw std::out_of_range("leg index out of range");
}

}  // namespace

void RobotGeometry::validate() const {
  if (!(h_l > 0 && h_l2 > 0 && d_l > 0 && module_length > 0 && leg_length > 0))
    throw std::invalid_argument("robot lengths must be positive");
  if (!(lift_slack >= 0)) throw std::invalid_argument("lift_slack must be non-negative");
  if (!(mu > 0)) throw std::invalid_argument("mu must be positive");
  if (!(f_w > 0)) throw std::invalid_argument("f_w must be positive");
  if (!(v_open > 0)) throw std::invalid_argument("v_open must be positive");
}

double SlipDistribution::mean_cos() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) acc += std::cos(deg2rad(bin_centers[i])) * probs[i];
  return acc;
}

Point2 stance_foot_position(const GaitConfig& cfg, const RobotGeometry& geom, Side side, int leg,
                            double stance_phase) {
  check_leg(cfg, leg);
  Point2 p = local_foot(cfg, geom, side, leg, stance_phase);
  p.x -= static_cast<double>(leg - 1) * geom.module_length;
  return p;
}

double stance_pitch(const GaitConfig& cfg, Side side, int leg, double stance_phase) {
  const double tau_c = contact_phase_of(cfg, side, leg, stance_phase);
  return body_pitch(cfg, cfg.body_phase(tau_c), leg);
}

StanceTable::StanceTable(const GaitConfig& cfg, const RobotGeometry& geom, Side side, int leg,
                         int resolution)
    : stance_end_(kTwoPi * cfg.duty), resolution_(resolution) {
  check_leg(cfg, leg);
  if (resolution < 8) throw std::invalid_argument("stance table resolution must be >= 8");
  points_.reserve(static_cast<std::size_t>(resolution) + 1);
  std::vector<Point2> module_points;
  module_points.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int j = 0; j <= resolution; ++j) {
    points_.push_back(local_foot(cfg, geom, side, leg, stance_end_ * j / resolution));
    module_points.push_back(module_foot(cfg, geom, side, stance_end_ * j / resolution));
  }
  retraction_.assign(points_.size(), 0.0);
  slip_arc_.assign(points_.size(), 0.0);
  seg_cos_.assign(static_cast<std::size_t>(resolution), 1.0);
  double last_cos = 1.0;
  bool seen = false;
  for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
    const double dx = points_[j + 1].x - points_[j].x;
    const double dy = points_[j + 1].y - points_[j].y;
    retraction_[j + 1] = retraction_[j] + std::max(0.0, -dx);
    arc_length_ += std::hypot(dx, dy);
    // thrust direction is taken in the module frame
    const double mx = module_points[j + 1].x - module_points[j].x;
    const double my = module_points[j + 1].y - module_points[j].y;
    const double len = std::hypot(mx, my);
    slip_arc_[j + 1] = slip_arc_[j] + len;
    if (len > 0.0) {
      last_cos = -mx / len;
      if (!seen) {
        std::fill(seg_cos_.begin(), seg_cos_.begin() + static_cast<std::ptrdiff_t>(j), last_cos);
        seen = true;
      }
    }
    seg_cos_[j] = last_cos;
  }
}

int StanceTable::segment(double phase) const noexcept {
  const double u = std::clamp(phase / stance_end_, 0.0, 1.0) * resolution_;
  return std::min(static_cast<int>(u), resolution_ - 1);
}

Point2 StanceTable::foot(double phase) const {
  const int j = segment(phase);
  const double t = std::clamp(phase / stance_end_ * resolution_ - j, 0.0, 1.0);
  const auto& a = points_[static_cast<std::size_t>(j)];
  const auto& b = points_[static_cast<std::size_t>(j) + 1];
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

double StanceTable::retraction(double phase) const {
  const int j = segment(phase);
  const double t = std::clamp(phase / stance_end_ * resolution_ - j, 0.0, 1.0);
  const double a = retraction_[static_cast<std::size_t>(j)];
  const double b = retraction_[static_cast<std::size_t>(j) + 1];
  return a + t * (b - a);
}

double StanceTable::slip_length(double from, double to) const {
  auto cumulative = [this](double phase) {
    const int j = segment(phase);
    const double t = std::clamp(phase / stance_end_ * resolution_ - j, 0.0, 1.0);
    const double a = slip_arc_[static_cast<std::size_t>(j)];
    return a + t * (slip_arc_[static_cast<std::size_t>(j) + 1] - a);
  };
  return cumulative(to) - cumulative(from);
}

double StanceTable::thrust_cos(double phase) const {
  return seg_cos_[static_cast<std::size_t>(segment(phase))];
}

std::vector<Point2> foot_trajectory(const GaitConfig& cfg, const RobotGeometry& geom, int leg,
                                    int steps, Side side) {
  cfg.validate();
  geom.validate();
  if (steps < 8) throw std::invalid_argument("foot_trajectory needs steps >= 8");
  std::vector<Point2> path;
  path.reserve(static_cast<std::size_t>(steps));
  const double end = kTwoPi * cfg.duty;
  for (int j = 0; j < steps; ++j) {
    path.push_back(stance_foot_position(cfg, geom, side, leg, end * j / (steps - 1)));
  }
  return path;
}

SlipDistribution slip_distribution(const GaitConfig& cfg, const RobotGeometry& geom, int bins,
                                   int leg, Side side, int steps) {
  cfg.validate();
  geom.validate();
  check_leg(cfg, leg);
  if (bins < 8) throw std::invalid_argument("slip_distribution needs bins >= 8");
  if (steps < 8) throw std::invalid_argument("slip_distribution needs steps >= 8");

  SlipDistribution dist;
  dist.bin_count = bins;
  const double width = 360.0 / bins;
  for (int b = 0; b < bins; ++b) dist.bin_centers.push_back(-180.0 + (b + 0.5) * width);
  dist.probs.assign(static_cast<std::size_t>(bins), 0.0);

  // Slip is read in the frame of the module carrying the leg, so only the leg
  // sweep contributes and every leg sees identical rounding.
  const double end = kTwoPi * cfg.duty;
  Point2 prev = module_foot(cfg, geom, side, 0.0);
  double total = 0.0;
  for (int j = 1; j < steps; ++j) {
    const Point2 cur = module_foot(cfg, geom, side, end * j / (steps - 1));
    const double dx = cur.x - prev.x;
    const double dy = cur.y - prev.y;
    const double len = std::hypot(dx, dy);
    prev = cur;
    if (len == 0.0) continue;
    const double phi = rad2deg(std::atan2(-dy, -dx));
    const int b = std::clamp(static_cast<int>(std::floor((phi + 180.0) / width)), 0, bins - 1);
    dist.probs[static_cast<std::size_t>(b)] += len;
    total += len;
  }
  if (total <= 0.0) throw std::domain_error("degenerate foot trajectory: foot does not move in stance");
  for (double& p : dist.probs) p /= total;
  return dist;
}

double foot_reach(const RobotGeometry& geom, double pitch_deg) noexcept {
  const double th = deg2rad(pitch_deg);
  return geom.d_l * std::sin(th) + geom.h_l * std::cos(th);
}

RetractionProfile retraction_profile(const GaitConfig& cfg, const RobotGeometry& geom, int m,
                                     int leg, Side side) {
  cfg.validate();
  geom.validate();
  if (m < 4) throw std::invalid_argument("retraction_profile needs m >= 4");
  const StanceTable table(cfg, geom, side, leg);
  RetractionProfile prof;
  const double end = table.stance_end();
  for (int i = 0; i < m; ++i) {
    const double t = end * i / m;
    const double reach = foot_reach(geom, stance_pitch(cfg, side, leg, t));
    prof.times.push_back(t);
    prof.d_s.push_back(table.retraction(t));
    prof.reach.push_back(reach);
    prof.lift.push_back(geom.h_l - reach);
  }
  return prof;
}

double recoverable_height(const RobotGeometry& geom, double d_s) {
  const double ratio = std::min(std::max(d_s, 0.0), geom.h_l2) / geom.h_l2;
  return geom.h_l2 * (1.0 - std::cos(std::asin(ratio)));
}

double ideal_gamma(const GaitConfig& cfg, const RobotGeometry& geom, int m) {
  if (cfg.a_v == 0.0) return 1.0;
  const RetractionProfile prof = retraction_profile(cfg, geom, m);
  const auto grounded = std::count_if(prof.lift.begin(), prof.lift.end(),
                                      [&](double l) { return l <= geom.lift_slack; });
  return static_cast<double>(grounded) / static_cast<double>(m);
}

double flat_stride(const GaitConfig& cfg, const RobotGeometry& geom) {
  return StanceTable(cfg, geom, Side::left, 1).total_retraction();
}

}  // namespace legwave
