#include "legwave/gait.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace legwave {

namespace {

// Phases within this many turns of a stance/swing boundary are treated as
// lying exactly on it.
constexpr double kSnapTurns = 1e-12;

void check_index(const GaitConfig& cfg, int i, const char* what) {
  if (i < 1 || i > cfg.n_pairs) {
    throw std::out_of_range(std::string(what) + " index " + std::to_string(i) +
                            " outside [1, " + std::to_string(cfg.n_pairs) + "]");
  }
}

}  // namespace

double wrap_phase(double phase) noexcept {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void GaitConfig::validate() const {
  if (n_pairs < 2) throw std::invalid_argument("n_pairs must be >= 2");
  if (!(duty > 0.0 && duty < 1.0)) throw std::invalid_argument("duty must lie in (0, 1)");
  if (!std::isfinite(xi)) throw std::invalid_argument("xi must be finite");
  if (!(a_v >= 0.0 && a_v < 90.0)) throw std::invalid_argument("a_v must lie in [0, 90) degrees");
  if (!(theta_leg_amp >= 0.0 && theta_leg_amp < 90.0))
    throw std::invalid_argument("theta_leg_amp must lie in [0, 90) degrees");
  if (!(theta_body_amp >= 0.0 && theta_body_amp < 90.0))
    throw std::invalid_argument("theta_body_amp must lie in [0, 90) degrees");
  if (phase_offset_mode == PhaseOffsetMode::explicit_value && !std::isfinite(phase_offset))
    throw std::invalid_argument("explicit phase offset must be finite");
}

double GaitConfig::body_contact_offset() const noexcept {
  if (phase_offset_mode == PhaseOffsetMode::optimal) {
    return (xi / static_cast<double>(n_pairs) + 0.5) * kPi;
  }
  return phase_offset;
}

double GaitConfig::lag(int i) const noexcept {
  return kTwoPi * (xi / static_cast<double>(n_pairs)) * static_cast<double>(i - 1);
}

double leg_local_phase(const GaitConfig& cfg, double tau_c, Side side, int i) {
  check_index(cfg, i, "leg");
  double turns = (tau_c - cfg.lag(i) + (side == Side::right ? kPi : 0.0)) / kTwoPi;
  turns -= std::floor(turns);
  if (turns > 1.0 - kSnapTurns) turns = 0.0;
  if (std::abs(turns - cfg.duty) < kSnapTurns) turns = cfg.duty;
  return turns * kTwoPi;
}

bool ideal_contact(const GaitConfig& cfg, double tau_c, Side side, int i) {
  return leg_local_phase(cfg, tau_c, side, i) < kTwoPi * cfg.duty;
}

double leg_angle(const GaitConfig& cfg, double tau_c, Side side, int i) {
  const double phase = leg_local_phase(cfg, tau_c, side, i);
  const double stance_end = kTwoPi * cfg.duty;
  if (phase < stance_end) {
    return cfg.theta_leg_amp * std::cos(phase / (2.0 * cfg.duty));
  }
  return -cfg.theta_leg_amp * std::cos((phase - stance_end) / (2.0 * (1.0 - cfg.duty)));
}

double body_yaw(const GaitConfig& cfg, double tau_b, int i) {
  check_index(cfg, i, "joint");
  return cfg.theta_body_amp * std::cos(tau_b - cfg.lag(i));
}

double body_pitch(const GaitConfig& cfg, double tau_b, int i) {
  check_index(cfg, i, "joint");
  return cfg.a_v * std::cos(2.0 * tau_b - 2.0 * cfg.lag(i));
}

JointCommand command_at(const GaitConfig& cfg, double tau_b) {
  JointCommand cmd;
  cmd.phase.tau_b = tau_b;
  cmd.phase.tau_c = cfg.contact_phase(tau_b);
  const auto n = static_cast<std::size_t>(cfg.n_pairs);
  cmd.leg_angles_left.reserve(n);
  cmd.leg_angles_right.reserve(n);
  cmd.body_yaw.reserve(n);
  cmd.body_pitch.reserve(n);
  cmd.contact_left.reserve(n);
  cmd.contact_right.reserve(n);
  for (int i = 1; i <= cfg.n_pairs; ++i) {
    cmd.leg_angles_left.push_back(leg_angle(cfg, cmd.phase.tau_c, Side::left, i));
    cmd.leg_angles_right.push_back(leg_angle(cfg, cmd.phase.tau_c, Side::right, i));
    cmd.body_yaw.push_back(body_yaw(cfg, tau_b, i));
    cmd.body_pitch.push_back(body_pitch(cfg, tau_b, i));
    cmd.contact_left.push_back(ideal_contact(cfg, cmd.phase.tau_c, Side::left, i));
    cmd.contact_right.push_back(ideal_contact(cfg, cmd.phase.tau_c, Side::right, i));
  }
  return cmd;
}

std::vector<JointCommand> sample_cycle(const GaitConfig& cfg, int steps_per_cycle) {
  cfg.validate();
  if (steps_per_cycle < 4) throw std::invalid_argument("steps_per_cycle must be >= 4");
  std::vector<JointCommand> out;
  out.reserve(static_cast<std::size_t>(steps_per_cycle));
  for (int k = 0; k < steps_per_cycle; ++k) {
    out.push_back(command_at(cfg, kTwoPi * k / steps_per_cycle));
  }
  return out;
}

}  // namespace legwave
