#pragma once

#include <numbers>
#include <string>
#include <vector>

namespace legwave {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Reduce a phase into [0, 2pi).
double wrap_phase(double phase) noexcept;

enum class Side { left, right };

/// How the contact phase is tied to the lateral body phase.
enum class PhaseOffsetMode { optimal, explicit_value };

/// Wave parameters of one gait for a robot with 2 * n_pairs legs.
///
/// Angles are in degrees. The body wave count equals `xi`, and there is one
/// body joint per module.
struct GaitConfig {
  int n_pairs = 6;
  double xi = 1.0;
  double duty = 0.5;
  double theta_leg_amp = 30.0;
  double theta_body_amp = 30.0;
  double a_v = 0.0;
  PhaseOffsetMode phase_offset_mode = PhaseOffsetMode::optimal;
  /// Used only in explicit mode: tau_c = tau_b - phase_offset (radians).
  double phase_offset = 0.0;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  /// Offset between body and contact phase. In optimal mode this is
  /// (xi / n_pairs + 1/2) * pi.
  double body_contact_offset() const noexcept;
  double contact_phase(double tau_b) const noexcept { return tau_b - body_contact_offset(); }
  double body_phase(double tau_c) const noexcept { return tau_c + body_contact_offset(); }

  /// Phase lag of leg / joint i (1-based) relative to the first one.
  double lag(int i) const noexcept;

  int legs() const noexcept { return 2 * n_pairs; }
};

struct GaitState {
  double tau_b = 0.0;
  double tau_c = 0.0;
};

/// Joint targets and ideal contacts at one instant. Vectors are indexed by
/// pair / module, 0-based.
struct JointCommand {
  GaitState phase;
  std::vector<double> leg_angles_left;
  std::vector<double> leg_angles_right;
  std::vector<double> body_yaw;
  std::vector<double> body_pitch;
  std::vector<bool> contact_left;
  std::vector<bool> contact_right;
};

/// Position of leg (side, i) inside its own gait cycle, in [0, 2pi). Stance
/// occupies [0, 2pi * duty). Boundary values that land within rounding noise
/// of a lattice point are snapped so that the half-open convention is exact
/// for uniformly sampled cycles.
double leg_local_phase(const GaitConfig& cfg, double tau_c, Side side, int i);

bool ideal_contact(const GaitConfig& cfg, double tau_c, Side side, int i);

/// Shoulder angle in degrees, +amplitude at touchdown and -amplitude at
/// liftoff.
double leg_angle(const GaitConfig& cfg, double tau_c, Side side, int i);

/// Lateral angle of body joint i, degrees.
double body_yaw(const GaitConfig& cfg, double tau_b, int i);

/// Vertical angle of body joint i, degrees. Twice the temporal and spatial
/// frequency of the lateral wave.
double body_pitch(const GaitConfig& cfg, double tau_b, int i);

JointCommand command_at(const GaitConfig& cfg, double tau_b);

/// Uniform samples of tau_b over [0, 2pi).
std::vector<JointCommand> sample_cycle(const GaitConfig& cfg, int steps_per_cycle);

}  // namespace legwave
