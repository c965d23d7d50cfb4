#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "legwave/control.hpp"
#include "legwave/contact_sim.hpp"
#include "legwave/gait.hpp"
#include "legwave/kinematics.hpp"

namespace legwave {

inline constexpr int kSchemaVersion = 1;

/// Bad config text, unknown keys, or values out of range.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `[section]` headers, `key = value` lines, `#` comments. Keys before the
/// first header live in section "".
using IniDocument = std::map<std::string, std::map<std::string, std::string>>;

IniDocument parse_ini(std::istream& is);

struct ExperimentSpec {
  std::string name = "default";
  GaitConfig gait;
  RobotGeometry geometry;
  ControllerConfig controller;
  SensorModel sensor;

  std::vector<double> r_g{0.0, 0.17, 0.32};
  std::vector<std::string> terrain_files;  ///< used instead of r_g when non-empty
  std::vector<double> av_grid{0.0, 10.0, 20.0};
  std::vector<std::uint64_t> seeds;
  int cycles = 30;
  int steps = 64;
  int cols = 5;
  double block_size = 10.0;
  double tolerance = 0.05;
  int m = 64;
  int slip_bins = 36;
  double force_velocity_coeff = 1.065;
  double min_advance_ratio = 0.1;
  bool reseed_terrain = true;
  /// controller-compare settings
  double compare_r_g = 0.32;
  int compare_cycles = 7;
  std::vector<int> update_every_sweep{1, 2, 3};

  ExperimentSpec();
  void validate() const;
};

ExperimentSpec spec_from_ini(const IniDocument& doc);
ExperimentSpec load_spec(const std::string& path);
ExperimentSpec read_spec(std::istream& is);

/// Canonical text form; parsing it back gives the same spec.
std::string spec_to_string(const ExperimentSpec& spec);
std::uint64_t spec_hash(const ExperimentSpec& spec);

/// "1,2,5-8" style seed list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

WalkSetup walk_setup(const ExperimentSpec& spec, int cycles);

}  // namespace legwave
