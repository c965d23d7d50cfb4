#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace legwave {

/// Standard deviation (cm) of adjacent-block height differences for a
/// rugosity level.
constexpr double rugosity_sigma(double r_g) noexcept { return 15.0 * r_g; }

/// Rectangular grid of block heights. Rows follow the travel direction.
struct TerrainGrid {
  double block_size = 10.0;
  int rows = 0;
  int cols = 0;
  double r_g = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> heights;  ///< row-major, cm

  double at(int row, int col) const {
    return heights[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) +
                   static_cast<std::size_t>(col)];
  }
  double width() const noexcept { return cols * block_size; }
  double length() const noexcept { return rows * block_size; }

  /// All longitudinal adjacent-block differences, column by column.
  std::vector<double> longitudinal_deltas() const;
};

struct TerrainOptions {
  /// Average each block with its lateral neighbours after generation. Off by
  /// default: it changes the longitudinal difference statistics.
  bool lateral_smoothing = false;
};

/// Each column is an independent random walk with N(0, 15 r_g) increments
/// along the rows. Deterministic for a fixed seed.
TerrainGrid generate_terrain(double r_g, int rows, int cols, double block_size, std::uint64_t seed,
                             TerrainOptions options = {});

inline constexpr int kTerrainFormatVersion = 1;

/// Versioned plain-text format: `key,value` header lines followed by
/// row-major heights, one terrain row per line, six decimals.
void write_terrain(std::ostream& os, const TerrainGrid& grid);
TerrainGrid read_terrain(std::istream& is);
void save_terrain(const std::string& path, const TerrainGrid& grid);
TerrainGrid load_terrain(const std::string& path);

/// Distribution of the height change met by a foot between two steps.
struct HeightDeltaModel {
  enum class Kind { gaussian, empirical };
  Kind kind = Kind::gaussian;
  double sigma = 0.0;
  std::vector<double> samples;  ///< sorted ascending for the empirical kind
  double p1 = 0.5;              ///< Pr(dH <= 0)

  static HeightDeltaModel gaussian(double sigma);
  static HeightDeltaModel empirical(std::vector<double> samples);
  static HeightDeltaModel from_rugosity(double r_g) { return gaussian(rugosity_sigma(r_g)); }
};

/// Reads one height difference per line (or the first CSV field); `#` lines
/// are skipped.
HeightDeltaModel load_height_samples(const std::string& path);

class Rng;
double sample_dh(const HeightDeltaModel& model, Rng& rng);

enum class DeltaCondition { dh_nonpositive, dh_positive };

/// dh_nonpositive: Pr(|dH| > threshold | dH <= 0).
/// dh_positive:    Pr(dH > threshold | dH > 0).
/// Closed form for the Gaussian kind, empirical fraction otherwise.
double tail_probability(const HeightDeltaModel& model, double threshold, DeltaCondition cond);

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

}  // namespace legwave
