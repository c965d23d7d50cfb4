#include "legwave/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "legwave/rng.hpp"

namespace legwave {

std::vector<double> TerrainGrid::longitudinal_deltas() const {
  std::vector<double> out;
  if (rows < 2) return out;
  out.reserve(static_cast<std::size_t>(rows - 1) * static_cast<std::size_t>(cols));
  for (int c = 0; c < cols; ++c) {
    for (int r = 1; r < rows; ++r) out.push_back(at(r, c) - at(r - 1, c));
  }
  return out;
}

TerrainGrid generate_terrain(double r_g, int rows, int cols, double block_size, std::uint64_t seed,
                             TerrainOptions options) {
  if (!std::isfinite(r_g)) throw std::invalid_argument("rugosity must be finite");
  if (r_g < 0) throw std::invalid_argument("rugosity must be non-negative");
  if (rows < 1 || cols < 1) throw std::invalid_argument("terrain needs rows, cols >= 1");
  if (!(block_size > 0)) throw std::invalid_argument("block_size must be positive");

  TerrainGrid grid;
  grid.block_size = block_size;
  grid.rows = rows;
  grid.cols = cols;
  grid.r_g = r_g;
  grid.sigma = rugosity_sigma(r_g);
  grid.seed = seed;
  grid.heights.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);

  for (int c = 0; c < cols; ++c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    double h = 0.0;
    for (int r = 0; r < rows; ++r) {
      if (r > 0) h += grid.sigma * rng.normal();
      grid.heights[static_cast<std::size_t>(r) * cols + c] = h;
    }
  }

  if (options.lateral_smoothing && cols > 1) {
    std::vector<double> smoothed(grid.heights.size());
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        double acc = 0.0;
        int n = 0;
        for (int d = -1; d <= 1; ++d) {
          const int cc = c + d;
          if (cc < 0 || cc >= cols) continue;
          acc += grid.at(r, cc);
          ++n;
        }
        smoothed[static_cast<std::size_t>(r) * cols + c] = acc / n;
      }
    }
    grid.heights = std::move(smoothed);
  }
  return grid;
}

void write_terrain(std::ostream& os, const TerrainGrid& grid) {
  os << "terrain_version," << kTerrainFormatVersion << '\n';
  os << std::fixed << std::setprecision(6);
  os << "block_size," << grid.block_size << '\n';
  os << "r_g," << grid.r_g << '\n';
  os << "seed," << grid.seed << '\n';
  os << "rows," << grid.rows << '\n';
  os << "cols," << grid.cols << '\n';
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (c) os << ',';
      os << grid.at(r, c);
    }
    os << '\n';
  }
}

namespace {

std::string header_value(std::istream& is, const std::string& key) {
  std::string line;
  do {
    if (!std::getline(is, line)) throw std::runtime_error("terrain file truncated before '" + key + "'");
  } while (!line.empty() && line[0] == '#');
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.substr(0, comma) != key)
    throw std::runtime_error("terrain file: expected '" + key + "' header, got '" + line + "'");
  return line.substr(comma + 1);
}

}  // namespace

TerrainGrid read_terrain(std::istream& is) {
  const int version = std::stoi(header_value(is, "terrain_version"));
  if (version != kTerrainFormatVersion)
    throw std::runtime_error("unsupported terrain_version " + std::to_string(version));
  TerrainGrid grid;
  grid.block_size = std::stod(header_value(is, "block_size"));
  grid.r_g = std::stod(header_value(is, "r_g"));
  grid.sigma = rugosity_sigma(grid.r_g);
  grid.seed = std::stoull(header_value(is, "seed"));
  grid.rows = std::stoi(header_value(is, "rows"));
  grid.cols = std::stoi(header_value(is, "cols"));
  if (grid.rows < 1 || grid.cols < 1 || !(grid.block_size > 0))
    throw std::runtime_error("terrain file: invalid dimensions");
  grid.heights.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
  std::string line;
  for (int r = 0; r < grid.rows; ++r) {
    if (!std::getline(is, line)) throw std::runtime_error("terrain file: missing height rows");
    std::stringstream ss(line);
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      grid.heights.push_back(std::stod(cell));
      ++c;
    }
    if (c != grid.cols) throw std::runtime_error("terrain file: row " + std::to_string(r) + " has wrong width");
  }
  return grid;
}

void save_terrain(const std::string& path, const TerrainGrid& grid) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write terrain file " + path);
  write_terrain(os, grid);
}

TerrainGrid load_terrain(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open terrain file " + path);
  return read_terrain(is);
}

HeightDeltaModel HeightDeltaModel::gaussian(double sigma) {
  if (!(sigma >= 0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite and >= 0");
  HeightDeltaModel m;
  m.kind = Kind::gaussian;
  m.sigma = sigma;
  m.p1 = 0.5;
  return m;
}

HeightDeltaModel HeightDeltaModel::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical height model needs samples");
  std::sort(samples.begin(), samples.end());
  HeightDeltaModel m;
  m.kind = Kind::empirical;
  const auto nonpos = std::upper_bound(samples.begin(), samples.end(), 0.0) - samples.begin();
  m.p1 = static_cast<double>(nonpos) / static_cast<double>(samples.size());
  m.samples = std::move(samples);
  return m;
}

HeightDeltaModel load_height_samples(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open height sample file " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::string field = line.substr(0, line.find(','));
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      continue;  // header row
    }
  }
  return HeightDeltaModel::empirical(std::move(values));
}

double sample_dh(const HeightDeltaModel& model, Rng& rng) {
  if (model.kind == HeightDeltaModel::Kind::gaussian) {
    return model.sigma == 0.0 ? 0.0 : model.sigma * rng.normal();
  }
  if (model.samples.empty()) throw std::invalid_argument("empirical height model has no samples");
  const auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(model.samples.size()));
  return model.samples[std::min(idx, model.samples.size() - 1)];
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double tail_probability(const HeightDeltaModel& model, double threshold, DeltaCondition cond) {
  if (!(threshold >= 0)) throw std::invalid_argument("tail threshold must be >= 0");
  if (model.kind == HeightDeltaModel::Kind::gaussian) {
    if (model.sigma == 0.0) return 0.0;
    if (std::isinf(threshold)) return 0.0;
    // symmetric half-normal: both conditionals reduce to 2 * Phi(-t / sigma)
    return 2.0 * normal_cdf(-threshold / model.sigma);
  }
  const auto& s = model.samples;
  if (s.empty()) throw std::invalid_argument("empirical height model has no samples");
  const auto zero_hi = std::upper_bound(s.begin(), s.end(), 0.0);
  if (cond == DeltaCondition::dh_nonpositive) {
    const auto n = zero_hi - s.begin();
    if (n == 0) return 0.0;
    const auto deep = std::lower_bound(s.begin(), zero_hi, -threshold) - s.begin();
    return static_cast<double>(deep) / static_cast<double>(n);
  }
  const auto n = s.end() - zero_hi;
  if (n == 0) return 0.0;
  const auto high = s.end() - std::upper_bound(zero_hi, s.end(), threshold);
  return static_cast<double>(high) / static_cast<double>(n);
}

}  // namespace legwave
