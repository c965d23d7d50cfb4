#include "legwave/batch.hpp"

#include <stdexcept>

namespace legwave {

std::uint64_t terrain_seed(std::uint64_t seed) noexcept { return derive_seed(seed, 2); }

TerrainGrid terrain_for(const WalkSetup& setup, double r_g, std::uint64_t seed) {
  const int rows = required_rows(setup.cfg, setup.geom, setup.cycles, setup.block_size);
  return generate_terrain(r_g, rows, setup.cols, setup.block_size,
                          terrain_seed(setup.reseed_terrain ? seed : 0));
}

WalkSummary run_walk(const WalkSetup& setup, const WalkJob& job) {
  std::shared_ptr<const TerrainGrid> terrain = job.terrain;
  if (!terrain) terrain = std::make_shared<const TerrainGrid>(terrain_for(setup, job.r_g, job.seed));
  Walker walker(setup.cfg, setup.geom, *terrain, setup.steps, setup.sensor, job.seed, setup.options);
  WalkSummary s;
  s.r_g = job.r_g;
  s.a_v = job.a_v;
  s.seed = job.seed;
  for (int c = 0; c < setup.cycles; ++c) {
    const CycleOutcome out = walker.step_cycle(job.a_v);
    s.too_deep += out.too_deep;
    s.deformed += out.deformed;
    s.lifted += out.lifted;
  }
  WalkResult r = walker.take_result();
  s.mean_gamma = r.mean_gamma();
  s.mean_speed = r.mean_speed_ratio();
  s.gamma_per_cycle = std::move(r.gamma_per_cycle);
  s.gamma_true_per_cycle = std::move(r.gamma_true_per_cycle);
  s.speed_per_cycle = std::move(r.forward_speed_ratio);
  double acc = 0.0;
  for (double g : s.gamma_true_per_cycle) acc += g;
  s.mean_gamma_true = s.gamma_true_per_cycle.empty() ? 0.0 : acc / s.gamma_true_per_cycle.size();
  s.retraction_samples = r.retraction_samples;
  return s;
}

std::vector<WalkSummary> run_walks(const WalkSetup& setup, std::span<const WalkJob> jobs, Exec exec) {
  std::vector<WalkSummary> out(jobs.size());
  for_each_index(jobs.size(), exec, [&](std::size_t i) { out[i] = run_walk(setup, jobs[i]); });
  return out;
}

std::vector<ModelRow> model_sweep(const GaitConfig& cfg, const RobotGeometry& geom,
                                  std::span<const ModelSweepInput> terrains,
                                  std::span<const double> av_grid, int m, int slip_bins,
                                  double coeff, Exec exec) {
  if (av_grid.empty()) throw std::invalid_argument("model sweep needs a non-empty a_v grid");
  const SlipDistribution dist = slip_distribution(cfg, geom, slip_bins);
  std::vector<ModelRow> rows(terrains.size() * av_grid.size());
  for_each_index(rows.size(), exec, [&](std::size_t i) {
    const auto& t = terrains[i / av_grid.size()];
    GaitConfig c = cfg;
    c.a_v = av_grid[i % av_grid.size()];
    ModelRow& row = rows[i];
    row.r_g = t.r_g;
    row.a_v = c.a_v;
    row.loss = predict_gamma(geom, c, t.model, m);
    row.band = predict_speed_band(dist, row.loss.gamma, coeff);
  });
  return rows;
}

}  // namespace legwave
