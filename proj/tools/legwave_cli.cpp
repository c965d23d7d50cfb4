// legwave command line: gait dumps, terrain generation, model sweeps,
// model-vs-simulation validation, walks and controller comparisons.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "legwave/batch.hpp"
#include "legwave/config.hpp"
#include "legwave/control.hpp"
#include "legwave/csv.hpp"
#include "legwave/stats.hpp"

namespace fs = std::filesystem;
using namespace legwave;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::string seeds;
  int cycles = -1;
  int steps = -1;
  double tolerance = -1.0;
};

ExperimentSpec effective_spec(const Options& o) {
  ExperimentSpec spec = o.config.empty() ? ExperimentSpec{} : load_spec(o.config);
  if (!o.seeds.empty()) spec.seeds = parse_seed_list(o.seeds);
  if (o.cycles >= 0) spec.cycles = o.cycles;
  if (o.steps >= 0) spec.steps = o.steps;
  if (o.tolerance >= 0.0) spec.tolerance = o.tolerance;
  spec.validate();
  return spec;
}

class Output {
 public:
  Output(const std::string& dir, std::uint64_t hash) : dir_(dir), hash_(hash) {
    fs::create_directories(dir_);
  }

  /// Writes the body behind the provenance line in one go.
  void csv(const std::string& name, const std::string& body) const {
    std::ofstream os(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
    write_csv_preamble(os, hash_);
    os << body;
    std::cout << "wrote " << (dir_ / name).string() << '\n';
  }

 private:
  fs::path dir_;
  std::uint64_t hash_;
};

// Terrain sources shared by sweep, validate and walk.
struct TerrainSource {
  double r_g = 0.0;
  std::string label;
  std::shared_ptr<const TerrainGrid> file;  ///< null for generated terrain
};

std::vector<TerrainSource> terrain_sources(const ExperimentSpec& spec) {
  std::vector<TerrainSource> out;
  if (!spec.terrain_files.empty()) {
    for (const auto& path : spec.terrain_files) {
      auto grid = std::make_shared<const TerrainGrid>(load_terrain(path));
      out.push_back({grid->r_g, fs::path(path).filename().string(), grid});
    }
    return out;
  }
  for (double r : spec.r_g) out.push_back({r, "r_g=" + fmt(r, 2), nullptr});
  return out;
}

HeightDeltaModel height_model(const TerrainSource& t) {
  if (!t.file) return HeightDeltaModel::from_rugosity(t.r_g);
  return HeightDeltaModel::empirical(t.file->longitudinal_deltas());
}

int cmd_gait_dump(const ExperimentSpec& spec, const Options& o) {
  const Output out(o.out, spec_hash(spec));
  const GaitConfig& cfg = spec.gait;
  const int n = cfg.n_pairs;

  std::ostringstream map;
  write_contact_map_csv(map, ideal_contact_map(cfg, spec.steps, 1));
  out.csv("contact_map.csv", map.str());

  std::ostringstream joints;
  joints << "step,tau_b,tau_c";
  for (int i = 1; i <= n; ++i) joints << ",leg_l_" << i;
  for (int i = 1; i <= n; ++i) joints << ",leg_r_" << i;
  for (int i = 1; i <= n; ++i) joints << ",yaw_" << i;
  for (int i = 1; i <= n; ++i) joints << ",pitch_" << i;
  joints << '\n';
  const auto cycle = sample_cycle(cfg, spec.steps);
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const auto& c = cycle[k];
    joints << k << ',' << fmt(c.phase.tau_b) << ',' << fmt(c.phase.tau_c);
    for (double v : c.leg_angles_left) joints << ',' << fmt(v);
    for (double v : c.leg_angles_right) joints << ',' << fmt(v);
    for (double v : c.body_yaw) joints << ',' << fmt(v);
    for (double v : c.body_pitch) joints << ',' << fmt(v);
    joints << '\n';
  }
  out.csv("joint_angles.csv", joints.str());

  std::ostringstream slip;
  slip << "beta_deg,prob\n";
  const SlipDistribution dist = slip_distribution(cfg, spec.geometry, spec.slip_bins);
  for (std::size_t b = 0; b < dist.probs.size(); ++b)
    slip << fmt(dist.bin_centers[b]) << ',' << fmt(dist.probs[b], 9) << '\n';
  out.csv("slip_distribution.csv", slip.str());
  return 0;
}

int cmd_terrain_gen(const ExperimentSpec& spec, const Options& o) {
  const Output out(o.out, spec_hash(spec));
  const WalkSetup setup = walk_setup(spec, spec.cycles);
  std::ostringstream index;
  index << "file,r_g,seed,rows,cols,delta_std\n";
  for (double r : spec.r_g) {
    for (auto seed : spec.seeds) {
      const TerrainGrid grid = terrain_for(setup, r, seed);
      const std::string name = "terrain_rg" + fmt(r, 2) + "_seed" + std::to_string(seed) + ".csv";
      std::ostringstream body;
      write_terrain(body, grid);
      out.csv(name, body.str());
      const auto deltas = grid.longitudinal_deltas();
      index << name << ',' << fmt(r) << ',' << seed << ',' << grid.rows << ',' << grid.cols << ','
            << fmt(std::sqrt(stats::variance(deltas))) << '\n';
    }
  }
  out.csv("terrain_index.csv", index.str());
  return 0;
}

int cmd_model_sweep(const ExperimentSpec& spec, const Options& o) {
  const Output out(o.out, spec_hash(spec));
  std::vector<ModelSweepInput> inputs;
  for (const auto& t : terrain_sources(spec)) inputs.push_back({t.r_g, height_model(t)});
  const auto rows = model_sweep(spec.gait, spec.geometry, inputs, spec.av_grid, spec.m, spec.slip_bins,
                                spec.force_velocity_coeff);
  std::ostringstream body;
  body << "r_g,a_v,p_loss1,p_loss2,p_loss,gamma,gamma_ideal,p_e,v_min,v_max\n";
  for (const auto& r : rows) {
    body << fmt(r.r_g) << ',' << fmt(r.a_v) << ',' << fmt(r.loss.p_loss1) << ',' << fmt(r.loss.p_loss2)
         << ',' << fmt(r.loss.p_loss) << ',' << fmt(r.loss.gamma) << ',' << fmt(r.loss.gamma_ideal) << ','
         << fmt(r.loss.p_e) << ',' << fmt(r.band.v_ratio_min) << ',' << fmt(r.band.v_ratio_max) << '\n';
  }
  out.csv("model_sweep.csv", body.str());
  return 0;
}

std::vector<WalkJob> walk_jobs(const ExperimentSpec& spec, const std::vector<TerrainSource>& terrains) {
  std::vector<WalkJob> jobs;
  for (const auto& t : terrains)
    for (double a : spec.av_grid)
      for (auto seed : spec.seeds) jobs.push_back({t.r_g, a, seed, t.file});
  return jobs;
}

int cmd_validate(const ExperimentSpec& spec, const Options& o) {
  const Output out(o.out, spec_hash(spec));
  const auto terrains = terrain_sources(spec);
  WalkSetup setup = walk_setup(spec, spec.cycles);
  const auto jobs = walk_jobs(spec, terrains);
  const auto walks = run_walks(setup, jobs);

  std::ostringstream body;
  body << "terrain,r_g,a_v,seeds,sim_gamma,sim_gamma_se,sensor_gamma,pred_gamma,deviation,"
          "too_deep_rate,pred_too_deep_rate,deformed_rate,pred_deformed_rate,pass\n";
  const std::size_t ns = spec.seeds.size();
  double worst = 0.0;
  std::size_t idx = 0;
  for (const auto& t : terrains) {
    const HeightDeltaModel model = height_model(t);
    for (double a : spec.av_grid) {
      GaitConfig cfg = spec.gait;
      cfg.a_v = a;
      const LossModelOutput pred = predict_gamma(spec.geometry, cfg, model, spec.m);
      std::vector<double> g, gs;
      long long deep = 0, deformed = 0, samples = 0;
      for (std::size_t k = 0; k < ns; ++k, ++idx) {
        g.push_back(walks[idx].mean_gamma_true);
        gs.push_back(walks[idx].mean_gamma);
        deep += walks[idx].too_deep;
        deformed += walks[idx].deformed;
        samples += walks[idx].retraction_samples;
      }
      const double sim = stats::mean(g);
      const double dev = std::fabs(sim - pred.gamma);
      worst = std::max(worst, dev);
      const double n = static_cast<double>(std::max(samples, 1LL));
      body << t.label << ',' << fmt(t.r_g) << ',' << fmt(a) << ',' << ns << ',' << fmt(sim) << ','
           << fmt(std::sqrt(stats::variance(g) / static_cast<double>(ns))) << ',' << fmt(stats::mean(gs))
           << ',' << fmt(pred.gamma) << ',' << fmt(dev) << ',' << fmt(deep / n) << ','
           << fmt(model.p1 * pred.p_loss1 - model.p1 * (1.0 - pred.gamma_ideal)) << ','
           << fmt(deformed / n) << ','
           << fmt((1.0 - model.p1) * pred.p_loss2 - (1.0 - model.p1) * (1.0 - pred.gamma_ideal)) << ','
           << (dev <= spec.tolerance ? 1 : 0) << '\n';
    }
  }
  out.csv("validation.csv", body.str());
  const bool pass = worst <= spec.tolerance;
  std::cout << "max |sim - predicted| gamma = " << fmt(worst) << " (tolerance " << fmt(spec.tolerance)
            << "): " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? 0 : kExitValidation;
}

int cmd_walk(const ExperimentSpec& spec, const Options& o) {
  const Output out(o.out, spec_hash(spec));
  const auto terrains = terrain_sources(spec);
  const WalkSetup setup = walk_setup(spec, spec.cycles);
  const auto jobs = walk_jobs(spec, terrains);
  const auto walks = run_walks(setup, jobs);

  std::ostringstream body;
  body << "seed,r_g,a_v,cycle,gamma,gamma_true,v_ratio\n";
  for (const auto& w : walks) {
    for (std::size_t c = 0; c < w.gamma_per_cycle.size(); ++c) {
      body << w.seed << ',' << fmt(w.r_g) << ',' << fmt(w.a_v) << ',' << c << ',' << fmt(w.gamma_per_cycle[c])
           << ',' << fmt(w.gamma_true_per_cycle[c]) << ',' << fmt(w.speed_per_cycle[c]) << '\n';
    }
  }
  out.csv("walk_summary.csv", body.str());

  // Full record of the first job for inspection.
  const WalkJob& first = jobs.front();
  const TerrainGrid terrain = first.terrain ? *first.terrain : terrain_for(setup, first.r_g, first.seed);
  GaitConfig cfg = spec.gait;
  cfg.a_v = first.a_v;
  const WalkResult r = simulate_walk(cfg, spec.geometry, terrain, spec.cycles, spec.steps, spec.sensor,
                                     first.seed, setup.options);
  std::ostringstream ideal, measured, events;
  write_contact_map_csv(ideal, r.ideal);
  write_contact_map_csv(measured, r.measured);
  events << "leg,step,cause\n";
  for (const auto& e : r.loss_events) events << e.leg << ',' << e.step << ',' << to_string(e.cause) << '\n';
  out.csv("contact_map_ideal.csv", ideal.str());
  out.csv("contact_map_measured.csv", measured.str());
  out.csv("loss_events.csv", events.str());
  return 0;
}

int cmd_controller_compare(const ExperimentSpec& spec, const Options& o) {
  const Output out(o.out, spec_hash(spec));
  const WalkSetup setup = walk_setup(spec, spec.compare_cycles);
  const auto scenarios = modulation_sweep(spec.controller, spec.compare_r_g, spec.update_every_sweep);
  const Comparison cmp = compare_controllers(setup, scenarios, spec.seeds);

  std::ostringstream summary;
  write_comparison_csv(summary, cmp);
  out.csv("comparison.csv", summary.str());

  std::ostringstream seeds;
  seeds << "scenario,seed,mean_speed,distance_cm\n";
  std::ostringstream traces;
  traces << "scenario,seed,cycle,gamma_s,a_v_deg,v_ratio,displacement_cm\n";
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    for (std::size_t k = 0; k < spec.seeds.size(); ++k) {
      const TrialRecord& t = cmp.trials[s][k];
      seeds << scenarios[s].name << ',' << spec.seeds[k] << ',' << fmt(t.mean_speed()) << ','
            << fmt(t.distance()) << '\n';
      for (int c = 0; c < t.cycles(); ++c) {
        const auto i = static_cast<std::size_t>(c);
        traces << scenarios[s].name << ',' << spec.seeds[k] << ',' << c << ',' << fmt(t.gamma_s[i]) << ','
               << fmt(t.a_v[i]) << ',' << fmt(t.v_ratio[i]) << ',' << fmt(t.displacement[i]) << '\n';
      }
    }
  }
  out.csv("seed_speeds.csv", seeds.str());
  out.csv("traces.csv", traces.str());
  for (const auto& s : cmp.scenarios) {
    std::cout << s.name << ": mean speed " << fmt(s.mean_speed, 4) << ", variance " << fmt(s.speed_variance, 5)
              << ", wins " << s.wins << '/' << (s.wins + s.losses) << ", p " << fmt(s.sign_p, 4) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"legwave: multi-legged gait, terrain contact and controller experiments"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seeds", opt.seeds, "seed list, e.g. 1-20 or 3,5,9");
    sub->add_option("--cycles", opt.cycles, "gait cycles per walk")->check(CLI::NonNegativeNumber);
    sub->add_option("--steps", opt.steps, "samples per gait cycle")->check(CLI::NonNegativeNumber);
    sub->add_option("--tolerance", opt.tolerance, "validation tolerance on gamma")->check(CLI::NonNegativeNumber);
  };

  using Handler = int (*)(const ExperimentSpec&, const Options&);
  const std::pair<const char*, std::pair<const char*, Handler>> commands[] = {
      {"gait-dump", {"ideal contact map, joint angles and slip histogram for one cycle", cmd_gait_dump}},
      {"terrain-gen", {"generate terrain files for each r_g and seed", cmd_terrain_gen}},
      {"model-sweep", {"analytic loss and speed predictions over (r_g, a_v)", cmd_model_sweep}},
      {"validate", {"compare simulated and predicted contact ratio", cmd_validate}},
      {"walk", {"simulate walks and write per-cycle summaries", cmd_walk}},
      {"controller-compare", {"open-loop versus feedback trials on paired seeds", cmd_controller_compare}},
  };
  Handler chosen = nullptr;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    add_common(sub);
    sub->callback([&chosen, h = entry.second] { chosen = h; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (opt.steps == 0) throw ConfigError("--steps must be positive");
    if (opt.cycles == 0) throw ConfigError("--cycles must be positive");
    const ExperimentSpec spec = effective_spec(opt);
    return chosen(spec, opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
