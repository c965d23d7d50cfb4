#include "legwave/control.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "legwave/csv.hpp"
#include "legwave/stats.hpp"

namespace legwave {

void ControllerConfig::validate() const {
  if (!(k_p > 0.0)) throw std::invalid_argument("k_p must be positive");
  if (!(gamma_set > 0.0 && gamma_set <= 1.0)) throw std::invalid_argument("gamma_set must lie in (0, 1]");
  if (!(av_min >= 0.0 && av_min <= av_max)) throw std::invalid_argument("need 0 <= av_min <= av_max");
  if (!(av_max < 90.0)) throw std::invalid_argument("av_max must be below 90 degrees");
  if (update_every < 1) throw std::invalid_argument("update_every must be >= 1");
  if (!(open_loop_av >= 0.0 && open_loop_av < 90.0))
    throw std::invalid_argument("open_loop_av must lie in [0, 90)");
}

double update_av(const ControllerConfig& cc, double gamma_s) {
  if (!(gamma_s >= 0.0 && gamma_s <= 1.0)) throw std::invalid_argument("gamma_s must lie in [0, 1]");
  return std::clamp(cc.k_p * (cc.gamma_set - gamma_s), cc.av_min, cc.av_max);
}

double TrialRecord::mean_speed() const { return stats::mean(v_ratio); }
double TrialRecord::speed_variance() const { return stats::variance(v_ratio); }
double TrialRecord::distance() const {
  return std::accumulate(displacement.begin(), displacement.end(), 0.0);
}

TrialRecord run_trial(const GaitConfig& cfg, const RobotGeometry& geom, const TerrainGrid& terrain,
                      const ControllerConfig& cc, int cycles, int steps, SensorModel sensor,
                      std::uint64_t seed, WalkOptions options) {
  cc.validate();
  if (cycles < 1) throw std::invalid_argument("run_trial needs cycles >= 1");
  Walker walker(cfg, geom, terrain, steps, sensor, seed, options);
  TrialRecord rec;
  double a_v = cc.mode == ControlMode::feedback ? cc.av_min : cc.open_loop_av;
  for (int c = 0; c < cycles; ++c) {
    const CycleOutcome out = walker.step_cycle(a_v);
    rec.gamma_s.push_back(out.gamma_measured);
    rec.a_v.push_back(a_v);
    rec.v_ratio.push_back(out.v_ratio);
    rec.displacement.push_back(out.displacement);
    if (cc.mode == ControlMode::feedback && (c + 1) % cc.update_every == 0)
      a_v = update_av(cc, out.gamma_measured);
  }
  return rec;
}

void write_trial_csv(std::ostream& os, const TrialRecord& rec) {
  os << "cycle,gamma_s,a_v_deg,v_ratio,displacement_cm\n";
  for (int c = 0; c < rec.cycles(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    os << c << ',' << fmt(rec.gamma_s[i]) << ',' << fmt(rec.a_v[i]) << ',' << fmt(rec.v_ratio[i])
       << ',' << fmt(rec.displacement[i]) << '\n';
  }
  os << "summary," << fmt(stats::mean(rec.gamma_s)) << ',' << fmt(stats::mean(rec.a_v)) << ','
     << fmt(rec.mean_speed()) << ',' << fmt(rec.distance()) << '\n';
}

Comparison compare_controllers(const WalkSetup& setup, std::span<const Scenario> scenarios,
                               std::span<const std::uint64_t> seeds, Exec exec) {
  if (scenarios.size() < 2) throw std::invalid_argument("compare_controllers needs >= 2 scenarios");
  if (seeds.empty()) throw std::invalid_argument("compare_controllers needs seeds");
  for (const auto& s : scenarios) s.controller.validate();

  const std::size_t ns = scenarios.size();
  const std::size_t nk = seeds.size();
  Comparison cmp;
  cmp.trials.assign(ns, std::vector<TrialRecord>(nk));
  for_each_index(ns * nk, exec, [&](std::size_t idx) {
    const std::size_t s = idx / nk;
    const std::size_t k = idx % nk;
    const TerrainGrid terrain = terrain_for(setup, scenarios[s].r_g, seeds[k]);
    cmp.trials[s][k] = run_trial(setup.cfg, setup.geom, terrain, scenarios[s].controller, setup.cycles,
                                 setup.steps, setup.sensor, seeds[k], setup.options);
  });

  for (std::size_t s = 0; s < ns; ++s) {
    ScenarioStats st;
    st.name = scenarios[s].name;
    st.r_g = scenarios[s].r_g;
    std::vector<double> all_v, all_g, all_a;
    for (const auto& t : cmp.trials[s]) {
      st.seed_speed.push_back(t.mean_speed());
      all_v.insert(all_v.end(), t.v_ratio.begin(), t.v_ratio.end());
      all_g.insert(all_g.end(), t.gamma_s.begin(), t.gamma_s.end());
      all_a.insert(all_a.end(), t.a_v.begin(), t.a_v.end());
    }
    st.mean_speed = stats::mean(all_v);
    st.speed_variance = stats::variance(all_v);
    st.mean_gamma = stats::mean(all_g);
    st.mean_av = stats::mean(all_a);
    cmp.scenarios.push_back(std::move(st));
  }
  const auto& base = cmp.scenarios.front().seed_speed;
  for (auto& st : cmp.scenarios) {
    for (std::size_t k = 0; k < nk; ++k) {
      if (st.seed_speed[k] > base[k]) ++st.wins;
      else if (st.seed_speed[k] < base[k]) ++st.losses;
    }
    st.sign_p = stats::sign_test_p(st.wins, st.wins + st.losses);
  }
  return cmp;
}

std::vector<Scenario> modulation_sweep(const ControllerConfig& base, double r_g,
                                       std::span<const int> update_every) {
  std::vector<Scenario> out;
  ControllerConfig open = base;
  open.mode = ControlMode::open_loop;
  out.push_back({"open_loop", open, r_g});
  for (int u : update_every) {
    ControllerConfig fb = base;
    fb.mode = ControlMode::feedback;
    fb.update_every = u;
    out.push_back({"feedback_every_" + std::to_string(u), fb, r_g});
  }
  return out;
}

void write_comparison_csv(std::ostream& os, const Comparison& cmp) {
  os << "name,r_g,mean_speed,speed_variance,mean_gamma,mean_av,wins,losses,sign_p\n";
  for (const auto& s : cmp.scenarios) {
    os << s.name << ',' << fmt(s.r_g) << ',' << fmt(s.mean_speed) << ',' << fmt(s.speed_variance, 8)
       << ',' << fmt(s.mean_gamma) << ',' << fmt(s.mean_av) << ',' << s.wins << ',' << s.losses << ','
       << fmt(s.sign_p, 8) << '\n';
  }
}

std::string to_string(ControlMode mode) { return mode == ControlMode::feedback ? "feedback" : "open_loop"; }

ControlMode control_mode_from_string(const std::string& s) {
  if (s == "feedback") return ControlMode::feedback;
  if (s == "open_loop") return ControlMode::open_loop;
  throw std::invalid_argument("unknown controller mode '" + s + "'");
}

}  // namespace legwave
