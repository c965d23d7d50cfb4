#include "legwave/contact_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace legwave {

namespace {

struct FootExtent {
  double min_x = 0.0;
  double max_x = 0.0;
};

FootExtent stance_extent(const GaitConfig& cfg, const RobotGeometry& geom) {
  FootExtent e{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  const double end = kTwoPi * cfg.duty;
  for (int leg = 0; leg < cfg.legs(); ++leg) {
    const Side side = map_leg_side(cfg, leg);
    const int pair = map_leg_pair(cfg, leg);
    for (int j = 0; j <= 64; ++j) {
      const Point2 p = stance_foot_position(cfg, geom, side, pair, end * j / 64);
      e.min_x = std::min(e.min_x, p.x);
      e.max_x = std::max(e.max_x, p.x);
    }
  }
  return e;
}

// Start far enough forward that the rearmost foothold and the block behind
// it are both on the grid.
double start_position(const FootExtent& e, double block_size) { return -e.min_x + 2.0 * block_size; }

}  // namespace

void SensorModel::validate() const {
  if (!(flip_prob >= 0.0 && flip_prob < 1.0)) throw std::invalid_argument("flip_prob must lie in [0, 1)");
  if (latch_steps < 0) throw std::invalid_argument("latch_steps must be >= 0");
}

ContactMap::ContactMap(int legs_, int steps_, int cycles_, MapKind kind_)
    : legs(legs_), steps(steps_), cycles(cycles_), kind(kind_),
      bits(static_cast<std::size_t>(legs_) * static_cast<std::size_t>(steps_) *
               static_cast<std::size_t>(cycles_),
           0) {}

void ContactMap::grow_cycle() {
  ++cycles;
  bits.resize(static_cast<std::size_t>(legs) * static_cast<std::size_t>(steps) *
                  static_cast<std::size_t>(cycles),
              0);
}

Side map_leg_side(const GaitConfig& cfg, int leg) { return leg < cfg.n_pairs ? Side::left : Side::right; }
int map_leg_pair(const GaitConfig& cfg, int leg) { return leg < cfg.n_pairs ? leg + 1 : leg - cfg.n_pairs + 1; }

ContactMap ideal_contact_map(const GaitConfig& cfg, int steps, int cycles) {
  cfg.validate();
  if (steps < 4) throw std::invalid_argument("contact map needs steps >= 4");
  ContactMap map(cfg.legs(), steps, cycles, MapKind::ideal);
  for (int k = 0; k < steps; ++k) {
    const double tau_c = cfg.contact_phase(kTwoPi * k / steps);
    for (int leg = 0; leg < cfg.legs(); ++leg) {
      const bool c = ideal_contact(cfg, tau_c, map_leg_side(cfg, leg), map_leg_pair(cfg, leg));
      for (int cyc = 0; cyc < cycles; ++cyc) map.set(leg, static_cast<long long>(cyc) * steps + k, c);
    }
  }
  return map;
}

double measure_gamma(const ContactMap& ideal, const ContactMap& measured) {
  if (ideal.kind != MapKind::ideal) throw std::invalid_argument("first map must be of ideal kind");
  if (ideal.legs != measured.legs || ideal.steps != measured.steps || ideal.cycles != measured.cycles)
    throw std::invalid_argument("contact maps differ in shape");
  double acc = 0.0;
  int cells = 0;
  for (int cyc = 0; cyc < ideal.cycles; ++cyc) {
    for (int leg = 0; leg < ideal.legs; ++leg) {
      int expected = 0;
      int kept = 0;
      for (int k = 0; k < ideal.steps; ++k) {
        const long long t = static_cast<long long>(cyc) * ideal.steps + k;
        if (!ideal.at(leg, t)) continue;
        ++expected;
        if (measured.at(leg, t)) ++kept;
      }
      if (expected == 0) continue;
      acc += static_cast<double>(kept) / expected;
      ++cells;
    }
  }
  return cells == 0 ? 1.0 : acc / cells;
}

void write_contact_map_csv(std::ostream& os, const ContactMap& map) {
  os << "cycle,step";
  for (int leg = 1; leg <= map.legs; ++leg) os << ",leg_" << leg;
  os << '\n';
  for (int cyc = 0; cyc < map.cycles; ++cyc) {
    for (int k = 0; k < map.steps; ++k) {
      const long long t = static_cast<long long>(cyc) * map.steps + k;
      os << cyc << ',' << k;
      for (int leg = 0; leg < map.legs; ++leg) os << ',' << (map.at(leg, t) ? 1 : 0);
      os << '\n';
    }
  }
}

const char* to_string(LossCause cause) noexcept {
  switch (cause) {
    case LossCause::lifted: return "lifted";
    case LossCause::too_deep: return "too_deep";
    case LossCause::deformed: return "deformed";
  }
  return "unknown";
}

double WalkResult::mean_gamma() const {
  if (gamma_per_cycle.empty()) return 0.0;
  return std::accumulate(gamma_per_cycle.begin(), gamma_per_cycle.end(), 0.0) /
         static_cast<double>(gamma_per_cycle.size());
}

double WalkResult::mean_speed_ratio() const {
  if (forward_speed_ratio.empty()) return 0.0;
  return std::accumulate(forward_speed_ratio.begin(), forward_speed_ratio.end(), 0.0) /
         static_cast<double>(forward_speed_ratio.size());
}

double advance_per_cycle(const GaitConfig& cfg, const RobotGeometry& geom, double v_ratio) {
  return flat_stride(cfg, geom) * v_ratio;
}

std::vector<double> advance_model(const GaitConfig& cfg, const RobotGeometry& geom, int steps,
                                  double v_ratio) {
  if (steps < 1) throw std::invalid_argument("advance_model needs steps >= 1");
  return std::vector<double>(static_cast<std::size_t>(steps),
                             advance_per_cycle(cfg, geom, v_ratio) / steps);
}

int required_rows(const GaitConfig& cfg, const RobotGeometry& geom, int cycles, double block_size) {
  const FootExtent e = stance_extent(cfg, geom);
  const double travel = static_cast<double>(cycles + 1) * flat_stride(cfg, geom) * kSpeedRatioMax;
  return static_cast<int>(std::ceil((start_position(e, block_size) + e.max_x + travel) / block_size)) + 2;
}

WalkOffTerrain::WalkOffTerrain(int cycle, int row)
    : std::out_of_range("robot walked off the terrain during cycle " + std::to_string(cycle) +
                        " (needed row " + std::to_string(row) + ")"),
      cycle_(cycle) {}

Walker::Walker(const GaitConfig& cfg, const RobotGeometry& geom, const TerrainGrid& terrain,
               int steps, SensorModel sensor, std::uint64_t seed, WalkOptions options)
    : cfg_(cfg), geom_(geom), terrain_(&terrain), steps_(steps), sensor_(sensor),
      options_(options), sensor_rng_(derive_seed(seed, 1)), legs_(cfg.legs()) {
  cfg_.validate();
  geom_.validate();
  sensor_.validate();
  if (steps < 4 || steps % 2 != 0) throw std::invalid_argument("walk needs an even steps >= 4");

  stride_ = flat_stride(cfg_, geom_);
  table_.resize(static_cast<std::size_t>(legs_) * static_cast<std::size_t>(steps_));
  thrust_norm_.assign(static_cast<std::size_t>(legs_), 0.0);
  GaitConfig unit = cfg_;
  unit.a_v = 1.0;
  const double dphase = kTwoPi / steps_;
  for (int leg = 0; leg < legs_; ++leg) {
    const Side side = map_leg_side(cfg_, leg);
    const int pair = map_leg_pair(cfg_, leg);
    const StanceTable stance(cfg_, geom_, side, pair);
    const Point2 joint{-static_cast<double>(pair - 1) * geom_.module_length, 0.0};
    std::vector<bool> in_stance(static_cast<std::size_t>(steps_));
    for (int k = 0; k < steps_; ++k) {
      const double tau_c = cfg_.contact_phase(kTwoPi * k / steps_);
      const double phase = leg_local_phase(cfg_, tau_c, side, pair);
      auto& s = table_[static_cast<std::size_t>(leg) * steps_ + k];
      s.stance = phase < stance.stance_end();
      in_stance[static_cast<std::size_t>(k)] = s.stance;
      if (!s.stance) continue;
      const Point2 f = stance.foot(phase);
      s.foot = {joint.x + f.x, joint.y + f.y};
      s.recoverable = recoverable_height(geom_, stance.retraction(phase));
      s.thrust_cos = stance.thrust_cos(phase);
      s.thrust_weight = stance.slip_length(phase, std::min(phase + dphase, stance.stance_end()));
      s.unit_pitch = stance_pitch(unit, side, pair, phase);
      thrust_norm_[static_cast<std::size_t>(leg)] += s.thrust_weight;
    }
    for (int k = 0; k < steps_; ++k) {
      auto& s = table_[static_cast<std::size_t>(leg) * steps_ + k];
      s.onset = s.stance && !in_stance[static_cast<std::size_t>((k + steps_ - 1) % steps_)];
    }
  }

  body_x_ = start_position(stance_extent(cfg_, geom_), terrain.block_size);
  v_prev_ = options_.initial_speed_ratio;
  foothold_dh_.assign(static_cast<std::size_t>(legs_), std::numeric_limits<double>::quiet_NaN());
  latch_out_.assign(static_cast<std::size_t>(legs_), 0);
  latch_count_.assign(static_cast<std::size_t>(legs_), 0);
  result_.ideal = ContactMap(legs_, steps_, 0, MapKind::ideal);
  result_.truth = ContactMap(legs_, steps_, 0, MapKind::measured);
  result_.measured = ContactMap(legs_, steps_, 0, MapKind::measured);
}

CycleOutcome Walker::step_cycle(double a_v) {
  if (!(a_v >= 0.0 && a_v < 90.0)) throw std::invalid_argument("a_v must lie in [0, 90) degrees");
  const TerrainGrid& terrain = *terrain_;
  const double advance = stride_ * std::max(v_prev_, options_.min_advance_ratio);
  const double half_width = 0.5 * terrain.width();

  result_.ideal.grow_cycle();
  result_.truth.grow_cycle();
  result_.measured.grow_cycle();

  CycleOutcome out;
  std::vector<int> expected(static_cast<std::size_t>(legs_), 0);
  std::vector<int> kept_true(static_cast<std::size_t>(legs_), 0);
  std::vector<int> kept_measured(static_cast<std::size_t>(legs_), 0);
  std::vector<double> thrust(static_cast<std::size_t>(legs_), 0.0);

  for (int k = 0; k < steps_; ++k) {
    const long long t = static_cast<long long>(cycle_) * steps_ + k;
    const double body_x = body_x_ + advance * k / steps_;
    for (int leg = 0; leg < legs_; ++leg) {
      const auto li = static_cast<std::size_t>(leg);
      const Sample& s = sample(leg, k);
      bool contact = false;
      if (s.stance) {
        result_.ideal.set(leg, t, true);
        ++expected[li];
        if (s.onset || std::isnan(foothold_dh_[li])) {
          const int row = static_cast<int>(std::floor((body_x + s.foot.x) / terrain.block_size));
          if (row < 1 || row >= terrain.rows) throw WalkOffTerrain(cycle_, row);
          const int col = std::clamp(
              static_cast<int>(std::floor((s.foot.y + half_width) / terrain.block_size)), 0,
              terrain.cols - 1);
          foothold_dh_[li] = terrain.at(row, col) - terrain.at(row - 1, col);
        }
        const double dh = foothold_dh_[li];
        const double reach = foot_reach(geom_, a_v * s.unit_pitch);
        const double lift = geom_.h_l - reach;
        std::optional<LossCause> cause;
        if (lift > geom_.lift_slack) {
          cause = LossCause::lifted;
        } else if (dh <= 0.0 && -dh > reach) {
          cause = LossCause::too_deep;
        } else if (dh > 0.0 && dh - std::max(lift, 0.0) > s.recoverable) {
          cause = LossCause::deformed;
        }
        contact = !cause.has_value();
        if (contact) {
          ++kept_true[li];
          thrust[li] += s.thrust_weight * s.thrust_cos;
        } else {
          result_.loss_events.push_back({leg + 1, t, *cause});
          switch (*cause) {
            case LossCause::lifted: ++out.lifted; break;
            case LossCause::too_deep: ++out.too_deep; break;
            case LossCause::deformed: ++out.deformed; break;
          }
        }
      } else {
        foothold_dh_[li] = std::numeric_limits<double>::quiet_NaN();
      }
      result_.truth.set(leg, t, contact);

      // sensor channel: i.i.d. flips then debounce
      bool raw = contact;
      if (sensor_rng_.uniform() < sensor_.flip_prob) raw = !raw;
      if (raw == (latch_out_[li] != 0)) {
        latch_count_[li] = 0;
      } else if (++latch_count_[li] > sensor_.latch_steps) {
        latch_out_[li] = raw ? 1 : 0;
        latch_count_[li] = 0;
      }
      const bool measured = latch_out_[li] != 0;
      result_.measured.set(leg, t, measured);
      if (s.stance && measured) ++kept_measured[li];
    }
  }

  double g_true = 0.0;
  double g_meas = 0.0;
  double thrust_mean = 0.0;
  for (int leg = 0; leg < legs_; ++leg) {
    const auto li = static_cast<std::size_t>(leg);
    out.retraction_samples += expected[li];
    if (expected[li] == 0) continue;
    g_true += static_cast<double>(kept_true[li]) / expected[li];
    g_meas += static_cast<double>(kept_measured[li]) / expected[li];
    if (thrust_norm_[li] > 0.0) thrust_mean += thrust[li] / thrust_norm_[li];
  }
  out.gamma_true = g_true / legs_;
  out.gamma_measured = g_meas / legs_;
  thrust_mean /= legs_;
  out.v_ratio = speed_from_friction(thrust_mean - (1.0 - out.gamma_true), options_.force_velocity_coeff);
  out.displacement = advance;

  body_x_ += advance;
  v_prev_ = out.v_ratio;
  ++cycle_;

  result_.gamma_per_cycle.push_back(out.gamma_measured);
  result_.gamma_true_per_cycle.push_back(out.gamma_true);
  result_.forward_speed_ratio.push_back(out.v_ratio);
  result_.displacement.push_back(out.displacement);
  result_.retraction_samples += out.retraction_samples;
  return out;
}

WalkResult Walker::take_result() { return std::move(result_); }

WalkResult simulate_walk(const GaitConfig& cfg, const RobotGeometry& geom,
                         const TerrainGrid& terrain, int cycles, int steps, SensorModel sensor,
                         std::uint64_t seed, WalkOptions options) {
  if (cycles < 1) throw std::invalid_argument("simulate_walk needs cycles >= 1");
  Walker walker(cfg, geom, terrain, steps, sensor, seed, options);
  for (int c = 0; c < cycles; ++c) walker.step_cycle(cfg.a_v);
  return walker.take_result();
}

void write_walk_summary_header(std::ostream& os) { os << "seed,r_g,a_v,cycle,gamma,v_ratio\n"; }

void write_walk_summary_rows(std::ostream& os, std::uint64_t seed, double r_g, double a_v,
                             const WalkResult& result) {
  char buf[160];
  for (std::size_t c = 0; c < result.gamma_per_cycle.size(); ++c) {
    std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,%zu,%.6f,%.6f\n",
                  static_cast<unsigned long long>(seed), r_g, a_v, c, result.gamma_per_cycle[c],
                  result.forward_speed_ratio[c]);
    os << buf;
  }
}

}  // namespace legwave
