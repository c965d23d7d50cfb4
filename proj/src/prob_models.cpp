#include "legwave/prob_models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace legwave {

namespace {

constexpr double kGammaTol = 1e-12;

std::vector<double> bin_cosines(const SlipDistribution& dist) {
  std::vector<double> c(dist.bin_centers.size());
  std::transform(dist.bin_centers.begin(), dist.bin_centers.end(), c.begin(),
                 [](double b) { return std::cos(deg2rad(b)); });
  return c;
}

// Fill probability mass `gamma` in the given bin order.
WeightVector greedy_fill(const SlipDistribution& dist, const std::vector<std::size_t>& order,
                         double gamma) {
  WeightVector wv;
  wv.w.assign(dist.probs.size(), 0.0);
  double remaining = gamma;
  for (std::size_t idx : order) {
    const double p = dist.probs[idx];
    if (p <= 0.0) continue;
    if (remaining <= 0.0) break;
    const double take = std::min(1.0, remaining / p);
    wv.w[idx] = take;
    remaining -= take * p;
  }
  return wv;
}

}  // namespace

double friction_objective(const SlipDistribution& dist, std::span<const double> w) {
  if (w.size() != dist.probs.size()) throw std::invalid_argument("weight vector size mismatch");
  double thrust = 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    thrust += w[i] * std::cos(deg2rad(dist.bin_centers[i])) * dist.probs[i];
    kept += w[i] * dist.probs[i];
  }
  return thrust - (1.0 - kept);
}

FrictionExtremes friction_extremes(const SlipDistribution& dist, double gamma) {
  if (!(gamma >= -kGammaTol && gamma <= 1.0 + kGammaTol))
    throw std::invalid_argument("gamma must lie in [0, 1]");
  gamma = std::clamp(gamma, 0.0, 1.0);
  const double mass = std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0);
  if (mass <= 0.0) throw std::domain_error("slip distribution has no probability mass");
  if (gamma > mass + 1e-9) throw std::domain_error("gamma infeasible for this slip distribution");

  const auto cosines = bin_cosines(dist);
  std::vector<std::size_t> order(cosines.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cosines[a] > cosines[b]; });

  FrictionExtremes ext;
  ext.w_max = greedy_fill(dist, order, gamma);
  std::reverse(order.begin(), order.end());
  ext.w_min = greedy_fill(dist, order, gamma);
  ext.f_max = friction_objective(dist, ext.w_max.w);
  ext.f_min = friction_objective(dist, ext.w_min.w);
  if (ext.f_min > ext.f_max) std::swap(ext.f_min, ext.f_max);
  return ext;
}

FrictionPrediction friction_bounds(const SlipDistribution& dist, double gamma) {
  const FrictionExtremes ext = friction_extremes(dist, gamma);
  FrictionPrediction out;
  out.gamma = gamma;
  out.f_norm_min = ext.f_min;
  out.f_norm_max = ext.f_max;
  return out;
}

double speed_from_friction(double f_norm, double coeff) {
  if (!std::isfinite(f_norm)) throw std::invalid_argument("f_norm must be finite");
  return std::clamp(coeff * f_norm, 0.0, kSpeedRatioMax);
}

FrictionPrediction predict_speed_band(const SlipDistribution& dist, double gamma, double coeff) {
  FrictionPrediction out = friction_bounds(dist, gamma);
  out.v_ratio_min = speed_from_friction(out.f_norm_min, coeff);
  out.v_ratio_max = speed_from_friction(out.f_norm_max, coeff);
  return out;
}

LossModelOutput predict_gamma(const RobotGeometry& geom, const GaitConfig& cfg,
                              const HeightDeltaModel& model, int m) {
  const RetractionProfile prof = retraction_profile(cfg, geom, m);
  double sum1 = 0.0;
  double sum2 = 0.0;
  int grounded = 0;
  for (int i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double lift = prof.lift[k];
    if (lift > geom.lift_slack) {
      sum1 += 1.0;
      sum2 += 1.0;
      continue;
    }
    ++grounded;
    const double reach = prof.reach[k];
    sum1 += reach <= 0.0 ? 1.0 : tail_probability(model, reach, DeltaCondition::dh_nonpositive);
    const double threshold = recoverable_height(geom, prof.d_s[k]) + std::max(lift, 0.0);
    sum2 += tail_probability(model, threshold, DeltaCondition::dh_positive);
  }
  LossModelOutput out;
  out.p_loss1 = sum1 / m;
  out.p_loss2 = sum2 / m;
  out.p_loss = model.p1 * out.p_loss1 + (1.0 - model.p1) * out.p_loss2;
  out.gamma = 1.0 - out.p_loss;
  out.gamma_ideal = cfg.a_v == 0.0 ? 1.0 : static_cast<double>(grounded) / m;
  out.p_e = out.gamma_ideal > 0.0 ? (1.0 - out.gamma) / out.gamma_ideal : 1.0;
  return out;
}

OptimalAv optimal_av(const RobotGeometry& geom, const GaitConfig& cfg,
                     const HeightDeltaModel& model, std::span<const double> av_grid, int m,
                     int slip_bins, double coeff) {
  if (av_grid.empty()) throw std::invalid_argument("optimal_av needs a non-empty grid");
  const SlipDistribution dist = slip_distribution(cfg, geom, slip_bins);
  OptimalAv best;
  bool have = false;
  for (double av : av_grid) {
    GaitConfig c = cfg;
    c.a_v = av;
    const LossModelOutput loss = predict_gamma(geom, c, model, m);
    const FrictionPrediction band = predict_speed_band(dist, loss.gamma, coeff);
    const bool better = !have || band.v_mid() > best.band.v_mid() + 1e-12 ||
                        (std::abs(band.v_mid() - best.band.v_mid()) <= 1e-12 && av < best.a_v);
    if (better) {
      best = {av, band, loss};
      have = true;
    }
  }
  return best;
}

}  // namespace legwave
