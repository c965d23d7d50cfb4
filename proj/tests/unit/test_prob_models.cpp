#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <numeric>

#include "legwave/prob_models.hpp"
#include "legwave/rng.hpp"

using namespace legwave;

namespace {

SlipDistribution make_dist(std::vector<double> centers, std::vector<double> probs) {
  SlipDistribution d;
  d.bin_centers = std::move(centers);
  d.probs = std::move(probs);
  d.bin_count = static_cast<int>(d.probs.size());
  return d;
}

SlipDistribution random_dist(Rng& rng, int bins) {
  std::vector<double> c, p;
  for (int b = 0; b < bins; ++b) {
    c.push_back(-180.0 + (b + 0.5) * 360.0 / bins);
    p.push_back(rng.uniform() < 0.15 ? 0.0 : rng.uniform());
  }
  double s = std::accumulate(p.begin(), p.end(), 0.0);
  if (s == 0.0) {
    p[0] = 1.0;
    s = 1.0;
  }
  for (double& v : p) v /= s;
  return make_dist(c, p);
}

// Every vertex of {w in [0,1]^B : sum p_i w_i = gamma} has at most one
// coordinate strictly inside (0, 1). Enumerate all of them.
std::pair<double, double> vertex_extremes(const SlipDistribution& d, double gamma) {
  const int B = static_cast<int>(d.probs.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> w(static_cast<std::size_t>(B));
  auto consider = [&] {
    const double f = friction_objective(d, w);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  };
  for (int free = -1; free < B; ++free) {
    for (long mask = 0; mask < (1L << B); ++mask) {
      if (free >= 0 && (mask >> free & 1)) continue;
      double mass = 0.0;
      for (int i = 0; i < B; ++i) {
        w[static_cast<std::size_t>(i)] = (mask >> i & 1) ? 1.0 : 0.0;
        if (i != free) mass += w[static_cast<std::size_t>(i)] * d.probs[static_cast<std::size_t>(i)];
      }
      if (free < 0) {
        if (std::abs(mass - gamma) < 1e-12) consider();
        continue;
      }
      const double p = d.probs[static_cast<std::size_t>(free)];
      if (p <= 0.0) continue;
      const double x = (gamma - mass) / p;
      if (x < -1e-12 || x > 1.0 + 1e-12) continue;
      w[static_cast<std::size_t>(free)] = std::clamp(x, 0.0, 1.0);
      consider();
    }
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("friction bounds: trivial polytopes") {
  const auto d = slip_distribution(GaitConfig{}, RobotGeometry{}, 36);
  const auto one = friction_bounds(d, 1.0);
  CHECK(one.f_norm_min == doctest::Approx(one.f_norm_max));
  CHECK(one.f_norm_max == doctest::Approx(d.mean_cos()));
  const auto zero = friction_bounds(d, 0.0);
  CHECK(zero.f_norm_min == doctest::Approx(-1.0));
  CHECK(zero.f_norm_max == doctest::Approx(-1.0));
}

TEST_CASE("friction bounds: two-bin example") {
  const auto d = make_dist({0.0, 180.0}, {0.5, 0.5});
  const auto b = friction_bounds(d, 0.5);
  CHECK(b.f_norm_min == doctest::Approx(-1.0));
  CHECK(b.f_norm_max == doctest::Approx(0.0));
}

TEST_CASE("greedy extremes equal vertex enumeration") {
  Rng rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    const int B = 4 + trial % 9;
    const auto d = random_dist(rng, B);
    for (int k = 0; k <= 10; ++k) {
      const double g = 0.1 * k;
      const auto ext = friction_extremes(d, g);
      const auto [lo, hi] = vertex_extremes(d, g);
      CHECK(ext.f_min == doctest::Approx(lo).epsilon(1e-12));
      CHECK(ext.f_max == doctest::Approx(hi).epsilon(1e-12));
      const double mass_max = std::inner_product(ext.w_max.w.begin(), ext.w_max.w.end(), d.probs.begin(), 0.0);
      const double mass_min = std::inner_product(ext.w_min.w.begin(), ext.w_min.w.end(), d.probs.begin(), 0.0);
      CHECK(mass_max == doctest::Approx(g).epsilon(1e-9));
      CHECK(mass_min == doctest::Approx(g).epsilon(1e-9));
    }
  }
}

TEST_CASE("friction band edges are non-decreasing in gamma") {
  const auto d = slip_distribution(GaitConfig{}, RobotGeometry{}, 36);
  double lo = -2.0, hi = -2.0;
  for (int k = 0; k <= 50; ++k) {
    const auto b = friction_bounds(d, k / 50.0);
    CHECK(b.f_norm_min >= lo - 1e-12);
    CHECK(b.f_norm_max >= hi - 1e-12);
    lo = b.f_norm_min;
    hi = b.f_norm_max;
  }
  CHECK_THROWS_AS(friction_bounds(d, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(friction_bounds(make_dist({0.0}, {0.0}), 0.5), std::domain_error);
}

TEST_CASE("speed from friction") {
  CHECK(speed_from_friction(0.0) == 0.0);
  CHECK(speed_from_friction(0.9389) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(speed_from_friction(0.47) == doctest::Approx(0.50).epsilon(0.01));
  CHECK(speed_from_friction(-0.4) == 0.0);
  CHECK(speed_from_friction(5.0) == doctest::Approx(1.2));
}

TEST_CASE("speed band") {
  const auto d = make_dist({-10.0, 10.0}, {0.5, 0.5});
  const auto full = predict_speed_band(d, 1.0);
  CHECK(full.v_ratio_min == doctest::Approx(full.v_ratio_max));
  const auto none = predict_speed_band(d, 0.0);
  CHECK(none.v_ratio_min == 0.0);
  CHECK(none.v_ratio_max == 0.0);

  const auto real = slip_distribution(GaitConfig{}, RobotGeometry{}, 36);
  auto prev = predict_speed_band(real, 0.0);
  for (int k = 1; k <= 20; ++k) {
    const auto b = predict_speed_band(real, k / 20.0);
    CHECK(b.v_ratio_min >= prev.v_ratio_min - 1e-12);
    CHECK(b.v_ratio_max >= prev.v_ratio_max - 1e-12);
    CHECK(b.v_ratio_min <= b.v_ratio_max);
    prev = b;
  }
  CHECK(prev.v_ratio_max - prev.v_ratio_min == doctest::Approx(0.0));
}

TEST_CASE("band collapses to full speed when mean cosine is 1/1.065") {
  const double c = 1.0 / kForceVelocityCoeff;
  const double beta = rad2deg(std::acos(c));
  const auto d = make_dist({-beta, beta}, {0.5, 0.5});
  const auto b = predict_speed_band(d, 1.0);
  CHECK(b.v_ratio_min == doctest::Approx(1.0));
  CHECK(b.v_ratio_max == doctest::Approx(1.0));
}

TEST_CASE("predict_gamma identities and limits") {
  GaitConfig cfg;
  const RobotGeometry g;
  auto out = predict_gamma(g, cfg, HeightDeltaModel::gaussian(0.0), 64);
  CHECK(out.p_loss == 0.0);
  CHECK(out.gamma == 1.0);
  CHECK(out.p_e == 0.0);

  out = predict_gamma(g, cfg, HeightDeltaModel::gaussian(4.8), 64);
  CHECK(out.p_loss1 == doctest::Approx(2.0 * 0.5 * std::erfc(7.0 / 4.8 / std::sqrt(2.0))).epsilon(1e-12));
  CHECK(out.p_loss1 == doctest::Approx(0.1448).epsilon(1e-3));

  for (double av : {0.0, 10.0, 25.0, 35.0}) {
    cfg.a_v = av;
    for (double s : {1.0, 2.55, 4.8}) {
      const auto m = HeightDeltaModel::gaussian(s);
      const auto o = predict_gamma(g, cfg, m, 64);
      CHECK(o.p_loss == doctest::Approx(0.5 * o.p_loss1 + 0.5 * o.p_loss2).epsilon(1e-12));
      CHECK(o.gamma == doctest::Approx(1.0 - o.p_loss).epsilon(1e-12));
      CHECK(o.p_e == doctest::Approx((1.0 - o.gamma) / o.gamma_ideal).epsilon(1e-12));
      for (double p : {o.p_loss1, o.p_loss2, o.p_loss, o.gamma, o.gamma_ideal})
        CHECK((p >= 0.0 && p <= 1.0));
    }
  }
}

TEST_CASE("gamma falls with roughness, less so with a vertical wave") {
  const RobotGeometry g;
  GaitConfig cfg;
  for (double av : {0.0, 10.0, 20.0}) {
    cfg.a_v = av;
    double prev = 1.0;
    for (int k = 0; k <= 12; ++k) {
      const double gam = predict_gamma(g, cfg, HeightDeltaModel::gaussian(0.5 * k), 64).gamma;
      CHECK(gam <= prev + 1e-12);
      prev = gam;
    }
  }
  auto sens = [&](double av) {
    cfg.a_v = av;
    return std::abs(predict_gamma(g, cfg, HeightDeltaModel::gaussian(4.8), 64).gamma -
                    predict_gamma(g, cfg, HeightDeltaModel::gaussian(2.55), 64).gamma);
  };
  CHECK(sens(20.0) < sens(0.0));
}

TEST_CASE("gamma has an interior maximum over a_v on rough ground") {
  const RobotGeometry g;
  GaitConfig cfg;
  const auto m = HeightDeltaModel::gaussian(4.8);
  double best = -1.0, best_av = -1.0;
  for (int a = 0; a <= 40; ++a) {
    cfg.a_v = a;
    const double gam = predict_gamma(g, cfg, m, 64).gamma;
    if (gam > best) {
      best = gam;
      best_av = a;
    }
  }
  CHECK(best_av > 0.0);
  CHECK(best_av < 40.0);
}

TEST_CASE("optimal vertical amplitude") {
  const RobotGeometry g;
  const GaitConfig cfg;
  std::vector<double> grid;
  for (int a = 0; a <= 30; a += 5) grid.push_back(a);
  CHECK(optimal_av(g, cfg, HeightDeltaModel::gaussian(0.0), grid).a_v == 0.0);
  const auto rough = optimal_av(g, cfg, HeightDeltaModel::gaussian(4.8), grid);
  CHECK(rough.a_v > 0.0);
  GaitConfig flat = cfg;
  flat.a_v = 0.0;
  const auto base = predict_speed_band(slip_distribution(cfg, g, 36),
                                       predict_gamma(g, flat, HeightDeltaModel::gaussian(4.8), 64).gamma);
  CHECK(rough.band.v_mid() >= base.v_mid());
  CHECK_THROWS_AS(optimal_av(g, cfg, HeightDeltaModel::gaussian(1.0), std::span<const double>{}),
                  std::invalid_argument);
}
