#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "legwave/batch.hpp"
#include "legwave/control.hpp"

using namespace legwave;

TEST_CASE("for_each_index visits every index and rethrows the lowest failure") {
  for (Exec e : {Exec::serial, Exec::parallel}) {
    std::vector<int> hit(100, 0);
    for_each_index(hit.size(), e, [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);

    std::atomic<int> done{0};
    try {
      for_each_index(50, e, [&](std::size_t i) {
        ++done;
        if (i == 7 || i == 31) throw std::runtime_error("bad " + std::to_string(i));
      });
      FAIL("expected a throw");
    } catch (const std::runtime_error& err) {
      CHECK(std::string(err.what()) == "bad 7");
    }
    CHECK(done == 50);
  }
}

TEST_CASE("parallel walks match the serial reference") {
  WalkSetup setup;
  setup.cycles = 6;
  setup.sensor.flip_prob = 0.03;
  std::vector<WalkJob> jobs;
  for (double r : {0.0, 0.32})
    for (double av : {0.0, 20.0})
      for (std::uint64_t s = 1; s <= 4; ++s) jobs.push_back({r, av, s, nullptr});
  const auto serial = run_walks(setup, jobs, Exec::serial);
  const auto parallel = run_walks(setup, jobs, Exec::parallel);
  CHECK(serial == parallel);
  CHECK(serial[0].mean_gamma_true == 1.0);
}

TEST_CASE("shared terrain is used as given") {
  WalkSetup setup;
  setup.cycles = 3;
  auto t = std::make_shared<const TerrainGrid>(terrain_for(setup, 0.32, 9));
  const std::vector<WalkJob> jobs{{0.32, 0.0, 1, t}, {0.32, 0.0, 1, nullptr}};
  const auto out = run_walks(setup, jobs, Exec::serial);
  CHECK(out[0].gamma_true_per_cycle != out[1].gamma_true_per_cycle);
  CHECK(terrain_seed(1) != terrain_seed(2));

  setup.reseed_terrain = false;
  CHECK(terrain_for(setup, 0.32, 1).heights == terrain_for(setup, 0.32, 2).heights);
}

TEST_CASE("parallel model sweep matches the serial reference") {
  const std::vector<ModelSweepInput> terrains{{0.0, HeightDeltaModel::from_rugosity(0.0)},
                                              {0.17, HeightDeltaModel::from_rugosity(0.17)},
                                              {0.32, HeightDeltaModel::from_rugosity(0.32)}};
  const std::vector<double> avs{0.0, 5.0, 10.0, 15.0, 20.0};
  const auto a = model_sweep({}, {}, terrains, avs, 64, 36, kForceVelocityCoeff, Exec::serial);
  const auto b = model_sweep({}, {}, terrains, avs, 64, 36, kForceVelocityCoeff, Exec::parallel);
  REQUIRE(a.size() == 15);
  CHECK(a == b);
  CHECK(a[5].r_g == 0.17);
  CHECK(a[6].a_v == 5.0);
}

TEST_CASE("parallel controller comparison matches the serial reference") {
  WalkSetup setup;
  setup.cycles = 5;
  setup.sensor.flip_prob = 0.02;
  const std::vector<int> every{1, 3};
  const auto sc = modulation_sweep({}, 0.32, every);
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const auto a = compare_controllers(setup, sc, seeds, Exec::serial);
  const auto b = compare_controllers(setup, sc, seeds, Exec::parallel);
  CHECK(a.trials == b.trials);
  for (std::size_t s = 0; s < sc.size(); ++s) {
    CHECK(a.scenarios[s].mean_speed == b.scenarios[s].mean_speed);
    CHECK(a.scenarios[s].speed_variance == b.scenarios[s].speed_variance);
    CHECK(a.scenarios[s].wins == b.scenarios[s].wins);
  }
}

TEST_CASE("walk errors propagate from the parallel batch") {
  WalkSetup setup;
  setup.cycles = 20;
  auto tiny = std::make_shared<const TerrainGrid>(generate_terrain(0.1, 10, 5, 10.0, 1));
  const std::vector<WalkJob> jobs{{0.1, 0.0, 1, nullptr}, {0.1, 0.0, 2, tiny}};
  CHECK_THROWS_AS(run_walks(setup, jobs, Exec::parallel), WalkOffTerrain);
}
