// Copyright 2026 The Rotom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rotom/reference.hpp"

#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "rotom/io.hpp"
#include "rotom/transmissibility.hpp"
#include "support/oracles.hpp"

namespace {

using test_support::random_unit;

void check_models_match(const rotom::ChainModel& a,
                        const rotom::ChainModel& b) {
  REQUIRE(a.joints.size() == b.joints.size());
  REQUIRE(a.links.size() == b.links.size());
  CHECK(a.task_dim == b.task_dim);
  CHECK(a.base_frame.matrix() == b.base_frame.matrix());
  for (std::size_t i = 0; i < a.joints.size(); ++i) {
    CHECK(a.joints[i].axis == b.joints[i].axis);
    CHECK(a.joints[i].origin_offset == b.joints[i].origin_offset);
    CHECK(a.joints[i].limits.has_value() == b.joints[i].limits.has_value());
  }
  for (std::size_t i = 0; i < a.links.size(); ++i) {
    CHECK(a.links[i].mass == b.links[i].mass);
    CHECK(a.links[i].com_offset == b.links[i].com_offset);
    CHECK(a.links[i].rot_inertia.has_value() ==
          b.links[i].rot_inertia.has_value());
  }
}

}  // namespace

TEST_CASE("closed-form transmitted force on the hanging-mass examples") {
  // Rod horizontal, force along +x: everything is tangential.
  const Eigen::Vector2d f1 = rotom::pendulum_f({M_PI / 2.0, 0.0}, 1.0);
  CHECK((f1 - Eigen::Vector2d(1.0, 0.0)).norm() < 1e-15);
  // Rod along +x, force along +y: again fully tangential.
  const Eigen::Vector2d f2 = rotom::pendulum_f({0.0, M_PI / 2.0}, 3.0);
  CHECK((f2 - Eigen::Vector2d(0.0, 3.0)).norm() < 1e-15);
  // Diagonal rod, force along +x: half passes, pushing down-right.
  const Eigen::Vector2d f3 = rotom::pendulum_f({M_PI / 4.0, 0.0}, 2.0);
  CHECK((f3 - Eigen::Vector2d(1.0, -1.0)).norm() < 1e-14);

  CHECK_THROWS_AS(rotom::pendulum_f({0.1, 0.2}, -1.0), rotom::InvalidModel);
}

TEST_CASE("closed-form rotom equals |sin(alpha - q)| everywhere") {
  CHECK(rotom::pendulum_rotom({0.3, 1.1}) ==
        Catch::Approx(std::abs(std::sin(0.8))).epsilon(1e-14));
  const int m = 1000;
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double q = -M_PI + 2.0 * M_PI * i / m;
      const double alpha = -M_PI + 2.0 * M_PI * j / m;
      const double oracle = rotom::pendulum_rotom({q, alpha});
      worst = std::max(worst,
                       std::abs(oracle - std::abs(std::sin(alpha - q))));
    }
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("closed form agrees with the chain computation") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  const int m = 100;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double q = -M_PI + 2.0 * M_PI * i / m;
      const double alpha = -M_PI + 2.0 * M_PI * j / m;
      rotom::Configuration chain_q(1);
      chain_q << rotom::pendulum_chain_angle(q);
      const auto result = rotom::fictitious_force(
          model, chain_q,
          Eigen::Vector2d(std::cos(alpha), std::sin(alpha)));
      const Eigen::Vector2d oracle = rotom::pendulum_f({q, alpha}, 1.0);
      REQUIRE((result.f - oracle).norm() < 1e-12);
      REQUIRE(std::abs(result.rotom - rotom::pendulum_rotom({q, alpha})) <
              1e-12);
    }
  }
}

TEST_CASE("preset chains") {
  const rotom::ChainModel pend = rotom::preset(rotom::Preset::kPendulum);
  CHECK(pend.dof() == 1);
  CHECK(pend.total_mass() == 1.0);
  CHECK(pend.task_dim == 2);

  const rotom::ChainModel dp = rotom::preset(rotom::Preset::kDoublePendulum);
  CHECK(dp.dof() == 2);
  CHECK(dp.total_mass() == 2.0);

  const rotom::ChainModel arm = rotom::preset(rotom::Preset::kArm4Dof);
  CHECK(arm.dof() == 4);
  CHECK(arm.task_dim == 3);
  CHECK(arm.total_mass() == 2.0);

  SECTION("name lookup matches the enum") {
    check_models_match(rotom::preset("pendulum"), pend);
    check_models_match(rotom::preset("double_pendulum"), dp);
    check_models_match(rotom::preset("arm4dof"), arm);
    CHECK_THROWS_AS(rotom::preset("hexapod"), rotom::InvalidModel);
  }
  SECTION("shipped robot files define the same chains") {
    check_models_match(rotom::load_model(ROTOM_MODELS_DIR "/pendulum.json"),
                       pend);
    check_models_match(
        rotom::load_model(ROTOM_MODELS_DIR "/double_pendulum.json"), dp);
    check_models_match(rotom::load_model(ROTOM_MODELS_DIR "/arm4dof.json"),
                       arm);
  }
}

TEST_CASE("simulated pendulum acceleration matches the projection") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  rotom::Configuration q(1);
  q << 0.7;
  SECTION("tangential force accelerates the mass at full strength") {
    const Eigen::Vector2d tangent(-std::sin(q[0]), std::cos(q[0]));
    const Eigen::VectorXd accel = rotom::sim_com_acceleration(model, q,
                                                              tangent);
    CHECK(accel.norm() == Catch::Approx(1.0).margin(1e-6));
    CHECK((accel - Eigen::VectorXd(tangent)).norm() < 1e-6);
  }
  SECTION("rod-aligned force moves nothing") {
    const Eigen::Vector2d along(std::cos(q[0]), std::sin(q[0]));
    const Eigen::VectorXd accel =
        rotom::sim_com_acceleration(model, q, 5.0 * along);
    CHECK(accel.norm() < 1e-8);
  }
}

TEST_CASE("simulation agrees with the mobility prediction on spatial chains") {
  std::mt19937 rng(71);
  test_support::RandomChainOptions options;
  options.min_links = 3;
  options.max_links = 3;
  options.allow_planar = false;

  int checked = 0;
  while (checked < 10) {
    const auto random = random_nonsingular_case(rng, options);
    // Skip draws where the prediction itself is numerically delicate:
    // near-zero accelerations have no meaningful relative error, and
    // ill-conditioned dynamics amplify the linear solves in both codes.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        rotom::mass_matrix(random.model, random.q));
    if (eig.eigenvalues().maxCoeff() >
        1e8 * eig.eigenvalues().minCoeff())
      continue;
    const Eigen::VectorXd force = 2.0 * random_unit(rng, 3);
    const rotom::CentroidalState state =
        rotom::centroidal_state(random.model, random.q);
    const Eigen::VectorXd predicted =
        rotom::fictitious_force(state, force).accel;
    if (predicted.norm() < 1e-2) continue;

    const Eigen::VectorXd simulated =
        test_support::sim_com_acceleration_extrapolated(random.model,
                                                        random.q, force);
    REQUIRE((simulated - predicted).norm() < 1e-5 * predicted.norm());
    ++checked;
  }
}

TEST_CASE("halving the step shrinks the integration error fast") {
  // Self-convergence over a two-second swing: differencing accelerations at
  // successive step sizes cancels the shared finite-horizon bias, leaving
  // pure integrator error, which must fall by at least 8x per halving.
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  rotom::Configuration q(1);
  q << 0.3;
  const Eigen::Vector2d force(0.0, 1.0);
  const auto accel_at = [&](double dt) {
    rotom::SimOracleSettings settings;
    settings.horizon = 2.0;
    settings.dt = dt;
    return rotom::sim_com_acceleration(model, q, force, settings);
  };

  std::vector<double> errors;
  for (double dt : {0.2, 0.1, 0.05, 0.025})
    errors.push_back((accel_at(dt) - accel_at(dt / 2.0)).norm());
  for (std::size_t k = 1; k < errors.size(); ++k) {
    REQUIRE(errors[k] > 0.0);
    REQUIRE(errors[k - 1] / errors[k] >= 8.0);
  }
}

TEST_CASE("simulation input validation") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  rotom::Configuration q(1);
  q << 0.1;
  rotom::SimOracleSettings bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(
      rotom::sim_com_acceleration(model, q, Eigen::Vector2d(0, 1), bad),
      rotom::InvalidModel);
  bad.dt = 1e-3;
  bad.horizon = 5e-3;  // fewer than ten steps
  CHECK_THROWS_AS(
      rotom::sim_com_acceleration(model, q, Eigen::Vector2d(0, 1), bad),
      rotom::InvalidModel);
  CHECK_THROWS_AS(
      rotom::sim_com_acceleration(model, q, Eigen::Vector3d(0, 1, 0)),
      rotom::InvalidModel);
}

TEST_CASE("simulation surfaces a singular mass matrix") {
  rotom::ChainModel model;
  model.task_dim = 2;
  model.joints.push_back({Eigen::Vector3d::UnitZ(), Eigen::Vector3d::Zero(),
                          std::nullopt});
  model.links.push_back({1.0, Eigen::Vector3d::Zero(), std::nullopt});
  rotom::Configuration q(1);
  q << 0.0;
  CHECK_THROWS_AS(
      rotom::sim_com_acceleration(model, q, Eigen::Vector2d(0, 1)),
      rotom::SingularMassMatrix);
}
