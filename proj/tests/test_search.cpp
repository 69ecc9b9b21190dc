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

#include "rotom/search.hpp"

#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "rotom/reference.hpp"
#include "support/oracles.hpp"

namespace {

using test_support::scale_masses;
using test_support::wrapped_inf_distance;

Eigen::Vector2d force_at(double alpha, double magnitude = 1.0) {
  return magnitude * Eigen::Vector2d(std::cos(alpha), std::sin(alpha));
}

rotom::Configuration q1(double value) {
  rotom::Configuration q(1);
  q << value;
  return q;
}

}  // namespace

TEST_CASE("pendulum gradient matches the analytic derivative") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  const double alpha = 0.9;
  const Eigen::Vector2d force = force_at(alpha);
  // d/dq |sin(alpha - q)| = -sign(sin(alpha - q)) cos(alpha - q), away from
  // the kink.
  for (int k = 0; k < 64; ++k) {
    const double q = -M_PI + 2.0 * M_PI * k / 64.0;
    if (std::abs(std::sin(alpha - q)) < 0.1) continue;
    const double expected =
        -std::cos(alpha - q) * (std::sin(alpha - q) > 0.0 ? 1.0 : -1.0);
    const Eigen::VectorXd grad = rotom::rotom_gradient(model, q1(q), force);
    CHECK(grad.size() == 1);
    CHECK(grad[0] == Catch::Approx(expected).margin(2e-6));
  }
  SECTION("stationary at the crest of the objective") {
    const Eigen::VectorXd grad =
        rotom::rotom_gradient(model, q1(alpha - M_PI / 2.0), force);
    CHECK(std::abs(grad[0]) < 1e-5);
  }
}

TEST_CASE("gradient is insensitive to the finite-difference step") {
  const rotom::ChainModel model =
      rotom::preset(rotom::Preset::kDoublePendulum);
  rotom::Configuration q(2);
  q << 0.7, -1.1;
  const Eigen::Vector2d force(0.3, -0.8);
  const Eigen::VectorXd coarse = rotom::rotom_gradient(model, q, force, 1e-6);
  const Eigen::VectorXd fine = rotom::rotom_gradient(model, q, force, 1e-7);
  CHECK((coarse - fine).norm() < 1e-6 * (1.0 + fine.norm()));
}

TEST_CASE("gradient input validation") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  CHECK_THROWS_AS(
      rotom::rotom_gradient(model, q1(0.2), Eigen::Vector2d::Zero()),
      rotom::ZeroForce);
  CHECK_THROWS_AS(
      rotom::rotom_gradient(model, q1(0.2), force_at(0.5), 0.0),
      rotom::InvalidModel);
  // When the force is along the rod nothing is transmitted; the norm has a
  // kink there and no usable gradient.
  CHECK_THROWS_AS(rotom::rotom_gradient(model, q1(0.5), force_at(0.5)),
                  rotom::NormSingularity);
}

TEST_CASE("descent settings validation") {
  rotom::DescentSettings s;
  CHECK_NOTHROW(rotom::validate_settings(s));
  s.gain = 0.0;
  CHECK_THROWS_AS(rotom::validate_settings(s), rotom::InvalidModel);
  s = {};
  s.fd_step = s.step_size;  // probe must stay inside the step
  CHECK_THROWS_AS(rotom::validate_settings(s), rotom::InvalidModel);
  s = {};
  s.max_iters = -3;
  CHECK_THROWS_AS(rotom::validate_settings(s), rotom::InvalidModel);
}

TEST_CASE("descent drives the pendulum to an aligned configuration") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  const double alpha = 0.9;
  const auto trace =
      rotom::minimize_rotom(model, q1(alpha + 1.0), force_at(alpha, 3.0));
  REQUIRE(trace.converged);
  const double final_q = trace.iterates.back().q[0];
  // Any rod-aligned configuration (alpha mod pi) absorbs the force fully.
  const double miss = std::abs(std::sin(alpha - final_q));
  CHECK(miss < 1e-4);
  CHECK(trace.iterates.back().objective < 3.0 * 1e-4);

  SECTION("objectives decrease strictly") {
    for (std::size_t k = 1; k < trace.iterates.size(); ++k)
      REQUIRE(trace.iterates[k].objective <
              trace.iterates[k - 1].objective);
  }
}

TEST_CASE("starting on a zero ends immediately") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  const double alpha = 1.2;
  const auto trace =
      rotom::minimize_rotom(model, q1(alpha), force_at(alpha, 2.0));
  CHECK(trace.converged);
  CHECK(trace.reason == rotom::StopReason::GradientSmall);
  CHECK(trace.iterates.size() == 1);
  CHECK(trace.iterates[0].objective < 1e-12 * 2.0 + 1e-15);
}

TEST_CASE("descent on the two-link chain decreases monotonically") {
  const rotom::ChainModel model =
      rotom::preset(rotom::Preset::kDoublePendulum);
  rotom::Configuration q0(2);
  q0 << 1.0, 0.5;
  const auto trace =
      rotom::minimize_rotom(model, q0, Eigen::Vector2d(0.0, -1.0));
  REQUIRE(trace.iterates.size() >= 2);
  for (std::size_t k = 1; k < trace.iterates.size(); ++k)
    REQUIRE(trace.iterates[k].objective < trace.iterates[k - 1].objective);
  CHECK(trace.converged);
}

TEST_CASE("the iterate path does not depend on the force magnitude") {
  const rotom::ChainModel model =
      rotom::preset(rotom::Preset::kDoublePendulum);
  rotom::Configuration q0(2);
  q0 << 1.0, 0.5;
  const Eigen::Vector2d force(0.2, -0.9);
  const auto base = rotom::minimize_rotom(model, q0, force);

  SECTION("power-of-two scalings reproduce the run bit for bit") {
    for (double c : {1048576.0, 1.0 / 1048576.0}) {
      const auto scaled = rotom::minimize_rotom(model, q0, c * force);
      REQUIRE(scaled.iterates.size() == base.iterates.size());
      CHECK(scaled.reason == base.reason);
      for (std::size_t k = 0; k < base.iterates.size(); ++k) {
        REQUIRE((scaled.iterates[k].q - base.iterates[k].q).norm() == 0.0);
        REQUIRE(scaled.iterates[k].objective ==
                c * base.iterates[k].objective);
      }
    }
  }
  SECTION("arbitrary scalings land in the same basin") {
    // Away from powers of two the normalization rounds differently, so the
    // paths may part ways while stalling at the norm kink; both must still
    // end near the same zero with a comparably small objective.
    const auto scaled = rotom::minimize_rotom(model, q0, 1e6 * force);
    CHECK(base.iterates.back().objective / force.norm() < 1e-4);
    CHECK(scaled.iterates.back().objective / (1e6 * force.norm()) < 1e-4);
    CHECK(wrapped_inf_distance(scaled.iterates.back().q,
                               base.iterates.back().q) < 1e-2);
  }
}

TEST_CASE("mass scaling does not move the minimizer") {
  const rotom::ChainModel model =
      rotom::preset(rotom::Preset::kDoublePendulum);
  rotom::Configuration q0(2);
  q0 << -0.4, 1.2;
  const Eigen::Vector2d force(1.0, 0.4);
  const auto base = rotom::minimize_rotom(model, q0, force);

  SECTION("a power-of-two scale reproduces the run bit for bit") {
    const auto scaled =
        rotom::minimize_rotom(scale_masses(model, 1024.0), q0, force);
    REQUIRE(scaled.iterates.size() == base.iterates.size());
    CHECK(scaled.reason == base.reason);
    for (std::size_t k = 0; k < base.iterates.size(); ++k) {
      REQUIRE((scaled.iterates[k].q - base.iterates[k].q).norm() == 0.0);
      REQUIRE(scaled.iterates[k].objective == base.iterates[k].objective);
    }
  }
  SECTION("other scales land in the same basin") {
    const auto heavy =
        rotom::minimize_rotom(scale_masses(model, 1e3), q0, force);
    CHECK(wrapped_inf_distance(heavy.iterates.back().q,
                               base.iterates.back().q) < 1e-2);
  }
}

TEST_CASE("a joint limit stops the descent short") {
  rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  const double alpha = 0.7;
  model.joints[0].limits = rotom::JointLimits{alpha + 0.4, alpha + 2.0};
  const auto trace =
      rotom::minimize_rotom(model, q1(alpha + 1.0), force_at(alpha));
  CHECK_FALSE(trace.converged);
  CHECK(trace.reason == rotom::StopReason::JointLimit);
  // The projection lands exactly on the bound, not merely near it.
  CHECK(trace.iterates.back().q[0] == alpha + 0.4);
  for (std::size_t k = 1; k < trace.iterates.size(); ++k)
    REQUIRE(trace.iterates[k].objective < trace.iterates[k - 1].objective);
}

TEST_CASE("zero-search settings validation") {
  rotom::ZeroSearchSettings s;
  CHECK_NOTHROW(rotom::validate_settings(s));
  s.seeds_per_joint = 0;
  CHECK_THROWS_AS(rotom::validate_settings(s), rotom::InvalidModel);
  s = {};
  s.residual_tol = -1e-10;
  CHECK_THROWS_AS(rotom::validate_settings(s), rotom::InvalidModel);
}

TEST_CASE("pendulum zeros are the two rod-aligned configurations") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  const double alpha = 0.9;
  const Eigen::Vector2d force = force_at(alpha, 2.0);
  const auto result = rotom::find_rotom_zeros_detailed(model, force);

  CHECK(result.seeds.size() == 8);
  REQUIRE(result.zeros.size() == 2);
  CHECK(wrapped_inf_distance(result.zeros[0], result.zeros[1]) ==
        Catch::Approx(M_PI).margin(1e-9));
  for (const auto& zero : result.zeros) {
    CHECK(std::abs(std::sin(alpha - zero[0])) < 1e-10);
    const double residual =
        (rotom::centroidal_state(model, zero).mobility * force).norm();
    CHECK(residual < 1e-10);
  }

  SECTION("joint limits filter out the unreachable zero") {
    rotom::ChainModel limited = model;
    limited.joints[0].limits = rotom::JointLimits{alpha - 0.5, alpha + 0.5};
    const auto zeros = rotom::find_rotom_zeros(limited, force);
    REQUIRE(zeros.size() == 1);
    CHECK(std::abs(zeros[0][0] - alpha) < 1e-9);
  }
}

TEST_CASE("two-link chain zeros under a downward force") {
  const rotom::ChainModel model =
      rotom::preset(rotom::Preset::kDoublePendulum);
  const Eigen::Vector2d force(0.0, -1.0);
  const auto result = rotom::find_rotom_zeros_detailed(model, force);
  CHECK(result.seeds.size() == 64);

  // The CoM can only lose a whole direction when the chain is straight or
  // folded flat, and the force must then lie along the links: four isolated
  // configurations in the wrapped box.
  const std::vector<Eigen::Vector2d> expected = {
      {-M_PI / 2.0, -M_PI}, {-M_PI / 2.0, 0.0},
      {M_PI / 2.0, -M_PI},  {M_PI / 2.0, 0.0}};
  REQUIRE(result.zeros.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    CHECK(wrapped_inf_distance(result.zeros[k], expected[k]) < 1e-6);

  SECTION("every zero carries a small-residual certificate") {
    for (const auto& zero : result.zeros) {
      const double residual =
          (rotom::centroidal_state(model, zero).mobility * force).norm();
      CHECK(residual < 1e-10);
    }
  }
  SECTION("a dense scan finds no zero away from the returned set") {
    const int m = 128;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        rotom::Configuration q(2);
        q << -M_PI + 2.0 * M_PI * i / m, -M_PI + 2.0 * M_PI * j / m;
        const double value =
            (rotom::centroidal_state(model, q).mobility * force).norm();
        if (value >= 1e-6) continue;
        double nearest = 1e300;
        for (const auto& zero : result.zeros)
          nearest = std::min(nearest, wrapped_inf_distance(q, zero));
        REQUIRE(nearest <= 2.0 * M_PI / m);
      }
    }
  }
}

TEST_CASE("zero search is deterministic") {
  const rotom::ChainModel model =
      rotom::preset(rotom::Preset::kDoublePendulum);
  const Eigen::Vector2d force(0.3, -1.1);
  const auto first = rotom::find_rotom_zeros(model, force);
  const auto second = rotom::find_rotom_zeros(model, force);
  REQUIRE(first.size() == second.size());
  for (std::size_t k = 0; k < first.size(); ++k)
    REQUIRE((first[k] - second[k]).norm() == 0.0);
}

TEST_CASE("zero search rejects a zero force") {
  const rotom::ChainModel model = rotom::preset(rotom::Preset::kPendulum);
  CHECK_THROWS_AS(rotom::find_rotom_zeros(model, Eigen::Vector2d::Zero()),
                  rotom::ZeroForce);
}
