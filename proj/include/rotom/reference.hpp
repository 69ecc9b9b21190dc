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

#ifndef ROTOM_REFERENCE_HPP_
#define ROTOM_REFERENCE_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rotom/centroidal.hpp"
#include "rotom/chain_model.hpp"
#include "rotom/errors.hpp"

namespace rotom {

/// Analytic single pendulum: a unit point mass on a massless rigid rod of
/// length 1, pinned at the origin. The rod angle q is measured
/// counterclockwise from the +x axis, so the mass sits at (cos q, sin q) and
/// moves along the tangent (-sin q, cos q); alpha is the direction of the
/// applied force, same convention.
struct PendulumClosedForm {
  double q = 0.0;      // radians
  double alpha = 0.0;  // radians
};

/// The preset chains are built so that their joint angle equals the
/// closed-form rod angle directly; this mapping exists to make the
/// convention explicit at call sites.
inline double pendulum_chain_angle(double closed_form_q) {
  return closed_form_q;
}

/// Fictitious (transmitted) force on the pendulum mass for a force of
/// magnitude f_mag applied at the mass along alpha. Evaluates the tangential
/// projection componentwise:
///   f_x = F_x sin^2 q - F_y sin q cos q
///   f_y = -F_x sin q cos q + F_y cos^2 q
/// with F_x = f_mag cos alpha, F_y = f_mag sin alpha.
inline Eigen::Vector2d pendulum_f(const PendulumClosedForm& qalpha,
                                  double f_mag) {
  if (f_mag < 0.0) throw InvalidModel("force magnitude must be nonnegative");
  const double sq = std::sin(qalpha.q);
  const double cq = std::cos(qalpha.q);
  const double fx_in = f_mag * std::cos(qalpha.alpha);
  const double fy_in = f_mag * std::sin(qalpha.alpha);
  return Eigen::Vector2d(fx_in * sq * sq - fy_in * sq * cq,
                         -fx_in * sq * cq + fy_in * cq * cq);
}

/// Pendulum RoToM: the norm of the transmitted force for a unit applied
/// force. Algebraically equal to |sin(alpha - q)|; evaluated here in the raw
/// componentwise form so it stays an independent oracle.
inline double pendulum_rotom(const PendulumClosedForm& qalpha) {
  return pendulum_f(qalpha, 1.0).norm();
}

/// Built-in example chains, also shipped as robot files under models/.
enum class Preset { kPendulum, kDoublePendulum, kArm4Dof };

/// pendulum: one planar revolute link, point mass 1 kg at 1 m.
/// double_pendulum: two equal planar links, point mass 1 kg at each 1 m
/// link end.
/// arm4dof: three mutually orthogonal shoulder axes plus an elbow, two
/// 1 kg point masses at the 0.5 m upper-arm and forearm ends. Dimensions of
/// the 4-DoF arm are artifact constants for smoke testing.
inline ChainModel preset(Preset which) {
  ChainModel model;
  switch (which) {
    case Preset::kPendulum: {
      model.task_dim = 2;
      model.joints.push_back({Eigen::Vector3d::UnitZ(),
                              Eigen::Vector3d::Zero(), std::nullopt});
      model.links.push_back({1.0, Eigen::Vector3d(1.0, 0.0, 0.0),
                             std::nullopt});
      break;
    }
    case Preset::kDoublePendulum: {
      model.task_dim = 2;
      model.joints.push_back({Eigen::Vector3d::UnitZ(),
                              Eigen::Vector3d::Zero(), std::nullopt});
      model.joints.push_back({Eigen::Vector3d::UnitZ(),
                              Eigen::Vector3d(1.0, 0.0, 0.0), std::nullopt});
      model.links.push_back({1.0, Eigen::Vector3d(1.0, 0.0, 0.0),
                             std::nullopt});
      model.links.push_back({1.0, Eigen::Vector3d(1.0, 0.0, 0.0),
                             std::nullopt});
      break;
    }
    case Preset::kArm4Dof: {
      model.task_dim = 3;
      model.joints.push_back({Eigen::Vector3d::UnitZ(),
                              Eigen::Vector3d::Zero(), std::nullopt});
      model.joints.push_back({Eigen::Vector3d::UnitY(),
                              Eigen::Vector3d::Zero(), std::nullopt});
      model.joints.push_back({Eigen::Vector3d::UnitX(),
                              Eigen::Vector3d::Zero(), std::nullopt});
      model.joints.push_back({Eigen::Vector3d::UnitY(),
                              Eigen::Vector3d(0.0, 0.0, -0.5), std::nullopt});
      model.links.push_back({0.0, Eigen::Vector3d::Zero(), std::nullopt});
      model.links.push_back({0.0, Eigen::Vector3d::Zero(), std::nullopt});
      model.links.push_back({1.0, Eigen::Vector3d(0.0, 0.0, -0.5),
                             std::nullopt});
      model.links.push_back({1.0, Eigen::Vector3d(0.0, 0.0, -0.5),
                             std::nullopt});
      break;
    }
  }
  validate_model(model);
  return model;
}

/// Name-based preset lookup for the CLI; throws InvalidModel on an unknown
/// name.
inline ChainModel preset(const std::string& name) {
  if (name == "pendulum") return preset(Preset::kPendulum);
  if (name == "double_pendulum") return preset(Preset::kDoublePendulum);
  if (name == "arm4dof") return preset(Preset::kArm4Dof);
  throw InvalidModel("unknown preset '" + name +
                     "' (expected pendulum, double_pendulum, or arm4dof)");
}

/// Integration knobs of the simulation oracle.
struct SimOracleSettings {
  double dt = 1e-5;      // seconds
  double horizon = 1e-3;  // seconds
};

inline void validate_settings(const SimOracleSettings& s) {
  if (!(s.dt > 0.0)) throw InvalidModel("dt must be positive");
  if (!(s.horizon >= 10.0 * s.dt))
    throw InvalidModel("horizon must be at least 10 dt");
}

namespace detail {

/// Finite-difference step for mass-matrix partials in the Coriolis term.
inline constexpr double kMassFdStep = 1e-6;

/// Generalized bias force C(q, qd) qd assembled from Christoffel symbols of
/// the mass matrix, with the partials by central differences. Exactly zero
/// at rest; kept so velocity buildup over the horizon does not bias the
/// displacement estimate.
inline Eigen::VectorXd coriolis_force(const ChainModel& model,
                                      const Configuration& q,
                                      const Eigen::VectorXd& qd) {
  const Eigen::Index n = q.size();
  std::vector<Eigen::MatrixXd> dm(static_cast<std::size_t>(n));
  Configuration probe = q;
  for (Eigen::Index k = 0; k < n; ++k) {
    probe[k] = q[k] + kMassFdStep;
    const Eigen::MatrixXd plus = mass_matrix(model, probe, false);
    probe[k] = q[k] - kMassFdStep;
    const Eigen::MatrixXd minus = mass_matrix(model, probe, false);
    probe[k] = q[k];
    dm[static_cast<std::size_t>(k)] = (plus - minus) / (2.0 * kMassFdStep);
  }
  Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double christoffel =
            0.5 * (dm[static_cast<std::size_t>(k)](i, j) +
                   dm[static_cast<std::size_t>(j)](i, k) -
                   dm[static_cast<std::size_t>(i)](j, k));
        bias[i] += christoffel * qd[j] * qd[k];
      }
  return bias;
}

}  // namespace detail

/// Independent estimate of the initial CoM acceleration under a constant
/// force applied at the CoM: integrates the unconstrained joint dynamics
///   M(q) qdd = J_c(q)^T F - C(q, qd) qd
/// from rest with classical 4th-order Runge-Kutta and returns
/// 2 * (CoM displacement) / horizon^2. Gravity is not modeled; fold it into
/// F if wanted. Agrees with the mobility-matrix prediction T F / m up to
/// integration and finite-horizon error.
inline Eigen::VectorXd sim_com_acceleration(
    const ChainModel& model, const Configuration& q0,
    const Eigen::VectorXd& force, const SimOracleSettings& settings = {}) {
  validate_settings(settings);
  validate_model(model);
  validate_configuration(model, q0);
  if (force.size() != model.task_dim)
    throw InvalidModel("force has " + std::to_string(force.size()) +
                       " entries, task space has " +
                       std::to_string(model.task_dim));

  const Eigen::Index n = static_cast<Eigen::Index>(model.dof());
  const auto qdd = [&](const Configuration& q, const Eigen::VectorXd& qd) {
    const Eigen::MatrixXd mass = mass_matrix(model, q, false);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mass);
    const double lambda_min = eig.eigenvalues().minCoeff();
    const double lambda_max = eig.eigenvalues().maxCoeff();
    if (lambda_min <= 0.0 || lambda_max / lambda_min > 1e12)
      throw SingularMassMatrix(
          "mass matrix became singular during simulation");
    const Eigen::MatrixXd jac = robot_com_jacobian(model, q, false).jacobian;
    const Eigen::VectorXd tau =
        jac.transpose() * force - detail::coriolis_force(model, q, qd);
    return Eigen::VectorXd(mass.ldlt().solve(tau));
  };

  Configuration q = q0;
  Eigen::VectorXd qd = Eigen::VectorXd::Zero(n);
  const auto step = [&](double h) {
    const Eigen::VectorXd k1q = qd;
    const Eigen::VectorXd k1v = qdd(q, qd);
    const Eigen::VectorXd k2q = qd + 0.5 * h * k1v;
    const Eigen::VectorXd k2v = qdd(q + 0.5 * h * k1q, qd + 0.5 * h * k1v);
    const Eigen::VectorXd k3q = qd + 0.5 * h * k2v;
    const Eigen::VectorXd k3v = qdd(q + 0.5 * h * k2q, qd + 0.5 * h * k2v);
    const Eigen::VectorXd k4q = qd + h * k3v;
    const Eigen::VectorXd k4v = qdd(q + h * k3q, qd + h * k3v);
    q += (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    qd += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  };

  const double n_steps_exact = settings.horizon / settings.dt;
  const int n_full = static_cast<int>(std::floor(n_steps_exact + 1e-9));
  for (int i = 0; i < n_full; ++i) step(settings.dt);
  const double remainder = settings.horizon - n_full * settings.dt;
  if (remainder > 1e-12 * settings.dt) step(remainder);

  const Eigen::VectorXd displacement =
      com_position(model, q, false) - com_position(model, q0, false);
  return 2.0 * displacement / (settings.horizon * settings.horizon);
}

}  // namespace rotom

#endif  // ROTOM_REFERENCE_HPP_
