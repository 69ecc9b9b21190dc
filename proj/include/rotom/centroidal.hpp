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

#ifndef ROTOM_CENTROIDAL_HPP_
#define ROTOM_CENTROIDAL_HPP_

#include <string>

#include <Eigen/Dense>

#include "rotom/chain_model.hpp"
#include "rotom/errors.hpp"

namespace rotom {

namespace detail {

/// Mass matrices whose spectral condition number exceeds this are rejected
/// as singular; the mobility matrix would be numerically meaningless.
inline constexpr double kMassConditionLimit = 1e12;

}  // namespace detail

/// Everything the transmissibility analysis needs about one configuration of
/// one chain. `model` aliases the chain the state was built from and must
/// outlive the state.
struct CentroidalState {
  const ChainModel* model = nullptr;
  Configuration q;
  double total_mass = 0.0;          // kg
  Eigen::VectorXd com_position;     // task_dim
  Eigen::MatrixXd com_jacobian;     // task_dim x n
  Eigen::MatrixXd mass;             // n x n, symmetric PD
  Eigen::MatrixXd mobility;         // task_dim x task_dim, symmetric PSD
};

/// Builds the centroidal quantities at q: CoM position, CoM Jacobian J, mass
/// matrix M, and the mobility matrix m * J M^-1 J^T. The eigenvalues of the
/// mobility matrix lie in [0, 1] for chains without rotational inertia; with
/// inertia they can only shrink.
///
/// Throws SingularMassMatrix if M has a nonpositive eigenvalue or a spectral
/// condition number above 1e12. Passing check_limits = false skips joint
/// limit validation for finite-difference probes near the boundary.
inline CentroidalState centroidal_state(const ChainModel& model,
                                        const Configuration& q,
                                        bool check_limits = true) {
  CentroidalState state;
  state.model = &model;
  state.q = q;

  const ComJacobian com = robot_com_jacobian(model, q, check_limits);
  state.total_mass = com.total_mass;
  state.com_jacobian = com.jacobian;
  state.com_position = com_position(model, q, check_limits);
  state.mass = mass_matrix(model, q, check_limits);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(state.mass);
  const double lambda_min = eig.eigenvalues().minCoeff();
  const double lambda_max = eig.eigenvalues().maxCoeff();
  if (lambda_min <= 0.0 ||
      lambda_max / lambda_min > detail::kMassConditionLimit)
    throw SingularMassMatrix(
        "mass matrix is singular or ill-conditioned (eigenvalue range [" +
        std::to_string(lambda_min) + ", " + std::to_string(lambda_max) + "])");

  // m * J M^-1 J^T, symmetrized against solver roundoff.
  const Eigen::MatrixXd minv_jt =
      state.mass.ldlt().solve(state.com_jacobian.transpose());
  const Eigen::MatrixXd mobility =
      state.total_mass * state.com_jacobian * minv_jt;
  state.mobility = 0.5 * (mobility + mobility.transpose());
  return state;
}

/// Convenience accessor for callers that only need the mobility matrix.
inline Eigen::MatrixXd mobility_matrix(const ChainModel& model,
                                       const Configuration& q) {
  return centroidal_state(model, q).mobility;
}

/// How an external force F applied at the robot CoM turns into motion when
/// the joints offer no resistance. f is the transmitted (fictitious) part,
/// reaction the part absorbed by the structure; F = f - reaction always.
struct RotomResult {
  double rotom = 0.0;      // ||f|| / ||F||, in [0, 1]
  Eigen::VectorXd f;       // T F
  Eigen::VectorXd reaction;  // f - F
  Eigen::VectorXd accel;   // f / m, resulting CoM acceleration
};

/// Evaluates the transmission of F through the state's mobility matrix.
/// Throws ZeroForce on a zero force vector and InvalidModel on a dimension
/// mismatch.
inline RotomResult fictitious_force(const CentroidalState& state,
                                    const Eigen::VectorXd& force) {
  if (force.size() != state.mobility.rows())
    throw InvalidModel("force has " + std::to_string(force.size()) +
                       " entries, task space has " +
                       std::to_string(state.mobility.rows()));
  const double force_norm = force.norm();
  if (force_norm == 0.0)
    throw ZeroForce("force vector must be nonzero");

  RotomResult result;
  result.f = state.mobility * force;
  result.rotom = result.f.norm() / force_norm;
  result.reaction = result.f - force;
  result.accel = result.f / state.total_mass;
  return result;
}

/// One-call form: builds the state at q and evaluates the force through it.
inline RotomResult fictitious_force(const ChainModel& model,
                                    const Configuration& q,
                                    const Eigen::VectorXd& force) {
  return fictitious_force(centroidal_state(model, q), force);
}

/// Diagnostic for the acceleration bound: the constrained CoM can never
/// accelerate faster than the same mass would unconstrained.
inline bool com_acceleration_bound_check(const CentroidalState& state,
                                         const Eigen::VectorXd& force) {
  const RotomResult result = fictitious_force(state, force);
  return result.accel.norm() <=
         force.norm() / state.total_mass + 1e-9;
}

}  // namespace rotom

#endif  // ROTOM_CENTROIDAL_HPP_
