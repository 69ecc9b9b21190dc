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

#ifndef ROTOM_CHAIN_MODEL_HPP_
#define ROTOM_CHAIN_MODEL_HPP_

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "rotom/errors.hpp"

namespace rotom {

/// Joint angles, one per joint, radians.
using Configuration = Eigen::VectorXd;

/// Inclusive joint angle range [lower, upper], radians.
struct JointLimits {
  double lower = 0.0;
  double upper = 0.0;
};

/// One revolute joint: rotation axis and joint origin, both expressed in the
/// parent link frame (the world base frame for joint 0).
struct JointSpec {
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();   // unit vector
  Eigen::Vector3d origin_offset = Eigen::Vector3d::Zero();  // meters
  std::optional<JointLimits> limits;
};

/// One rigid link, distal to the joint of the same index. The center of mass
/// offset is expressed in the link frame; the rotational inertia, when
/// present, is taken about the link CoM in link-frame axes.
struct LinkSpec {
  double mass = 0.0;  // kg, >= 0
  Eigen::Vector3d com_offset = Eigen::Vector3d::Zero();  // meters
  std::optional<Eigen::Matrix3d> rot_inertia;  // kg m^2, symmetric PSD
};

/// A serial kinematic chain of revolute joints. Link i is rigidly attached
/// to joint i; joint i+1 is located on link i. task_dim selects the Cartesian
/// analysis space: 3 for spatial chains, 2 for planar chains (all joint axes
/// parallel to the world z-axis, all offsets in the world xy-plane).
struct ChainModel {
  std::vector<JointSpec> joints;
  std::vector<LinkSpec> links;
  int task_dim = 3;
  Eigen::Isometry3d base_frame = Eigen::Isometry3d::Identity();

  std::size_t dof() const { return joints.size(); }

  double total_mass() const {
    double m = 0.0;
    for (const auto& link : links) m += link.mass;
    return m;
  }
};

namespace detail {

inline constexpr double kAxisNormTol = 1e-12;
inline constexpr double kPlanarTol = 1e-9;
inline constexpr double kInertiaSymTol = 1e-10;

}  // namespace detail

/// Checks every structural invariant of a chain; throws InvalidModel with a
/// message naming the first violation.
inline void validate_model(const ChainModel& model) {
  const std::size_t n = model.dof();
  if (n == 0) throw InvalidModel("chain must have at least one joint");
  if (model.links.size() != n)
    throw InvalidModel("chain must have exactly one link per joint (got " +
                       std::to_string(model.links.size()) + " links for " +
                       std::to_string(n) + " joints)");
  if (model.task_dim != 2 && model.task_dim != 3)
    throw InvalidModel("task_dim must be 2 or 3");

  for (std::size_t i = 0; i < n; ++i) {
    const JointSpec& joint = model.joints[i];
    if (std::abs(joint.axis.norm() - 1.0) > detail::kAxisNormTol)
      throw InvalidModel("joint " + std::to_string(i) +
                         " axis is not a unit vector");
    if (joint.limits && !(joint.limits->lower < joint.limits->upper))
      throw InvalidModel("joint " + std::to_string(i) +
                         " limits must satisfy lower < upper");
  }

  bool any_mass = false;
  for (std::size_t i = 0; i < n; ++i) {
    const LinkSpec& link = model.links[i];
    if (link.mass < 0.0)
      throw InvalidModel("link " + std::to_string(i) + " has negative mass");
    if (link.mass > 0.0) any_mass = true;
    if (link.rot_inertia) {
      const Eigen::Matrix3d& inertia = *link.rot_inertia;
      if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() >
          detail::kInertiaSymTol)
        throw InvalidModel("link " + std::to_string(i) +
                           " rot_inertia is not symmetric");
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
      if (eig.eigenvalues().minCoeff() < -detail::kInertiaSymTol)
        throw InvalidModel("link " + std::to_string(i) +
                           " rot_inertia is not positive semidefinite");
    }
  }
  if (!any_mass) throw InvalidModel("at least one link must have mass > 0");

  if (model.task_dim == 2) {
    // Planar chains: every axis stays parallel to world z for all q iff each
    // joint axis is +-z in its parent frame and the base rotation keeps z.
    const Eigen::Vector3d base_z =
        model.base_frame.rotation() * Eigen::Vector3d::UnitZ();
    if (std::abs(std::abs(base_z.z()) - 1.0) > detail::kPlanarTol)
      throw InvalidModel("planar chain: base_frame rotation must map z to +-z");
    if (std::abs(model.base_frame.translation().z()) > detail::kPlanarTol)
      throw InvalidModel("planar chain: base_frame origin must lie in the "
                         "world xy-plane");
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(std::abs(model.joints[i].axis.z()) - 1.0) >
          detail::kPlanarTol)
        throw InvalidModel("planar chain: joint " + std::to_string(i) +
                           " axis must be parallel to the z-axis");
      if (std::abs(model.joints[i].origin_offset.z()) > detail::kPlanarTol)
        throw InvalidModel("planar chain: joint " + std::to_string(i) +
                           " origin must lie in the xy-plane");
      if (std::abs(model.links[i].com_offset.z()) > detail::kPlanarTol)
        throw InvalidModel("planar chain: link " + std::to_string(i) +
                           " CoM must lie in the xy-plane");
    }
  }
}

/// Checks that q has one entry per joint and, when check_limits is set,
/// respects declared joint limits. Violations throw InvalidModel; angles are
/// never clamped silently. Callers probing finite-difference neighbors of a
/// boundary configuration pass check_limits = false.
inline void validate_configuration(const ChainModel& model,
                                   const Configuration& q,
                                   bool check_limits = true) {
  if (static_cast<std::size_t>(q.size()) != model.dof())
    throw InvalidModel("configuration has " + std::to_string(q.size()) +
                       " entries, model has " + std::to_string(model.dof()) +
                       " joints");
  if (!check_limits) return;
  for (std::size_t i = 0; i < model.dof(); ++i) {
    const auto& limits = model.joints[i].limits;
    if (limits && (q[i] < limits->lower || q[i] > limits->upper))
      throw InvalidModel("joint " + std::to_string(i) + " angle " +
                         std::to_string(q[i]) + " outside limits [" +
                         std::to_string(limits->lower) + ", " +
                         std::to_string(limits->upper) + "]");
  }
}

/// Forward kinematics at a configuration: one world frame per link plus the
/// world position of each link CoM.
struct FkResult {
  std::vector<Eigen::Isometry3d> link_frames;
  std::vector<Eigen::Vector3d> link_com_positions;
};

/// Frame i is base_frame composed with joints 0..i, each translated by its
/// origin offset and rotated by q about its axis.
inline FkResult forward_kinematics(const ChainModel& model,
                                   const Configuration& q,
                                   bool check_limits = true) {
  validate_model(model);
  validate_configuration(model, q, check_limits);

  const std::size_t n = model.dof();
  FkResult result;
  result.link_frames.reserve(n);
  result.link_com_positions.reserve(n);

  Eigen::Isometry3d frame = model.base_frame;
  for (std::size_t i = 0; i < n; ++i) {
    frame = frame * Eigen::Translation3d(model.joints[i].origin_offset) *
            Eigen::AngleAxisd(q[i], model.joints[i].axis);
    result.link_frames.push_back(frame);
    result.link_com_positions.push_back(frame * model.links[i].com_offset);
  }
  return result;
}

namespace detail {

/// World-frame axis direction of joint j (the joint's own rotation leaves it
/// fixed, so the link frame works as well as the parent frame).
inline Eigen::Vector3d joint_world_axis(const ChainModel& model,
                                        const FkResult& fk, std::size_t j) {
  return fk.link_frames[j].rotation() * model.joints[j].axis;
}

/// 3 x n position Jacobian of an arbitrary world point attached to link
/// `link_index`. Columns of joints distal to the link are zero.
inline Eigen::MatrixXd point_jacobian3(const ChainModel& model,
                                       const FkResult& fk,
                                       std::size_t link_index,
                                       const Eigen::Vector3d& point_world) {
  const std::size_t n = model.dof();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, static_cast<int>(n));
  for (std::size_t j = 0; j <= link_index; ++j) {
    const Eigen::Vector3d axis = joint_world_axis(model, fk, j);
    const Eigen::Vector3d origin = fk.link_frames[j].translation();
    jac.col(static_cast<int>(j)) = axis.cross(point_world - origin);
  }
  return jac;
}

/// 3 x n angular Jacobian of link `link_index`.
inline Eigen::MatrixXd angular_jacobian3(const ChainModel& model,
                                         const FkResult& fk,
                                         std::size_t link_index) {
  const std::size_t n = model.dof();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(3, static_cast<int>(n));
  for (std::size_t j = 0; j <= link_index; ++j)
    jac.col(static_cast<int>(j)) = joint_world_axis(model, fk, j);
  return jac;
}

}  // namespace detail

/// task_dim x n Jacobian of the CoM of one link. Planar chains drop the
/// (identically zero) z-row.
inline Eigen::MatrixXd link_com_jacobian(const ChainModel& model,
                                         const Configuration& q,
                                         std::size_t link_index) {
  if (link_index >= model.dof())
    throw InvalidModel("link index " + std::to_string(link_index) +
                       " out of range for " + std::to_string(model.dof()) +
                       "-joint chain");
  const FkResult fk = forward_kinematics(model, q);
  const Eigen::MatrixXd jac = detail::point_jacobian3(
      model, fk, link_index, fk.link_com_positions[link_index]);
  return jac.topRows(model.task_dim);
}

/// Jacobian of the whole-chain CoM together with the total mass.
struct ComJacobian {
  Eigen::MatrixXd jacobian;  // task_dim x n
  double total_mass = 0.0;   // kg
};

/// Mass-weighted average of the per-link CoM Jacobians. Zero-mass links drop
/// out exactly.
inline ComJacobian robot_com_jacobian(const ChainModel& model,
                                      const Configuration& q,
                                      bool check_limits = true) {
  validate_model(model);
  validate_configuration(model, q, check_limits);
  const double mass = model.total_mass();
  if (mass <= 0.0) throw InvalidModel("total mass must be positive");

  const FkResult fk = forward_kinematics(model, q, check_limits);
  const std::size_t n = model.dof();
  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(3, static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (model.links[i].mass == 0.0) continue;
    weighted += model.links[i].mass *
                detail::point_jacobian3(model, fk, i,
                                        fk.link_com_positions[i]);
  }
  return ComJacobian{weighted.topRows(model.task_dim) / mass, mass};
}

/// World position of the whole-chain CoM, truncated to task_dim.
inline Eigen::VectorXd com_position(const ChainModel& model,
                                    const Configuration& q,
                                    bool check_limits = true) {
  const FkResult fk = forward_kinematics(model, q, check_limits);
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < model.dof(); ++i)
    com += model.links[i].mass * fk.link_com_positions[i];
  com /= model.total_mass();
  return com.head(model.task_dim);
}

/// Joint-space mass matrix M = sum_i m_i J_ci^T J_ci + J_wi^T I_i J_wi.
/// The rotational term enters only for links that declare an inertia tensor;
/// it is rotated into world axes before assembly. Symmetric PSD by
/// construction (symmetrized against roundoff).
inline Eigen::MatrixXd mass_matrix(const ChainModel& model,
                                   const Configuration& q,
                                   bool check_limits = true) {
  validate_model(model);
  validate_configuration(model, q, check_limits);

  const FkResult fk = forward_kinematics(model, q, check_limits);
  const std::size_t n = model.dof();
  Eigen::MatrixXd mass =
      Eigen::MatrixXd::Zero(static_cast<int>(n), static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const LinkSpec& link = model.links[i];
    if (link.mass > 0.0) {
      const Eigen::MatrixXd jac = detail::point_jacobian3(
          model, fk, i, fk.link_com_positions[i]);
      mass.noalias() += link.mass * jac.transpose() * jac;
    }
    if (link.rot_inertia) {
      const Eigen::Matrix3d rot = fk.link_frames[i].rotation();
      const Eigen::Matrix3d inertia_world =
          rot * (*link.rot_inertia) * rot.transpose();
      const Eigen::MatrixXd jac_w = detail::angular_jacobian3(model, fk, i);
      mass.noalias() += jac_w.transpose() * inertia_world * jac_w;
    }
  }
  return 0.5 * (mass + mass.transpose());
}

}  // namespace rotom

#endif  // ROTOM_CHAIN_MODEL_HPP_
