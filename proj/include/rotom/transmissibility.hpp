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

#ifndef ROTOM_TRANSMISSIBILITY_HPP_
#define ROTOM_TRANSMISSIBILITY_HPP_

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rotom/centroidal.hpp"
#include "rotom/errors.hpp"

namespace rotom {

namespace detail {

/// Mobility eigenvalues below this are treated as a null direction; an
/// ellipsoid whose largest eigenvalue falls below it carries no information.
inline constexpr double kDegeneracyThreshold = 1e-9;

/// Slack allowed on the theoretical eigenvalue range [0, 1] before clamping.
inline constexpr double kEigenvalueSlack = 1e-9;

/// Flips an eigenvector so its first component of nonnegligible magnitude is
/// positive. Fixes the sign ambiguity of eigendecompositions so that output
/// is reproducible across runs and platforms.
inline Eigen::VectorXd fix_sign(Eigen::VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace detail

/// The image of the unit force sphere under the mobility matrix: an ellipsoid
/// centered at the CoM whose semi-axes are the eigenpairs of T. The index is
/// the minor-to-major eigenvalue ratio; 1 means motion transmits equally in
/// every direction.
struct TransmissibilityEllipsoid {
  Eigen::VectorXd center;       // task_dim, CoM world position
  Eigen::VectorXd eigenvalues;  // descending, each in [0, 1]
  Eigen::MatrixXd eigenvectors; // orthonormal columns, one per eigenvalue
  double index = 0.0;           // lambda_min / lambda_max
};

/// Decomposes a symmetric mobility matrix about a given center. Eigenvalues
/// are sorted descending, clamped into [0, 1], and each eigenvector's sign is
/// fixed deterministically. Throws DegenerateEllipsoid when every eigenvalue
/// is below the degeneracy threshold and InvalidModel when an eigenvalue
/// falls materially outside [0, 1].
inline TransmissibilityEllipsoid ellipsoid_from_mobility(
    const Eigen::MatrixXd& mobility, const Eigen::VectorXd& center) {
  if (mobility.rows() != mobility.cols() || mobility.rows() != center.size())
    throw InvalidModel("mobility matrix and center have mismatched sizes");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mobility);
  const Eigen::Index dim = mobility.rows();

  TransmissibilityEllipsoid out;
  out.center = center;
  out.eigenvalues.resize(dim);
  out.eigenvectors.resize(dim, dim);
  // Eigen returns ascending order; emit descending.
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Eigen::Index src = dim - 1 - k;
    double lambda = eig.eigenvalues()[src];
    if (lambda < -detail::kEigenvalueSlack ||
        lambda > 1.0 + detail::kEigenvalueSlack)
      throw InvalidModel("mobility eigenvalue " + std::to_string(lambda) +
                         " outside [0, 1]");
    out.eigenvalues[k] = std::min(1.0, std::max(0.0, lambda));
    out.eigenvectors.col(k) = detail::fix_sign(eig.eigenvectors().col(src));
  }

  if (out.eigenvalues[0] < detail::kDegeneracyThreshold)
    throw DegenerateEllipsoid(
        "all mobility eigenvalues below 1e-9; the CoM cannot move");
  out.index = out.eigenvalues[dim - 1] / out.eigenvalues[0];
  return out;
}

/// Transmissibility ellipsoid of a configuration, centered at its CoM.
inline TransmissibilityEllipsoid ellipsoid(const CentroidalState& state) {
  return ellipsoid_from_mobility(state.mobility, state.com_position);
}

/// Ratio of transmission of motion along a direction: the fraction of an
/// applied unit force that survives as fictitious force. The direction is
/// normalized internally; a zero direction throws ZeroForce.
inline double rotom(const CentroidalState& state,
                    const Eigen::VectorXd& direction) {
  return fictitious_force(state, direction).rotom;
}

/// Minor-to-major eigenvalue ratio of the transmissibility ellipsoid.
inline double transmissibility_index(const CentroidalState& state) {
  return ellipsoid(state).index;
}

/// Distance from the ellipsoid center to its boundary surface along a ray.
/// Solves for r with the boundary coordinates (r c_i / lambda_i) at unit
/// norm, restricted to the non-null eigenspace; a direction whose projection
/// onto that eigenspace is negligible reads 0, since the collapsed surface
/// has no extent there. This coincides with rotom exactly on eigen-directions
/// and is reported as a separate diagnostic elsewhere.
inline double ellipsoid_ray_reading(const TransmissibilityEllipsoid& ellipsoid,
                                    const Eigen::VectorXd& direction) {
  if (direction.size() != ellipsoid.center.size())
    throw InvalidModel("direction has " + std::to_string(direction.size()) +
                       " entries, ellipsoid is " +
                       std::to_string(ellipsoid.center.size()) +
                       "-dimensional");
  const double norm = direction.norm();
  if (norm == 0.0) throw ZeroForce("direction must be nonzero");
  const Eigen::VectorXd unit = direction / norm;

  double sum = 0.0;
  double in_span = 0.0;  // squared projection onto the non-null eigenspace
  for (Eigen::Index i = 0; i < ellipsoid.eigenvalues.size(); ++i) {
    const double lambda = ellipsoid.eigenvalues[i];
    if (lambda < detail::kDegeneracyThreshold) continue;
    const double coord = ellipsoid.eigenvectors.col(i).dot(unit);
    in_span += coord * coord;
    sum += (coord / lambda) * (coord / lambda);
  }
  if (in_span <= detail::kDegeneracyThreshold * detail::kDegeneracyThreshold)
    return 0.0;
  return 1.0 / std::sqrt(sum);
}

/// Points on the ellipsoid boundary: the mobility image of unit directions
/// sampled on the circle (2D) or a latitude-longitude grid (3D), offset by
/// the center. Returns exactly n_samples points; requires n_samples >= 8.
inline std::vector<Eigen::VectorXd> sample_ellipsoid_boundary(
    const TransmissibilityEllipsoid& ellipsoid, int n_samples) {
  if (n_samples < 8)
    throw InvalidModel("n_samples must be at least 8");
  const Eigen::Index dim = ellipsoid.center.size();

  // Reassemble T = V diag(lambda) V^T; boundary points are center + T u.
  const Eigen::MatrixXd mobility = ellipsoid.eigenvectors *
                                   ellipsoid.eigenvalues.asDiagonal() *
                                   ellipsoid.eigenvectors.transpose();

  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(n_samples));
  constexpr double kTwoPi = 2.0 * M_PI;
  if (dim == 2) {
    for (int k = 0; k < n_samples; ++k) {
      const double theta = kTwoPi * k / n_samples;
      Eigen::Vector2d u(std::cos(theta), std::sin(theta));
      points.push_back(ellipsoid.center + mobility * u);
    }
  } else {
    // Midpoint latitudes avoid duplicated poles; truncate the grid to
    // exactly n_samples points.
    const int n_lat = std::max(
        2, static_cast<int>(std::lround(std::sqrt(n_samples / 2.0))));
    const int n_lon = (n_samples + n_lat - 1) / n_lat;
    for (int i = 0; i < n_lat && points.size() <
                                     static_cast<std::size_t>(n_samples);
         ++i) {
      const double phi = M_PI * (i + 0.5) / n_lat;
      for (int j = 0; j < n_lon && points.size() <
                                       static_cast<std::size_t>(n_samples);
           ++j) {
        const double theta = kTwoPi * j / n_lon;
        Eigen::Vector3d u(std::sin(phi) * std::cos(theta),
                          std::sin(phi) * std::sin(theta), std::cos(phi));
        points.push_back(ellipsoid.center + mobility * u);
      }
    }
  }
  return points;
}

}  // namespace rotom

#endif  // ROTOM_TRANSMISSIBILITY_HPP_
