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

#ifndef ROTOM_SEARCH_HPP_
#define ROTOM_SEARCH_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rotom/centroidal.hpp"
#include "rotom/chain_model.hpp"
#include "rotom/errors.hpp"

namespace rotom {

namespace detail {

/// Below this transmitted-force norm the objective's gradient is undefined
/// (the norm has a kink at zero) and the point counts as a zero.
inline constexpr double kNormKinkThreshold = 1e-12;

/// Finite-difference step for the zero-search residual Jacobian.
inline constexpr double kResidualFdStep = 1e-6;

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  double w = std::fmod(a + M_PI, two_pi);
  if (w < 0.0) w += two_pi;
  return w - M_PI;
}

/// Largest wrapped per-joint distance between two configurations.
inline double wrapped_distance(const Configuration& a, const Configuration& b) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(wrap_angle(a[i] - b[i])));
  return d;
}

/// Transmitted force at q, with limit checks optionally suppressed for
/// probe evaluations.
inline Eigen::VectorXd transmitted_force(const ChainModel& model,
                                         const Configuration& q,
                                         const Eigen::VectorXd& force,
                                         bool check_limits) {
  return centroidal_state(model, q, check_limits).mobility * force;
}

}  // namespace detail

/// Tuning knobs of the gradient descent. The gain scales the nominal step;
/// step_size is the base step length in radians.
struct DescentSettings {
  double gain = 1.0;
  double fd_step = 1e-6;
  double step_size = 1e-2;
  int max_iters = 10000;
  double grad_tol = 1e-8;
  double objective_tol = 1e-12;
};

inline void validate_settings(const DescentSettings& s) {
  if (!(s.gain > 0.0) || !(s.fd_step > 0.0) || !(s.step_size > 0.0) ||
      !(s.max_iters > 0) || !(s.grad_tol > 0.0) || !(s.objective_tol > 0.0))
    throw InvalidModel("descent settings must all be positive");
  if (!(s.fd_step < s.step_size))
    throw InvalidModel("fd_step must be smaller than step_size");
}

/// Why the descent stopped.
enum class StopReason { GradientSmall, ObjectiveFlat, MaxIters, JointLimit };

inline const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::GradientSmall: return "GradientSmall";
    case StopReason::ObjectiveFlat: return "ObjectiveFlat";
    case StopReason::MaxIters: return "MaxIters";
    case StopReason::JointLimit: return "JointLimit";
  }
  return "Unknown";
}

/// One accepted descent iterate and the transmitted-force norm there.
struct DescentIterate {
  Configuration q;
  double objective = 0.0;  // ||T(q) F|| for the caller's F
};

/// Full record of a descent run. Objectives are strictly decreasing across
/// iterates. converged is false only when the run hit max_iters or was
/// blocked by a joint limit before any stopping test fired.
struct DescentTrace {
  std::vector<DescentIterate> iterates;
  bool converged = false;
  StopReason reason = StopReason::MaxIters;
};

/// Gradient of q -> ||T(q) F|| by central finite differences, holding F
/// fixed in the world frame. Probe points skip joint-limit checks so the
/// gradient exists at the boundary. Throws NormSingularity when the
/// transmitted force is below the kink threshold: the norm is not
/// differentiable at a zero, and a zero is already the global minimum.
inline Eigen::VectorXd rotom_gradient(const ChainModel& model,
                                      const Configuration& q,
                                      const Eigen::VectorXd& force,
                                      double fd_step = 1e-6) {
  if (force.norm() == 0.0) throw ZeroForce("force vector must be nonzero");
  if (!(fd_step > 0.0)) throw InvalidModel("fd_step must be positive");

  const double base =
      detail::transmitted_force(model, q, force, /*check_limits=*/true).norm();
  if (base <= detail::kNormKinkThreshold)
    throw NormSingularity(
        "transmitted force is zero; the objective is not differentiable "
        "here (and cannot decrease further)");

  const Eigen::Index n = q.size();
  Eigen::VectorXd grad(n);
  Configuration probe = q;
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = q[i] + fd_step;
    const double plus =
        detail::transmitted_force(model, probe, force, false).norm();
    probe[i] = q[i] - fd_step;
    const double minus =
        detail::transmitted_force(model, probe, force, false).norm();
    probe[i] = q[i];
    grad[i] = (plus - minus) / (2.0 * fd_step);
  }
  return grad;
}

/// Gradient descent on the transmitted-force norm from q0, with backtracking
/// line search that accepts only strict decreases and projection onto joint
/// limits. Stopping tests are evaluated on the unit-force objective, so the
/// iterate sequence is invariant under scaling F by a positive constant; the
/// trace reports objectives for the caller's F.
inline DescentTrace minimize_rotom(const ChainModel& model,
                                   const Configuration& q0,
                                   const Eigen::VectorXd& force,
                                   const DescentSettings& settings = {}) {
  validate_settings(settings);
  validate_model(model);
  validate_configuration(model, q0);
  const double force_norm = force.norm();
  if (force_norm == 0.0) throw ZeroForce("force vector must be nonzero");
  const Eigen::VectorXd unit_force = force / force_norm;

  const auto objective = [&](const Configuration& q, bool check_limits) {
    return detail::transmitted_force(model, q, unit_force, check_limits)
        .norm();
  };
  const auto clamp_to_limits = [&](Configuration q) {
    for (std::size_t i = 0; i < model.dof(); ++i) {
      const auto& limits = model.joints[i].limits;
      if (!limits) continue;
      q[static_cast<Eigen::Index>(i)] =
          std::clamp(q[static_cast<Eigen::Index>(i)], limits->lower,
                     limits->upper);
    }
    return q;
  };

  DescentTrace trace;
  Configuration q = q0;
  double value = objective(q, true);
  trace.iterates.push_back({q, value * force_norm});

  for (int iter = 0; iter < settings.max_iters; ++iter) {
    if (value <= detail::kNormKinkThreshold) {
      // Sitting on a zero of the objective: the global minimum.
      trace.converged = true;
      trace.reason = StopReason::GradientSmall;
      return trace;
    }

    Eigen::VectorXd grad;
    try {
      grad = rotom_gradient(model, q, unit_force, settings.fd_step);
    } catch (const NormSingularity&) {
      trace.converged = true;
      trace.reason = StopReason::GradientSmall;
      return trace;
    }
    if (grad.norm() < settings.grad_tol) {
      trace.converged = true;
      trace.reason = StopReason::GradientSmall;
      return trace;
    }

    // Backtracking: halve the step until the (limit-projected) candidate
    // strictly decreases the objective.
    double step = settings.gain * settings.step_size;
    bool accepted = false;
    bool limit_blocked = false;
    for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
      const Configuration candidate = clamp_to_limits(q - step * grad);
      if ((candidate - q).norm() == 0.0) {
        // The projection removed the whole step: pinned at a limit.
        limit_blocked = true;
        break;
      }
      const double candidate_value = objective(candidate, true);
      if (candidate_value < value) {
        const double decrease = value - candidate_value;
        q = candidate;
        value = candidate_value;
        trace.iterates.push_back({q, value * force_norm});
        accepted = true;
        if (decrease < settings.objective_tol) {
          trace.converged = true;
          trace.reason = StopReason::ObjectiveFlat;
          return trace;
        }
        break;
      }
    }
    if (!accepted) {
      if (limit_blocked) {
        trace.converged = false;
        trace.reason = StopReason::JointLimit;
      } else {
        // No decreasing step exists at line-search resolution.
        trace.converged = true;
        trace.reason = StopReason::ObjectiveFlat;
      }
      return trace;
    }
  }
  trace.converged = false;
  trace.reason = StopReason::MaxIters;
  return trace;
}

/// Tuning knobs of the multistart zero search. Seeds form a uniform grid
/// with seeds_per_joint points per joint over each joint's search range:
/// the declared limits, or one full period for unlimited joints.
struct ZeroSearchSettings {
  int seeds_per_joint = 8;
  double residual_tol = 1e-10;
  double dedupe_tol = 1e-3;
  int max_newton_iters = 50;
};

inline void validate_settings(const ZeroSearchSettings& s) {
  if (!(s.seeds_per_joint > 0) || !(s.residual_tol > 0.0) ||
      !(s.dedupe_tol > 0.0) || !(s.max_newton_iters > 0))
    throw InvalidModel("zero-search settings must all be positive");
}

/// Outcome of one seed of the zero search.
struct SeedReport {
  Configuration seed;
  Configuration solution;
  double residual = 0.0;  // ||T(solution) F||
  int iterations = 0;
  bool accepted = false;  // residual below tolerance and within limits
};

/// Deduplicated zero configurations plus per-seed diagnostics. An empty
/// `zeros` list with converged seed reports means the model genuinely has no
/// reachable zero for this force, as opposed to a solver failure.
struct ZeroSearchResult {
  std::vector<Configuration> zeros;  // sorted by wrapped lexicographic order
  std::vector<SeedReport> seeds;
};

/// Finds configurations where the force is fully absorbed, i.e. T(q) F = 0,
/// by damped Gauss-Newton from every grid seed. Solutions are filtered to
/// joint limits, wrapped into [-pi, pi) for unlimited joints, deduplicated
/// under the wrapped metric, and sorted. For chains with three or more
/// joints the zero set is generically a continuum; the returned points are
/// representatives, not an exhaustive enumeration.
inline ZeroSearchResult find_rotom_zeros_detailed(
    const ChainModel& model, const Eigen::VectorXd& force,
    const ZeroSearchSettings& settings = {}) {
  validate_settings(settings);
  validate_model(model);
  if (force.norm() == 0.0) throw ZeroForce("force vector must be nonzero");

  const std::size_t n = model.dof();
  const auto residual = [&](const Configuration& q) {
    return detail::transmitted_force(model, q, force, /*check_limits=*/false);
  };

  // Per-joint seed values: linspace over limits, or one period when free.
  std::vector<std::vector<double>> seed_values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int m = settings.seeds_per_joint;
    const auto& limits = model.joints[i].limits;
    seed_values[i].reserve(static_cast<std::size_t>(m));
    if (limits) {
      for (int k = 0; k < m; ++k)
        seed_values[i].push_back(
            m == 1 ? 0.5 * (limits->lower + limits->upper)
                   : limits->lower +
                         (limits->upper - limits->lower) * k / (m - 1));
    } else {
      for (int k = 0; k < m; ++k)
        seed_values[i].push_back(-M_PI + 2.0 * M_PI * k / m);
    }
  }

  ZeroSearchResult result;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Configuration seed(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      seed[static_cast<Eigen::Index>(i)] = seed_values[i][idx[i]];

    SeedReport report;
    report.seed = seed;
    Configuration q = seed;
    Eigen::VectorXd r = residual(q);
    int iter = 0;
    for (; iter < settings.max_newton_iters; ++iter) {
      if (r.norm() < settings.residual_tol) break;
      // Central-difference residual Jacobian, task_dim x n.
      Eigen::MatrixXd jac(r.size(), static_cast<Eigen::Index>(n));
      Configuration probe = q;
      for (std::size_t j = 0; j < n; ++j) {
        const Eigen::Index col = static_cast<Eigen::Index>(j);
        probe[col] = q[col] + detail::kResidualFdStep;
        const Eigen::VectorXd plus = residual(probe);
        probe[col] = q[col] - detail::kResidualFdStep;
        const Eigen::VectorXd minus = residual(probe);
        probe[col] = q[col];
        jac.col(col) = (plus - minus) / (2.0 * detail::kResidualFdStep);
      }
      const Eigen::VectorXd delta =
          jac.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(r);
      // Damping: halve the step until the residual norm decreases.
      double beta = 1.0;
      bool moved = false;
      for (int halving = 0; halving < 20; ++halving, beta *= 0.5) {
        const Configuration candidate = q - beta * delta;
        const Eigen::VectorXd candidate_r = residual(candidate);
        if (candidate_r.norm() < r.norm()) {
          q = candidate;
          r = candidate_r;
          moved = true;
          break;
        }
      }
      if (!moved) break;  // stalled seed
    }

    // Canonicalize: wrap free joints, snap near-limit values onto the limit.
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Index col = static_cast<Eigen::Index>(i);
      const auto& limits = model.joints[i].limits;
      if (!limits) {
        q[col] = detail::wrap_angle(q[col]);
      } else {
        if (q[col] < limits->lower && limits->lower - q[col] < 1e-9)
          q[col] = limits->lower;
        if (q[col] > limits->upper && q[col] - limits->upper < 1e-9)
          q[col] = limits->upper;
      }
    }
    r = residual(q);

    report.solution = q;
    report.residual = r.norm();
    report.iterations = iter;
    bool within_limits = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& limits = model.joints[i].limits;
      if (limits && (q[static_cast<Eigen::Index>(i)] < limits->lower ||
                     q[static_cast<Eigen::Index>(i)] > limits->upper))
        within_limits = false;
    }
    report.accepted = within_limits && report.residual < settings.residual_tol;
    result.seeds.push_back(report);

    // Advance the mixed-radix seed index.
    std::size_t d = 0;
    for (; d < n; ++d) {
      if (++idx[d] < seed_values[d].size()) break;
      idx[d] = 0;
    }
    if (d == n) break;
  }

  // Deduplicate accepted solutions under the wrapped metric, preferring the
  // smallest residual, then sort for deterministic output.
  std::vector<const SeedReport*> accepted;
  for (const SeedReport& report : result.seeds)
    if (report.accepted) accepted.push_back(&report);
  std::sort(accepted.begin(), accepted.end(),
            [](const SeedReport* a, const SeedReport* b) {
              return a->residual < b->residual;
            });
  std::vector<Configuration> unique;
  for (const SeedReport* report : accepted) {
    bool duplicate = false;
    for (const Configuration& kept : unique)
      if (detail::wrapped_distance(report->solution, kept) <
          settings.dedupe_tol) {
        duplicate = true;
        break;
      }
    if (!duplicate) unique.push_back(report->solution);
  }
  std::sort(unique.begin(), unique.end(),
            [](const Configuration& a, const Configuration& b) {
              for (Eigen::Index i = 0; i < a.size(); ++i) {
                const double wa = detail::wrap_angle(a[i]);
                const double wb = detail::wrap_angle(b[i]);
                if (wa != wb) return wa < wb;
              }
              return false;
            });
  result.zeros = std::move(unique);
  return result;
}

/// Zero configurations only; see find_rotom_zeros_detailed for diagnostics.
inline std::vector<Configuration> find_rotom_zeros(
    const ChainModel& model, const Eigen::VectorXd& force,
    const ZeroSearchSettings& settings = {}) {
  return find_rotom_zeros_detailed(model, force, settings).zeros;
}

}  // namespace rotom

#endif  // ROTOM_SEARCH_HPP_
