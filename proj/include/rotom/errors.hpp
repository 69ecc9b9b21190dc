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

#ifndef ROTOM_ERRORS_HPP_
#define ROTOM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rotom {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A chain description violates a structural invariant (bad axis norm,
/// inconsistent joint/link counts, configuration out of limits, ...).
class InvalidModel : public Error {
 public:
  explicit InvalidModel(const std::string& what) : Error(what) {}
};

/// A robot description file does not match the schema. The message names
/// the offending key or field.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

/// The joint-space mass matrix is numerically singular at the requested
/// configuration (condition estimate above the gate). Signals a
/// kinematically degenerate configuration.
class SingularMassMatrix : public Error {
 public:
  explicit SingularMassMatrix(const std::string& what) : Error(what) {}
};

/// A zero force vector was passed where a direction is required; the
/// transmission ratio is undefined for it.
class ZeroForce : public Error {
 public:
  explicit ZeroForce(const std::string& what) : Error(what) {}
};

/// The mobility matrix has no eigenvalue above the degeneracy threshold,
/// so no meaningful ellipsoid (or index) exists.
class DegenerateEllipsoid : public Error {
 public:
  explicit DegenerateEllipsoid(const std::string& what) : Error(what) {}
};

/// The objective norm is (numerically) zero, where its gradient is not
/// defined. Callers should treat the configuration as already optimal.
class NormSingularity : public Error {
 public:
  explicit NormSingularity(const std::string& what) : Error(what) {}
};

}  // namespace rotom

#endif  // ROTOM_ERRORS_HPP_
