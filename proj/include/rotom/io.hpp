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

#ifndef ROTOM_IO_HPP_
#define ROTOM_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rotom/chain_model.hpp"
#include "rotom/errors.hpp"

namespace rotom {

/// A chain model together with the display name from its robot file.
struct ParsedRobot {
  std::string name;
  ChainModel model;
};

namespace detail {

using Json = nlohmann::json;

/// Rejects any key of `obj` that is not in `allowed`, naming the key and
/// where it appeared.
inline void reject_unknown_keys(const Json& obj,
                                const std::vector<std::string>& allowed,
                                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const std::string& key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw SchemaError("unknown key '" + item.key() + "' in " + context);
  }
}

inline const Json& require_key(const Json& obj, const std::string& key,
                               const std::string& context) {
  if (!obj.contains(key))
    throw SchemaError("missing required key '" + key + "' in " + context);
  return obj.at(key);
}

inline double as_number(const Json& value, const std::string& context) {
  if (!value.is_number())
    throw SchemaError(context + " must be a number");
  return value.get<double>();
}

inline Eigen::Vector3d as_vec3(const Json& value, const std::string& context) {
  if (!value.is_array() || value.size() != 3)
    throw SchemaError(context + " must be an array of 3 numbers");
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) out[i] = as_number(value.at(i), context);
  return out;
}

inline Eigen::Matrix3d as_mat3_row_major(const Json& value,
                                         const std::string& context) {
  if (!value.is_array() || value.size() != 9)
    throw SchemaError(context + " must be a row-major array of 9 numbers");
  Eigen::Matrix3d out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      out(r, c) = as_number(value.at(3 * r + c), context);
  return out;
}

}  // namespace detail

/// Parses a robot description from JSON text. Top-level keys: `name`,
/// `task_dim`, `joints`, `links`, and optionally `base_frame`. Each joint is
/// {axis, origin, limits?}; each link is {mass, com, inertia?} with inertia
/// as a row-major array of 9 numbers; base_frame is {rotation?, translation?}
/// with the same matrix encoding. Any unknown key anywhere is rejected with
/// a SchemaError naming the key; the assembled model is then checked by
/// validate_model.
inline ParsedRobot parse_robot(const std::string& text) {
  detail::Json root;
  try {
    root = detail::Json::parse(text);
  } catch (const detail::Json::parse_error& error) {
    throw SchemaError(std::string("robot file is not valid JSON: ") +
                      error.what());
  }
  if (!root.is_object())
    throw SchemaError("robot file top level must be an object");
  detail::reject_unknown_keys(
      root, {"name", "task_dim", "base_frame", "joints", "links"},
      "robot file");

  ParsedRobot parsed;
  const detail::Json& name = detail::require_key(root, "name", "robot file");
  if (!name.is_string()) throw SchemaError("'name' must be a string");
  parsed.name = name.get<std::string>();

  const detail::Json& task_dim =
      detail::require_key(root, "task_dim", "robot file");
  if (!task_dim.is_number_integer())
    throw SchemaError("'task_dim' must be an integer");
  parsed.model.task_dim = task_dim.get<int>();

  if (root.contains("base_frame")) {
    const detail::Json& base = root.at("base_frame");
    if (!base.is_object())
      throw SchemaError("'base_frame' must be an object");
    detail::reject_unknown_keys(base, {"rotation", "translation"},
                                "base_frame");
    Eigen::Isometry3d frame = Eigen::Isometry3d::Identity();
    if (base.contains("rotation")) {
      const Eigen::Matrix3d rotation =
          detail::as_mat3_row_major(base.at("rotation"),
                                    "base_frame 'rotation'");
      if ((rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
                  .cwiseAbs()
                  .maxCoeff() > 1e-9 ||
          rotation.determinant() < 0.0)
        throw SchemaError("base_frame 'rotation' must be a rotation matrix");
      frame.linear() = rotation;
    }
    if (base.contains("translation"))
      frame.translation() =
          detail::as_vec3(base.at("translation"), "base_frame 'translation'");
    parsed.model.base_frame = frame;
  }

  const detail::Json& joints =
      detail::require_key(root, "joints", "robot file");
  if (!joints.is_array()) throw SchemaError("'joints' must be an array");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const detail::Json& joint = joints.at(i);
    const std::string context = "joint " + std::to_string(i);
    if (!joint.is_object()) throw SchemaError(context + " must be an object");
    detail::reject_unknown_keys(joint, {"axis", "origin", "limits"}, context);

    JointSpec spec;
    spec.axis = detail::as_vec3(detail::require_key(joint, "axis", context),
                                context + " 'axis'");
    spec.origin_offset = detail::as_vec3(
        detail::require_key(joint, "origin", context), context + " 'origin'");
    if (joint.contains("limits")) {
      const detail::Json& limits = joint.at("limits");
      if (!limits.is_array() || limits.size() != 2)
        throw SchemaError(context +
                          " 'limits' must be an array of 2 numbers");
      spec.limits = JointLimits{
          detail::as_number(limits.at(0), context + " 'limits'"),
          detail::as_number(limits.at(1), context + " 'limits'")};
    }
    parsed.model.joints.push_back(spec);
  }

  const detail::Json& links = detail::require_key(root, "links", "robot file");
  if (!links.is_array()) throw SchemaError("'links' must be an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const detail::Json& link = links.at(i);
    const std::string context = "link " + std::to_string(i);
    if (!link.is_object()) throw SchemaError(context + " must be an object");
    detail::reject_unknown_keys(link, {"mass", "com", "inertia"}, context);

    LinkSpec spec;
    spec.mass = detail::as_number(detail::require_key(link, "mass", context),
                                  context + " 'mass'");
    spec.com_offset = detail::as_vec3(
        detail::require_key(link, "com", context), context + " 'com'");
    if (link.contains("inertia"))
      spec.rot_inertia = detail::as_mat3_row_major(link.at("inertia"),
                                                   context + " 'inertia'");
    parsed.model.links.push_back(spec);
  }

  validate_model(parsed.model);
  return parsed;
}

/// Loads and parses a robot description file. An unreadable file is an I/O
/// error, not a schema violation.
inline ParsedRobot load_robot(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open robot file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_robot(buffer.str());
}

/// Loads a robot description file, keeping only the model.
inline ChainModel load_model(const std::string& path) {
  return load_robot(path).model;
}

}  // namespace rotom

#endif  // ROTOM_IO_HPP_
