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

// Command-line front end: loads robot description files, runs the
// transmissibility analyses, and emits deterministic JSON or CSV. Identical
// invocations produce byte-identical output; every number is printed with up
// to 17 significant digits so values round-trip exactly.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "rotom/rotom.hpp"

namespace {

constexpr const char* kSchemaVersion = "1";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Ordered, pretty-printed JSON writer. Keys are emitted in call order and
// doubles through format_double, which is what makes golden-file testing of
// the output possible.

class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  void begin_object() {
    value_prefix();
    out_ << '{';
    stack_.push_back(0);
  }
  void end_object() { close('}'); }
  void begin_array() {
    value_prefix();
    out_ << '[';
    stack_.push_back(0);
  }
  void end_array() { close(']'); }

  void key(const std::string& name) {
    item_prefix();
    write_string(name);
    out_ << ": ";
    have_key_ = true;
  }
  void value(const std::string& text) {
    value_prefix();
    write_string(text);
  }
  void value(const char* text) { value(std::string(text)); }
  void value(double v) {
    value_prefix();
    out_ << format_double(v);
  }
  void value(int v) {
    value_prefix();
    out_ << v;
  }
  void value(std::size_t v) {
    value_prefix();
    out_ << v;
  }
  void value(bool b) {
    value_prefix();
    out_ << (b ? "true" : "false");
  }
  void null() {
    value_prefix();
    out_ << "null";
  }
  void finish() { out_ << '\n'; }

 private:
  void indent() {
    for (std::size_t i = 0; i < stack_.size(); ++i) out_ << "  ";
  }
  void item_prefix() {
    if (stack_.empty()) return;
    if (stack_.back()++ > 0) out_ << ',';
    out_ << '\n';
    indent();
  }
  void value_prefix() {
    if (have_key_) {
      have_key_ = false;
      return;
    }
    item_prefix();
  }
  void close(char c) {
    const bool empty = stack_.back() == 0;
    stack_.pop_back();
    if (!empty) {
      out_ << '\n';
      indent();
    }
    out_ << c;
  }
  void write_string(const std::string& text) {
    out_ << '"';
    for (char c : text) {
      switch (c) {
        case '"': out_ << "\\\""; break;
        case '\\': out_ << "\\\\"; break;
        case '\n': out_ << "\\n"; break;
        case '\t': out_ << "\\t"; break;
        case '\r': out_ << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out_ << buf;
          } else {
            out_ << c;
          }
      }
    }
    out_ << '"';
  }

  std::ostream& out_;
  std::vector<int> stack_;  // item count per open scope
  bool have_key_ = false;
};

void write_vector(JsonWriter& json, const Eigen::VectorXd& v) {
  json.begin_array();
  for (Eigen::Index i = 0; i < v.size(); ++i) json.value(v[i]);
  json.end_array();
}

// ---------------------------------------------------------------------------
// Argument parsing helpers. Flags carrying numeric lists are taken as raw
// strings and converted here so that every failure funnels through the same
// error type and exit code.

double parse_double(const std::string& token, const std::string& flag) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw rotom::Error(flag + ": '" + token + "' is not a number");
  }
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ','))
    out.push_back(parse_double(token, flag));
  if (out.empty()) throw rotom::Error(flag + ": expected at least one number");
  return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& values) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = values[i];
  return out;
}

struct RangeSpec {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  double at(int k) const {
    return n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  }
};

RangeSpec parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ':')) parts.push_back(token);
  if (parts.size() != 3)
    throw rotom::Error("--range: expected lo:hi:n, got '" + text + "'");
  RangeSpec range;
  range.lo = parse_double(parts[0], "--range");
  range.hi = parse_double(parts[1], "--range");
  try {
    std::size_t pos = 0;
    range.n = std::stoi(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument(parts[2]);
  } catch (const std::exception&) {
    throw rotom::Error("--range: sample count '" + parts[2] +
                       "' is not an integer");
  }
  if (range.n < 1) throw rotom::Error("--range: sample count must be >= 1");
  return range;
}

constexpr double kDegToRad = M_PI / 180.0;

// ---------------------------------------------------------------------------
// Output plumbing shared by all commands.

struct CommonOptions {
  std::string robot_path;
  std::string format = "json";
  std::string out_path;
  bool degrees = false;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts,
                        bool with_degrees) {
  cmd->add_option("robot", opts->robot_path, "Robot description file")
      ->required();
  cmd->add_option("--format", opts->format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts->out_path,
                  "Write output to this file instead of stdout");
  if (with_degrees)
    cmd->add_flag("--degrees", opts->degrees,
                  "Interpret input angles as degrees (output stays radians)");
}

class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw rotom::Error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Emits the fixed envelope around one command's results. `results` and the
// optional `inputs` callback fill in the command-specific payload.
template <typename InputsFn, typename ResultsFn>
void emit_record(std::ostream& out, const std::string& command,
                 InputsFn inputs, ResultsFn results,
                 const std::vector<std::string>& diagnostics) {
  JsonWriter json(out);
  json.begin_object();
  json.key("schema_version");
  json.value(kSchemaVersion);
  json.key("command");
  json.value(command);
  json.key("inputs");
  json.begin_object();
  inputs(json);
  json.end_object();
  json.key("results");
  json.begin_object();
  results(json);
  json.end_object();
  json.key("diagnostics");
  json.begin_array();
  for (const std::string& d : diagnostics) json.value(d);
  json.end_array();
  json.end_object();
  json.finish();
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  return line;
}

// ---------------------------------------------------------------------------
// describe

void run_describe(const CommonOptions& common) {
  const rotom::ParsedRobot robot = rotom::load_robot(common.robot_path);
  const std::size_t n = robot.model.dof();
  const std::string summary =
      std::to_string(n) + (n == 1 ? " joint" : " joints") + ", total mass " +
      format_double(robot.model.total_mass()) + " kg, task_dim " +
      std::to_string(robot.model.task_dim);

  OutputTarget target(common.out_path);
  std::ostream& out = target.stream();
  if (common.format == "csv") {
    out << "name,joints,total_mass,task_dim\n"
        << robot.name << ',' << n << ','
        << format_double(robot.model.total_mass()) << ','
        << robot.model.task_dim << '\n';
    return;
  }
  emit_record(
      out, "describe",
      [&](JsonWriter& json) {
        json.key("robot");
        json.value(common.robot_path);
      },
      [&](JsonWriter& json) {
        json.key("name");
        json.value(robot.name);
        json.key("summary");
        json.value(summary);
        json.key("joints");
        json.value(n);
        json.key("links");
        json.value(robot.model.links.size());
        json.key("total_mass");
        json.value(robot.model.total_mass());
        json.key("task_dim");
        json.value(robot.model.task_dim);
        json.key("limits");
        json.begin_array();
        for (const auto& joint : robot.model.joints) {
          if (joint.limits) {
            json.begin_array();
            json.value(joint.limits->lower);
            json.value(joint.limits->upper);
            json.end_array();
          } else {
            json.null();
          }
        }
        json.end_array();
      },
      {});
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  CommonOptions common;
  std::string q_text;
  std::string force_text;
};

void run_eval(const EvalOptions& opts) {
  const rotom::ChainModel model = rotom::load_model(opts.common.robot_path);
  std::vector<double> q_values = parse_number_list(opts.q_text, "--q");
  if (opts.common.degrees)
    for (double& v : q_values) v *= kDegToRad;
  const Eigen::VectorXd q = to_eigen(q_values);
  const Eigen::VectorXd force =
      to_eigen(parse_number_list(opts.force_text, "--force"));

  const rotom::CentroidalState state = rotom::centroidal_state(model, q);
  const rotom::RotomResult result = rotom::fictitious_force(state, force);

  OutputTarget target(opts.common.out_path);
  std::ostream& out = target.stream();
  if (opts.common.format == "csv") {
    std::vector<std::string> header{"rotom"};
    std::vector<std::string> row{format_double(result.rotom)};
    const auto append = [&](const std::string& name,
                            const Eigen::VectorXd& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        header.push_back(name + "_" + std::to_string(i));
        row.push_back(format_double(v[i]));
      }
    };
    append("f", result.f);
    append("reaction", result.reaction);
    append("accel", result.accel);
    append("com", state.com_position);
    out << csv_join(header) << '\n' << csv_join(row) << '\n';
    return;
  }
  emit_record(
      out, "eval",
      [&](JsonWriter& json) {
        json.key("robot");
        json.value(opts.common.robot_path);
        json.key("q");
        write_vector(json, q);
        json.key("force");
        write_vector(json, force);
      },
      [&](JsonWriter& json) {
        json.key("rotom");
        json.value(result.rotom);
        json.key("f");
        write_vector(json, result.f);
        json.key("reaction");
        write_vector(json, result.reaction);
        json.key("accel");
        write_vector(json, result.accel);
        json.key("com");
        write_vector(json, state.com_position);
      },
      {});
}

// ---------------------------------------------------------------------------
// ellipsoid

struct EllipsoidOptions {
  CommonOptions common;
  std::string q_text;
  int samples = 0;  // 0 = no boundary sampling
};

void run_ellipsoid(const EllipsoidOptions& opts) {
  const rotom::ChainModel model = rotom::load_model(opts.common.robot_path);
  std::vector<double> q_values = parse_number_list(opts.q_text, "--q");
  if (opts.common.degrees)
    for (double& v : q_values) v *= kDegToRad;
  const Eigen::VectorXd q = to_eigen(q_values);

  const rotom::CentroidalState state = rotom::centroidal_state(model, q);
  const rotom::TransmissibilityEllipsoid ell = rotom::ellipsoid(state);
  std::vector<Eigen::VectorXd> samples;
  if (opts.samples > 0)
    samples = rotom::sample_ellipsoid_boundary(ell, opts.samples);

  OutputTarget target(opts.common.out_path);
  std::ostream& out = target.stream();
  if (opts.common.format == "csv") {
    const Eigen::Index dim = ell.center.size();
    if (!samples.empty()) {
      std::vector<std::string> header;
      for (Eigen::Index i = 0; i < dim; ++i)
        header.push_back("p_" + std::to_string(i));
      out << csv_join(header) << '\n';
      for (const Eigen::VectorXd& p : samples) {
        std::vector<std::string> row;
        for (Eigen::Index i = 0; i < dim; ++i)
          row.push_back(format_double(p[i]));
        out << csv_join(row) << '\n';
      }
    } else {
      std::vector<std::string> header{"eigenvalue"};
      for (Eigen::Index i = 0; i < dim; ++i)
        header.push_back("axis_" + std::to_string(i));
      out << csv_join(header) << '\n';
      for (Eigen::Index k = 0; k < dim; ++k) {
        std::vector<std::string> row{format_double(ell.eigenvalues[k])};
        for (Eigen::Index i = 0; i < dim; ++i)
          row.push_back(format_double(ell.eigenvectors(i, k)));
        out << csv_join(row) << '\n';
      }
    }
    return;
  }
  emit_record(
      out, "ellipsoid",
      [&](JsonWriter& json) {
        json.key("robot");
        json.value(opts.common.robot_path);
        json.key("q");
        write_vector(json, q);
        if (opts.samples > 0) {
          json.key("samples");
          json.value(opts.samples);
        }
      },
      [&](JsonWriter& json) {
        json.key("eigenvalues");
        write_vector(json, ell.eigenvalues);
        json.key("eigenvectors");
        json.begin_array();
        for (Eigen::Index k = 0; k < ell.eigenvectors.cols(); ++k)
          write_vector(json, ell.eigenvectors.col(k));
        json.end_array();
        json.key("index");
        json.value(ell.index);
        json.key("center");
        write_vector(json, ell.center);
        if (!samples.empty()) {
          json.key("boundary");
          json.begin_array();
          for (const Eigen::VectorXd& p : samples) write_vector(json, p);
          json.end_array();
        }
      },
      {});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  CommonOptions common;
  std::vector<int> joints;
  std::vector<std::string> range_texts;
  std::string q_text;      // base configuration, optional
  std::string force_text;  // exactly one of force/index
  bool index = false;
};

int sweep_thread_count(std::size_t cells) {
  long requested = 0;  // 0 = auto
  if (const char* env = std::getenv("ROTOM_THREADS"); env && *env) {
    char* end = nullptr;
    requested = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || requested < 0)
      throw rotom::Error("ROTOM_THREADS must be a nonnegative integer");
  }
  std::size_t threads = requested > 0
                            ? static_cast<std::size_t>(requested)
                            : std::max(1u, std::thread::hardware_concurrency());
  if (threads > cells) threads = cells;
  return static_cast<int>(std::max<std::size_t>(1, threads));
}

void run_sweep(const SweepOptions& opts) {
  const rotom::ChainModel model = rotom::load_model(opts.common.robot_path);
  const std::size_t n = model.dof();

  if (opts.joints.empty() || opts.joints.size() > 2)
    throw rotom::Error("--joint must be given once or twice");
  for (int j : opts.joints)
    if (j < 0 || static_cast<std::size_t>(j) >= n)
      throw rotom::Error("--joint " + std::to_string(j) +
                         " out of range for a " + std::to_string(n) +
                         "-joint chain");
  if (opts.joints.size() == 2 && opts.joints[0] == opts.joints[1])
    throw rotom::Error("--joint values must be distinct");

  if (opts.range_texts.empty())
    throw rotom::Error("--range is required");
  if (opts.range_texts.size() != 1 &&
      opts.range_texts.size() != opts.joints.size())
    throw rotom::Error(
        "--range must be given once, or once per swept joint");
  std::vector<RangeSpec> ranges;
  for (const std::string& text : opts.range_texts)
    ranges.push_back(parse_range(text));
  while (ranges.size() < opts.joints.size()) ranges.push_back(ranges[0]);
  if (opts.common.degrees)
    for (RangeSpec& r : ranges) {
      r.lo *= kDegToRad;
      r.hi *= kDegToRad;
    }

  const bool has_force = !opts.force_text.empty();
  if (has_force == opts.index)
    throw rotom::Error("exactly one of --force and --index is required");
  Eigen::VectorXd force;
  if (has_force) force = to_eigen(parse_number_list(opts.force_text, "--force"));

  Eigen::VectorXd base = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (!opts.q_text.empty()) {
    std::vector<double> q_values = parse_number_list(opts.q_text, "--q");
    if (opts.common.degrees)
      for (double& v : q_values) v *= kDegToRad;
    if (q_values.size() != n)
      throw rotom::Error("--q must list all " + std::to_string(n) +
                         " joint angles");
    base = to_eigen(q_values);
  }

  const std::size_t outer = static_cast<std::size_t>(ranges[0].n);
  const std::size_t inner =
      opts.joints.size() == 2 ? static_cast<std::size_t>(ranges[1].n) : 1;
  const std::size_t cells = outer * inner;

  std::vector<double> values(cells);
  std::vector<std::exception_ptr> errors(cells);
  const auto evaluate_cell = [&](std::size_t cell) {
    try {
      rotom::Configuration q = base;
      const std::size_t i = cell / inner;
      q[opts.joints[0]] = ranges[0].at(static_cast<int>(i));
      if (opts.joints.size() == 2) {
        const std::size_t j = cell % inner;
        q[opts.joints[1]] = ranges[1].at(static_cast<int>(j));
      }
      const rotom::CentroidalState state = rotom::centroidal_state(model, q);
      values[cell] = opts.index
                         ? rotom::transmissibility_index(state)
                         : rotom::fictitious_force(state, force).rotom;
    } catch (...) {
      errors[cell] = std::current_exception();
    }
  };

  const int n_threads = sweep_thread_count(cells);
  if (n_threads <= 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) evaluate_cell(cell);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t cell = static_cast<std::size_t>(t); cell < cells;
             cell += static_cast<std::size_t>(n_threads))
          evaluate_cell(cell);
      });
    for (std::thread& worker : pool) worker.join();
  }
  // Deterministic error reporting: the first failing cell wins.
  for (std::size_t cell = 0; cell < cells; ++cell)
    if (errors[cell]) std::rethrow_exception(errors[cell]);

  std::vector<std::string> columns;
  for (int j : opts.joints) columns.push_back("q" + std::to_string(j));
  columns.push_back(opts.index ? "index" : "rotom");

  OutputTarget target(opts.common.out_path);
  std::ostream& out = target.stream();
  const auto cell_q = [&](std::size_t cell, std::size_t axis) {
    return axis == 0 ? ranges[0].at(static_cast<int>(cell / inner))
                     : ranges[1].at(static_cast<int>(cell % inner));
  };
  if (opts.common.format == "csv") {
    out << csv_join(columns) << '\n';
    for (std::size_t cell = 0; cell < cells; ++cell) {
      std::vector<std::string> row;
      for (std::size_t axis = 0; axis < opts.joints.size(); ++axis)
        row.push_back(format_double(cell_q(cell, axis)));
      row.push_back(format_double(values[cell]));
      out << csv_join(row) << '\n';
    }
    return;
  }
  emit_record(
      out, "sweep",
      [&](JsonWriter& json) {
        json.key("robot");
        json.value(opts.common.robot_path);
        json.key("joints");
        json.begin_array();
        for (int j : opts.joints) json.value(j);
        json.end_array();
        json.key("ranges");
        json.begin_array();
        for (const RangeSpec& r : ranges) {
          json.begin_array();
          json.value(r.lo);
          json.value(r.hi);
          json.value(r.n);
          json.end_array();
        }
        json.end_array();
        json.key("q");
        write_vector(json, base);
        if (has_force) {
          json.key("force");
          write_vector(json, force);
        } else {
          json.key("index");
          json.value(true);
        }
      },
      [&](JsonWriter& json) {
        json.key("columns");
        json.begin_array();
        for (const std::string& c : columns) json.value(c);
        json.end_array();
        json.key("rows");
        json.begin_array();
        for (std::size_t cell = 0; cell < cells; ++cell) {
          json.begin_array();
          for (std::size_t axis = 0; axis < opts.joints.size(); ++axis)
            json.value(cell_q(cell, axis));
          json.value(values[cell]);
          json.end_array();
        }
        json.end_array();
      },
      {});
}

// ---------------------------------------------------------------------------
// minimize

struct MinimizeOptions {
  CommonOptions common;
  std::string q0_text;
  std::string force_text;
  rotom::DescentSettings settings;
};

void run_minimize(const MinimizeOptions& opts) {
  const rotom::ChainModel model = rotom::load_model(opts.common.robot_path);
  std::vector<double> q0_values = parse_number_list(opts.q0_text, "--q0");
  if (opts.common.degrees)
    for (double& v : q0_values) v *= kDegToRad;
  const Eigen::VectorXd q0 = to_eigen(q0_values);
  const Eigen::VectorXd force =
      to_eigen(parse_number_list(opts.force_text, "--force"));

  const rotom::DescentTrace trace =
      rotom::minimize_rotom(model, q0, force, opts.settings);
  const rotom::DescentIterate& last = trace.iterates.back();
  const double final_rotom = last.objective / force.norm();

  OutputTarget target(opts.common.out_path);
  std::ostream& out = target.stream();
  if (opts.common.format == "csv") {
    std::vector<std::string> header{"iter"};
    for (Eigen::Index i = 0; i < q0.size(); ++i)
      header.push_back("q" + std::to_string(i));
    header.push_back("objective");
    out << csv_join(header) << '\n';
    for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
      std::vector<std::string> row{std::to_string(k)};
      for (Eigen::Index i = 0; i < q0.size(); ++i)
        row.push_back(format_double(trace.iterates[k].q[i]));
      row.push_back(format_double(trace.iterates[k].objective));
      out << csv_join(row) << '\n';
    }
    return;
  }
  emit_record(
      out, "minimize",
      [&](JsonWriter& json) {
        json.key("robot");
        json.value(opts.common.robot_path);
        json.key("q0");
        write_vector(json, q0);
        json.key("force");
        write_vector(json, force);
        json.key("settings");
        json.begin_object();
        json.key("gain");
        json.value(opts.settings.gain);
        json.key("fd_step");
        json.value(opts.settings.fd_step);
        json.key("step_size");
        json.value(opts.settings.step_size);
        json.key("max_iters");
        json.value(opts.settings.max_iters);
        json.key("grad_tol");
        json.value(opts.settings.grad_tol);
        json.key("objective_tol");
        json.value(opts.settings.objective_tol);
        json.end_object();
      },
      [&](JsonWriter& json) {
        json.key("converged");
        json.value(trace.converged);
        json.key("reason");
        json.value(rotom::to_string(trace.reason));
        json.key("iterations");
        // Descent steps taken; the trace additionally holds the start point.
        json.value(trace.iterates.size() - 1);
        json.key("final_q");
        write_vector(json, last.q);
        json.key("final_objective");
        json.value(last.objective);
        json.key("final_rotom");
        json.value(final_rotom);
        json.key("trace");
        json.begin_array();
        for (const rotom::DescentIterate& it : trace.iterates) {
          json.begin_object();
          json.key("q");
          write_vector(json, it.q);
          json.key("objective");
          json.value(it.objective);
          json.end_object();
        }
        json.end_array();
      },
      {});
}

// ---------------------------------------------------------------------------
// zeros

struct ZerosOptions {
  CommonOptions common;
  std::string force_text;
  rotom::ZeroSearchSettings settings;
};

void run_zeros(const ZerosOptions& opts) {
  const rotom::ChainModel model = rotom::load_model(opts.common.robot_path);
  const Eigen::VectorXd force =
      to_eigen(parse_number_list(opts.force_text, "--force"));

  const rotom::ZeroSearchResult result =
      rotom::find_rotom_zeros_detailed(model, force, opts.settings);
  std::size_t accepted = 0;
  for (const rotom::SeedReport& seed : result.seeds)
    if (seed.accepted) ++accepted;
  // Residual certificate, re-evaluated through the public entry point.
  std::vector<double> residuals;
  residuals.reserve(result.zeros.size());
  for (const rotom::Configuration& q : result.zeros)
    residuals.push_back(
        (rotom::centroidal_state(model, q).mobility * force).norm());

  OutputTarget target(opts.common.out_path);
  std::ostream& out = target.stream();
  if (opts.common.format == "csv") {
    std::vector<std::string> header;
    for (std::size_t i = 0; i < model.dof(); ++i)
      header.push_back("q" + std::to_string(i));
    header.push_back("residual");
    out << csv_join(header) << '\n';
    for (std::size_t k = 0; k < result.zeros.size(); ++k) {
      std::vector<std::string> row;
      for (Eigen::Index i = 0; i < result.zeros[k].size(); ++i)
        row.push_back(format_double(result.zeros[k][i]));
      row.push_back(format_double(residuals[k]));
      out << csv_join(row) << '\n';
    }
    return;
  }
  emit_record(
      out, "zeros",
      [&](JsonWriter& json) {
        json.key("robot");
        json.value(opts.common.robot_path);
        json.key("force");
        write_vector(json, force);
        json.key("settings");
        json.begin_object();
        json.key("seeds_per_joint");
        json.value(opts.settings.seeds_per_joint);
        json.key("residual_tol");
        json.value(opts.settings.residual_tol);
        json.key("dedupe_tol");
        json.value(opts.settings.dedupe_tol);
        json.key("max_newton_iters");
        json.value(opts.settings.max_newton_iters);
        json.end_object();
      },
      [&](JsonWriter& json) {
        json.key("count");
        json.value(result.zeros.size());
        json.key("zeros");
        json.begin_array();
        for (std::size_t k = 0; k < result.zeros.size(); ++k) {
          json.begin_object();
          json.key("q");
          write_vector(json, result.zeros[k]);
          json.key("residual");
          json.value(residuals[k]);
          json.end_object();
        }
        json.end_array();
        json.key("seeds_total");
        json.value(result.seeds.size());
        json.key("seeds_accepted");
        json.value(accepted);
      },
      {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Force transmissibility analysis for serial kinematic chains: how much "
      "of a force applied at the robot's center of mass turns into motion."};
  app.require_subcommand(1);

  CommonOptions describe_opts;
  CLI::App* describe = app.add_subcommand(
      "describe", "Summarize a robot description file");
  add_common_options(describe, &describe_opts, /*with_degrees=*/false);

  EvalOptions eval_opts;
  CLI::App* eval = app.add_subcommand(
      "eval", "Transmitted force, reaction, and acceleration at one "
              "configuration");
  add_common_options(eval, &eval_opts.common, /*with_degrees=*/true);
  eval->add_option("--q", eval_opts.q_text,
                   "Joint angles, comma-separated radians")
      ->required();
  eval->add_option("--force", eval_opts.force_text,
                   "Force vector at the CoM, comma-separated")
      ->required();

  EllipsoidOptions ellipsoid_opts;
  CLI::App* ellipsoid = app.add_subcommand(
      "ellipsoid", "Transmissibility ellipsoid at one configuration");
  add_common_options(ellipsoid, &ellipsoid_opts.common, /*with_degrees=*/true);
  ellipsoid->add_option("--q", ellipsoid_opts.q_text,
                        "Joint angles, comma-separated radians")
      ->required();
  ellipsoid->add_option("--samples", ellipsoid_opts.samples,
                        "Also emit this many boundary points (>= 8)");

  SweepOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Tabulate rotom or the transmissibility index over a joint "
               "grid");
  add_common_options(sweep, &sweep_opts.common, /*with_degrees=*/true);
  sweep->add_option("--joint", sweep_opts.joints,
                    "Swept joint index (0-based); repeat for a 2-D grid");
  sweep->add_option("--range", sweep_opts.range_texts,
                    "Sweep range lo:hi:n (inclusive, n samples); one per "
                    "swept joint or one shared");
  sweep->add_option("--q", sweep_opts.q_text,
                    "Base angles for all joints (default all zero)");
  sweep->add_option("--force", sweep_opts.force_text,
                    "Tabulate rotom for this force vector");
  sweep->add_flag("--index", sweep_opts.index,
                  "Tabulate the transmissibility index instead of rotom");

  MinimizeOptions minimize_opts;
  CLI::App* minimize = app.add_subcommand(
      "minimize", "Gradient descent on the transmitted-force norm");
  add_common_options(minimize, &minimize_opts.common, /*with_degrees=*/true);
  minimize->add_option("--q0", minimize_opts.q0_text,
                       "Starting joint angles, comma-separated radians")
      ->required();
  minimize->add_option("--force", minimize_opts.force_text,
                       "Force vector at the CoM, comma-separated")
      ->required();
  minimize->add_option("--gain", minimize_opts.settings.gain,
                       "Step gain (default 1)");
  minimize->add_option("--fd-step", minimize_opts.settings.fd_step,
                       "Finite-difference step, radians (default 1e-6)");
  minimize->add_option("--step-size", minimize_opts.settings.step_size,
                       "Base step length, radians (default 1e-2)");
  minimize->add_option("--max-iters", minimize_opts.settings.max_iters,
                       "Iteration cap (default 10000)");
  minimize->add_option("--grad-tol", minimize_opts.settings.grad_tol,
                       "Gradient-norm stop threshold (default 1e-8)");
  minimize->add_option("--objective-tol",
                       minimize_opts.settings.objective_tol,
                       "Per-step decrease stop threshold (default 1e-12)");

  ZerosOptions zeros_opts;
  CLI::App* zeros = app.add_subcommand(
      "zeros", "Find configurations that fully absorb a force");
  add_common_options(zeros, &zeros_opts.common, /*with_degrees=*/false);
  zeros->add_option("--force", zeros_opts.force_text,
                    "Force vector at the CoM, comma-separated")
      ->required();
  zeros->add_option("--seeds-per-joint", zeros_opts.settings.seeds_per_joint,
                    "Seed grid resolution per joint (default 8)");
  zeros->add_option("--residual-tol", zeros_opts.settings.residual_tol,
                    "Acceptance threshold on the transmitted-force norm "
                    "(default 1e-10)");
  zeros->add_option("--dedupe-tol", zeros_opts.settings.dedupe_tol,
                    "Wrapped-angle distance treated as the same solution "
                    "(default 1e-3)");
  zeros->add_option("--max-newton-iters",
                    zeros_opts.settings.max_newton_iters,
                    "Iteration cap per seed (default 50)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (describe->parsed()) run_describe(describe_opts);
    if (eval->parsed()) run_eval(eval_opts);
    if (ellipsoid->parsed()) run_ellipsoid(ellipsoid_opts);
    if (sweep->parsed()) run_sweep(sweep_opts);
    if (minimize->parsed()) run_minimize(minimize_opts);
    if (zeros->parsed()) run_zeros(zeros_opts);
  } catch (const rotom::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const rotom::ZeroForce& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const rotom::SingularMassMatrix& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const rotom::DegenerateEllipsoid& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
