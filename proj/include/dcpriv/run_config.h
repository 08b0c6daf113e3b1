// Copyright 2026 The dcpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DCPRIV_RUN_CONFIG_H_
#define DCPRIV_RUN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dcpriv/error.h"
#include "dcpriv/report.h"

namespace dcpriv {

// Parameter bags for each CLI command. Keys mirror the flag names with
// dashes replaced by underscores. Every bag lists its fields once, in Visit,
// which drives both serialization and strict parsing.

struct CalibrateArgs {
  std::string input;
  std::vector<std::string> bounds;  // "col=a,b"
  double gamma = 0.0;
  std::vector<std::string> columns;
  std::optional<std::string> label;
  bool clip = false;
  std::optional<std::string> report;

  template <typename V>
  void Visit(V& v) {
    v("input", input);
    v("bounds", bounds);
    v("gamma", gamma);
    v("columns", columns);
    v("label", label);
    v("clip", clip);
    v("report", report);
  }
};

struct CondenseArgs {
  std::string input;
  std::string label;
  uint64_t per_class = 10;
  uint64_t iters = 200;
  uint64_t seed = 0;
  std::string output;
  uint64_t feature_dim = 64;
  double step = 0.5;
  std::vector<std::string> bounds;
  bool clip = false;
  std::optional<std::string> loss_trace;
  std::optional<std::string> report;

  template <typename V>
  void Visit(V& v) {
    v("input", input);
    v("label", label);
    v("per_class", per_class);
    v("iters", iters);
    v("seed", seed);
    v("output", output);
    v("feature_dim", feature_dim);
    v("step", step);
    v("bounds", bounds);
    v("clip", clip);
    v("loss_trace", loss_trace);
    v("report", report);
  }
};

struct AuditArgs {
  std::string input;
  std::string mechanism;
  uint64_t trials = 20000;
  uint64_t seed = 0;
  double gamma = 0.0;
  std::optional<double> delta;
  double slack = 0.25;
  std::string report;
  std::optional<std::string> column;
  std::vector<std::string> bounds;
  bool clip = false;
  std::optional<std::string> label;
  uint64_t threshold_grid = 1001;
  uint64_t per_class = 10;
  uint64_t iters = 200;
  uint64_t feature_dim = 64;
  double step = 0.5;

  template <typename V>
  void Visit(V& v) {
    v("input", input);
    v("mechanism", mechanism);
    v("trials", trials);
    v("seed", seed);
    v("gamma", gamma);
    v("delta", delta);
    v("slack", slack);
    v("report", report);
    v("column", column);
    v("bounds", bounds);
    v("clip", clip);
    v("label", label);
    v("threshold_grid", threshold_grid);
    v("per_class", per_class);
    v("iters", iters);
    v("feature_dim", feature_dim);
    v("step", step);
  }
};

struct EvaluateArgs {
  std::string train;
  std::string test;
  std::string label;
  uint64_t epochs = 200;
  uint64_t seed = 0;
  double lr = 1.0;
  std::optional<std::string> report;

  template <typename V>
  void Visit(V& v) {
    v("train", train);
    v("test", test);
    v("label", label);
    v("epochs", epochs);
    v("seed", seed);
    v("lr", lr);
    v("report", report);
  }
};

struct PipelineArgs {
  std::string input;
  std::string label;
  uint64_t per_class = 10;
  uint64_t trials = 200;
  uint64_t seed = 0;
  std::string report;
  uint64_t iters = 200;
  uint64_t feature_dim = 64;
  double step = 0.5;
  std::optional<std::string> output;
  std::optional<std::string> test;
  uint64_t epochs = 200;
  double lr = 1.0;
  double gamma = 0.0;
  std::optional<double> delta;
  double slack = 0.25;
  std::optional<std::string> column;
  std::vector<std::string> bounds;
  bool clip = false;
  uint64_t threshold_grid = 1001;

  template <typename V>
  void Visit(V& v) {
    v("input", input);
    v("label", label);
    v("per_class", per_class);
    v("trials", trials);
    v("seed", seed);
    v("report", report);
    v("iters", iters);
    v("feature_dim", feature_dim);
    v("step", step);
    v("output", output);
    v("test", test);
    v("epochs", epochs);
    v("lr", lr);
    v("gamma", gamma);
    v("delta", delta);
    v("slack", slack);
    v("column", column);
    v("bounds", bounds);
    v("clip", clip);
    v("threshold_grid", threshold_grid);
  }
};

namespace config_internal {

struct Writer {
  Json& out;

  template <typename T>
  void operator()(const char* key, const T& value) {
    out[key] = value;
  }
  template <typename T>
  void operator()(const char* key, const std::optional<T>& value) {
    out[key] = value ? Json(*value) : Json(nullptr);
  }
};

struct Reader {
  const Json& in;
  std::vector<std::string> seen;

  template <typename T>
  void Get(const char* key, const Json& j, T& value) {
    try {
      value = j.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw UsageError(std::string("config key \"") + key + "\" has the wrong type");
    }
  }
  void Get(const char* key, const Json& j, double& value) {
    if (!j.is_number()) {
      throw UsageError(std::string("config key \"") + key + "\" must be a number");
    }
    value = j.get<double>();
  }
  void Get(const char* key, const Json& j, uint64_t& value) {
    if (!j.is_number_unsigned()) {
      throw UsageError(std::string("config key \"") + key +
                       "\" must be a non-negative integer");
    }
    value = j.get<uint64_t>();
  }

  template <typename T>
  void operator()(const char* key, T& value) {
    seen.emplace_back(key);
    const auto it = in.find(key);
    if (it == in.end()) return;
    Get(key, *it, value);
  }
  template <typename T>
  void operator()(const char* key, std::optional<T>& value) {
    seen.emplace_back(key);
    const auto it = in.find(key);
    if (it == in.end() || it->is_null()) {
      value.reset();
      return;
    }
    T v{};
    Get(key, *it, v);
    value = v;
  }
};

}  // namespace config_internal

template <typename Args>
Json ConfigToJson(const Args& args) {
  Json out = Json::object();
  config_internal::Writer w{out};
  Args copy = args;
  copy.Visit(w);
  return out;
}

// Missing keys keep their defaults; unknown keys are rejected (UsageError).
template <typename Args>
Args ConfigFromJson(const Json& in) {
  if (!in.is_object()) throw UsageError("config must be a JSON object");
  Args args;
  config_internal::Reader r{in, {}};
  args.Visit(r);
  for (const auto& [key, value] : in.items()) {
    bool known = false;
    for (const std::string& s : r.seen) known = known || s == key;
    if (!known) throw UsageError("unknown config key \"" + key + "\"");
  }
  return args;
}

}  // namespace dcpriv

#endif  // DCPRIV_RUN_CONFIG_H_
