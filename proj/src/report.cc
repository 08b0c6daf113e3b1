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

#include "dcpriv/report.h"

#include <cmath>

#include "dcpriv/error.h"

namespace dcpriv {
namespace {

void RequireFinite(const Json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw DomainError("report value at " + path + " is not finite");
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) RequireFinite(v, path + "." + k);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) {
      RequireFinite(j[i], path + "[" + std::to_string(i) + "]");
    }
  }
}

}  // namespace

Json ToJson(const MomentSummary& m) {
  return Json{{"n", m.n},           {"mean", m.mean},         {"var", m.var},
              {"abs3", m.abs3},     {"cen4", m.cen4},         {"sum_abs3", m.sum_abs3},
              {"sum_cen4", m.sum_cen4}};
}

Json ToJson(const PrivacyParams& p) {
  return Json{{"epsilon", p.epsilon},
              {"delta", p.delta},
              {"provenance", std::string(ProvenanceName(p.provenance))},
              {"vacuous_delta", p.vacuous()}};
}

Json ToJson(const EvalResult& r) {
  Json j{{"accuracy", r.accuracy}, {"n", r.n}, {"labels", r.labels},
         {"confusion", r.confusion}};
  if (r.positive_label) {
    j["positive_label"] = *r.positive_label;
    j["fp_count"] = *r.fp_count;
    j["fn_count"] = *r.fn_count;
    j["fp_rate"] = *r.fp_rate;
    j["fn_rate"] = *r.fn_rate;
  }
  return j;
}

Json ToJson(const AuditReport& r) {
  Json flags = Json::array();
  if (r.clamped) flags.push_back("clamped");
  if (r.unbounded) flags.push_back("unbounded");
  if (r.vacuous_delta) flags.push_back("vacuous_delta");
  return Json{{"mechanism", std::string(MechanismName(r.mechanism))},
              {"column", r.column},
              {"gamma", r.gamma},
              {"trials", r.trials},
              {"fp_rate", r.fp_rate},
              {"fn_rate", r.fn_rate},
              {"epsilon_empirical", r.epsilon_empirical},
              {"epsilon_theoretical", r.epsilon_theoretical},
              {"theoretical_provenance",
               std::string(ProvenanceName(r.theoretical_provenance))},
              {"delta_theoretical", r.delta_theoretical},
              {"delta_used", r.delta_used},
              {"delta_overridden", r.delta_overridden},
              {"best_threshold", r.best_threshold},
              {"threshold_rule", std::string(ThresholdRuleName(r.rule))},
              {"slack", r.slack},
              {"verdict", std::string(VerdictName(r.verdict))},
              {"flags", flags}};
}

Json ReportHeader(std::string_view command, const Json& config) {
  return Json{{"schema_version", std::string(kSchemaVersion)},
              {"tool_version", std::string(kToolVersion)},
              {"command", std::string(command)},
              {"config", config}};
}

std::string SerializeReport(const Json& report) {
  RequireFinite(report, "$");
  return report.dump(2) + "\n";
}

}  // namespace dcpriv
