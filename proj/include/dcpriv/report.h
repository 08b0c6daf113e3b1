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

#ifndef DCPRIV_REPORT_H_
#define DCPRIV_REPORT_H_

#include <string>
#include <string_view>

#include "json.hpp"

#include "dcpriv/auditor.h"
#include "dcpriv/calibrator.h"
#include "dcpriv/condenser.h"
#include "dcpriv/model_eval.h"
#include "dcpriv/stats.h"

namespace dcpriv {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSchemaVersion = "1.0.0";

Json ToJson(const MomentSummary& m);
Json ToJson(const PrivacyParams& p);
Json ToJson(const EvalResult& r);
Json ToJson(const AuditReport& r);

// Header fields shared by every command, including the config echo.
Json ReportHeader(std::string_view command, const Json& config);

// Two-space indented JSON with a trailing newline. Non-finite numbers are
// rejected (DomainError) so that reports always validate.
std::string SerializeReport(const Json& report);

}  // namespace dcpriv

#endif  // DCPRIV_REPORT_H_
