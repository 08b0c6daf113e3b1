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

#ifndef DCPRIV_CLI_H_
#define DCPRIV_CLI_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dcpriv {

// Exit-code contract shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitAuditViolation = 5;

// Parses DCPRIV_THREADS. Unset means hardware concurrency; anything other
// than a positive integer is a UsageError.
size_t ThreadsFromEnv(const char* value);

// Entry point behind the dcpriv binary. args excludes the program name.
// Reports go to `out` unless --report names a file; diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dcpriv

#endif  // DCPRIV_CLI_H_
