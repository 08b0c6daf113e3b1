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

#ifndef DCPRIV_ERROR_H_
#define DCPRIV_ERROR_H_

#include <stdexcept>
#include <string>

namespace dcpriv {

// Error categories map one-to-one onto the CLI exit-code table.
enum class ErrorKind {
  kUsage = 2,
  kDomain = 3,
  kIo = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

// Mathematical or data-domain failure, such as a bounds violation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorKind::kDomain, message) {}
};

// No inherent noise in the data; adversarial uncertainty does not apply.
class DegenerateDataError : public DomainError {
 public:
  explicit DegenerateDataError(const std::string& message)
      : DomainError(message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorKind::kIo, message) {}
};

// Malformed input file content. Reported with the I/O exit code since the
// file cannot be read as a dataset.
class ParseError : public IoError {
 public:
  explicit ParseError(const std::string& message) : IoError(message) {}
};

}  // namespace dcpriv

#endif  // DCPRIV_ERROR_H_
