// Copyright 2026 The seqtarget Authors
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

#ifndef SEQTARGET_ERRORS_H_
#define SEQTARGET_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace seqtarget {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Label not present in the supplied LabelMap.
class LabelError : public Error {
 public:
  using Error::Error;
};

// Dataset-level precondition violated (empty data, missing class, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment or CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Split ordering could not be made strictly decreasing in KL.
class OrderingError : public Error {
 public:
  using Error::Error;
};

// Optimization diverged or a task failed inside the sequential driver.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqtarget

#endif  // SEQTARGET_ERRORS_H_
