// Copyright 2026 The entrain Authors.
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

#ifndef ENTRAIN_ERROR_H_
#define ENTRAIN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entrain {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schema or invariant violation in an input file. Carries the file and the
// 1-based line number of the offending record (0 when not line-specific).
class CorpusError : public Error {
 public:
  CorpusError(std::string file, std::size_t line, const std::string& message)
      : Error(file + (line ? ":" + std::to_string(line) : std::string()) +
              ": " + message),
        file_(std::move(file)),
        line_(line),
        detail_(message) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string detail_;
};

class AudioError : public Error {
 public:
  using Error::Error;
};

// A statistic is undefined for the given data (zero variance, too few points).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A function was called outside its documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace entrain

#endif  // ENTRAIN_ERROR_H_
