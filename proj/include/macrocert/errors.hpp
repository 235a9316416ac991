// Copyright 2026 The macrocert Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace macrocert {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state window or matrix would exceed the configured size limits.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lookup of a sector or scenario that does not exist.
class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid configuration; `path()` names the offending parameter.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A self-check quantity fell outside its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace macrocert
