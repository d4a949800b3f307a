// Copyright 2026 The lazyla Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lazyla {

/// Base class of every error raised for bad user input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Non-conforming operand shapes. `path()` locates the failing node, as
/// dot-separated child indices starting at "root".
class ConformanceError : public Error {
 public:
  ConformanceError(const std::string& what, std::string path)
      : Error(what + " at " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A zero pivot (or zero triangular diagonal) was met while factorising.
class SingularityError : public Error {
 public:
  explicit SingularityError(std::size_t column)
      : Error("matrix is singular: zero pivot in column " +
              std::to_string(column)),
        column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Kernel precondition broken by the caller; a programming error.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lazyla
