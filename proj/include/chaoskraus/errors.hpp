// Copyright 2026 The chaoskraus Authors
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

#include <stdexcept>
#include <string>

namespace chaoskraus {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kConfig = 1,
  kNumeric = 2,
  kCapacity = 3,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid or inconsistent configuration (bad key, negative width, N = 0).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what, ExitCode::kConfig) {}
};

/// Requested Hilbert-space dimension exceeds the configured cap.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(what, ExitCode::kCapacity) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(what, ExitCode::kNumeric) {}
};

/// Operand dimensions do not agree.
class ShapeError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Input violates a structural precondition (non-Hermitian, unnormalized).
class ValidationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Adaptive integrator could not make progress.
class StiffnessError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Smoothed staircase fit is not monotone on the data range.
class UnfoldingError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Output could not be written or read back. Reported with the
/// configuration exit code: the usual cause is an unusable output path.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, ExitCode::kConfig) {}
};

}  // namespace chaoskraus
