// Copyright 2026 The revival-lab Authors
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

namespace revival {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (integrator, fit, truncation). The CLI maps these to exit status 1.
class NumericError : public Error {
 public:
  using Error::Error;
};

class TruncationTooSmall : public NumericError {
 public:
  using NumericError::NumericError;
};

class StepSizeUnderflow : public NumericError {
 public:
  using NumericError::NumericError;
};

class FitDiverged : public NumericError {
 public:
  using NumericError::NumericError;
};

class InsufficientFringes : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NegativeAmplitude : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateHomography : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptyTrace : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonUniformGrid : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed scenario or configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace revival
