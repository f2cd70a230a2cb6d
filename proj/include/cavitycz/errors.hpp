// Copyright 2026 The cavitycz Authors
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

namespace cavitycz {

/// Argument outside the physical or combinatorial domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The time window truncates the pulse (boundary samples too large).
class WindowTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Qubit count or index outside the supported range.
class SizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A state does not have the structure an operation expects.
class ShapeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Integrator produced NaN/Inf, usually because the step is too large.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cavitycz
