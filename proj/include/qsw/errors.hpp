// Copyright 2026 The qsw Authors
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

namespace qsw {

/// Bad argument or precondition violation (sizes, ranges, labels).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix that was supposed to be a density matrix is not one.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical kernel failed to reach its accuracy target (expm overflow,
/// quadrature under-resolution, series cancellation).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The finite segment used to stand in for the infinite line leaked
/// probability onto its boundary vertices.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsw
