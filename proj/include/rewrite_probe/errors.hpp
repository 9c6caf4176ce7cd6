// Copyright 2026 The rewrite-probe Authors.
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

#ifndef REWRITE_PROBE_ERRORS_HPP_
#define REWRITE_PROBE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace rprobe {

// Malformed or inconsistent input data. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A metric has no defined value for its input (empty reference, zero
// denominator). Kept distinct from a legitimate 0.0.
class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Pearson correlation over a constant series or fewer than two points.
class UndefinedCorrelationError : public UndefinedMetricError {
 public:
  using UndefinedMetricError::UndefinedMetricError;
};

// Bad command line or incomplete configuration. Maps to CLI exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-fatal notes accumulated while loading and evaluating.
using Warnings = std::vector<std::string>;

}  // namespace rprobe

#endif  // REWRITE_PROBE_ERRORS_HPP_
