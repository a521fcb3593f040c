// Copyright 2026 The bdlbench Authors.
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

#ifndef BDLBENCH_ERRORS_HPP_
#define BDLBENCH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bdlbench {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched matrix/vector dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid argument value (out-of-range rates, T < 1, empty input, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV/JSON input. Messages name the offending row or field.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Object used in the wrong state (e.g. unfitted normalization).
class StateError : public Error {
 public:
  using Error::Error;
};

// Training could not proceed (single-class data, non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// AUC is undefined when only one class is present.
class UndefinedAucError : public Error {
 public:
  using Error::Error;
};

// A split would drop a class entirely.
class StratificationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Checkpoint/report written by an incompatible format version.
class IncompatibleVersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace bdlbench

#endif  // BDLBENCH_ERRORS_HPP_
