/* Copyright 2026 The GroupDNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef GDNN_ERRORS_H_
#define GDNN_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gdnn {

// Base of every error the library throws. The CLI maps subclasses onto
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes that do not line up with a layer.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid architecture, hyperparameters or an unavailable model width.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An operation invoked in the wrong state (missing forward context, model
// trained to the wrong number of groups, ...).
class StateError : public Error {
 public:
  using Error::Error;
};

// Bad caller-supplied data: empty datasets, labels out of range.
class InputError : public Error {
 public:
  using Error::Error;
};

// Checkpoint / dataset archive decoding failures.
class LoadError : public Error {
 public:
  enum class Code { kBadMagic, kBadVersion, kTruncated, kDimMismatch, kBadRecord, kIo };

  LoadError(Code code, const std::string& what) : Error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Raw CIFAR-10 style record files that are malformed. `offset` is the byte
// offset of the offending record.
class IngestionError : public Error {
 public:
  IngestionError(std::uint64_t offset, const std::string& what)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// Platform profile CSV problems.
class ProfileParseError : public Error {
 public:
  enum class Code {
    kBadHeader,
    kBadField,
    kDuplicatePoint,
    kNonPositive,
    kInconsistentAccuracy,
    kMissingAccuracy,
    kEmpty,
    kIo
  };

  ProfileParseError(Code code, int line, const std::string& what)
      : Error("profile line " + std::to_string(line) + ": " + what), code_(code), line_(line) {}
  Code code() const { return code_; }
  int line() const { return line_; }

 private:
  Code code_;
  int line_;
};

// No operating point satisfies a budget. Carries the smallest achievable
// value of the budgeted metric among the allowed points.
class InfeasibleError : public Error {
 public:
  InfeasibleError(double min_achievable, const std::string& what)
      : Error(what), min_achievable_(min_achievable) {}
  double min_achievable() const { return min_achievable_; }

 private:
  double min_achievable_;
};

// Wall-clock measurement that cannot be trusted.
class MeasurementError : public Error {
 public:
  using Error::Error;
};

}  // namespace gdnn

#endif  // GDNN_ERRORS_H_
