/* Copyright 2026 The WaveAugment Authors. All Rights Reserved.

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

#ifndef WAVEAUG_ERROR_HPP_
#define WAVEAUG_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace waveaug {

enum class ErrorKind {
  kEmptyInput,
  kShape,
  kDegenerate,
  kParameter,
  kCalibration,
  kGeometry,
  kLookup,
  kFormat,
  kEvaluation,
  kIo,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kDegenerate: return "degenerate-signal";
    case ErrorKind::kParameter: return "parameter";
    case ErrorKind::kCalibration: return "calibration";
    case ErrorKind::kGeometry: return "geometry";
    case ErrorKind::kLookup: return "lookup";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kEvaluation: return "evaluation";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

// Every failure raised by the library carries a kind so callers (and the CLI)
// can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) {
    fail(kind, message);
  }
}

}  // namespace detail
}  // namespace waveaug

#endif  // WAVEAUG_ERROR_HPP_
