/*
 * Copyright 2026 The motif-shap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MOTIF_SHAP_ERROR_HPP_
#define MOTIF_SHAP_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace motif_shap {

enum class ErrorKind {
  kUniverseMismatch,
  kEmptyDataset,
  kInvalidArgument,
  kConfiguration,
  kLatticeTooLarge,
  kFormat,
  kTransport,
  kDegenerateTraining,
  kUndefinedCorrelation,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so that callers (the CLI
// in particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

inline void Require(bool condition, ErrorKind kind, const std::string& detail) {
  if (!condition) Fail(kind, detail);
}

}  // namespace motif_shap

#endif  // MOTIF_SHAP_ERROR_HPP_
