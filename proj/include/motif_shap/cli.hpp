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

#ifndef MOTIF_SHAP_CLI_HPP_
#define MOTIF_SHAP_CLI_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "motif_shap/error.hpp"

namespace motif_shap::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kFileFormatVersion = 1;

// Exit codes: 0 success, 2 usage or configuration, 3 input format, 4 black-box
// transport.
int ExitCode(ErrorKind kind);

// Runs one command line (without the program name). Errors are reported on
// `err` as a single JSON line.
int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

std::string Sha256Hex(std::string_view data);

}  // namespace motif_shap::cli

#endif  // MOTIF_SHAP_CLI_HPP_
