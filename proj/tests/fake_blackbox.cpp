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

// Misbehaving peers for the external black-box protocol tests.
//   fake_blackbox half       replies 0.5 to every request
//   fake_blackbox out-of-range replies p = 1.5
//   fake_blackbox wrong-id   echoes id + 1
//   fake_blackbox garbage    replies with a non-JSON line
//   fake_blackbox exit-after N   serves N requests, then exits
//   fake_blackbox hang       completes the handshake, then never replies
//   fake_blackbox no-ready   answers the handshake with {"ready": false}

#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "json.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "half";
  std::string line;
  if (!std::getline(std::cin, line)) return 1;
  if (mode == "no-ready") {
    std::cout << R"({"ready": false})" << std::endl;
    return 0;
  }
  std::cout << R"({"ready": true})" << std::endl;
  long served = 0;
  const long limit = argc > 2 ? std::atol(argv[2]) : -1;
  while (std::getline(std::cin, line)) {
    if (mode == "hang") {
      sleep(60);
      return 0;
    }
    if (limit >= 0 && served >= limit) return 0;
    const auto request = nlohmann::json::parse(line);
    const long id = request["id"].get<long>();
    if (mode == "garbage") {
      std::cout << "p = 0.5" << std::endl;
    } else if (mode == "out-of-range") {
      std::cout << nlohmann::json{{"id", id}, {"p", 1.5}}.dump() << std::endl;
    } else if (mode == "wrong-id") {
      std::cout << nlohmann::json{{"id", id + 1}, {"p", 0.5}}.dump() << std::endl;
    } else {
      std::cout << nlohmann::json{{"id", id}, {"p", 0.5}}.dump() << std::endl;
    }
    ++served;
  }
  return 0;
}
