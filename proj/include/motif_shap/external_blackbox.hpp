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

// Line-delimited JSON protocol for black-boxes running in a child process.
//
//   engine -> child   {"hello": "motif-shap/1"}
//   child  -> engine  {"ready": true}
//   engine -> child   {"id": 7, "n": 20, "edges": [[0, 3, 1.0], ...]}
//   child  -> engine  {"id": 7, "p": 0.73}
//
// One object per line, replies in request order.

#ifndef MOTIF_SHAP_EXTERNAL_BLACKBOX_HPP_
#define MOTIF_SHAP_EXTERNAL_BLACKBOX_HPP_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <string>
#include <string_view>

#include "motif_shap/blackbox.hpp"
#include "motif_shap/graph.hpp"

namespace motif_shap {

inline constexpr std::string_view kProtocolVersion = "motif-shap/1";

std::string EncodeHello();
std::string EncodeReady();
std::string EncodeRequest(std::int64_t id, const Graph& g);
std::string EncodeResponse(std::int64_t id, double p);

struct DecodedRequest {
  std::int64_t id;
  Graph graph;
};
// Throws kFormat on malformed input.
DecodedRequest DecodeRequest(std::string_view line);

// Child side: answers requests from `in` on `out` until end of input. Returns
// the number of requests served. Throws kFormat when the peer violates the
// protocol.
std::size_t ServeBlackBox(BlackBox& model, std::istream& in, std::ostream& out);

struct ExternalOptions {
  std::chrono::milliseconds timeout{30000};
};

// Engine side. Starts `command` through /bin/sh and performs the handshake in
// the constructor. Any failure (exit, malformed reply, id mismatch,
// out-of-range probability, timeout) throws kTransport and leaves the
// connection unusable.
class ExternalBlackBox final : public BlackBox {
 public:
  explicit ExternalBlackBox(const std::string& command,
                            ExternalOptions options = {});
  ~ExternalBlackBox() override;

  ExternalBlackBox(const ExternalBlackBox&) = delete;
  ExternalBlackBox& operator=(const ExternalBlackBox&) = delete;

  double Evaluate(const Graph& g) override;

 private:
  void SendLine(const std::string& line);
  std::string ReadLine();
  [[noreturn]] void Broken(const std::string& detail);
  void Shutdown();

  ExternalOptions options_;
  pid_t child_ = -1;
  int fd_ = -1;
  bool broken_ = false;
  std::int64_t next_id_ = 0;
  std::string pending_;
  std::mutex mu_;
};

}  // namespace motif_shap

#endif  // MOTIF_SHAP_EXTERNAL_BLACKBOX_HPP_
