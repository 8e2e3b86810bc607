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

#include "motif_shap/external_blackbox.hpp"

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "motif_shap/error.hpp"

namespace motif_shap {

using nlohmann::json;

std::string EncodeHello() {
  return json{{"hello", kProtocolVersion}}.dump();
}

std::string EncodeReady() { return json{{"ready", true}}.dump(); }

std::string EncodeRequest(std::int64_t id, const Graph& g) {
  json edges = json::array();
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    edges.push_back({g.edges()[i].u, g.edges()[i].v, g.weight_at(i)});
  }
  json j;
  j["id"] = id;
  j["n"] = g.n();
  j["edges"] = std::move(edges);
  return j.dump();
}

std::string EncodeResponse(std::int64_t id, double p) {
  json j;
  j["id"] = id;
  j["p"] = p;
  return j.dump();
}

DecodedRequest DecodeRequest(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  Require(!j.is_discarded() && j.is_object(), ErrorKind::kFormat,
          "request is not a JSON object");
  Require(j.contains("id") && j["id"].is_number_integer() &&
              j.contains("n") && j["n"].is_number_unsigned() &&
              j.contains("edges") && j["edges"].is_array(),
          ErrorKind::kFormat, "request lacks id, n or edges");
  const auto n = j["n"].get<std::size_t>();
  EdgeList edges;
  std::vector<double> weights;
  for (const json& e : j["edges"]) {
    Require(e.is_array() && e.size() == 3 && e[0].is_number_unsigned() &&
                e[1].is_number_unsigned() && e[2].is_number(),
            ErrorKind::kFormat, "request edge must be [u, v, w]");
    edges.push_back(Edge::Make(e[0].get<NodeId>(), e[1].get<NodeId>()));
    weights.push_back(e[2].get<double>());
  }
  try {
    return {j["id"].get<std::int64_t>(),
            Graph(n, std::move(edges), std::move(weights))};
  } catch (const Error& err) {
    Fail(ErrorKind::kFormat, std::string("invalid request graph: ") +
                                 err.what());
  }
}

std::size_t ServeBlackBox(BlackBox& model, std::istream& in,
                          std::ostream& out) {
  std::string line;
  if (!std::getline(in, line)) return 0;
  json hello = json::parse(line, nullptr, false);
  Require(!hello.is_discarded() && hello.is_object() &&
              hello.value("hello", "") == kProtocolVersion,
          ErrorKind::kFormat, "expected handshake {\"hello\": \"" +
                                  std::string(kProtocolVersion) + "\"}");
  out << EncodeReady() << '\n' << std::flush;
  std::size_t served = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DecodedRequest request = DecodeRequest(line);
    out << EncodeResponse(request.id, model.Evaluate(request.graph)) << '\n'
        << std::flush;
    ++served;
  }
  return served;
}

ExternalBlackBox::ExternalBlackBox(const std::string& command,
                                   ExternalOptions options)
    : options_(options) {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    Fail(ErrorKind::kTransport,
         std::string("socketpair failed: ") + std::strerror(errno));
  }
  child_ = fork();
  if (child_ < 0) {
    close(fds[0]);
    close(fds[1]);
    Fail(ErrorKind::kTransport,
         std::string("fork failed: ") + std::strerror(errno));
  }
  if (child_ == 0) {
    // Own process group, so that whatever the shell spawns is killed with it.
    setpgid(0, 0);
    // dup2 clears FD_CLOEXEC on the targets.
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(child_, child_);
  close(fds[1]);
  fd_ = fds[0];
  std::lock_guard<std::mutex> lock(mu_);
  SendLine(EncodeHello());
  json reply = json::parse(ReadLine(), nullptr, false);
  if (reply.is_discarded() || !reply.is_object() ||
      reply.value("ready", false) != true) {
    Broken("handshake failed: expected {\"ready\": true}");
  }
}

ExternalBlackBox::~ExternalBlackBox() { Shutdown(); }

void ExternalBlackBox::Shutdown() {
  if (fd_ >= 0) {
    close(fd_);
    fd_ = -1;
  }
  if (child_ > 0) {
    // Closing the socket delivers EOF; give the child a moment to exit.
    for (int i = 0; i < 100; ++i) {
      if (waitpid(child_, nullptr, WNOHANG) == child_) {
        kill(-child_, SIGKILL);
        child_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    kill(-child_, SIGKILL);
    waitpid(child_, nullptr, 0);
    child_ = -1;
  }
}

void ExternalBlackBox::Broken(const std::string& detail) {
  broken_ = true;
  Shutdown();
  Fail(ErrorKind::kTransport, "external black-box: " + detail);
}

void ExternalBlackBox::SendLine(const std::string& line) {
  std::string data = line + '\n';
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t r = send(fd_, data.data() + sent, data.size() - sent,
                     MSG_NOSIGNAL);
    if (r < 0) {
      if (errno == EINTR) continue;
      Broken(std::string("write failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(r);
  }
}

std::string ExternalBlackBox::ReadLine() {
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  for (;;) {
    const auto newline = pending_.find('\n');
    if (newline != std::string::npos) {
      std::string line = pending_.substr(0, newline);
      pending_.erase(0, newline + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) Broken("timed out waiting for a reply");
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Broken(std::string("poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) Broken("timed out waiting for a reply");
    char buffer[4096];
    const ssize_t r = read(fd_, buffer, sizeof(buffer));
    if (r < 0) {
      if (errno == EINTR) continue;
      Broken(std::string("read failed: ") + std::strerror(errno));
    }
    if (r == 0) Broken("child process closed the connection");
    pending_.append(buffer, static_cast<std::size_t>(r));
  }
}

double ExternalBlackBox::Evaluate(const Graph& g) {
  std::lock_guard<std::mutex> lock(mu_);
  Require(!broken_, ErrorKind::kTransport,
          "external black-box connection is closed");
  const std::int64_t id = next_id_++;
  SendLine(EncodeRequest(id, g));
  const std::string line = ReadLine();
  json reply = json::parse(line, nullptr, false);
  if (reply.is_discarded() || !reply.is_object() || !reply.contains("id") ||
      !reply.contains("p") || !reply["id"].is_number_integer() ||
      !reply["p"].is_number()) {
    Broken("malformed reply '" + line + "'");
  }
  if (reply["id"].get<std::int64_t>() != id) {
    Broken("reply id " + reply["id"].dump() + " does not match request " +
           std::to_string(id));
  }
  const double p = reply["p"].get<double>();
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    Broken("probability " + reply["p"].dump() + " outside [0, 1]");
  }
  return p;
}

}  // namespace motif_shap
