/*
 * Copyright 2026 The FedGraph Authors
 *
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

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "fedgraph/comm/transport.hpp"

namespace fedgraph {

// Server side of the TCP transport: one connection per client. Frames
// addressed to another client are forwarded by the server's readers, so
// clients never connect to each other.
class TcpServer : public Endpoint {
 public:
  // Binds and listens; port 0 picks an ephemeral port. Throws
  // TransportFailure.
  explicit TcpServer(std::uint16_t port = 0, const std::string& host = "127.0.0.1");
  ~TcpServer() override;
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }

  // Completes the Hello handshake with `count` clients. A Hello from id 0
  // is assigned the lowest free id. Throws Timeout.
  void accept_clients(std::size_t count, std::chrono::milliseconds timeout);
  std::vector<std::uint16_t> client_ids() const;

  std::uint16_t id() const override { return kServerId; }
  void send(RoundMessage msg) override;
  RoundMessage recv(std::chrono::milliseconds timeout) override;
  void close() override;

 private:
  struct Connection;

  void reader_loop(std::shared_ptr<Connection> conn);
  void route(RoundMessage msg);
  void write_to(Connection& conn, const Bytes& frame);

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  Inbox inbox_;
  mutable std::mutex mu_;
  std::map<std::uint16_t, std::shared_ptr<Connection>> conns_;
  bool closed_ = false;
};

// Connects, sends Hello with the requested id (0 lets the server choose)
// and waits for HelloAck. Retries the connect until timeout.
std::unique_ptr<Endpoint> tcp_connect(const std::string& host, std::uint16_t port,
                                      std::uint16_t requested_id,
                                      std::chrono::milliseconds timeout);

}  // namespace fedgraph
