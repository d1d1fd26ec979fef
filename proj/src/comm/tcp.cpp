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

#include "fedgraph/comm/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <optional>

#include "fedgraph/comm/payloads.hpp"
#include "fedgraph/common/error.hpp"
#include "fedgraph/common/log.hpp"

namespace fedgraph {
namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void sys_fail(const std::string& what) {
  fail(ErrorCode::kTransportFailure, what + ": " + std::strerror(errno));
}

void write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t k = ::send(fd, data, n, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::kConnectionClosed, std::string("send: ") + std::strerror(errno));
    }
    data += k;
    n -= static_cast<std::size_t>(k);
  }
}

// Waits until fd is readable; false on timeout.
bool wait_readable(int fd, Clock::time_point deadline) {
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return false;
    pollfd p{fd, POLLIN, 0};
    const int r = ::poll(&p, 1, static_cast<int>(left.count()));
    if (r > 0) return true;
    if (r < 0 && errno != EINTR) sys_fail("poll");
  }
}

// Reads exactly n bytes; false on orderly EOF before the first byte.
bool read_exact(int fd, std::uint8_t* out, std::size_t n, const Clock::time_point* deadline) {
  std::size_t got = 0;
  while (got < n) {
    if (deadline != nullptr && !wait_readable(fd, *deadline)) {
      fail(ErrorCode::kTimeout, "socket read timed out");
    }
    const ssize_t k = ::recv(fd, out + got, n - got, 0);
    if (k == 0) {
      if (got == 0) return false;
      fail(ErrorCode::kTruncatedFrame, "connection closed mid-frame");
    }
    if (k < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    got += static_cast<std::size_t>(k);
  }
  return true;
}

// One frame, or nullopt on EOF.
std::optional<RoundMessage> read_frame(int fd, const Clock::time_point* deadline = nullptr) {
  std::uint8_t len[4];
  if (!read_exact(fd, len, 4, deadline)) return std::nullopt;
  const std::uint32_t declared = (std::uint32_t{len[0]} << 24) | (std::uint32_t{len[1]} << 16) |
                                 (std::uint32_t{len[2]} << 8) | std::uint32_t{len[3]};
  if (declared < kFrameFixedBytes) {
    fail(ErrorCode::kLengthMismatch, "declared length " + std::to_string(declared));
  }
  Bytes body(declared);
  if (!read_exact(fd, body.data(), body.size(), deadline)) {
    fail(ErrorCode::kTruncatedFrame, "connection closed after length prefix");
  }
  return decode_frame_body(body);
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    fail(ErrorCode::kTransportFailure, "not an IPv4 address: " + host);
  }
  return addr;
}

class TcpClient : public Endpoint {
 public:
  TcpClient(int fd, std::uint16_t id) : fd_(fd), id_(id) {
    reader_ = std::thread([this] { reader_loop(); });
  }
  ~TcpClient() override { close(); }

  std::uint16_t id() const override { return id_; }

  void send(RoundMessage msg) override {
    msg.sender = id_;
    const Bytes frame = encode_frame(msg);
    std::lock_guard lock(write_mu_);
    if (fd_ < 0) fail(ErrorCode::kConnectionClosed, "endpoint closed");
    write_all(fd_, frame.data(), frame.size());
  }

  RoundMessage recv(std::chrono::milliseconds timeout) override { return inbox_.pop(timeout); }

  void close() override {
    {
      std::lock_guard lock(write_mu_);
      if (fd_ < 0) return;
      ::shutdown(fd_, SHUT_RDWR);
    }
    if (reader_.joinable()) reader_.join();
    std::lock_guard lock(write_mu_);
    ::close(fd_);
    fd_ = -1;
  }

 private:
  void reader_loop() {
    try {
      while (auto msg = read_frame(fd_)) inbox_.push(std::move(*msg));
    } catch (const Error& e) {
      logger().warn("client {} reader stopped: {}", id_, e.what());
    }
    inbox_.close();
  }

  int fd_;
  std::uint16_t id_;
  Inbox inbox_;
  std::mutex write_mu_;
  std::thread reader_;
};

}  // namespace

struct TcpServer::Connection {
  int fd = -1;
  std::uint16_t id = 0;
  std::mutex write_mu;
  std::thread reader;
  bool open = true;
};

TcpServer::TcpServer(std::uint16_t port, const std::string& host) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) sys_fail("socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = make_addr(host, port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    const std::string msg = std::string("bind: ") + std::strerror(errno);
    ::close(listen_fd_);
    fail(ErrorCode::kTransportFailure, msg);
  }
  if (::listen(listen_fd_, 64) < 0) sys_fail("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() { close(); }

void TcpServer::accept_clients(std::size_t count, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::size_t accepted = 0;
  while (accepted < count) {
    if (!wait_readable(listen_fd_, deadline)) {
      fail(ErrorCode::kTimeout, std::to_string(accepted) + " of " + std::to_string(count) +
                                    " clients connected");
    }
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      sys_fail("accept");
    }
    set_nodelay(fd);
    std::optional<RoundMessage> hello;
    try {
      hello = read_frame(fd, &deadline);
    } catch (const Error&) {
      ::close(fd);
      throw;
    }
    if (!hello || hello->type != MessageType::kControl ||
        decode_control(hello->payload).kind != ControlKind::kHello) {
      ::close(fd);
      logger().warn("dropping connection without a Hello");
      continue;
    }
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    {
      std::lock_guard lock(mu_);
      std::uint16_t id = hello->sender;
      if (id == kServerId) {
        id = 1;
        while (conns_.count(id)) ++id;
      }
      if (id == kBroadcastId || conns_.count(id)) {
        ::close(fd);
        fail(ErrorCode::kInvalidConfig, "participant " + std::to_string(id) + " already connected");
      }
      conn->id = id;
      conns_[id] = conn;
    }
    RoundMessage ack = control_message(ControlKind::kHelloAck, 0, conn->id);
    write_to(*conn, encode_frame(ack));
    conn->reader = std::thread([this, conn] { reader_loop(conn); });
    ++accepted;
  }
}

std::vector<std::uint16_t> TcpServer::client_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::uint16_t> out;
  for (const auto& [id, c] : conns_) out.push_back(id);
  return out;
}

void TcpServer::write_to(Connection& conn, const Bytes& frame) {
  std::lock_guard lock(conn.write_mu);
  if (!conn.open) fail(ErrorCode::kConnectionClosed, "client " + std::to_string(conn.id) + " gone");
  write_all(conn.fd, frame.data(), frame.size());
}

void TcpServer::route(RoundMessage msg) {
  if (msg.receiver == kServerId) {
    inbox_.push(std::move(msg));
    return;
  }
  const Bytes frame = encode_frame(msg);
  std::vector<std::shared_ptr<Connection>> targets;
  {
    std::lock_guard lock(mu_);
    if (msg.receiver == kBroadcastId) {
      for (auto& [id, c] : conns_) {
        if (id != msg.sender) targets.push_back(c);
      }
    } else {
      auto it = conns_.find(msg.receiver);
      if (it == conns_.end()) {
        fail(ErrorCode::kUnknownParticipant, "no participant " + std::to_string(msg.receiver));
      }
      targets.push_back(it->second);
    }
  }
  if (msg.receiver == kBroadcastId && msg.sender != kServerId) inbox_.push(msg);
  for (auto& t : targets) {
    try {
      write_to(*t, frame);
    } catch (const Error& e) {
      if (msg.receiver != kBroadcastId) throw;
      logger().warn("broadcast skipped client {}: {}", t->id, e.what());
    }
  }
}

void TcpServer::reader_loop(std::shared_ptr<Connection> conn) {
  try {
    while (auto msg = read_frame(conn->fd)) {
      msg->sender = conn->id;
      try {
        route(std::move(*msg));
      } catch (const Error& e) {
        logger().warn("relay from client {} failed: {}", conn->id, e.what());
      }
    }
  } catch (const Error& e) {
    logger().warn("reader for client {} stopped: {}", conn->id, e.what());
  }
  std::lock_guard lock(conn->write_mu);
  conn->open = false;
}

void TcpServer::send(RoundMessage msg) {
  msg.sender = kServerId;
  {
    std::lock_guard lock(mu_);
    if (closed_) fail(ErrorCode::kConnectionClosed, "server closed");
  }
  if (msg.receiver == kServerId) fail(ErrorCode::kUnknownParticipant, "server cannot send to itself");
  route(std::move(msg));
}

RoundMessage TcpServer::recv(std::chrono::milliseconds timeout) { return inbox_.pop(timeout); }

void TcpServer::close() {
  std::map<std::uint16_t, std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    closed_ = true;
    conns.swap(conns_);
  }
  for (auto& [id, c] : conns) ::shutdown(c->fd, SHUT_RDWR);
  for (auto& [id, c] : conns) {
    if (c->reader.joinable()) c->reader.join();
    ::close(c->fd);
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
  inbox_.close();
}

std::unique_ptr<Endpoint> tcp_connect(const std::string& host, std::uint16_t port,
                                      std::uint16_t requested_id,
                                      std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  const sockaddr_in addr = make_addr(host, port);
  int fd = -1;
  while (true) {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) sys_fail("socket");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) break;
    ::close(fd);
    if (Clock::now() >= deadline) {
      fail(ErrorCode::kTimeout, "could not connect to " + host + ":" + std::to_string(port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  set_nodelay(fd);
  RoundMessage hello = control_message(ControlKind::kHello, 0, kServerId);
  hello.sender = requested_id;
  const Bytes frame = encode_frame(hello);
  std::optional<RoundMessage> ack;
  try {
    write_all(fd, frame.data(), frame.size());
    ack = read_frame(fd, &deadline);
  } catch (const Error&) {
    ::close(fd);
    throw;
  }
  if (!ack || ack->type != MessageType::kControl ||
      decode_control(ack->payload).kind != ControlKind::kHelloAck) {
    ::close(fd);
    fail(ErrorCode::kConnectionClosed, "server refused the handshake");
  }
  return std::make_unique<TcpClient>(fd, ack->receiver);
}

}  // namespace fedgraph
