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
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fedgraph/comm/message.hpp"

namespace fedgraph {

// Multi-producer, single-consumer FIFO of messages.
class Inbox {
 public:
  void push(RoundMessage msg);
  // Throws Timeout when nothing arrives in time, ConnectionClosed once the
  // inbox is closed and drained.
  RoundMessage pop(std::chrono::milliseconds timeout);
  void close();
  bool closed() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<RoundMessage> queue_;
  bool closed_ = false;
};

// One participant's view of a transport. Sends are thread-safe; recv is
// called by the owning worker only. Delivery is reliable and ordered per
// sender/receiver pair. A receiver of kBroadcastId reaches every other
// registered participant.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual std::uint16_t id() const = 0;
  // msg.sender is overwritten with id(). Throws UnknownParticipant,
  // ConnectionClosed.
  virtual void send(RoundMessage msg) = 0;
  virtual RoundMessage recv(std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;

  void broadcast(RoundMessage msg) {
    msg.receiver = kBroadcastId;
    send(std::move(msg));
  }
};

// In-process transport: every endpoint's inbox lives in the hub.
class MemoryHub : public std::enable_shared_from_this<MemoryHub> {
 public:
  static std::shared_ptr<MemoryHub> create();

  // Throws InvalidConfig when id is taken or reserved.
  std::unique_ptr<Endpoint> attach(std::uint16_t id);

  void deliver(RoundMessage msg);
  void detach(std::uint16_t id);
  RoundMessage receive(std::uint16_t id, std::chrono::milliseconds timeout);

 private:
  MemoryHub() = default;

  std::mutex mu_;
  std::map<std::uint16_t, std::shared_ptr<Inbox>> inboxes_;
};

}  // namespace fedgraph
