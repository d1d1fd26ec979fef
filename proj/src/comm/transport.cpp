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

#include "fedgraph/comm/transport.hpp"

#include <string>

#include "fedgraph/common/error.hpp"

namespace fedgraph {

void Inbox::push(RoundMessage msg) {
  {
    std::lock_guard lock(mu_);
    if (closed_) fail(ErrorCode::kConnectionClosed, "inbox closed");
    queue_.push_back(std::move(msg));
  }
  cv_.notify_one();
}

RoundMessage Inbox::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; })) {
    fail(ErrorCode::kTimeout, "no message within " + std::to_string(timeout.count()) + " ms");
  }
  if (queue_.empty()) fail(ErrorCode::kConnectionClosed, "inbox closed");
  RoundMessage msg = std::move(queue_.front());
  queue_.pop_front();
  return msg;
}

void Inbox::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool Inbox::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

std::size_t Inbox::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

namespace {

class MemoryEndpoint : public Endpoint {
 public:
  MemoryEndpoint(std::shared_ptr<MemoryHub> hub, std::uint16_t id) : hub_(std::move(hub)), id_(id) {}
  ~MemoryEndpoint() override { close(); }

  std::uint16_t id() const override { return id_; }

  void send(RoundMessage msg) override {
    if (closed_) fail(ErrorCode::kConnectionClosed, "endpoint closed");
    msg.sender = id_;
    hub_->deliver(std::move(msg));
  }

  RoundMessage recv(std::chrono::milliseconds timeout) override {
    return hub_->receive(id_, timeout);
  }

  void close() override {
    if (closed_) return;
    closed_ = true;
    hub_->detach(id_);
  }

 private:
  std::shared_ptr<MemoryHub> hub_;
  std::uint16_t id_;
  bool closed_ = false;
};

}  // namespace

std::shared_ptr<MemoryHub> MemoryHub::create() {
  return std::shared_ptr<MemoryHub>(new MemoryHub());
}

std::unique_ptr<Endpoint> MemoryHub::attach(std::uint16_t id) {
  require(id != kBroadcastId, ErrorCode::kInvalidConfig, "participant id 0xFFFF is reserved");
  std::lock_guard lock(mu_);
  require(!inboxes_.count(id), ErrorCode::kInvalidConfig,
          "participant " + std::to_string(id) + " already attached");
  inboxes_[id] = std::make_shared<Inbox>();
  return std::make_unique<MemoryEndpoint>(shared_from_this(), id);
}

void MemoryHub::deliver(RoundMessage msg) {
  std::vector<std::shared_ptr<Inbox>> targets;
  {
    std::lock_guard lock(mu_);
    if (msg.receiver == kBroadcastId) {
      for (auto& [id, inbox] : inboxes_) {
        if (id != msg.sender && !inbox->closed()) targets.push_back(inbox);
      }
    } else {
      auto it = inboxes_.find(msg.receiver);
      if (it == inboxes_.end()) {
        fail(ErrorCode::kUnknownParticipant, "no participant " + std::to_string(msg.receiver));
      }
      targets.push_back(it->second);
    }
  }
  for (auto& t : targets) t->push(msg);
}

void MemoryHub::detach(std::uint16_t id) {
  std::lock_guard lock(mu_);
  auto it = inboxes_.find(id);
  if (it != inboxes_.end()) it->second->close();
}

RoundMessage MemoryHub::receive(std::uint16_t id, std::chrono::milliseconds timeout) {
  std::shared_ptr<Inbox> inbox;
  {
    std::lock_guard lock(mu_);
    auto it = inboxes_.find(id);
    if (it == inboxes_.end()) fail(ErrorCode::kUnknownParticipant, "no participant " + std::to_string(id));
    inbox = it->second;
  }
  return inbox->pop(timeout);
}

}  // namespace fedgraph
