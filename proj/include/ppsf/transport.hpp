/*
 * Copyright 2026 The ppsf Authors
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

#ifndef PPSF_TRANSPORT_HPP_
#define PPSF_TRANSPORT_HPP_

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <string>

#include "ppsf/wire.hpp"

namespace ppsf {

/// Ordered, reliable message stream between two parties. Implementations
/// frame with the 4-byte length prefix and re-parse on receive, so in-process
/// and socket sessions exercise identical bytes.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const ProtocolMessage& msg) = 0;
  virtual ProtocolMessage recv() = 0;

  void set_max_frame(std::uint32_t bytes) { max_frame_ = bytes; }
  std::uint32_t max_frame() const { return max_frame_; }

 protected:
  std::uint32_t max_frame_ = kDefaultMaxFrame;
};

/// Two ends of an in-process queue pair.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_inproc_pair();

/// Blocking stream-socket channel over the loopback or a remote host.
class SocketChannel : public Channel {
 public:
  explicit SocketChannel(int fd);
  ~SocketChannel() override;
  SocketChannel(const SocketChannel&) = delete;
  SocketChannel& operator=(const SocketChannel&) = delete;

  static std::unique_ptr<SocketChannel> connect_to(const std::string& host,
                                                   std::uint16_t port);

  void send(const ProtocolMessage& msg) override;
  ProtocolMessage recv() override;

 private:
  int fd_;
};

class SocketServer {
 public:
  /// Binds and listens; port 0 picks a free port (see port()).
  explicit SocketServer(std::uint16_t port);
  ~SocketServer();
  SocketServer(const SocketServer&) = delete;
  SocketServer& operator=(const SocketServer&) = delete;

  std::unique_ptr<SocketChannel> accept_one();
  std::uint16_t port() const { return port_; }

 private:
  int listen_fd_;
  std::uint16_t port_;
};

}  // namespace ppsf

#endif  // PPSF_TRANSPORT_HPP_
