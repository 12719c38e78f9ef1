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

#include "ppsf/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

namespace ppsf {

namespace {

class InprocQueue {
 public:
  void push(std::vector<std::uint8_t> frame) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      frames_.push_back(std::move(frame));
    }
    cv_.notify_one();
  }

  std::vector<std::uint8_t> pop() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return !frames_.empty(); });
    auto frame = std::move(frames_.front());
    frames_.pop_front();
    return frame;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::vector<std::uint8_t>> frames_;
};

class InprocChannel : public Channel {
 public:
  InprocChannel(std::shared_ptr<InprocQueue> out, std::shared_ptr<InprocQueue> in)
      : out_(std::move(out)), in_(std::move(in)) {}

  void send(const ProtocolMessage& msg) override {
    auto frame = frame_message(msg);
    if (frame.size() - 4 > max_frame_) {
      throw ProtocolError("outgoing frame exceeds negotiated size");
    }
    out_->push(std::move(frame));
  }

  ProtocolMessage recv() override {
    const auto frame = in_->pop();
    if (frame.size() < 4) throw ParseError("short frame");
    ByteReader r(frame);
    const std::uint32_t len = r.get_u32();
    if (len != frame.size() - 4) throw ParseError("frame length mismatch");
    if (len > max_frame_) throw ProtocolError("incoming frame exceeds negotiated size");
    return parse_message(std::span(frame).subspan(4));
  }

 private:
  std::shared_ptr<InprocQueue> out_;
  std::shared_ptr<InprocQueue> in_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> make_inproc_pair() {
  auto a_to_b = std::make_shared<InprocQueue>();
  auto b_to_a = std::make_shared<InprocQueue>();
  return {std::make_unique<InprocChannel>(a_to_b, b_to_a),
          std::make_unique<InprocChannel>(b_to_a, a_to_b)};
}

SocketChannel::SocketChannel(int fd) : fd_(fd) {
  if (fd_ < 0) throw std::runtime_error("SocketChannel: bad descriptor");
}

SocketChannel::~SocketChannel() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<SocketChannel> SocketChannel::connect_to(const std::string& host,
                                                         std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &result) != 0) {
    throw std::runtime_error("connect: cannot resolve " + host);
  }
  int fd = -1;
  for (addrinfo* cursor = result; cursor; cursor = cursor->ai_next) {
    fd = ::socket(cursor->ai_family, cursor->ai_socktype, cursor->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, cursor->ai_addr, cursor->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) throw std::runtime_error("connect: no reachable endpoint at " + host);
  return std::make_unique<SocketChannel>(fd);
}

namespace {

void write_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t wrote = ::write(fd, data, len);
    if (wrote <= 0) throw std::runtime_error("socket write failed");
    data += wrote;
    len -= static_cast<std::size_t>(wrote);
  }
}

void read_all(int fd, std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t got = ::read(fd, data, len);
    if (got <= 0) throw std::runtime_error("socket closed mid-frame");
    data += got;
    len -= static_cast<std::size_t>(got);
  }
}

}  // namespace

void SocketChannel::send(const ProtocolMessage& msg) {
  const auto frame = frame_message(msg);
  if (frame.size() - 4 > max_frame_) {
    throw ProtocolError("outgoing frame exceeds negotiated size");
  }
  write_all(fd_, frame.data(), frame.size());
}

ProtocolMessage SocketChannel::recv() {
  std::uint8_t header[4];
  read_all(fd_, header, 4);
  const std::uint32_t len = (static_cast<std::uint32_t>(header[0]) << 24) |
                            (static_cast<std::uint32_t>(header[1]) << 16) |
                            (static_cast<std::uint32_t>(header[2]) << 8) |
                            static_cast<std::uint32_t>(header[3]);
  if (len > max_frame_) throw ProtocolError("incoming frame exceeds negotiated size");
  std::vector<std::uint8_t> body(len);
  read_all(fd_, body.data(), body.size());
  return parse_message(body);
}

SocketServer::SocketServer(std::uint16_t port) : listen_fd_(-1), port_(port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("listen: cannot create socket");
  const int enable = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &enable, sizeof(enable));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(listen_fd_);
    throw std::runtime_error("listen: cannot bind port " + std::to_string(port));
  }
  if (::listen(listen_fd_, 8) != 0) {
    ::close(listen_fd_);
    throw std::runtime_error("listen: cannot listen");
  }
  socklen_t addr_len = sizeof(addr);
  if (::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &addr_len) == 0) {
    port_ = ntohs(addr.sin_port);
  }
}

SocketServer::~SocketServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::unique_ptr<SocketChannel> SocketServer::accept_one() {
  const int fd = ::accept(listen_fd_, nullptr, nullptr);
  if (fd < 0) throw std::runtime_error("accept failed");
  return std::make_unique<SocketChannel>(fd);
}

}  // namespace ppsf
