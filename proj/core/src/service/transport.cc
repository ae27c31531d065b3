// Copyright 2026 The ZipPIR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zippir/service/transport.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "absl/strings/str_cat.h"
#include "zippir/common/errors.h"
#include "zippir/common/status_macros.h"

namespace zippir {
namespace {

absl::Status SocketError(absl::string_view what) {
  return StateError(absl::StrCat(what, ": ", std::strerror(errno)));
}

absl::Status WriteAll(int fd, const uint8_t* data, size_t size) {
  while (size > 0) {
    ssize_t k = ::send(fd, data, size, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      return SocketError("send failed");
    }
    data += k;
    size -= static_cast<size_t>(k);
  }
  return absl::OkStatus();
}

// False on a clean end of stream before the first byte.
absl::StatusOr<bool> ReadAll(int fd, uint8_t* data, size_t size) {
  size_t got = 0;
  while (got < size) {
    ssize_t k = ::recv(fd, data + got, size - got, 0);
    if (k < 0) {
      if (errno == EINTR) continue;
      return SocketError("recv failed");
    }
    if (k == 0) {
      if (got == 0) return false;
      return ProtocolError("stream ended inside a frame");
    }
    got += static_cast<size_t>(k);
  }
  return true;
}

absl::StatusOr<addrinfo*> Resolve(const std::string& address, bool passive) {
  ZIPPIR_ASSIGN_OR_RETURN(auto host_port, ParseAddress(address));
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string port = absl::StrCat(host_port.second);
  int rc =
      ::getaddrinfo(host_port.first.empty() ? nullptr : host_port.first.c_str(),
                    port.c_str(), &hints, &result);
  if (rc != 0) {
    return InputError(
        absl::StrCat("cannot resolve ", address, ": ", ::gai_strerror(rc)));
  }
  return result;
}

}  // namespace

std::vector<uint8_t> EncodeErrorBody(const absl::Status& status) {
  std::vector<uint8_t> body = {
      static_cast<uint8_t>(KindOf(status)),
      static_cast<uint8_t>(status.code()),
      static_cast<uint8_t>(TagOf(status)),
  };
  body.insert(body.end(), status.message().begin(), status.message().end());
  return body;
}

absl::Status DecodeErrorBody(std::span<const uint8_t> body) {
  if (body.size() < 3 || body[0] == 0 ||
      body[0] > static_cast<uint8_t>(ErrorKind::kCrypto) || body[1] == 0 ||
      body[2] > static_cast<uint8_t>(ErrorTag::kRegistrationRequired)) {
    return ProtocolError("malformed error frame");
  }
  std::string message(body.begin() + 3, body.end());
  return StatusFromWire(static_cast<ErrorKind>(body[0]),
                        static_cast<absl::StatusCode>(body[1]),
                        static_cast<ErrorTag>(body[2]), message);
}

absl::StatusOr<std::pair<std::string, uint16_t>> ParseAddress(
    const std::string& address) {
  const size_t colon = address.rfind(':');
  if (colon == std::string::npos) {
    return InputError(absl::StrCat("address ", address, " is not host:port"));
  }
  std::string host = address.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  unsigned port = 0;
  const char* begin = address.data() + colon + 1;
  const char* end = address.data() + address.size();
  auto [ptr, ec] = std::from_chars(begin, end, port);
  if (ec != std::errc() || ptr != end || begin == end || port > 65535) {
    return InputError(absl::StrCat("bad port in address ", address));
  }
  return std::make_pair(host, static_cast<uint16_t>(port));
}

absl::StatusOr<std::unique_ptr<Connection>> Connection::Dial(
    const std::string& address) {
  ZIPPIR_ASSIGN_OR_RETURN(addrinfo * list, Resolve(address, false));
  int fd = -1;
  int saved_errno = 0;
  for (addrinfo* ai = list; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                  ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    saved_errno = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(list);
  if (fd < 0) {
    errno = saved_errno;
    return SocketError(absl::StrCat("cannot connect to ", address));
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return std::make_unique<Connection>(fd);
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

void Connection::Count(bool sent, size_t bytes) {
  for (TrafficCounters* c : {&own_, shared_.get()}) {
    if (c == nullptr) continue;
    if (sent) {
      c->bytes_sent += bytes;
      c->frames_sent += 1;
    } else {
      c->bytes_received += bytes;
      c->frames_received += 1;
    }
  }
}

absl::Status Connection::Send(const Frame& frame) {
  const size_t length = frame.body.size() + 1;
  if (length > kMaxFrameBytes) return InputError("frame too large");
  std::vector<uint8_t> out(kFrameHeaderBytes + frame.body.size());
  for (int k = 0; k < 4; ++k) out[k] = static_cast<uint8_t>(length >> (8 * k));
  out[4] = static_cast<uint8_t>(frame.type);
  std::memcpy(out.data() + kFrameHeaderBytes, frame.body.data(),
              frame.body.size());
  ZIPPIR_RETURN_IF_ERROR(WriteAll(fd_, out.data(), out.size()));
  Count(true, out.size());
  return absl::OkStatus();
}

absl::StatusOr<Frame> Connection::Receive() {
  uint8_t header[kFrameHeaderBytes];
  ZIPPIR_ASSIGN_OR_RETURN(bool more, ReadAll(fd_, header, 4));
  if (!more) return StateError("connection closed by peer");
  uint32_t length = 0;
  for (int k = 0; k < 4; ++k) length |= uint32_t{header[k]} << (8 * k);
  if (length == 0 || length > kMaxFrameBytes) {
    return ProtocolError(absl::StrCat("bad frame length ", length));
  }
  ZIPPIR_ASSIGN_OR_RETURN(more, ReadAll(fd_, header + 4, 1));
  if (!more) return ProtocolError("stream ended inside a frame");
  Frame frame;
  frame.type = static_cast<FrameType>(header[4]);
  frame.body.resize(length - 1);
  if (!frame.body.empty()) {
    ZIPPIR_ASSIGN_OR_RETURN(more,
                            ReadAll(fd_, frame.body.data(), frame.body.size()));
    if (!more) return ProtocolError("stream ended inside a frame");
  }
  if (header[4] < static_cast<uint8_t>(FrameType::kParamsRequest) ||
      header[4] > static_cast<uint8_t>(FrameType::kError)) {
    Count(false, kFrameHeaderBytes + frame.body.size());
    return ProtocolError(
        absl::StrCat("unknown frame type ", static_cast<int>(header[4])));
  }
  Count(false, kFrameHeaderBytes + frame.body.size());
  return frame;
}

absl::StatusOr<Frame> Connection::Call(const Frame& request) {
  ZIPPIR_RETURN_IF_ERROR(Send(request));
  ZIPPIR_ASSIGN_OR_RETURN(Frame reply, Receive());
  if (reply.type == FrameType::kError) return DecodeErrorBody(reply.body);
  return reply;
}

void Connection::Shutdown() { ::shutdown(fd_, SHUT_RDWR); }

absl::StatusOr<std::unique_ptr<Listener>> Listener::Bind(
    const std::string& address) {
  ZIPPIR_ASSIGN_OR_RETURN(addrinfo * list, Resolve(address, true));
  int fd = -1;
  for (addrinfo* ai = list; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                  ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      break;
    }
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(list);
  if (fd < 0) return SocketError(absl::StrCat("cannot listen on ", address));
  sockaddr_storage bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  uint16_t port = 0;
  if (bound.ss_family == AF_INET) {
    port = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  } else if (bound.ss_family == AF_INET6) {
    port = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
  }
  return std::unique_ptr<Listener>(new Listener(fd, port));
}

Listener::~Listener() {
  int fd = fd_.exchange(-1);
  if (fd >= 0) ::close(fd);
}

absl::StatusOr<std::unique_ptr<Connection>> Listener::Accept() {
  for (;;) {
    int fd = fd_.load();
    if (fd < 0) return StateError("listener shut down");
    int client = ::accept4(fd, nullptr, nullptr, SOCK_CLOEXEC);
    if (client >= 0) {
      int one = 1;
      ::setsockopt(client, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return std::make_unique<Connection>(client);
    }
    if (errno == EINTR || errno == ECONNABORTED) continue;
    if (fd_.load() < 0) return StateError("listener shut down");
    return SocketError("accept failed");
  }
}

void Listener::Shutdown() {
  int fd = fd_.load();
  if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
  fd = fd_.exchange(-1);
  if (fd >= 0) ::close(fd);
}

}  // namespace zippir
