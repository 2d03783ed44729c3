// Copyright 2026 The MitH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Interactive prover/verifier sessions over an ordered byte stream.
//
// Frame: u32 big-endian payload length, one type byte, payload. One frame per
// phase carries all repetitions:
//
//   prover                      verifier
//   HELLO(params)        ->
//                        <-     HELLO(params) or ERROR
//   COMMIT(sigma msgs)   ->
//                        <-     CHALLENGE(sigma bytes)
//   RESPONSE             ->
//                        <-     RESULT(accept byte)
//
// RESPONSE ends with SHA-256 of the COMMIT payload as the prover sent it, so
// corruption of commitments that are never opened is still caught.

#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mith/common.hpp"
#include "mith/crypto.hpp"
#include "mith/mith.hpp"

namespace mith {

inline constexpr std::size_t kMaxFramePayload = std::size_t{1} << 24;
inline constexpr std::size_t kFrameHeader = 5;
inline constexpr std::uint8_t kProtocolVersion = 0x01;
inline constexpr std::chrono::milliseconds kDefaultPhaseTimeout{30000};

enum class FrameType : std::uint8_t {
  Hello = 0x01,
  Commit = 0x02,
  Challenge = 0x03,
  Response = 0x04,
  Result = 0x05,
  Error = 0x7f,
};

inline bool known_frame_type(std::uint8_t t) { return (t >= 0x01 && t <= 0x05) || t == 0x7f; }

inline std::string_view to_string(FrameType t) {
  switch (t) {
    case FrameType::Hello: return "HELLO";
    case FrameType::Commit: return "COMMIT";
    case FrameType::Challenge: return "CHALLENGE";
    case FrameType::Response: return "RESPONSE";
    case FrameType::Result: return "RESULT";
    case FrameType::Error: return "ERROR";
  }
  return "?";
}

struct Frame {
  FrameType type;
  Bytes payload;

  bool operator==(const Frame&) const = default;
};

inline Bytes encode_frame(const Frame& f) {
  if (f.payload.size() > kMaxFramePayload) throw std::length_error("frame payload exceeds 2^24 bytes");
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(f.payload.size()));
  w.u8(static_cast<std::uint8_t>(f.type));
  w.raw(f.payload);
  return std::move(w).take();
}

// Header check shared by the buffer and stream decoders; returns the length.
inline std::size_t check_frame_header(ByteView header) {
  ByteReader r(header);
  auto len = r.u32();
  auto type = r.u8();
  if (len > kMaxFramePayload) throw DecodeError("frame length exceeds cap");
  if (!known_frame_type(type)) throw DecodeError("unknown frame type");
  return len;
}

// Decodes one frame from the front of `data`; `consumed` receives its size.
inline Frame decode_frame(ByteView data, std::size_t* consumed = nullptr) {
  if (data.size() < kFrameHeader) throw DecodeError("truncated frame header");
  auto len = check_frame_header(data.first(kFrameHeader));
  if (data.size() - kFrameHeader < len) throw DecodeError("truncated frame payload");
  if (consumed) *consumed = kFrameHeader + len;
  auto body = data.subspan(kFrameHeader, len);
  return Frame{static_cast<FrameType>(data[4]), Bytes(body.begin(), body.end())};
}

// --- transports ----------------------------------------------------------------

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

// Ordered reliable byte stream with per-read deadlines.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void write(ByteView data) = 0;
  // Fills `out` completely or throws (TimeoutError, TransportError on EOF).
  virtual void read_exact(std::span<std::uint8_t> out, std::chrono::milliseconds timeout) = 0;
  virtual void close() = 0;
};

inline void write_frame(Transport& t, const Frame& f) { t.write(encode_frame(f)); }

inline Frame read_frame(Transport& t, std::chrono::milliseconds timeout) {
  std::array<std::uint8_t, kFrameHeader> header{};
  t.read_exact(header, timeout);
  auto len = check_frame_header(header);
  Frame f{static_cast<FrameType>(header[4]), Bytes(len)};
  if (len > 0) t.read_exact(f.payload, timeout);
  return f;
}

namespace detail {

// One direction of an in-memory pipe.
struct PipeBuffer {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::uint8_t> data;
  bool closed = false;
};

}  // namespace detail

// One end of an in-process duplex pipe.
class LoopbackEndpoint final : public Transport {
 public:
  LoopbackEndpoint(std::shared_ptr<detail::PipeBuffer> in, std::shared_ptr<detail::PipeBuffer> out)
      : in_(std::move(in)), out_(std::move(out)) {}

  ~LoopbackEndpoint() override { close(); }

  void write(ByteView data) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw TransportError("write on closed pipe");
    out_->data.insert(out_->data.end(), data.begin(), data.end());
    out_->cv.notify_all();
  }

  void read_exact(std::span<std::uint8_t> out, std::chrono::milliseconds timeout) override {
    std::unique_lock lock(in_->mu);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::size_t got = 0;
    while (got < out.size()) {
      if (!in_->cv.wait_until(lock, deadline, [&] { return !in_->data.empty() || in_->closed; }))
        throw TimeoutError("read timed out");
      if (in_->data.empty()) throw TransportError("peer closed the pipe");
      while (got < out.size() && !in_->data.empty()) {
        out[got++] = in_->data.front();
        in_->data.pop_front();
      }
    }
  }

  void close() override {
    for (auto* b : {in_.get(), out_.get()}) {
      std::lock_guard lock(b->mu);
      b->closed = true;
      b->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<detail::PipeBuffer> in_;
  std::shared_ptr<detail::PipeBuffer> out_;
};

inline std::pair<std::unique_ptr<LoopbackEndpoint>, std::unique_ptr<LoopbackEndpoint>> make_loopback_pair() {
  auto a = std::make_shared<detail::PipeBuffer>();
  auto b = std::make_shared<detail::PipeBuffer>();
  return {std::make_unique<LoopbackEndpoint>(a, b), std::make_unique<LoopbackEndpoint>(b, a)};
}

// Event log shared by capturing transports: every completed write and read
// with a global sequence number.
struct CaptureEvent {
  std::uint64_t seq;
  std::string who;
  bool is_write;
  Bytes bytes;
};

class CaptureLog {
 public:
  void record(const std::string& who, bool is_write, ByteView data) {
    std::lock_guard lock(mu_);
    events_.push_back({next_++, who, is_write, Bytes(data.begin(), data.end())});
  }

  std::vector<CaptureEvent> events() const {
    std::lock_guard lock(mu_);
    return events_;
  }

 private:
  mutable std::mutex mu_;
  std::uint64_t next_ = 0;
  std::vector<CaptureEvent> events_;
};

// Forwards to an inner transport and logs the traffic. Writes may also pass
// through a filter that rewrites or drops whole frames.
class CapturingTransport final : public Transport {
 public:
  using WriteFilter = std::function<std::optional<Bytes>(ByteView)>;

  CapturingTransport(Transport& inner, CaptureLog* log, std::string who, WriteFilter filter = {})
      : inner_(inner), log_(log), who_(std::move(who)), filter_(std::move(filter)) {}

  void write(ByteView data) override {
    std::optional<Bytes> out = Bytes(data.begin(), data.end());
    if (filter_) out = filter_(data);
    if (!out) return;
    if (log_) log_->record(who_, true, *out);
    inner_.write(*out);
  }

  void read_exact(std::span<std::uint8_t> out, std::chrono::milliseconds timeout) override {
    inner_.read_exact(out, timeout);
    if (log_) log_->record(who_, false, out);
  }

  void close() override { inner_.close(); }

 private:
  Transport& inner_;
  CaptureLog* log_;
  std::string who_;
  WriteFilter filter_;
};

// Blocking TCP stream with poll()-based deadlines.
class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;
  ~TcpTransport() override { close(); }

  static std::unique_ptr<TcpTransport> connect(const std::string& host, std::uint16_t port,
                                               std::chrono::milliseconds timeout = kDefaultPhaseTimeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res); rc != 0)
      throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
    std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(res, ::freeaddrinfo);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::string last = "no address";
    // Retry until the deadline so a verifier that is still starting up is
    // not an error.
    while (std::chrono::steady_clock::now() < deadline) {
      for (auto* ai = res; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) return std::make_unique<TcpTransport>(fd);
        last = std::strerror(errno);
        ::close(fd);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    throw TransportError("connect " + host + ":" + std::to_string(port) + ": " + last);
  }

  void write(ByteView data) override {
    std::size_t sent = 0;
    while (sent < data.size()) {
      auto n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("send: ") + std::strerror(errno));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  void read_exact(std::span<std::uint8_t> out, std::chrono::milliseconds timeout) override {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::size_t got = 0;
    while (got < out.size()) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw TimeoutError("read timed out");
      pollfd p{fd_, POLLIN, 0};
      int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("poll: ") + std::strerror(errno));
      }
      if (rc == 0) throw TimeoutError("read timed out");
      auto n = ::recv(fd_, out.data() + got, out.size() - got, 0);
      if (n == 0) throw TransportError("peer closed the connection");
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("recv: ") + std::strerror(errno));
      }
      got += static_cast<std::size_t>(n);
    }
  }

  void close() override {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_;
};

// Listening socket; accept() returns one connection.
class TcpListener {
 public:
  // Port 0 picks an ephemeral port, see port().
  explicit TcpListener(std::uint16_t port, const std::string& bind_addr = "127.0.0.1") {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
      ::close(fd_);
      throw TransportError("bad bind address " + bind_addr);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 || ::listen(fd_, 4) != 0) {
      std::string err = std::strerror(errno);
      ::close(fd_);
      throw TransportError("listen on port " + std::to_string(port) + ": " + err);
    }
  }
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }

  std::uint16_t port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof(addr);
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    return ntohs(addr.sin_port);
  }

  std::unique_ptr<TcpTransport> accept(std::chrono::milliseconds timeout = kDefaultPhaseTimeout) {
    pollfd p{fd_, POLLIN, 0};
    int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc == 0) throw TimeoutError("no connection before deadline");
    if (rc < 0) throw TransportError(std::string("poll: ") + std::strerror(errno));
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw TransportError(std::string("accept: ") + std::strerror(errno));
    return std::make_unique<TcpTransport>(fd);
  }

 private:
  int fd_ = -1;
};

// --- session state machine -------------------------------------------------------

enum class Phase { Hello, Commit, Challenge, Response, Done };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Hello: return "hello";
    case Phase::Commit: return "commit";
    case Phase::Challenge: return "challenge";
    case Phase::Response: return "response";
    case Phase::Done: return "done";
  }
  return "?";
}

enum class ErrorCode : std::uint16_t {
  BadParams = 0x0001,
  HashMismatch = 0x0002,
  UnexpectedFrame = 0x0003,
  Malformed = 0x0004,
  Internal = 0x0005,
};

// Ends a session without a verdict.
class SessionError : public std::runtime_error {
 public:
  SessionError(Phase phase, std::string what, bool timeout = false, std::optional<std::uint16_t> peer_code = {})
      : std::runtime_error("session " + std::string(to_string(phase)) + ": " + what),
        phase_(phase),
        timeout_(timeout),
        peer_code_(peer_code) {}

  Phase phase() const { return phase_; }
  bool timeout() const { return timeout_; }
  // Set when the peer sent an ERROR frame.
  std::optional<std::uint16_t> peer_code() const { return peer_code_; }

 private:
  Phase phase_;
  bool timeout_;
  std::optional<std::uint16_t> peer_code_;
};

struct SessionOptions {
  std::chrono::milliseconds timeout = kDefaultPhaseTimeout;
};

struct Hello {
  std::uint8_t version = kProtocolVersion;
  SchemeKind scheme = SchemeKind::Prf;
  std::uint32_t sigma = 0;
  Digest statement_hash{};

  bool operator==(const Hello&) const = default;
};

inline Bytes encode_hello(const Hello& h) {
  ByteWriter w;
  w.u8(h.version);
  w.u8(static_cast<std::uint8_t>(h.scheme));
  w.u32(h.sigma);
  w.raw(h.statement_hash);
  return std::move(w).take();
}

inline Hello decode_hello(ByteView data) {
  ByteReader r(data);
  Hello h;
  h.version = r.u8();
  auto scheme = r.u8();
  if (scheme != 0x01 && scheme != 0x02) throw DecodeError("unknown commitment scheme");
  h.scheme = static_cast<SchemeKind>(scheme);
  h.sigma = r.u32();
  auto d = r.raw(32);
  std::copy(d.begin(), d.end(), h.statement_hash.begin());
  r.expect_done();
  return h;
}

inline Frame error_frame(ErrorCode code, std::string_view msg) {
  ByteWriter w;
  const auto c = static_cast<std::uint16_t>(code);
  w.u8(static_cast<std::uint8_t>(c >> 8));
  w.u8(static_cast<std::uint8_t>(c));
  w.raw(to_bytes(msg));
  return Frame{FrameType::Error, std::move(w).take()};
}

namespace detail {

class SessionIo {
 public:
  SessionIo(Transport& t, const SessionOptions& opt) : t_(t), opt_(opt) {}

  Phase phase = Phase::Hello;

  void send(const Frame& f) {
    try {
      write_frame(t_, f);
    } catch (const TransportError& e) {
      throw SessionError(phase, e.what());
    }
  }

  // Next frame, which must have type `want`. ERROR frames and any other type
  // end the session.
  Frame expect(FrameType want) {
    Frame f;
    try {
      f = read_frame(t_, opt_.timeout);
    } catch (const TimeoutError& e) {
      throw SessionError(phase, e.what(), true);
    } catch (const TransportError& e) {
      throw SessionError(phase, e.what());
    } catch (const DecodeError& e) {
      abort(ErrorCode::Malformed, e.what());
    }
    if (f.type == FrameType::Error) {
      std::uint16_t code = f.payload.size() >= 2 ? static_cast<std::uint16_t>(f.payload[0] << 8 | f.payload[1]) : 0;
      std::string msg(f.payload.begin() + std::min<std::size_t>(2, f.payload.size()), f.payload.end());
      throw SessionError(phase, "peer error " + std::to_string(code) + ": " + msg, false, code);
    }
    if (f.type != want) {
      abort(ErrorCode::UnexpectedFrame,
            "expected " + std::string(to_string(want)) + ", got " + std::string(to_string(f.type)));
    }
    return f;
  }

  // Sends an ERROR frame (best effort) and ends the session.
  [[noreturn]] void abort(ErrorCode code, const std::string& msg) {
    try {
      write_frame(t_, error_frame(code, msg));
    } catch (const std::exception&) {
    }
    throw SessionError(phase, msg);
  }

 private:
  Transport& t_;
  SessionOptions opt_;
};

}  // namespace detail

// Prover side. Returns the verifier's verdict.
inline bool prover_session(Transport& t, const Statement& s, std::vector<std::unique_ptr<Prover>>& provers,
                           const CommitScheme& scheme, const SessionOptions& opt = {}) {
  if (provers.empty()) throw std::invalid_argument("repetition count must be at least 1");
  detail::SessionIo io(t, opt);
  const Hello hello{kProtocolVersion, scheme.kind, static_cast<std::uint32_t>(provers.size()), statement_hash(s)};
  io.send({FrameType::Hello, encode_hello(hello)});
  auto ack = io.expect(FrameType::Hello);
  try {
    if (!(decode_hello(ack.payload) == hello)) io.abort(ErrorCode::BadParams, "verifier acknowledged other parameters");
  } catch (const DecodeError& e) {
    io.abort(ErrorCode::Malformed, e.what());
  }

  io.phase = Phase::Commit;
  ByteWriter commits;
  for (auto& p : provers) write_commitment_msg(commits, scheme, p->commit());
  const auto commit_digest = sha256(commits.bytes());
  io.send({FrameType::Commit, std::move(commits).take()});

  io.phase = Phase::Challenge;
  auto ch = io.expect(FrameType::Challenge);
  if (ch.payload.size() != provers.size()) io.abort(ErrorCode::Malformed, "challenge count differs from sigma");
  for (auto b : ch.payload)
    if (b >= Challenge::kCount) io.abort(ErrorCode::Malformed, "challenge index out of range");

  io.phase = Phase::Response;
  ByteWriter resp;
  for (std::size_t k = 0; k < provers.size(); ++k)
    write_response(resp, scheme, provers[k]->respond(Challenge::from_index(ch.payload[k])));
  resp.raw(commit_digest);
  io.send({FrameType::Response, std::move(resp).take()});

  auto result = io.expect(FrameType::Result);
  io.phase = Phase::Done;
  if (result.payload.size() != 1 || result.payload[0] > 1) throw SessionError(Phase::Done, "malformed result");
  return result.payload[0] == 1;
}

inline bool prover_session(Transport& t, const Statement& s, const Witness& w, std::size_t sigma, RandomSource& rng,
                           const CommitScheme& scheme = CommitScheme::prf(), const SessionOptions& opt = {}) {
  std::vector<std::unique_ptr<Prover>> provers;
  for (std::size_t k = 0; k < sigma; ++k) provers.push_back(std::make_unique<HonestProver>(s, w, scheme, rng));
  return prover_session(t, s, provers, scheme, opt);
}

struct VerifierOutcome {
  bool accepted = false;
  // Verifier-recorded transcript; absent when COMMIT or RESPONSE did not
  // decode.
  std::optional<Proof> transcript;
};

// Verifier side. Challenges are drawn only after the whole COMMIT frame has
// been received.
inline VerifierOutcome verifier_session(Transport& t, const Statement& s, std::size_t sigma, RandomSource& rng,
                                        const CommitScheme& scheme = CommitScheme::prf(), const SessionOptions& opt = {}) {
  if (sigma == 0) throw std::invalid_argument("repetition count must be at least 1");
  detail::SessionIo io(t, opt);
  const Hello mine{kProtocolVersion, scheme.kind, static_cast<std::uint32_t>(sigma), statement_hash(s)};
  auto hello_frame = io.expect(FrameType::Hello);
  Hello theirs;
  try {
    theirs = decode_hello(hello_frame.payload);
  } catch (const DecodeError& e) {
    io.abort(ErrorCode::Malformed, e.what());
  }
  if (theirs.statement_hash != mine.statement_hash) io.abort(ErrorCode::HashMismatch, "statement hash mismatch");
  if (!(theirs == mine)) io.abort(ErrorCode::BadParams, "parameter mismatch (version, scheme or sigma)");
  io.send({FrameType::Hello, encode_hello(mine)});

  io.phase = Phase::Commit;
  auto commit_frame = io.expect(FrameType::Commit);
  Proof proof{scheme.kind, ChallengeMode::Transcript, mine.statement_hash, {}};
  std::vector<CommitmentMsg> commits;
  bool well_formed = true;
  try {
    ByteReader r(commit_frame.payload);
    for (std::size_t k = 0; k < sigma; ++k) commits.push_back(read_commitment_msg(r, scheme));
    r.expect_done();
  } catch (const DecodeError&) {
    well_formed = false;
  }

  io.phase = Phase::Challenge;
  std::vector<Challenge> challenges;
  Bytes ch_bytes;
  for (std::size_t k = 0; k < sigma; ++k) {
    challenges.push_back(Challenge::sample(rng));
    ch_bytes.push_back(static_cast<std::uint8_t>(challenges.back().index()));
  }
  io.send({FrameType::Challenge, std::move(ch_bytes)});

  io.phase = Phase::Response;
  auto resp_frame = io.expect(FrameType::Response);
  bool accepted = false;
  if (well_formed) {
    try {
      ByteReader r(resp_frame.payload);
      for (std::size_t k = 0; k < sigma; ++k) {
        auto resp = read_response(r, scheme, s.modulus());
        proof.transcripts.push_back({commits[k], challenges[k], std::move(resp)});
      }
      auto d = r.raw(32);
      r.expect_done();
      Digest echoed{};
      std::copy(d.begin(), d.end(), echoed.begin());
      accepted = digest_equal(echoed, sha256(commit_frame.payload)) &&
                 verify_repeated(s, proof, ChallengeMode::Transcript, scheme);
    } catch (const DecodeError&) {
      well_formed = false;
    }
  }
  io.send({FrameType::Result, Bytes{static_cast<std::uint8_t>(accepted ? 1 : 0)}});
  io.phase = Phase::Done;
  VerifierOutcome out{accepted, {}};
  if (well_formed) out.transcript = std::move(proof);
  return out;
}

// --- in-process runs ---------------------------------------------------------------

// Frame-level fault injection for a writer: applied to each written frame.
inline CapturingTransport::WriteFilter drop_frame(FrameType type) {
  return [type](ByteView f) -> std::optional<Bytes> {
    if (f.size() >= kFrameHeader && f[4] == static_cast<std::uint8_t>(type)) return std::nullopt;
    return Bytes(f.begin(), f.end());
  };
}

// XORs `mask` into payload byte `offset` of the first frame of `type`.
inline CapturingTransport::WriteFilter flip_payload_byte(FrameType type, std::size_t offset, std::uint8_t mask = 0x01) {
  return [type, offset, mask, done = false](ByteView f) mutable -> std::optional<Bytes> {
    Bytes out(f.begin(), f.end());
    if (!done && out.size() > kFrameHeader + offset && out[4] == static_cast<std::uint8_t>(type)) {
      out[kFrameHeader + offset] ^= mask;
      done = true;
    }
    return out;
  };
}

struct LoopbackRun {
  std::optional<bool> prover_verdict;
  std::optional<VerifierOutcome> verifier;
  std::optional<SessionError> prover_error;
  std::optional<SessionError> verifier_error;
};

// Runs both sides over an in-memory pipe, the verifier on its own thread.
// A side that fails closes its end so the other does not wait out its
// timeout.
inline LoopbackRun run_loopback(const std::function<bool(Transport&)>& prover,
                                const std::function<VerifierOutcome(Transport&)>& verifier,
                                CapturingTransport::WriteFilter prover_filter = {},
                                CapturingTransport::WriteFilter verifier_filter = {}, CaptureLog* log = nullptr) {
  auto [pe, ve] = make_loopback_pair();
  CapturingTransport pt(*pe, log, "prover", std::move(prover_filter));
  CapturingTransport vt(*ve, log, "verifier", std::move(verifier_filter));
  LoopbackRun run;
  std::exception_ptr verifier_fault;
  std::thread th([&] {
    try {
      run.verifier = verifier(vt);
    } catch (const SessionError& e) {
      run.verifier_error = e;
      vt.close();
    } catch (...) {
      verifier_fault = std::current_exception();
      vt.close();
    }
  });
  std::exception_ptr prover_fault;
  try {
    run.prover_verdict = prover(pt);
  } catch (const SessionError& e) {
    run.prover_error = e;
    pt.close();
  } catch (...) {
    prover_fault = std::current_exception();
    pt.close();
  }
  th.join();
  if (prover_fault) std::rethrow_exception(prover_fault);
  if (verifier_fault) std::rethrow_exception(verifier_fault);
  return run;
}

}  // namespace mith
