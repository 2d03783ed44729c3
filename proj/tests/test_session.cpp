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


#include <gtest/gtest.h>

#include "mith/corpus.hpp"
#include "mith/session.hpp"

namespace mith {
namespace {

using std::chrono::milliseconds;

struct Instance {
  Statement s;
  Witness w;
};

Instance square_plus_one() {
  auto c = parse_circuit("field 101\ntopology 0 1 3\n(add 3 (mul 2 (sinput 0) (sinput 0)) (const 1 1))");
  auto m = c.modulus;
  return {Statement{c, {}, FieldElement(m, 10)}, Witness{{FieldElement(m, 3)}}};
}

SessionOptions fast() { return SessionOptions{milliseconds(2000)}; }

TEST(Frame, EmptyHelloBytes) {
  EXPECT_EQ(encode_frame({FrameType::Hello, {}}), (Bytes{0, 0, 0, 0, 1}));
  EXPECT_EQ(encode_frame({FrameType::Result, {1}}), (Bytes{0, 0, 0, 1, 5, 1}));
}

TEST(Frame, RandomRoundTrip) {
  SeededRandom rng(11);
  const FrameType types[] = {FrameType::Hello,    FrameType::Commit, FrameType::Challenge,
                             FrameType::Response, FrameType::Result, FrameType::Error};
  for (int k = 0; k < 10000; ++k) {
    Frame f{types[rng.uniform(6)], rng.bytes(rng.uniform(k % 100 == 0 ? 5000 : 64))};
    auto enc = encode_frame(f);
    std::size_t used = 0;
    EXPECT_EQ(decode_frame(enc, &used), f);
    EXPECT_EQ(used, enc.size());
  }
}

TEST(Frame, RejectsOversizedAndUnknown) {
  Frame big{FrameType::Commit, Bytes(kMaxFramePayload + 1)};
  EXPECT_THROW(encode_frame(big), std::length_error);
  EXPECT_THROW(decode_frame(Bytes{0x01, 0x00, 0x00, 0x01, 0x02}), DecodeError);
  EXPECT_THROW(decode_frame(Bytes{0, 0, 0, 0, 0x06}), DecodeError);
  EXPECT_THROW(decode_frame(Bytes{0, 0, 0, 2, 0x01, 7}), DecodeError);
  EXPECT_THROW(decode_frame(Bytes{0, 0, 0}), DecodeError);
  EXPECT_NO_THROW(encode_frame({FrameType::Commit, Bytes(kMaxFramePayload)}));
}

TEST(Frame, StreamReadAcrossWrites) {
  auto [a, b] = make_loopback_pair();
  auto enc = encode_frame({FrameType::Challenge, {1, 2, 3}});
  for (auto byte : enc) a->write(Bytes{byte});
  EXPECT_EQ(read_frame(*b, milliseconds(100)), (Frame{FrameType::Challenge, {1, 2, 3}}));
  EXPECT_THROW(read_frame(*b, milliseconds(20)), TimeoutError);
  a->close();
  EXPECT_THROW(read_frame(*b, milliseconds(20)), TransportError);
}

TEST(Hello, RoundTrip) {
  Hello h{kProtocolVersion, SchemeKind::Pedersen, 40, statement_hash(square_plus_one().s)};
  auto enc = encode_hello(h);
  EXPECT_EQ(enc.size(), 38u);
  EXPECT_EQ(decode_hello(enc), h);
  enc.push_back(0);
  EXPECT_THROW(decode_hello(enc), DecodeError);
}

LoopbackRun honest_run(const Instance& in, std::size_t sigma, std::uint64_t seed,
                       CapturingTransport::WriteFilter pf = {}, CapturingTransport::WriteFilter vf = {},
                       CaptureLog* log = nullptr, const CommitScheme& scheme = CommitScheme::prf()) {
  SeededRandom prng(seed), vrng(seed + 1);
  return run_loopback([&](Transport& t) { return prover_session(t, in.s, in.w, sigma, prng, scheme, fast()); },
                      [&](Transport& t) { return verifier_session(t, in.s, sigma, vrng, scheme, fast()); },
                      std::move(pf), std::move(vf), log);
}

TEST(Session, HonestAccepts) {
  auto in = square_plus_one();
  auto run = honest_run(in, 10, 1);
  ASSERT_TRUE(run.prover_verdict.has_value());
  EXPECT_TRUE(*run.prover_verdict);
  ASSERT_TRUE(run.verifier.has_value());
  EXPECT_TRUE(run.verifier->accepted);
}

TEST(Session, HonestAcceptsPedersen) {
  auto in = square_plus_one();
  auto run = honest_run(in, 3, 2, {}, {}, nullptr, CommitScheme::with_pedersen(PedersenParams::test_group()));
  ASSERT_TRUE(run.verifier.has_value());
  EXPECT_TRUE(run.verifier->accepted);
}

TEST(Session, VerdictMatchesOfflineTranscriptCheck) {
  SeededRandom gen(3);
  auto m = Modulus::make(BigInt(97));
  for (int k = 0; k < 20; ++k) {
    auto c = random_circuit(gen, m, {1, 1, 5, true});
    Statement s{c, random_inputs(gen, m, 1), {}};
    Witness w{random_inputs(gen, m, 1)};
    s.target = eval_plain(s, w);
    if (k % 2) s.target += FieldElement(m, 1);  // a false statement
    auto run = honest_run({s, w}, 4, 100 + k);
    ASSERT_TRUE(run.verifier.has_value());
    ASSERT_TRUE(run.verifier->transcript.has_value());
    EXPECT_EQ(run.verifier->accepted, k % 2 == 0);
    EXPECT_EQ(verify_repeated(s, *run.verifier->transcript, ChallengeMode::Transcript), run.verifier->accepted);
    EXPECT_EQ(*run.prover_verdict, run.verifier->accepted);
  }
}

TEST(Session, StatementMismatchIsErrorAtHello) {
  auto in = square_plus_one();
  auto other = in.s;
  other.target = FieldElement(other.modulus(), 11);
  SeededRandom prng(4), vrng(5);
  auto run = run_loopback([&](Transport& t) { return prover_session(t, in.s, in.w, 2, prng, CommitScheme::prf(), fast()); },
                          [&](Transport& t) { return verifier_session(t, other, 2, vrng, CommitScheme::prf(), fast()); });
  ASSERT_TRUE(run.verifier_error.has_value());
  EXPECT_EQ(run.verifier_error->phase(), Phase::Hello);
  ASSERT_TRUE(run.prover_error.has_value());
  EXPECT_EQ(run.prover_error->peer_code(), static_cast<std::uint16_t>(ErrorCode::HashMismatch));
  EXPECT_FALSE(run.verifier.has_value());
}

TEST(Session, SigmaOrSchemeMismatchIsParamsError) {
  auto in = square_plus_one();
  SeededRandom prng(6), vrng(7);
  auto run = run_loopback([&](Transport& t) { return prover_session(t, in.s, in.w, 3, prng, CommitScheme::prf(), fast()); },
                          [&](Transport& t) { return verifier_session(t, in.s, 4, vrng, CommitScheme::prf(), fast()); });
  ASSERT_TRUE(run.prover_error.has_value());
  EXPECT_EQ(run.prover_error->peer_code(), static_cast<std::uint16_t>(ErrorCode::BadParams));
}

TEST(Session, DroppedChallengeTimesOut) {
  auto in = square_plus_one();
  SeededRandom prng(8), vrng(9);
  // The verifier waits longer so that the prover's deadline fires first.
  auto run = run_loopback(
      [&](Transport& t) { return prover_session(t, in.s, in.w, 2, prng, CommitScheme::prf(), fast()); },
      [&](Transport& t) {
        return verifier_session(t, in.s, 2, vrng, CommitScheme::prf(), SessionOptions{milliseconds(20000)});
      },
      {}, drop_frame(FrameType::Challenge));
  ASSERT_TRUE(run.prover_error.has_value());
  EXPECT_TRUE(run.prover_error->timeout());
  EXPECT_EQ(run.prover_error->phase(), Phase::Challenge);
  EXPECT_FALSE(run.verifier.has_value());
}

TEST(Session, DroppedCommitTimesOutVerifier) {
  auto in = square_plus_one();
  auto run = honest_run(in, 2, 9, drop_frame(FrameType::Commit));
  ASSERT_TRUE(run.verifier_error.has_value());
  EXPECT_TRUE(run.verifier_error->timeout());
  EXPECT_EQ(run.verifier_error->phase(), Phase::Commit);
}

TEST(Session, CommitBeforeChallengeInCapturedLog) {
  auto in = square_plus_one();
  CaptureLog log;
  auto run = honest_run(in, 5, 10, {}, {}, &log);
  ASSERT_TRUE(run.verifier && run.verifier->accepted);
  std::optional<std::uint64_t> commit_read_done, challenge_written;
  std::size_t commit_bytes = 0, commit_len = 0;
  for (const auto& e : log.events()) {
    if (e.who == "prover" && e.is_write && e.bytes.size() > 4 && e.bytes[4] == 0x02) commit_len = e.bytes.size();
    if (e.who == "verifier" && !e.is_write && !challenge_written && commit_len) {
      commit_bytes += e.bytes.size();
      // the COMMIT header read, then the COMMIT payload read; HELLO came before
      if (commit_bytes >= commit_len) commit_read_done = e.seq;
    }
    if (e.who == "verifier" && e.is_write && e.bytes.size() > 4 && e.bytes[4] == 0x03) challenge_written = e.seq;
  }
  ASSERT_TRUE(commit_read_done && challenge_written);
  EXPECT_LT(*commit_read_done, *challenge_written);
}

// Every single-byte corruption of the prover's COMMIT or RESPONSE payload
// ends in a reject or an error, never an accept.
TEST(Session, ByteFlipsNeverAccept) {
  auto in = square_plus_one();
  const std::size_t sigma = 2;
  const std::size_t commit_len = sigma * kParties * 32;
  const std::size_t response_len = sigma * 2 * (4 + view_encoding_size(in.s.circuit) + 32) + 32;
  for (auto type : {FrameType::Commit, FrameType::Response}) {
    const auto len = type == FrameType::Commit ? commit_len : response_len;
    int accepted = 0, errored = 0;
    for (std::size_t off = 0; off < len; ++off) {
      auto run = honest_run(in, sigma, 1000 + off, flip_payload_byte(type, off, 0x80));
      if (run.verifier && run.verifier->accepted) ++accepted;
      if (run.prover_error || run.verifier_error) ++errored;
      if (run.prover_verdict) {
        EXPECT_EQ(*run.prover_verdict, run.verifier && run.verifier->accepted);
      }
    }
    EXPECT_EQ(accepted, 0) << to_string(type);
    EXPECT_EQ(errored, 0) << to_string(type);
  }
}

TEST(Session, MalformedCommitRejectsNotErrors) {
  auto in = square_plus_one();
  auto truncate = [](ByteView f) -> std::optional<Bytes> {
    Bytes out(f.begin(), f.end());
    if (out[4] == 0x02) {
      out.pop_back();
      out[3] -= 1;
    }
    return out;
  };
  auto run = honest_run(in, 2, 12, truncate);
  ASSERT_TRUE(run.verifier.has_value());
  EXPECT_FALSE(run.verifier->accepted);
  EXPECT_FALSE(run.verifier->transcript.has_value());
  EXPECT_FALSE(*run.prover_verdict);
}

TEST(Session, UnexpectedFrameIsError) {
  auto in = square_plus_one();
  SeededRandom vrng(13);
  auto run = run_loopback(
      [&](Transport& t) {
        write_frame(t, {FrameType::Commit, {}});
        return read_frame(t, milliseconds(2000)).type == FrameType::Error ? false : true;
      },
      [&](Transport& t) { return verifier_session(t, in.s, 2, vrng, CommitScheme::prf(), fast()); });
  ASSERT_TRUE(run.verifier_error.has_value());
  EXPECT_EQ(run.verifier_error->phase(), Phase::Hello);
  EXPECT_FALSE(*run.prover_verdict);
}

TEST(Tcp, HonestSessionOverLocalhost) {
  auto in = square_plus_one();
  TcpListener listener(0);
  const auto port = listener.port();
  std::optional<VerifierOutcome> outcome;
  std::thread th([&] {
    auto t = listener.accept(milliseconds(5000));
    SeededRandom vrng(14);
    outcome = verifier_session(*t, in.s, 5, vrng, CommitScheme::prf(), fast());
  });
  auto t = TcpTransport::connect("127.0.0.1", port, milliseconds(5000));
  SeededRandom prng(15);
  EXPECT_TRUE(prover_session(*t, in.s, in.w, 5, prng, CommitScheme::prf(), fast()));
  th.join();
  ASSERT_TRUE(outcome.has_value());
  EXPECT_TRUE(outcome->accepted);
}

TEST(Tcp, ReadTimesOut) {
  TcpListener listener(0);
  std::unique_ptr<TcpTransport> server;
  std::thread th([&] { server = listener.accept(milliseconds(5000)); });
  auto client = TcpTransport::connect("127.0.0.1", listener.port(), milliseconds(5000));
  th.join();
  Bytes buf(1);
  EXPECT_THROW(client->read_exact(buf, milliseconds(50)), TimeoutError);
  server->close();
  EXPECT_THROW(client->read_exact(buf, milliseconds(500)), TransportError);
}

}  // namespace
}  // namespace mith
