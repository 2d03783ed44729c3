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

// MPC-in-the-head zero-knowledge protocol for circuit satisfiability.
//
// The prover shares its witness, runs the five-party protocol in its head,
// commits to every party's view and, on a challenge naming two parties,
// opens those two views. The verifier checks the openings, the pairwise
// consistency of the two views and that both report the statement's target
// as output. A cheating prover on a false statement must leave at least one
// inconsistent pair, caught with probability 1/10 per repetition.

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mith/circuit.hpp"
#include "mith/commit.hpp"
#include "mith/common.hpp"
#include "mith/crypto.hpp"
#include "mith/mpc.hpp"
#include "mith/random.hpp"
#include "mith/sss.hpp"

namespace mith {

inline constexpr std::size_t kDefaultRepetitions = 40;
inline constexpr std::size_t kDefaultMaxRetries = 1000;

// Unordered pair of distinct parties, stored with first < second. Indexed
// 0..9 in lexicographic order: (1,2)=0, (1,3)=1, ..., (4,5)=9.
class Challenge {
 public:
  static constexpr int kCount = 10;

  Challenge(PartyId a, PartyId b) : first_(a < b ? a : b), second_(a < b ? b : a) {
    if (a == b) throw std::invalid_argument("challenge parties must differ");
  }

  static Challenge from_index(int idx) {
    if (idx < 0 || idx >= kCount) throw std::out_of_range("challenge index must be in 0..9");
    for (int i = 1; i <= kParties; ++i)
      for (int j = i + 1; j <= kParties; ++j)
        if (idx-- == 0) return Challenge(PartyId(i), PartyId(j));
    throw std::logic_error("unreachable");
  }

  static Challenge sample(RandomSource& rng) { return from_index(static_cast<int>(rng.uniform(kCount))); }

  int index() const {
    int idx = 0;
    for (int i = 1; i <= kParties; ++i)
      for (int j = i + 1; j <= kParties; ++j, ++idx)
        if (i == first_.value() && j == second_.value()) return idx;
    throw std::logic_error("unreachable");
  }

  PartyId first() const { return first_; }
  PartyId second() const { return second_; }
  bool involves(PartyId p) const { return p == first_ || p == second_; }

  bool operator==(const Challenge&) const = default;

 private:
  PartyId first_;
  PartyId second_;
};

struct ProverRand {
  std::vector<SSRandomness> r_ss;  // one per secret wire
  GateRandomness r_mpc;
  PerParty<Opening> r_cs;
};

// Field elements in any view for this circuit.
inline std::size_t view_element_count(const Circuit& c) {
  std::size_t n = static_cast<std::size_t>(c.topology.np + c.topology.ns);
  n += 2 * (interactive_mul_gates(c).size() + 1);
  for (const auto& s : trace_shape(c)) n += s.payload;
  return n;
}

// Length of the canonical encoding of any view for this circuit.
inline std::size_t view_encoding_size(const Circuit& c) {
  const std::size_t width = c.modulus->byte_width();
  std::size_t n = 1 + 4 + 4 + 4 + 4;
  n += (interactive_mul_gates(c).size() + 1) * 4;
  auto shape = trace_shape(c);
  n += shape.size() * (1 + 4 + 4);
  return n + view_element_count(c) * width;
}

inline ProverRand sample_prover_rand(RandomSource& rng, const Statement& s, const CommitScheme& scheme) {
  ProverRand rp;
  for (int k = 0; k < s.circuit.topology.ns; ++k) rp.r_ss.push_back(sample_ss_randomness(rng, s.modulus()));
  rp.r_mpc = sample_gate_randomness(rng, s.circuit);
  const auto elements = scheme.kind == SchemeKind::Pedersen ? view_element_count(s.circuit) : 0;
  for (auto& o : rp.r_cs) o = scheme.sample_opening(rng, elements);
  return rp;
}

struct CommitmentMsg {
  PerParty<Commitment> commitments;

  bool operator==(const CommitmentMsg&) const = default;
};

struct ResponseItem {
  View view;
  Opening opening;
};

struct Response {
  std::array<ResponseItem, 2> items;  // challenge.first(), challenge.second()
};

struct ProverState {
  CommitScheme scheme;
  PerParty<View> views;
  PerParty<Opening> openings;
};

inline Commitment commit_view(const CommitScheme& scheme, const Opening& o, const View& v) {
  auto bytes = encode_view(v);
  auto elements = scheme.kind == SchemeKind::Pedersen ? view_elements(v) : std::vector<FieldElement>{};
  return scheme.commit(o, {bytes, elements});
}

inline bool verify_view(const CommitScheme& scheme, const View& v, const Commitment& c, const Opening& o) {
  auto bytes = encode_view(v);
  auto elements = scheme.kind == SchemeKind::Pedersen ? view_elements(v) : std::vector<FieldElement>{};
  return scheme.verify({bytes, elements}, c, o);
}

// Commitment to the all-zero view of the right size for this circuit.
inline Commitment commit_dummy_view(const CommitScheme& scheme, const Opening& o, const Circuit& c) {
  Bytes zeros(view_encoding_size(c), 0);
  std::vector<FieldElement> elements;
  if (scheme.kind == SchemeKind::Pedersen) elements.assign(view_element_count(c), FieldElement::zero(c.modulus));
  return scheme.commit(o, {zeros, elements});
}

inline std::pair<ProverState, CommitmentMsg> prover_commit(const ProverRand& rp, const Witness& w, const Statement& s,
                                                           const CommitScheme& scheme) {
  check_statement(s);
  check_witness(s, w);
  if (rp.r_ss.size() != w.secret_inputs.size()) throw std::invalid_argument("prover_commit: sharing randomness incomplete");
  for (int id : interactive_mul_gates(s.circuit))
    if (!rp.r_mpc.mul.contains(id)) throw std::invalid_argument("prover_commit: no randomness for gate " + std::to_string(id));
  std::vector<Sharing> sharings;
  for (std::size_t k = 0; k < w.secret_inputs.size(); ++k) sharings.push_back(share(w.secret_inputs[k], rp.r_ss[k]));
  auto exec = run_protocol(s.circuit, s.public_inputs, sharings, rp.r_mpc);
  ProverState st{scheme, std::move(exec.views), rp.r_cs};
  CommitmentMsg msg;
  for (std::size_t p = 0; p < kParties; ++p) msg.commitments[p] = commit_view(scheme, st.openings[p], st.views[p]);
  return {std::move(st), std::move(msg)};
}

struct VerifierState {
  Statement statement;
  CommitScheme scheme;
  CommitmentMsg commitment;
  Challenge challenge;
};

// Public coin: the challenge depends only on the verifier's randomness.
inline std::pair<VerifierState, Challenge> verifier_challenge(RandomSource& rv, const Statement& s,
                                                              const CommitmentMsg& c, const CommitScheme& scheme) {
  auto ch = Challenge::sample(rv);
  return {VerifierState{s, scheme, c, ch}, ch};
}

inline Response prover_respond(const ProverState& st, const Challenge& ch) {
  auto item = [&](PartyId p) { return ResponseItem{st.views[p.index()], st.openings[p.index()]}; };
  return Response{{item(ch.first()), item(ch.second())}};
}

// Openings verify, the two views are consistent, and both output the target.
inline bool verifier_check(const VerifierState& st, const Response& r) {
  try {
    const auto& s = st.statement;
    const auto i = st.challenge.first(), j = st.challenge.second();
    const auto& [vi, oi] = r.items[0];
    const auto& [vj, oj] = r.items[1];
    if (!valid_view(s.circuit, vi) || !valid_view(s.circuit, vj)) return false;
    if (!verify_view(st.scheme, vi, st.commitment.commitments[i.index()], oi)) return false;
    if (!verify_view(st.scheme, vj, st.commitment.commitments[j.index()], oj)) return false;
    if (!consistent_views(s.circuit, s.public_inputs, vi, vj, i, j)) return false;
    auto yi = local_output(s.circuit, i, vi);
    auto yj = local_output(s.circuit, j, vj);
    return yi && yj && *yi == s.target && *yj == s.target;
  } catch (const std::exception&) {
    return false;
  }
}

// --- provers as strategies -----------------------------------------------------------

// One repetition of the prover side. commit() is called once, then
// respond() once with the verifier's challenge.
class Prover {
 public:
  virtual ~Prover() = default;
  virtual CommitmentMsg commit() = 0;
  virtual Response respond(const Challenge& ch) = 0;
};

class HonestProver final : public Prover {
 public:
  HonestProver(Statement s, Witness w, CommitScheme scheme, RandomSource& rng)
      : s_(std::move(s)), w_(std::move(w)), scheme_(std::move(scheme)), rng_(rng) {}

  CommitmentMsg commit() override {
    auto rp = sample_prover_rand(rng_, s_, scheme_);
    auto [st, msg] = prover_commit(rp, w_, s_, scheme_);
    st_ = std::move(st);
    return msg;
  }

  Response respond(const Challenge& ch) override {
    if (!st_) throw std::logic_error("respond before commit");
    return prover_respond(*st_, ch);
  }

 private:
  Statement s_;
  Witness w_;
  CommitScheme scheme_;
  RandomSource& rng_;
  std::optional<ProverState> st_;
};

using ProverFactory = std::function<std::unique_ptr<Prover>()>;

// --- repetition and proof files --------------------------------------------------------

enum class ChallengeMode : std::uint8_t {
  Transcript = 0x01,  // challenges recorded by an interactive verifier
  Derived = 0x02,     // challenges derived from the commitments (non-interactive)
};

inline std::string_view to_string(ChallengeMode m) { return m == ChallengeMode::Transcript ? "transcript" : "derived"; }

struct Transcript {
  CommitmentMsg commitment;
  Challenge challenge;
  Response response;
};

struct Proof {
  SchemeKind scheme = SchemeKind::Prf;
  ChallengeMode mode = ChallengeMode::Derived;
  Digest statement_hash{};
  std::vector<Transcript> transcripts;
};

inline void write_commitment_msg(ByteWriter& w, const CommitScheme& scheme, const CommitmentMsg& c) {
  for (const auto& x : c.commitments) scheme.write_commitment(w, x);
}

inline CommitmentMsg read_commitment_msg(ByteReader& r, const CommitScheme& scheme) {
  CommitmentMsg c;
  for (auto& x : c.commitments) x = scheme.read_commitment(r);
  return c;
}

inline void write_response(ByteWriter& w, const CommitScheme& scheme, const Response& resp) {
  for (const auto& item : resp.items) {
    w.blob(encode_view(item.view));
    scheme.write_opening(w, item.opening);
  }
}

inline Response read_response(ByteReader& r, const CommitScheme& scheme, const ModulusPtr& m) {
  Response resp;
  for (auto& item : resp.items) {
    item.view = decode_view(r.blob(), m);
    item.opening = scheme.read_opening(r);
  }
  return resp;
}

inline constexpr std::string_view kDerivedChallengeKey = "mith/derived-challenge/v1";

// Challenge t = HMAC-SHA256(key, statement hash || u32 t || all commitment
// messages) read as a big-endian integer mod 10. Outside the interactive
// protocol's proven guarantees: a heuristic Fiat-Shamir-style transform.
inline std::vector<Challenge> derive_challenges(const Digest& statement_hash, const std::vector<CommitmentMsg>& commits,
                                                const CommitScheme& scheme) {
  ByteWriter all;
  for (const auto& c : commits) write_commitment_msg(all, scheme, c);
  std::vector<Challenge> out;
  const auto key = to_bytes(kDerivedChallengeKey);
  for (std::size_t t = 0; t < commits.size(); ++t) {
    ByteWriter msg;
    msg.raw(statement_hash);
    msg.u32(static_cast<std::uint32_t>(t));
    msg.raw(all.bytes());
    auto d = hmac_sha256(key, msg.bytes());
    unsigned rem = 0;
    for (auto b : d) rem = (rem * 256 + b) % Challenge::kCount;
    out.push_back(Challenge::from_index(static_cast<int>(rem)));
  }
  return out;
}

// Runs sigma repetitions in parallel: all commitments, then all challenges,
// then all responses. In Transcript mode the challenges come from `verifier`.
inline Proof run_repetitions(const Statement& s, const CommitScheme& scheme, std::vector<std::unique_ptr<Prover>>& provers,
                             ChallengeMode mode, RandomSource& verifier) {
  if (provers.empty()) throw std::invalid_argument("repetition count must be at least 1");
  Proof proof{scheme.kind, mode, statement_hash(s), {}};
  std::vector<CommitmentMsg> commits;
  for (auto& p : provers) commits.push_back(p->commit());
  std::vector<Challenge> challenges;
  if (mode == ChallengeMode::Derived) {
    challenges = derive_challenges(proof.statement_hash, commits, scheme);
  } else {
    for (std::size_t t = 0; t < provers.size(); ++t) challenges.push_back(Challenge::sample(verifier));
  }
  for (std::size_t t = 0; t < provers.size(); ++t) {
    proof.transcripts.push_back({std::move(commits[t]), challenges[t], provers[t]->respond(challenges[t])});
  }
  return proof;
}

inline Proof prove_repeated(const Witness& w, const Statement& s, std::size_t reps, RandomSource& rng,
                            const CommitScheme& scheme = CommitScheme::prf(), ChallengeMode mode = ChallengeMode::Derived) {
  if (reps == 0) throw std::invalid_argument("repetition count must be at least 1");
  check_witness(s, w);
  std::vector<std::unique_ptr<Prover>> provers;
  for (std::size_t t = 0; t < reps; ++t) provers.push_back(std::make_unique<HonestProver>(s, w, scheme, rng));
  return run_repetitions(s, scheme, provers, mode, rng);
}

// Per-repetition verdicts; empty when the proof is rejected as a whole
// (statement, scheme or mode mismatch, no transcripts, derived challenge
// mismatch is reported per repetition).
inline std::vector<bool> verify_repetitions(const Statement& s, const Proof& proof, ChallengeMode mode,
                                            const CommitScheme& scheme) {
  if (proof.transcripts.empty() || proof.mode != mode || proof.scheme != scheme.kind) return {};
  if (proof.statement_hash != statement_hash(s)) return {};
  std::vector<Challenge> derived;
  if (mode == ChallengeMode::Derived) {
    std::vector<CommitmentMsg> commits;
    for (const auto& t : proof.transcripts) commits.push_back(t.commitment);
    derived = derive_challenges(proof.statement_hash, commits, scheme);
  }
  std::vector<bool> out;
  for (std::size_t t = 0; t < proof.transcripts.size(); ++t) {
    const auto& tr = proof.transcripts[t];
    if (mode == ChallengeMode::Derived && !(derived[t] == tr.challenge)) {
      out.push_back(false);
      continue;
    }
    out.push_back(verifier_check(VerifierState{s, scheme, tr.commitment, tr.challenge}, tr.response));
  }
  return out;
}

inline bool verify_repeated(const Statement& s, const Proof& proof, ChallengeMode mode,
                            const CommitScheme& scheme = CommitScheme::prf()) {
  auto v = verify_repetitions(s, proof, mode, scheme);
  return !v.empty() && std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

inline constexpr std::string_view kProofMagic = "MITH1";

inline void write_transcript(ByteWriter& w, const CommitScheme& scheme, const Transcript& t) {
  write_commitment_msg(w, scheme, t.commitment);
  w.u8(static_cast<std::uint8_t>(t.challenge.index()));
  write_response(w, scheme, t.response);
}

inline Transcript read_transcript(ByteReader& r, const CommitScheme& scheme, const ModulusPtr& m) {
  auto c = read_commitment_msg(r, scheme);
  auto idx = r.u8();
  if (idx >= Challenge::kCount) throw DecodeError("bad challenge index");
  auto resp = read_response(r, scheme, m);
  return Transcript{std::move(c), Challenge::from_index(idx), std::move(resp)};
}

// "MITH1" || scheme byte || mode byte || u32 sigma || statement hash ||
// sigma transcripts.
inline Bytes encode_proof(const Proof& p, const CommitScheme& scheme) {
  ByteWriter w;
  w.raw(to_bytes(kProofMagic));
  w.u8(static_cast<std::uint8_t>(p.scheme));
  w.u8(static_cast<std::uint8_t>(p.mode));
  w.u32(static_cast<std::uint32_t>(p.transcripts.size()));
  w.raw(p.statement_hash);
  for (const auto& t : p.transcripts) write_transcript(w, scheme, t);
  return std::move(w).take();
}

// Scheme parameters for Pedersen proofs default to the shipped group.
inline Proof decode_proof(ByteView data, const ModulusPtr& m,
                          std::shared_ptr<const PedersenParams> pp = PedersenParams::default_group()) {
  ByteReader r(data);
  auto magic = r.raw(kProofMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kProofMagic.begin())) throw DecodeError("bad proof magic");
  Proof p;
  auto scheme_byte = r.u8();
  if (scheme_byte != 0x01 && scheme_byte != 0x02) throw DecodeError("unknown commitment scheme");
  p.scheme = static_cast<SchemeKind>(scheme_byte);
  auto mode_byte = r.u8();
  if (mode_byte != 0x01 && mode_byte != 0x02) throw DecodeError("unknown challenge mode");
  p.mode = static_cast<ChallengeMode>(mode_byte);
  auto sigma = r.u32();
  auto h = r.raw(32);
  std::copy(h.begin(), h.end(), p.statement_hash.begin());
  if (sigma == 0) throw DecodeError("proof has no repetitions");
  if (sigma > r.remaining()) throw DecodeError("repetition count exceeds input");
  CommitScheme scheme = p.scheme == SchemeKind::Prf ? CommitScheme::prf() : CommitScheme::with_pedersen(std::move(pp));
  for (std::uint32_t t = 0; t < sigma; ++t) p.transcripts.push_back(read_transcript(r, scheme, m));
  r.expect_done();
  return p;
}

// (1 - 1/C(5,2) + eps_binding)^sigma.
inline double soundness_bound(std::size_t sigma, double eps_binding) {
  if (sigma == 0) throw std::invalid_argument("soundness_bound: sigma must be at least 1");
  if (!(eps_binding >= 0.0 && eps_binding < 0.1)) throw std::domain_error("soundness_bound: eps must be in [0, 1/10)");
  return std::pow(1.0 - 1.0 / Challenge::kCount + eps_binding, static_cast<double>(sigma));
}

// --- zero-knowledge simulator -----------------------------------------------------------

class SimulationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Commit phase of one simulation attempt: a guessed challenge, simulated
// views for the guessed pair and dummy commitments for the rest.
struct SimulatedRound {
  Challenge guess;
  CommitmentMsg commitment;
  std::array<ResponseItem, 2> opened;

  // nullopt is the abort signal.
  std::optional<Response> respond(const Challenge& ch) const {
    if (!(ch == guess)) return std::nullopt;
    return Response{opened};
  }
};

// Draw order: the mpc simulator's randomness first, then the five openings
// in party order.
inline SimulatedRound zk_simulate_guess(const Statement& s, const Challenge& guess,
                                        const std::pair<std::vector<FieldElement>, std::vector<FieldElement>>& shares,
                                        RandomSource& rng, const CommitScheme& scheme) {
  auto [vi, vj] = mpc_simulate(s.circuit, s.public_inputs, {guess.first(), guess.second()}, shares, s.target, rng);
  const auto elements = scheme.kind == SchemeKind::Pedersen ? view_element_count(s.circuit) : 0;
  SimulatedRound round{guess, {}, {}};
  for (auto p : kAllParties) {
    auto o = scheme.sample_opening(rng, elements);
    if (p == guess.first()) {
      round.commitment.commitments[p.index()] = commit_view(scheme, o, vi);
      round.opened[0] = {vi, o};
    } else if (p == guess.second()) {
      round.commitment.commitments[p.index()] = commit_view(scheme, o, vj);
      round.opened[1] = {vj, o};
    } else {
      round.commitment.commitments[p.index()] = commit_dummy_view(scheme, o, s.circuit);
    }
  }
  return round;
}

// Never reads a witness: guesses the challenge and simulates the two
// corrupt parties' input shares.
inline SimulatedRound zk_simulate_once(const Statement& s, RandomSource& rng,
                                       const CommitScheme& scheme = CommitScheme::prf()) {
  auto guess = Challenge::sample(rng);
  std::pair<std::vector<FieldElement>, std::vector<FieldElement>> shares;
  for (int k = 0; k < s.circuit.topology.ns; ++k) {
    auto [a, b] = share_sim(rng, s.modulus(), {guess.first(), guess.second()});
    shares.first.push_back(std::move(a));
    shares.second.push_back(std::move(b));
  }
  return zk_simulate_guess(s, guess, shares, rng, scheme);
}

using ChallengeOracle = std::function<Challenge(const CommitmentMsg&)>;

struct SimulationOutcome {
  Transcript transcript;
  std::size_t attempts;
};

// Rejection sampling over zk_simulate_once until the verifier's challenge
// matches the guess.
inline SimulationOutcome zk_simulate(const Statement& s, const ChallengeOracle& verifier, RandomSource& rng,
                                     const CommitScheme& scheme = CommitScheme::prf(),
                                     std::size_t max_retries = kDefaultMaxRetries) {
  if (max_retries == 0) throw std::invalid_argument("zk_simulate: max_retries must be at least 1");
  for (std::size_t attempt = 1; attempt <= max_retries; ++attempt) {
    auto round = zk_simulate_once(s, rng, scheme);
    auto ch = verifier(round.commitment);
    if (auto resp = round.respond(ch)) return {Transcript{std::move(round.commitment), ch, std::move(*resp)}, attempt};
  }
  throw SimulationFailure("zk_simulate: retries exhausted");
}

}  // namespace mith
