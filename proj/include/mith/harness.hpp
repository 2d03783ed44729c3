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


// Security games run as experiments: honest and cheating provers, real and
// simulated transcripts, commitment attackers. Every experiment produces a
// report whose verdict is recomputable from its counters.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mith/corpus.hpp"
#include "mith/mith.hpp"
#include "mith/stats.hpp"

namespace mith {

// Equal: |rate - bound| <= tolerance. AtMost: rate <= bound + tolerance.
enum class BoundKind { Equal, AtMost };

inline std::string_view to_string(BoundKind k) { return k == BoundKind::Equal ? "equal" : "at_most"; }

struct ExperimentReport {
  std::string name;
  BoundKind kind = BoundKind::Equal;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double bound = 0;
  double tolerance = 0;

  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials); }

  bool pass() const {
    if (successes > trials || trials == 0) return false;
    // The small slack absorbs rounding in bounds such as 0.9^10.
    constexpr double slack = 1e-12;
    if (kind == BoundKind::Equal) return std::abs(rate() - bound) <= tolerance + slack;
    return rate() <= bound + tolerance + slack;
  }
};

inline ExperimentReport make_report(std::string name, BoundKind kind, std::uint64_t trials, std::uint64_t successes,
                                    double bound, double tolerance) {
  return ExperimentReport{std::move(name), kind, trials, successes, bound, tolerance};
}

inline std::string format_report(const ExperimentReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-36s %-7s trials=%-8llu successes=%-8llu rate=%.6f bound=%.6f tol=%.6f  %s",
                r.name.c_str(), std::string(to_string(r.kind)).c_str(), static_cast<unsigned long long>(r.trials),
                static_cast<unsigned long long>(r.successes), r.rate(), r.bound, r.tolerance, r.pass() ? "PASS" : "FAIL");
  return buf;
}

inline nlohmann::ordered_json report_json(const ExperimentReport& r) {
  return {{"name", r.name},         {"kind", to_string(r.kind)}, {"trials", r.trials},
          {"successes", r.successes}, {"rate", r.rate()},        {"bound", r.bound},
          {"tolerance", r.tolerance}, {"verdict", r.pass() ? "pass" : "fail"}};
}

// --- cheating provers -------------------------------------------------------------

// Runs the protocol honestly on a random witness, then shifts the broadcast
// of party a by delta so every view outputs the target. To keep a's own
// replay consistent, a's recorded zero-share from b absorbs the same delta,
// which leaves (a, b) as the only inconsistent pair.
class CanonicalCheater final : public Prover {
 public:
  CanonicalCheater(Statement s, CommitScheme scheme, RandomSource& rng)
      : s_(std::move(s)), scheme_(std::move(scheme)), rng_(rng) {}

  CommitmentMsg commit() override {
    const auto& m = s_.modulus();
    Witness w{random_inputs(rng_, m, s_.circuit.topology.ns)};
    bad_ = Challenge::sample(rng_);
    auto rp = sample_prover_rand(rng_, s_, scheme_);
    auto [st, msg] = prover_commit(rp, w, s_, scheme_);
    const auto y = eval_plain(s_, w);
    const auto a = bad_->first(), b = bad_->second();
    if (!(y == s_.target)) {
      const auto delta = (s_.target - y) * reconstruction_coefficients(m)[a.index()].inv();
      st.views[a.index()].trace.back().payload[b.index()] += delta;
      for (auto& v : st.views) v.trace.back().payload[kParties + a.index()] += delta;
      for (auto p : kAllParties) msg.commitments[p.index()] = commit_view(scheme_, st.openings[p.index()], st.views[p.index()]);
    }
    st_ = std::move(st);
    return msg;
  }

  Response respond(const Challenge& ch) override { return prover_respond(*st_, ch); }

  const Challenge& bad_pair() const { return *bad_; }

 private:
  Statement s_;
  CommitScheme scheme_;
  RandomSource& rng_;
  std::optional<Challenge> bad_;
  std::optional<ProverState> st_;
};

// Shape-valid views filled with uniform field elements.
class GarbageProver final : public Prover {
 public:
  GarbageProver(Statement s, CommitScheme scheme, RandomSource& rng)
      : s_(std::move(s)), scheme_(std::move(scheme)), rng_(rng) {}

  CommitmentMsg commit() override {
    const auto& m = s_.modulus();
    Witness w{random_inputs(rng_, m, s_.circuit.topology.ns)};
    auto rp = sample_prover_rand(rng_, s_, scheme_);
    auto [st, msg] = prover_commit(rp, w, s_, scheme_);
    for (auto& v : st.views) {
      for (auto& x : v.secret_shares) x = sample_fe(rng_, m);
      for (auto& [id, r] : v.randomness.mul) r = sample_ss_randomness(rng_, m);
      v.randomness.refresh = sample_ss_randomness(rng_, m);
      for (auto& e : v.trace)
        for (auto& x : e.payload) x = sample_fe(rng_, m);
    }
    for (auto p : kAllParties) msg.commitments[p.index()] = commit_view(scheme_, st.openings[p.index()], st.views[p.index()]);
    st_ = std::move(st);
    return msg;
  }

  Response respond(const Challenge& ch) override { return prover_respond(*st_, ch); }

 private:
  Statement s_;
  CommitScheme scheme_;
  RandomSource& rng_;
  std::optional<ProverState> st_;
};

// --- completeness and soundness ----------------------------------------------------

// One honest repetition per witness of every circuit, with the target set to
// the circuit's output on that witness.
inline ExperimentReport run_completeness_exhaustive(const std::vector<Circuit>& corpus, RandomSource& rng,
                                                    const CommitScheme& scheme = CommitScheme::prf()) {
  std::uint64_t trials = 0, ok = 0;
  for (const auto& c : corpus) {
    auto pub = default_public_inputs(c);
    for (const auto& w : all_witnesses(c)) {
      Statement s{c, pub, {}};
      s.target = eval_plain(s, w);
      ++trials;
      if (verify_repeated(s, prove_repeated(w, s, 1, rng, scheme, ChallengeMode::Transcript), ChallengeMode::Transcript,
                          scheme))
        ++ok;
    }
  }
  return make_report("completeness/exhaustive-f" + (corpus.empty() ? std::string("?") : corpus[0].modulus->to_decimal()),
                     BoundKind::Equal, trials, ok, 1.0, 0.0);
}

// Random circuits and inputs; each trial is one proof with `sigma`
// repetitions.
inline ExperimentReport run_completeness_random(const ModulusPtr& m, std::uint64_t trials, std::size_t sigma,
                                                RandomSource& rng, const CommitScheme& scheme = CommitScheme::prf()) {
  std::uint64_t ok = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto c = random_circuit(rng, m, {static_cast<int>(rng.uniform(3)), 1 + static_cast<int>(rng.uniform(2)), 6, true});
    Statement s{c, random_inputs(rng, m, c.topology.np), {}};
    Witness w{random_inputs(rng, m, c.topology.ns)};
    s.target = eval_plain(s, w);
    auto mode = t % 2 ? ChallengeMode::Derived : ChallengeMode::Transcript;
    if (verify_repeated(s, prove_repeated(w, s, sigma, rng, scheme, mode), mode, scheme)) ++ok;
  }
  return make_report("completeness/random-f" + m->to_decimal() + "-sigma" + std::to_string(sigma), BoundKind::Equal,
                     trials, ok, 1.0, 0.0);
}

// x^2 + 1 over F_11 with target 0, which is not a value of x^2 + 1.
inline Statement false_statement_f11() {
  auto m = preset_modulus("f11");
  auto c = parse_circuit("field 11\ntopology 0 1 3\n(add 3 (mul 2 (sinput 0) (sinput 0)) (const 1 1))");
  auto t = unreachable_target(c, {});
  if (!t) throw std::logic_error("x^2+1 is onto F_11");
  return Statement{c, {}, *t};
}

struct SoundnessResult {
  ExperimentReport accept_rate;
  // Per repetition: accepted exactly when the challenge missed the bad pair.
  ExperimentReport accept_iff_missed;
};

inline SoundnessResult run_soundness(const Statement& s, std::size_t sigma, std::uint64_t trials, RandomSource& rng,
                                     const CommitScheme& scheme = CommitScheme::prf()) {
  std::uint64_t accepted = 0, reps = 0, coincide = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::vector<std::unique_ptr<Prover>> provers;
    std::vector<const CanonicalCheater*> cheaters;
    for (std::size_t k = 0; k < sigma; ++k) {
      auto p = std::make_unique<CanonicalCheater>(s, scheme, rng);
      cheaters.push_back(p.get());
      provers.push_back(std::move(p));
    }
    auto proof = run_repetitions(s, scheme, provers, ChallengeMode::Transcript, rng);
    auto verdicts = verify_repetitions(s, proof, ChallengeMode::Transcript, scheme);
    bool all = !verdicts.empty();
    for (std::size_t k = 0; k < verdicts.size(); ++k) {
      ++reps;
      const bool missed = !(proof.transcripts[k].challenge == cheaters[k]->bad_pair());
      if (verdicts[k] == missed) ++coincide;
      all = all && verdicts[k];
    }
    if (all) ++accepted;
  }
  const double bound = soundness_bound(sigma, 0.0);
  const auto tag = "-sigma" + std::to_string(sigma);
  return {make_report("soundness/canonical" + tag, BoundKind::Equal, trials, accepted, bound,
                      binomial_tolerance(bound, trials)),
          make_report("soundness/accept-iff-missed" + tag, BoundKind::Equal, reps, coincide, 1.0, 0.0)};
}

inline ExperimentReport run_soundness_garbage(const Statement& s, std::uint64_t trials, RandomSource& rng,
                                              const CommitScheme& scheme = CommitScheme::prf()) {
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::vector<std::unique_ptr<Prover>> provers;
    provers.push_back(std::make_unique<GarbageProver>(s, scheme, rng));
    if (verify_repeated(s, run_repetitions(s, scheme, provers, ChallengeMode::Transcript, rng),
                        ChallengeMode::Transcript, scheme))
      ++accepted;
  }
  return make_report("soundness/garbage", BoundKind::AtMost, trials, accepted, 0.0, 0.0);
}

// --- exact distribution comparison -------------------------------------------------

// Image of a uniform vector under an affine map over a small prime field,
// in canonical form: reduced row-echelon basis of the linear part plus the
// offset reduced against it. Two such images are equal as distributions iff
// their canonical forms are equal.
struct AffineImage {
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<std::uint64_t> offset;

  bool operator==(const AffineImage&) const = default;
};

namespace detail {

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, e = p - 2;
  for (; e; e >>= 1, a = a * a % p)
    if (e & 1) r = r * a % p;
  return r;
}

inline void reduce_rows(std::vector<std::vector<std::uint64_t>>& rows, std::uint64_t p) {
  if (rows.empty()) return;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const auto inv = inv_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = x * inv % p;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c] == 0) continue;
      const auto f = rows[k][c];
      for (std::size_t j = 0; j < cols; ++j) rows[k][j] = (rows[k][j] + (p - f) * rows[r][j]) % p;
    }
    ++r;
  }
  rows.resize(r);
}

}  // namespace detail

// f maps k uniform elements of F_p to a vector; f must be affine.
inline AffineImage affine_image(const std::function<std::vector<std::uint64_t>(const std::vector<std::uint64_t>&)>& f,
                                std::size_t k, std::uint64_t p) {
  std::vector<std::uint64_t> u(k, 0);
  AffineImage out;
  out.offset = f(u);
  for (std::size_t i = 0; i < k; ++i) {
    u[i] = 1;
    auto col = f(u);
    u[i] = 0;
    if (col.size() != out.offset.size()) throw std::logic_error("affine_image: output length varies");
    for (std::size_t j = 0; j < col.size(); ++j) col[j] = (col[j] + p - out.offset[j]) % p;
    out.basis.push_back(std::move(col));
  }
  detail::reduce_rows(out.basis, p);
  for (const auto& row : out.basis) {
    const auto c = static_cast<std::size_t>(std::find_if(row.begin(), row.end(), [](auto x) { return x != 0; }) - row.begin());
    const auto f0 = out.offset[c];
    for (std::size_t j = 0; j < row.size(); ++j) out.offset[j] = (out.offset[j] + (p - f0) * row[j]) % p;
  }
  return out;
}

// Checks that f is affine by comparing it with its interpolation at a few
// random points.
inline bool looks_affine(const std::function<std::vector<std::uint64_t>(const std::vector<std::uint64_t>&)>& f,
                         std::size_t k, std::uint64_t p, RandomSource& rng, int probes = 4) {
  std::vector<std::uint64_t> zero(k, 0);
  auto f0 = f(zero);
  std::vector<std::vector<std::uint64_t>> cols;
  for (std::size_t i = 0; i < k; ++i) {
    auto u = zero;
    u[i] = 1;
    cols.push_back(f(u));
  }
  for (int t = 0; t < probes; ++t) {
    std::vector<std::uint64_t> u(k);
    for (auto& x : u) x = rng.uniform(p);
    auto want = f0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < want.size(); ++j) want[j] = (want[j] + u[i] * ((cols[i][j] + p - f0[j]) % p)) % p;
    if (f(u) != want) return false;
  }
  return true;
}

namespace detail {

inline void append_u64(std::vector<std::uint64_t>& out, const std::vector<FieldElement>& xs) {
  for (const auto& x : xs) out.push_back(x.to_u64());
}

inline ScriptedRandom script_of(const std::vector<std::uint64_t>& prefix, const std::vector<std::uint64_t>& u) {
  ScriptedRandom r;
  for (auto x : prefix) r.push(static_cast<std::uint8_t>(x));
  for (auto x : u) r.push(static_cast<std::uint8_t>(x));
  return r;
}

// Exact enumeration needs one byte per field element and one multiplication
// so that views are affine in the randomness once the inputs are fixed.
inline void require_exact_instance(const Statement& s) {
  if (s.modulus()->byte_width() != 1) throw std::invalid_argument("exact enumeration needs a field below 256");
  if (s.circuit.topology.ns != 1) throw std::invalid_argument("exact enumeration needs one secret input");
  if (interactive_mul_gates(s.circuit).size() > 1) throw std::invalid_argument("exact enumeration needs at most one mul");
}

inline std::size_t count_draws(const std::function<void(RandomSource&)>& f) {
  ScriptedRandom r;
  f(r);
  return r.overrun();
}

using ShareKey = std::pair<std::uint64_t, std::uint64_t>;

}  // namespace detail

struct ExactZkResult {
  // One trial per (challenge, corrupt input shares): real and simulated
  // opened transcripts have the same distribution and both verify.
  ExperimentReport transcripts;
  // One trial per (guess, challenge): the simulator succeeds exactly when
  // they agree, so attempts are geometric with mean 10 and the accepted
  // challenge is uniform.
  ExperimentReport guess_matches;
};

// Real world: the prover's sharing randomness (a1, a2) is enumerated, which
// runs over every pair of corrupt input shares exactly once; the rest of the
// randomness enters affinely. Simulated world: the corrupt input shares are
// enumerated directly.
inline ExactZkResult run_zk_exact(const Statement& s, const Witness& w, RandomSource& rng) {
  detail::require_exact_instance(s);
  const auto scheme = CommitScheme::prf();
  const auto p = s.modulus()->value().convert_to<std::uint64_t>();
  const auto k_real = 2 * kParties * (interactive_mul_gates(s.circuit).size() + 1);
  const auto k_sim = detail::count_draws([&](RandomSource& r) {
    mpc_simulate(s.circuit, s.public_inputs, {PartyId(1), PartyId(2)},
                 {{FieldElement::zero(s.modulus())}, {FieldElement::zero(s.modulus())}}, s.target, r);
  });

  auto encode = [&](const Challenge& ch, bool ok, const Response& r) {
    std::vector<std::uint64_t> out{static_cast<std::uint64_t>(ch.index()), ok ? 1u : 0u};
    for (const auto& item : r.items) detail::append_u64(out, view_elements(item.view));
    return out;
  };

  std::uint64_t trials = 0, equal = 0;
  bool affine = true;
  for (int ci = 0; ci < Challenge::kCount; ++ci) {
    const auto ch = Challenge::from_index(ci);
    std::map<detail::ShareKey, AffineImage> real;
    for (std::uint64_t a1 = 0; a1 < p; ++a1) {
      for (std::uint64_t a2 = 0; a2 < p; ++a2) {
        auto f = [&](const std::vector<std::uint64_t>& u) {
          auto r = detail::script_of({a1, a2}, u);
          auto rp = sample_prover_rand(r, s, scheme);
          auto [st, msg] = prover_commit(rp, w, s, scheme);
          auto resp = prover_respond(st, ch);
          return encode(ch, verifier_check(VerifierState{s, scheme, msg, ch}, resp), resp);
        };
        affine = affine && (a1 + a2 > 0 || looks_affine(f, k_real, p, rng));
        const auto sh = share(w.secret_inputs[0], SSRandomness{FieldElement(s.modulus(), static_cast<long long>(a1)),
                                                               FieldElement(s.modulus(), static_cast<long long>(a2))});
        const detail::ShareKey key{sh[ch.first()].to_u64(), sh[ch.second()].to_u64()};
        real.emplace(key, affine_image(f, k_real, p));
      }
    }
    for (std::uint64_t x = 0; x < p; ++x) {
      for (std::uint64_t y = 0; y < p; ++y) {
        const std::pair<std::vector<FieldElement>, std::vector<FieldElement>> shares{
            {FieldElement(s.modulus(), static_cast<long long>(x))}, {FieldElement(s.modulus(), static_cast<long long>(y))}};
        auto f = [&](const std::vector<std::uint64_t>& u) {
          auto r = detail::script_of({}, u);
          auto round = zk_simulate_guess(s, ch, shares, r, scheme);
          auto resp = *round.respond(ch);
          return encode(ch, verifier_check(VerifierState{s, scheme, round.commitment, ch}, resp), resp);
        };
        affine = affine && (x + y > 0 || looks_affine(f, k_sim, p, rng));
        auto sim = affine_image(f, k_sim, p);
        ++trials;
        auto it = real.find({x, y});
        // Every opened transcript verifies, so the bit sits in the offset.
        if (affine && it != real.end() && it->second == sim && sim.offset[1] == 1) ++equal;
      }
    }
  }

  std::uint64_t matches = 0;
  for (int g = 0; g < Challenge::kCount; ++g)
    for (int c = 0; c < Challenge::kCount; ++c)
      if (zk_simulate_guess(s, Challenge::from_index(g), {{s.target}, {s.target}}, rng, scheme)
              .respond(Challenge::from_index(c)))
        ++matches;
  return {make_report("zk/exact-transcripts-f" + s.modulus()->to_decimal(), BoundKind::Equal, trials, equal, 1.0, 0.0),
          make_report("zk/simulator-guess-matches", BoundKind::Equal, Challenge::kCount * Challenge::kCount, matches,
                      1.0 / Challenge::kCount, 0.0)};
}

// Rejection-sampling cost: successes are completed simulations, trials are
// attempts, so the rate estimates 1/10.
inline ExperimentReport run_zk_retries(const Statement& s, std::uint64_t simulations, RandomSource& rng,
                                       const CommitScheme& scheme = CommitScheme::prf()) {
  std::uint64_t attempts = 0;
  ChallengeOracle verifier = [&rng](const CommitmentMsg&) { return Challenge::sample(rng); };
  for (std::uint64_t t = 0; t < simulations; ++t) attempts += zk_simulate(s, verifier, rng, scheme).attempts;
  const double bound = 1.0 / Challenge::kCount;
  return make_report("zk/simulator-retries", BoundKind::Equal, attempts, simulations, bound,
                     binomial_tolerance(bound, attempts));
}

// --- statistical zero-knowledge game -----------------------------------------------

// Guesses which world a transcript came from: 0 real, 1 simulated. Sees the
// statement, the verifier's verdict and the transcript.
class Distinguisher {
 public:
  virtual ~Distinguisher() = default;
  virtual std::string name() const = 0;
  virtual void train(const Statement&, const std::vector<Transcript>& /*real*/, const std::vector<Transcript>& /*sim*/) {}
  virtual int guess(const Statement& s, bool verdict, const Transcript& t) = 0;
};

// Looks at the challenge only.
class ChallengeDistinguisher final : public Distinguisher {
 public:
  std::string name() const override { return "challenge"; }
  int guess(const Statement&, bool, const Transcript& t) override { return t.challenge.index() < 5 ? 0 : 1; }
};

// Byte-value histograms of the encoded transcripts, scored by log-likelihood
// ratio with add-one smoothing.
class ByteHistogramDistinguisher final : public Distinguisher {
 public:
  explicit ByteHistogramDistinguisher(CommitScheme scheme) : scheme_(std::move(scheme)) {}

  std::string name() const override { return "byte-histogram"; }

  void train(const Statement&, const std::vector<Transcript>& real, const std::vector<Transcript>& sim) override {
    auto hist = [&](const std::vector<Transcript>& ts) {
      std::array<double, 256> h{};
      h.fill(1.0);
      double total = 256.0;
      for (const auto& t : ts) {
        for (auto b : encode(t)) h[b] += 1.0;
        total += static_cast<double>(encode(t).size());
      }
      for (auto& x : h) x = std::log(x / total);
      return h;
    };
    auto hr = hist(real), hs = hist(sim);
    for (std::size_t b = 0; b < 256; ++b) llr_[b] = hs[b] - hr[b];
  }

  int guess(const Statement&, bool, const Transcript& t) override {
    double score = 0;
    for (auto b : encode(t)) score += llr_[b];
    return score > 0 ? 1 : 0;
  }

 private:
  Bytes encode(const Transcript& t) const {
    ByteWriter w;
    write_transcript(w, scheme_, t);
    return std::move(w).take();
  }

  CommitScheme scheme_;
  std::array<double, 256> llr_{};
};

// Real transcripts against rejection-sampled simulations in random order;
// successes are correct guesses, so the advantage is |rate - 1/2|.
inline ExperimentReport run_zk(const Statement& s, const Witness& w, Distinguisher& d, std::uint64_t trials,
                               RandomSource& rng, const CommitScheme& scheme = CommitScheme::prf(),
                               std::size_t training = 1000, double tolerance = 0.02) {
  ChallengeOracle verifier = [&rng](const CommitmentMsg&) { return Challenge::sample(rng); };
  auto real = [&] { return prove_repeated(w, s, 1, rng, scheme, ChallengeMode::Transcript).transcripts[0]; };
  auto sim = [&] { return zk_simulate(s, verifier, rng, scheme).transcript; };
  if (training > 0) {
    std::vector<Transcript> tr, ts;
    for (std::size_t k = 0; k < training; ++k) {
      tr.push_back(real());
      ts.push_back(sim());
    }
    d.train(s, tr, ts);
  }
  std::uint64_t correct = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int b = static_cast<int>(rng.uniform(2));
    auto tr = b == 0 ? real() : sim();
    const bool verdict = verifier_check(VerifierState{s, scheme, tr.commitment, tr.challenge}, tr.response);
    if (d.guess(s, verdict, tr) == b) ++correct;
  }
  return make_report("zk/distinguisher-" + d.name(), BoundKind::Equal, trials, correct, 0.5, tolerance);
}

// --- privacy of sharing and of the protocol ----------------------------------------

// Exhaustive over F_p (p <= 255): for each corrupt set of size 1 or 2, the
// shares of two distinct secrets have the same histogram. One trial per set.
inline ExperimentReport run_sss_privacy_exact(const ModulusPtr& m, long long s0 = 3, long long s1 = 7) {
  const auto p = m->value().convert_to<std::uint64_t>();
  auto hist = [&](long long secret, const std::vector<PartyId>& set) {
    std::map<std::vector<std::uint64_t>, std::uint64_t> h;
    for (std::uint64_t a1 = 0; a1 < p; ++a1) {
      for (std::uint64_t a2 = 0; a2 < p; ++a2) {
        SSRandomness r{FieldElement(m, static_cast<long long>(a1)), FieldElement(m, static_cast<long long>(a2))};
        auto sh = share(FieldElement(m, secret), r);
        std::vector<std::uint64_t> key;
        for (auto q : set) key.push_back(sh[q].to_u64());
        ++h[key];
      }
    }
    return h;
  };
  std::uint64_t trials = 0, same = 0;
  for (auto i : kAllParties) {
    ++trials;
    if (hist(s0, {i}) == hist(s1, {i})) ++same;
    for (auto j : kAllParties) {
      if (!(i < j)) continue;
      ++trials;
      if (hist(s0, {i, j}) == hist(s1, {i, j})) ++same;
    }
  }
  return make_report("privacy/sss-exact-f" + m->to_decimal(), BoundKind::Equal, trials, same, 1.0, 0.0);
}

// Two-sample chi-square per corrupt set, real shares of a fixed secret
// against share_sim output. Joint pairs are binned on (u mod 10, v mod 10).
// Trials are tests; a test passes when its p-value clears alpha divided by
// the number of tests.
inline ExperimentReport run_sss_privacy_chi2(const ModulusPtr& m, std::uint64_t samples, RandomSource& rng,
                                             double alpha = 0.001) {
  std::vector<std::vector<PartyId>> sets;
  for (auto i : kAllParties) {
    sets.push_back({i});
    for (auto j : kAllParties)
      if (i < j) sets.push_back({i, j});
  }
  const auto secret = sample_fe(rng, m);
  std::uint64_t passed = 0;
  for (const auto& set : sets) {
    const std::size_t bins = set.size() == 1 ? m->value().convert_to<std::size_t>() : 100;
    std::vector<std::uint64_t> hr(bins, 0), hs(bins, 0);
    auto bin = [&](std::uint64_t u, std::optional<std::uint64_t> v) { return v ? (u % 10) * 10 + *v % 10 : u; };
    for (std::uint64_t t = 0; t < samples; ++t) {
      auto sh = share(secret, sample_ss_randomness(rng, m));
      auto pair = set.size() == 2 ? set[1] : (set[0] == PartyId(1) ? PartyId(2) : PartyId(1));
      auto [a, b] = share_sim(rng, m, {set[0], pair});
      if (set.size() == 1) {
        ++hr[bin(sh[set[0]].to_u64(), std::nullopt)];
        ++hs[bin(a.to_u64(), std::nullopt)];
      } else {
        ++hr[bin(sh[set[0]].to_u64(), sh[set[1]].to_u64())];
        ++hs[bin(a.to_u64(), b.to_u64())];
      }
    }
    if (chi_square_two_sample_p_value(hr, hs) >= alpha / static_cast<double>(sets.size())) ++passed;
  }
  return make_report("privacy/sss-chi2-f" + m->to_decimal(), BoundKind::Equal, sets.size(), passed, 1.0, 0.0);
}

// Exhaustive over the input shares, affine in the rest: the corrupt pair's
// views in a real run equal mpc_simulate's in distribution, for every pair.
inline ExperimentReport run_mpc_privacy_exact(const Statement& s, const Witness& w) {
  detail::require_exact_instance(s);
  const auto& m = s.modulus();
  const auto p = m->value().convert_to<std::uint64_t>();
  const auto k_real = 2 * kParties * (interactive_mul_gates(s.circuit).size() + 1);
  const auto y = eval_plain(s, w);
  std::uint64_t trials = 0, equal = 0;
  for (int ci = 0; ci < Challenge::kCount; ++ci) {
    const auto ch = Challenge::from_index(ci);
    const auto k_sim = detail::count_draws([&](RandomSource& r) {
      mpc_simulate(s.circuit, s.public_inputs, {ch.first(), ch.second()}, {{y}, {y}}, y, r);
    });
    std::map<detail::ShareKey, AffineImage> real;
    for (std::uint64_t a1 = 0; a1 < p; ++a1) {
      for (std::uint64_t a2 = 0; a2 < p; ++a2) {
        const SSRandomness rs{FieldElement(m, static_cast<long long>(a1)), FieldElement(m, static_cast<long long>(a2))};
        const auto sh = share(w.secret_inputs[0], rs);
        auto f = [&](const std::vector<std::uint64_t>& u) {
          auto r = detail::script_of({}, u);
          auto exec = run_protocol(s.circuit, s.public_inputs, std::vector<Sharing>{sh}, sample_gate_randomness(r, s.circuit));
          std::vector<std::uint64_t> out;
          detail::append_u64(out, view_elements(exec.views[ch.first().index()]));
          detail::append_u64(out, view_elements(exec.views[ch.second().index()]));
          return out;
        };
        real.emplace(detail::ShareKey{sh[ch.first()].to_u64(), sh[ch.second()].to_u64()}, affine_image(f, k_real, p));
      }
    }
    for (std::uint64_t x = 0; x < p; ++x) {
      for (std::uint64_t z = 0; z < p; ++z) {
        auto f = [&](const std::vector<std::uint64_t>& u) {
          auto r = detail::script_of({}, u);
          auto [vi, vj] = mpc_simulate(s.circuit, s.public_inputs, {ch.first(), ch.second()},
                                       {{FieldElement(m, static_cast<long long>(x))}, {FieldElement(m, static_cast<long long>(z))}},
                                       y, r);
          std::vector<std::uint64_t> out;
          detail::append_u64(out, view_elements(vi));
          detail::append_u64(out, view_elements(vj));
          return out;
        };
        ++trials;
        auto it = real.find({x, z});
        if (it != real.end() && it->second == affine_image(f, k_sim, p)) ++equal;
      }
    }
  }
  return make_report("privacy/mpc-exact-f" + m->to_decimal(), BoundKind::Equal, trials, equal, 1.0, 0.0);
}

// Per view element position, two-sample chi-square between real corrupt-pair
// views and simulated ones; alpha is split across positions.
inline ExperimentReport run_mpc_privacy_chi2(const Statement& s, const Witness& w, std::uint64_t samples,
                                             RandomSource& rng, double alpha = 0.001) {
  const auto& m = s.modulus();
  const auto p = m->value().convert_to<std::size_t>();
  const auto y = eval_plain(s, w);
  const std::pair<PartyId, PartyId> pair{PartyId(2), PartyId(4)};
  std::vector<std::vector<std::uint64_t>> hr, hs;
  auto add = [&](std::vector<std::vector<std::uint64_t>>& h, const View& a, const View& b) {
    auto xs = view_elements(a);
    auto ys = view_elements(b);
    xs.insert(xs.end(), ys.begin(), ys.end());
    if (h.empty()) h.assign(xs.size(), std::vector<std::uint64_t>(p, 0));
    for (std::size_t k = 0; k < xs.size(); ++k) ++h[k][xs[k].to_u64()];
  };
  for (std::uint64_t t = 0; t < samples; ++t) {
    std::vector<Sharing> in;
    for (const auto& x : w.secret_inputs) in.push_back(share(x, sample_ss_randomness(rng, m)));
    auto exec = run_protocol(s.circuit, s.public_inputs, in, sample_gate_randomness(rng, s.circuit));
    add(hr, exec.views[pair.first.index()], exec.views[pair.second.index()]);
    std::pair<std::vector<FieldElement>, std::vector<FieldElement>> shares;
    for (std::size_t k = 0; k < w.secret_inputs.size(); ++k) {
      auto [a, b] = share_sim(rng, m, pair);
      shares.first.push_back(a);
      shares.second.push_back(b);
    }
    auto [vi, vj] = mpc_simulate(s.circuit, s.public_inputs, pair, shares, y, rng);
    add(hs, vi, vj);
  }
  std::uint64_t passed = 0;
  for (std::size_t k = 0; k < hr.size(); ++k)
    if (chi_square_two_sample_p_value(hr[k], hs[k]) >= alpha / static_cast<double>(hr.size())) ++passed;
  return make_report("privacy/mpc-chi2-f" + m->to_decimal(), BoundKind::Equal, hr.size(), passed, 1.0, 0.0);
}

// --- commitment games ---------------------------------------------------------------

// Random search for two different messages with the same PRF commitment.
inline ExperimentReport run_binding(std::uint64_t attempts, RandomSource& rng) {
  std::uint64_t wins = 0;
  for (std::uint64_t t = 0; t < attempts; ++t) {
    auto m0 = rng.bytes(16), m1 = rng.bytes(16);
    auto k0 = PrfKey::sample(rng), k1 = PrfKey::sample(rng);
    auto [c0, o0] = prf_commit(k0, m0);
    if (m0 != m1 && prf_verify(m0, c0, o0) && prf_verify(m1, c0, k1)) ++wins;
  }
  return make_report("commit/binding-random-search", BoundKind::AtMost, attempts, wins, 0.0, 0.0);
}

// Hiding game for PRF commitments with messages m0 = 0^64 and m1 = 1^64.
// `trained` selects the digest-histogram attacker, otherwise a coin flip.
inline ExperimentReport run_hiding(std::uint64_t trials, bool trained, RandomSource& rng, double tolerance,
                                   std::size_t training = 2000) {
  const Bytes m0(64, 0x00), m1(64, 0xff);
  auto commit = [&](const Bytes& m) { return prf_commit(PrfKey::sample(rng), m).first; };
  std::array<double, 256> llr{};
  if (trained) {
    std::array<double, 256> h0{}, h1{};
    h0.fill(1.0);
    h1.fill(1.0);
    for (std::size_t k = 0; k < training; ++k) {
      for (auto b : commit(m0)) h0[b] += 1;
      for (auto b : commit(m1)) h1[b] += 1;
    }
    for (std::size_t b = 0; b < 256; ++b) llr[b] = std::log(h1[b]) - std::log(h0[b]);
  }
  std::uint64_t correct = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int b = static_cast<int>(rng.uniform(2));
    auto c = commit(b ? m1 : m0);
    int g;
    if (trained) {
      double score = 0;
      for (auto x : c) score += llr[x];
      g = score > 0 ? 1 : 0;
    } else {
      g = static_cast<int>(rng.uniform(2));
    }
    if (g == b) ++correct;
  }
  return make_report(trained ? "commit/hiding-digest-histogram" : "commit/hiding-coin", BoundKind::Equal, trials, correct,
                     0.5, tolerance);
}

// --- view consistency ---------------------------------------------------------------

struct ConsistencyResult {
  // Honest runs: every pair of views is consistent.
  ExperimentReport honest;
  // Tampered tuples: all-pairs consistent iff re-execution reproduces them.
  ExperimentReport tampered;
};

// Tampering kinds, cycled: one element changed in a random field of a random
// view; one party's randomness replaced with the protocol re-run (which stays
// consistent); several elements changed at once.
inline ConsistencyResult run_consistency(const ModulusPtr& m, std::uint64_t honest_runs, std::uint64_t tampered_runs,
                                         RandomSource& rng) {
  auto instance = [&] {
    auto c = random_circuit(rng, m, {1, 1 + static_cast<int>(rng.uniform(2)), 5, true});
    auto x = random_inputs(rng, m, c.topology.np);
    std::vector<Sharing> in;
    for (int k = 0; k < c.topology.ns; ++k) in.push_back(share(sample_fe(rng, m), sample_ss_randomness(rng, m)));
    auto rand = sample_gate_randomness(rng, c);
    return std::tuple{c, x, in, rand};
  };
  auto reproduced = [](const Circuit& c, const std::vector<FieldElement>& x, const PerParty<View>& views) {
    auto re = reexecute_from_views(c, x, views);
    return re && re->views == views;
  };

  std::uint64_t honest_ok = 0;
  for (std::uint64_t t = 0; t < honest_runs; ++t) {
    auto [c, x, in, rand] = instance();
    auto exec = run_protocol(c, x, in, rand);
    bool ok = true;
    for (auto i : kAllParties)
      for (auto j : kAllParties)
        if (!(i == j)) ok = ok && consistent_views(c, x, exec.views[i.index()], exec.views[j.index()], i, j);
    if (ok && reproduced(c, x, exec.views)) ++honest_ok;
  }

  std::uint64_t lemma_ok = 0;
  for (std::uint64_t t = 0; t < tampered_runs; ++t) {
    auto [c, x, in, rand] = instance();
    auto views = run_protocol(c, x, in, rand).views;
    auto bump = [&](PerParty<View>& vs) {
      auto& v = vs[rng.uniform(kParties)];
      std::vector<FieldElement*> slots;
      for (auto& e : v.secret_shares) slots.push_back(&e);
      for (auto& [id, r] : v.randomness.mul) {
        slots.push_back(&r.a1);
        slots.push_back(&r.a2);
      }
      slots.push_back(&v.randomness.refresh.a1);
      slots.push_back(&v.randomness.refresh.a2);
      for (auto& e : v.trace)
        for (auto& f : e.payload) slots.push_back(&f);
      *slots[rng.uniform(slots.size())] += FieldElement(m, 1 + static_cast<long long>(rng.uniform(m->value().convert_to<std::uint64_t>() - 1)));
    };
    switch (t % 3) {
      case 0: bump(views); break;
      case 1: {
        const auto who = rng.uniform(kParties);
        for (auto& [id, slot] : rand.mul) slot[who] = sample_ss_randomness(rng, m);
        rand.refresh[who] = sample_ss_randomness(rng, m);
        views = run_protocol(c, x, in, rand).views;
        break;
      }
      default:
        for (int k = 0; k < 3; ++k) bump(views);
    }
    if (all_pairs_consistent(c, x, views) == reproduced(c, x, views)) ++lemma_ok;
  }
  return {make_report("consistency/honest-f" + m->to_decimal(), BoundKind::Equal, honest_runs, honest_ok, 1.0, 0.0),
          make_report("consistency/tampered-f" + m->to_decimal(), BoundKind::Equal, tampered_runs, lemma_ok, 1.0, 0.0)};
}

// --- self test ----------------------------------------------------------------------

struct SelftestOptions {
  std::uint64_t seed = 0;
  // Divides statistical trial counts by ten; exact experiments still run.
  bool quick = false;
  // F_11 circuits for exhaustive completeness; generated when empty.
  std::vector<Circuit> corpus_f11;
};

struct SelftestResult {
  std::uint64_t seed = 0;
  std::vector<ExperimentReport> reports;

  bool pass() const {
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass(); });
  }
};

inline Statement one_mul_statement_f11(long long witness = 3) {
  auto c = parse_circuit("field 11\ntopology 0 1 3\n(add 3 (mul 2 (sinput 0) (sinput 0)) (const 1 1))");
  Statement s{c, {}, {}};
  s.target = eval_plain(s, Witness{{FieldElement(c.modulus, witness)}});
  return s;
}

inline SelftestResult run_selftest(const SelftestOptions& opt) {
  SeededRandom root(opt.seed);
  SelftestResult out{opt.seed, {}};
  const std::uint64_t scale = opt.quick ? 10 : 1;
  auto next = [&] { return root.fork(); };

  auto corpus = opt.corpus_f11;
  if (corpus.empty()) {
    auto r = next();
    for (int k = 0; k < 20; ++k) corpus.push_back(random_circuit(r, preset_modulus("f11"), {1, 1 + k % 2, 5, true}));
  }
  {
    auto r = next();
    out.reports.push_back(run_completeness_exhaustive(corpus, r));
  }
  {
    auto r = next();
    out.reports.push_back(run_completeness_random(preset_modulus("f101"), 1000 / scale, 1, r));
  }
  {
    auto r = next();
    out.reports.push_back(run_completeness_random(preset_modulus("f101"), 20 / scale, 40, r));
  }
  const auto bad = false_statement_f11();
  for (std::size_t sigma : {1u, 10u}) {
    auto r = next();
    auto res = run_soundness(bad, sigma, 10000 / scale, r);
    out.reports.push_back(res.accept_rate);
    out.reports.push_back(res.accept_iff_missed);
  }
  {
    auto r = next();
    out.reports.push_back(run_soundness_garbage(bad, 1000 / scale, r));
  }
  const auto s11 = one_mul_statement_f11();
  const Witness w11{{FieldElement(s11.modulus(), 3)}};
  {
    auto r = next();
    auto res = run_zk_exact(s11, w11, r);
    out.reports.push_back(res.transcripts);
    out.reports.push_back(res.guess_matches);
  }
  {
    auto r = next();
    out.reports.push_back(run_zk_retries(s11, 2000 / scale, r));
  }
  auto c101 = parse_circuit("field 101\ntopology 0 1 3\n(add 3 (mul 2 (sinput 0) (sinput 0)) (const 1 1))");
  Statement s101{c101, {}, FieldElement(c101.modulus, 10)};
  const Witness w101{{FieldElement(c101.modulus, 3)}};
  {
    auto r = next();
    ChallengeDistinguisher d;
    out.reports.push_back(run_zk(s101, w101, d, 10000 / scale, r, CommitScheme::prf(), 0,
                                 opt.quick ? binomial_tolerance(0.5, 1000) : 0.02));
  }
  {
    auto r = next();
    ByteHistogramDistinguisher d(CommitScheme::prf());
    out.reports.push_back(run_zk(s101, w101, d, 10000 / scale, r, CommitScheme::prf(), 1000 / scale,
                                 opt.quick ? binomial_tolerance(0.5, 1000) : 0.02));
  }
  out.reports.push_back(run_sss_privacy_exact(preset_modulus("f11")));
  {
    auto r = next();
    out.reports.push_back(run_sss_privacy_chi2(preset_modulus("f97"), 10000 / scale, r));
  }
  out.reports.push_back(run_mpc_privacy_exact(s11, w11));
  {
    auto c97 = parse_circuit("field 97\ntopology 0 1 3\n(add 3 (mul 2 (sinput 0) (sinput 0)) (const 1 1))");
    Statement s97{c97, {}, {}};
    Witness w97{{FieldElement(c97.modulus, 5)}};
    s97.target = eval_plain(s97, w97);
    auto r = next();
    out.reports.push_back(run_mpc_privacy_chi2(s97, w97, 5000 / scale, r));
  }
  {
    auto r = next();
    out.reports.push_back(run_binding(100000 / scale, r));
  }
  {
    auto r = next();
    out.reports.push_back(run_hiding(100000 / scale, false, r, opt.quick ? binomial_tolerance(0.5, 10000) : 0.01));
  }
  {
    auto r = next();
    out.reports.push_back(run_hiding(10000 / scale, true, r, opt.quick ? binomial_tolerance(0.5, 1000) : 0.02));
  }
  {
    auto r = next();
    auto res = run_consistency(preset_modulus("f101"), 100, 100, r);
    out.reports.push_back(res.honest);
    out.reports.push_back(res.tampered);
  }
  return out;
}

inline std::string selftest_text(const SelftestResult& r) {
  std::ostringstream os;
  os << "selftest seed=" << r.seed << '\n';
  for (const auto& rep : r.reports) os << format_report(rep) << '\n';
  os << (r.pass() ? "ALL PASS" : "FAILURES") << '\n';
  return os.str();
}

// {"seed": u64, "pass": bool, "experiments": [{name, kind, trials,
// successes, rate, bound, tolerance, verdict}, ...]}
inline std::string selftest_json(const SelftestResult& r) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["pass"] = r.pass();
  j["experiments"] = nlohmann::ordered_json::array();
  for (const auto& rep : r.reports) j["experiments"].push_back(report_json(rep));
  return j.dump(2) + "\n";
}

}  // namespace mith
