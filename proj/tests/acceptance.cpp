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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mith/cli.hpp"

using namespace mith;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

std::string summary(const ExperimentReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s %llu/%llu", r.name.c_str(), static_cast<unsigned long long>(r.successes),
                static_cast<unsigned long long>(r.trials));
  return buf;
}

Outcome all_of(const std::vector<ExperimentReport>& rs) {
  Outcome o{true, ""};
  for (const auto& r : rs) {
    o.pass = o.pass && r.pass();
    o.detail += (o.detail.empty() ? "" : "; ") + summary(r);
  }
  return o;
}

Outcome completeness() {
  SeededRandom rng(101);
  std::vector<Circuit> corpus;
  for (auto& e : load_corpus(std::filesystem::path(MITH_DATA_DIR) / "corpus"))
    if (e.circuit.modulus->value() == 11) corpus.push_back(std::move(e.circuit));
  auto exhaustive = run_completeness_exhaustive(corpus, rng);
  auto random = run_completeness_random(preset_modulus("f101"), 1000, 1, rng);
  auto o = all_of({exhaustive, random});
  o.pass = o.pass && corpus.size() >= 20;
  o.detail = std::to_string(corpus.size()) + " F_11 circuits; " + o.detail;
  return o;
}

Outcome soundness_single() {
  SeededRandom rng(102);
  auto r = run_soundness(false_statement_f11(), 1, 10000, rng);
  r.accept_rate.tolerance = 0.01;
  auto o = all_of({r.accept_rate, r.accept_iff_missed});
  o.detail = fmt("rate %.4f vs 0.9 +- 0.01; ", r.accept_rate.rate()) + o.detail;
  return o;
}

Outcome soundness_repeated() {
  SeededRandom rng(103);
  auto r = run_soundness(false_statement_f11(), 10, 10000, rng);
  r.accept_rate.tolerance = 0.02;
  const double b40 = soundness_bound(40, 0.0);
  char sig[32];
  std::snprintf(sig, sizeof(sig), "%.4g", b40);
  const bool bound_ok = std::string(sig) == "0.01478";
  auto o = all_of({r.accept_rate, r.accept_iff_missed});
  o.pass = o.pass && bound_ok;
  o.detail = fmt("rate %.4f vs %.4f +- 0.02; bound(40) = %.6f; ", r.accept_rate.rate(), std::pow(0.9, 10), b40) + o.detail;
  return o;
}

Outcome sharing_privacy() {
  auto m = preset_modulus("f11");
  // Pairs only: the criterion is about the 10 corrupt pairs.
  std::uint64_t same = 0;
  const auto p = 11;
  for (auto i : kAllParties) {
    for (auto j : kAllParties) {
      if (!(i < j)) continue;
      std::map<std::pair<std::uint64_t, std::uint64_t>, int> h0, h1;
      for (int a1 = 0; a1 < p; ++a1) {
        for (int a2 = 0; a2 < p; ++a2) {
          SSRandomness r{FieldElement(m, a1), FieldElement(m, a2)};
          auto s0 = share(FieldElement(m, 3), r), s1 = share(FieldElement(m, 7), r);
          ++h0[{s0[i].to_u64(), s0[j].to_u64()}];
          ++h1[{s1[i].to_u64(), s1[j].to_u64()}];
        }
      }
      if (h0 == h1 && h0.size() == 121) ++same;
    }
  }
  auto full = run_sss_privacy_exact(m);
  return {same == 10 && full.pass(), std::to_string(same) + "/10 pairs uniform on F_11^2; " + summary(full)};
}

Outcome mpc_correctness() {
  SeededRandom rng(105);
  std::uint64_t trials = 0, ok = 0;
  for (const char* f : {"f11", "f101"}) {
    auto m = preset_modulus(f);
    for (int t = 0; t < 500; ++t) {
      auto c = random_circuit(rng, m, {static_cast<int>(rng.uniform(3)), 1 + static_cast<int>(rng.uniform(3)), 6, true});
      Statement s{c, random_inputs(rng, m, c.topology.np), {}};
      Witness w{random_inputs(rng, m, c.topology.ns)};
      std::vector<Sharing> in;
      for (const auto& x : w.secret_inputs) in.push_back(share(x, sample_ss_randomness(rng, m)));
      auto res = run_protocol(c, s.public_inputs, in, sample_gate_randomness(rng, c));
      const auto want = eval_plain(s, w);
      ++trials;
      if (std::all_of(res.outputs.begin(), res.outputs.end(), [&](const auto& o) { return o == want; })) ++ok;
    }
  }
  return {ok == trials, std::to_string(ok) + "/" + std::to_string(trials) + " instances over F_11 and F_101"};
}

Outcome consistency() {
  SeededRandom rng(106);
  auto a = run_consistency(preset_modulus("f11"), 100, 100, rng);
  auto b = run_consistency(preset_modulus("f101"), 100, 100, rng);
  return all_of({a.honest, a.tampered, b.honest, b.tampered});
}

Outcome zero_knowledge() {
  SeededRandom rng(107);
  auto s = one_mul_statement_f11();
  auto exact = run_zk_exact(s, Witness{{FieldElement(s.modulus(), 3)}}, rng);
  auto retries = run_zk_retries(s, 10000, rng);
  const double mean = static_cast<double>(retries.trials) / static_cast<double>(retries.successes);
  auto o = all_of({exact.transcripts, exact.guess_matches});
  o.pass = o.pass && mean >= 9 && mean <= 11;
  o.detail += fmt("; mean attempts %.3f over 10^4 simulations", mean);
  return o;
}

Outcome commitments() {
  struct V {
    Bytes key, data;
    std::string mac;
  };
  Bytes key4;
  for (int i = 1; i <= 25; ++i) key4.push_back(static_cast<std::uint8_t>(i));
  const std::vector<V> rfc{
      {Bytes(20, 0x0b), to_bytes("Hi There"), "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"},
      {to_bytes("Jefe"), to_bytes("what do ya want for nothing?"),
       "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"},
      {Bytes(20, 0xaa), Bytes(50, 0xdd), "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"},
      {key4, Bytes(50, 0xcd), "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b"},
      {Bytes(20, 0x0c), to_bytes("Test With Truncation"), "a3b6167473100ee06e0c796c2955552b"},
      {Bytes(131, 0xaa), to_bytes("Test Using Larger Than Block-Size Key - Hash Key First"),
       "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54"},
      {Bytes(131, 0xaa),
       to_bytes("This is a test using a larger than block-size key and a larger than block-size data. The key needs to "
                "be hashed before being used by the HMAC algorithm."),
       "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2"},
  };
  int vec_ok = 0;
  for (const auto& v : rfc)
    if (to_hex(hmac_sha256(v.key, v.data)).substr(0, v.mac.size()) == v.mac) ++vec_ok;

  SeededRandom rng(108);
  const auto& g = *PedersenParams::test_group();
  int hom_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    auto m1 = sample_fe(rng, g.blinder_field), m2 = sample_fe(rng, g.blinder_field);
    auto r1 = sample_fe(rng, g.blinder_field), r2 = sample_fe(rng, g.blinder_field);
    auto c1 = pedersen_commit_one(g, m1.value(), r1.value());
    auto c2 = pedersen_commit_one(g, m2.value(), r2.value());
    auto c = pedersen_commit_one(g, (m1 + m2).value(), (r1 + r2).value());
    if (BigInt(c1 * c2 % g.P) == c) ++hom_ok;
  }
  return {vec_ok == 7 && hom_ok == 1000,
          std::to_string(vec_ok) + "/7 RFC 4231 vectors; " + std::to_string(hom_ok) + "/1000 homomorphism cases"};
}

Outcome bench_shape() {
  SeededRandom rng(109);
  auto b = run_bench(preset_modulus("p256"), 200, rng);
  const auto& g = b.rows[0].group;
  const auto& ped = b.row(g, "Pedersen Commitment");
  const auto& prf = b.row(g, "SHA256-based Commitment");
  const double ratio = (*ped.commit + *ped.verify) / (*prf.commit + *prf.verify);
  auto e2e = [](const BenchRow& r) { return *r.rand + *r.commit + *r.verify; };
  const double a7 = e2e(b.row("Field value: 101", "A MitH (7 gates, 2 MUL)"));
  const double s7 = e2e(b.row("Field value: 101", "SA MitH (7 gates, 2 MUL)"));
  const double a11 = e2e(b.row("Field value: 97", "A MitH (11 gates, 3 MUL)"));
  const double s11 = e2e(b.row("Field value: 97", "SA MitH (11 gates, 3 MUL)"));
  return {ratio >= 5 && s7 < a7 && s11 < a11,
          fmt("Pedersen/PRF commit+verify %.1fx; ", ratio) + fmt("7-gate PRF %.3f vs Pedersen %.3f ms; ", s7, a7) +
              fmt("11-gate PRF %.3f vs Pedersen %.3f ms", s11, a11)};
}

Outcome session_equivalence() {
  SeededRandom gen(110), prng(111), vrng(112);
  auto m = preset_modulus("f97");
  const auto scheme = CommitScheme::prf();
  int agree = 0, ordered = 0, accepted = 0;
  for (int k = 0; k < 100; ++k) {
    auto c = random_circuit(gen, m, {1, 1, 5, true});
    Statement s{c, random_inputs(gen, m, 1), {}};
    Witness w{random_inputs(gen, m, 1)};
    s.target = eval_plain(s, w);
    if (k % 2) s.target += FieldElement(m, 1);
    CaptureLog log;
    const std::size_t sigma = 1 + k % 5;
    auto run = run_loopback([&](Transport& t) { return prover_session(t, s, w, sigma, prng, scheme); },
                            [&](Transport& t) { return verifier_session(t, s, sigma, vrng, scheme); }, {}, {}, &log);
    if (!run.verifier || !run.verifier->transcript || !run.prover_verdict) continue;
    const bool offline = verify_repeated(s, *run.verifier->transcript, ChallengeMode::Transcript, scheme);
    if (offline == run.verifier->accepted && *run.prover_verdict == offline) ++agree;
    if (run.verifier->accepted) ++accepted;

    // Every COMMIT byte the prover wrote is read by the verifier before it
    // writes its CHALLENGE frame.
    std::size_t commit_len = 0, read = 0;
    std::optional<std::uint64_t> commit_done, challenge_at;
    for (const auto& e : log.events()) {
      if (e.who == "prover" && e.is_write && e.bytes.size() > 4 && e.bytes[4] == 0x02) commit_len = e.bytes.size();
      if (e.who == "verifier" && !e.is_write && commit_len && !challenge_at) {
        read += e.bytes.size();
        if (!commit_done && read >= commit_len) commit_done = e.seq;
      }
      if (e.who == "verifier" && e.is_write && e.bytes.size() > 4 && e.bytes[4] == 0x03) challenge_at = e.seq;
    }
    if (commit_done && challenge_at && *commit_done < *challenge_at) ++ordered;
  }
  return {agree == 100 && ordered == 100 && accepted == 50,
          std::to_string(agree) + "/100 verdicts equal offline check (" + std::to_string(accepted) +
              " true statements accepted); " + std::to_string(ordered) + "/100 logs commit-before-challenge"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"completeness", completeness},
      {"soundness sigma=1", soundness_single},
      {"soundness sigma=10 and bound(40)", soundness_repeated},
      {"sharing 2-privacy", sharing_privacy},
      {"mpc correctness", mpc_correctness},
      {"view consistency lemma", consistency},
      {"zero knowledge", zero_knowledge},
      {"commitment vectors", commitments},
      {"bench shape", bench_shape},
      {"session equivalence", session_equivalence},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-34s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
