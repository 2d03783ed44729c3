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

#include <set>

#include "mith/corpus.hpp"
#include "mith/mpc.hpp"

namespace mith {
namespace {

const ModulusPtr& f11() {
  static const auto m = preset_modulus("11");
  return m;
}

FieldElement fe(long long v, const ModulusPtr& m = f11()) { return FieldElement(m, v); }

PerParty<SSRandomness> random_slot(RandomSource& rng, const ModulusPtr& m) {
  PerParty<SSRandomness> out;
  for (auto& r : out) r = sample_ss_randomness(rng, m);
  return out;
}

// Interpolate through parties a, b, c and check the other two lie on the
// same degree-2 polynomial.
bool degree_at_most_two(const Sharing& sh) {
  const auto& m = sh.shares[0].modulus();
  for (int extra = 4; extra <= 5; ++extra) {
    auto x = PartyId(extra).point(m);
    auto acc = FieldElement::zero(m);
    for (int i = 1; i <= 3; ++i) {
      auto xi = PartyId(i).point(m);
      auto l = FieldElement::one(m);
      for (int j = 1; j <= 3; ++j) {
        if (i == j) continue;
        auto xj = PartyId(j).point(m);
        l *= (x - xj) * (xi - xj).inv();
      }
      acc += l * sh[PartyId(i)];
    }
    if (!(acc == sh[PartyId(extra)])) return false;
  }
  return true;
}

struct Run {
  Statement s;
  std::vector<Sharing> sharings;
  GateRandomness rand;
  ExecutionResult res;
};

Run honest_run(RandomSource& rng, const Circuit& c, const Witness* w = nullptr) {
  Run r{Statement{c, random_inputs(rng, c.modulus, c.topology.np), {}}, {}, sample_gate_randomness(rng, c), {}};
  Witness wit = w ? *w : Witness{random_inputs(rng, c.modulus, c.topology.ns)};
  for (const auto& x : wit.secret_inputs) r.sharings.push_back(share(x, sample_ss_randomness(rng, c.modulus)));
  r.res = run_protocol(r.s.circuit, r.s.public_inputs, r.sharings, r.rand);
  r.s.target = eval_plain(r.s, wit);
  return r;
}

TEST(Gates, AddExamples) {
  SeededRandom rng(1);
  auto a = share(fe(2), sample_ss_randomness(rng, f11()));
  auto b = share(fe(3), sample_ss_randomness(rng, f11()));
  EXPECT_EQ(reconstruct(gate_add(a, b)), fe(5));
  EXPECT_EQ(gate_add(a, share(fe(0), zero_ss_randomness(f11()))), a);
}

TEST(Gates, SmulAndConst) {
  SeededRandom rng(2);
  auto x = share(fe(3), sample_ss_randomness(rng, f11()));
  EXPECT_EQ(reconstruct(gate_smul(public_encoding(fe(4)), x)), fe(1));
  EXPECT_EQ(gate_const(fe(6)), public_encoding(fe(6)));
}

TEST(Gates, MulCorrectAndDegreeTwo) {
  SeededRandom rng(3);
  for (int t = 0; t < 1000; ++t) {
    auto a = sample_fe(rng, f11()), b = sample_fe(rng, f11());
    auto l = share(a, sample_ss_randomness(rng, f11()));
    auto r = share(b, sample_ss_randomness(rng, f11()));
    auto res = gate_mul(l, r, random_slot(rng, f11()));
    ASSERT_EQ(reconstruct(res.output), a * b);
    ASSERT_TRUE(degree_at_most_two(res.output));
  }
}

TEST(Gates, MulMessagesFollowResharing) {
  SeededRandom rng(4);
  auto l = share(fe(4), sample_ss_randomness(rng, f11()));
  auto r = share(fe(9), sample_ss_randomness(rng, f11()));
  auto slot = random_slot(rng, f11());
  auto res = gate_mul(l, r, slot);
  for (auto i : kAllParties) {
    // Each row is a degree-2 sharing of d_i = l_i * r_i.
    Sharing row;
    for (auto j : kAllParties) row[j] = res.messages[i.index()][j.index()];
    EXPECT_TRUE(degree_at_most_two(row));
    EXPECT_EQ(reconstruct(row), l[i] * r[i]);
  }
}

TEST(Refresh, PreservesSecret) {
  SeededRandom rng(5);
  for (int t = 0; t < 200; ++t) {
    auto s = sample_fe(rng, f11());
    auto sh = share(s, sample_ss_randomness(rng, f11()));
    auto res = refresh_and_open(sh, random_slot(rng, f11()));
    EXPECT_EQ(res.y, s);
    EXPECT_TRUE(degree_at_most_two(res.refreshed));
    EXPECT_EQ(reconstruct(res.refreshed), s);
  }
  auto sh = share(fe(7), {fe(1), fe(2)});
  PerParty<SSRandomness> zero;
  zero.fill(zero_ss_randomness(f11()));
  EXPECT_EQ(refresh_and_open(sh, zero).refreshed, sh);
}

// Fix four parties' refresh randomness and enumerate the fifth's 121 values:
// the refreshed sharing hits every degree-2 sharing of the secret exactly
// once. Uniform conditioned on any fixed rest means uniform marginally.
TEST(Refresh, ExhaustivelyUniformOnF11) {
  SeededRandom rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = sample_fe(rng, f11());
    auto sh = share(s, sample_ss_randomness(rng, f11()));
    auto slot = random_slot(rng, f11());
    const auto who = static_cast<std::size_t>(rng.uniform(5));
    std::set<std::vector<std::uint64_t>> seen;
    for (int a1 = 0; a1 < 11; ++a1)
      for (int a2 = 0; a2 < 11; ++a2) {
        slot[who] = {fe(a1), fe(a2)};
        auto res = refresh_and_open(sh, slot);
        ASSERT_EQ(reconstruct(res.refreshed), s);
        ASSERT_TRUE(degree_at_most_two(res.refreshed));
        std::vector<std::uint64_t> key;
        for (const auto& x : res.refreshed.shares) key.push_back(x.to_u64());
        seen.insert(key);
      }
    EXPECT_EQ(seen.size(), 121u);
  }
}

TEST(Protocol, MatchesPlainEvaluation) {
  SeededRandom rng(7);
  for (auto name : {"11", "101"}) {
    auto m = preset_modulus(name);
    for (int t = 0; t < 250; ++t) {
      auto c = random_circuit(rng, m, {static_cast<int>(rng.uniform(3)), 1 + static_cast<int>(rng.uniform(3)), 6, true});
      auto r = honest_run(rng, c);
      for (const auto& y : r.res.outputs) ASSERT_EQ(y, r.s.target) << print_circuit(c);
    }
  }
}

TEST(Protocol, IdentityCircuit) {
  auto c = parse_circuit("field 11\ntopology 0 1 0\n(sinput 0)");
  SeededRandom rng(8);
  Witness w{{fe(6)}};
  auto r = honest_run(rng, c, &w);
  for (auto p : kAllParties) {
    EXPECT_EQ(r.res.outputs[p.index()], fe(6));
    EXPECT_EQ(local_output(c, p, r.res.views[p.index()]), fe(6));
  }
}

TEST(Protocol, MissingRandomnessThrows) {
  auto c = parse_circuit("field 11\ntopology 0 1 1\n(mul 1 (sinput 0) (sinput 0))");
  std::vector<Sharing> in{public_encoding(fe(2))};
  GateRandomness rand;
  EXPECT_THROW(run_protocol(c, {}, in, rand), std::invalid_argument);
  std::vector<FieldElement> extra{fe(1)};
  EXPECT_THROW(run_protocol(c, extra, in, sample_gate_randomness(*std::make_unique<SeededRandom>(1), c)),
               std::invalid_argument);
}

TEST(Protocol, IntermediateWiresDegreeTwo) {
  SeededRandom rng(9);
  auto m = preset_modulus("97");
  for (int t = 0; t < 50; ++t) {
    auto c = random_circuit(rng, m, {1, 2, 6, true});
    std::vector<Sharing> in;
    for (int k = 0; k < 2; ++k) in.push_back(share(sample_fe(rng, m), sample_ss_randomness(rng, m)));
    auto pub = random_inputs(rng, m, 1);
    int checked = 0;
    run_protocol(c, pub, in, sample_gate_randomness(rng, c), [&](const Gate&, const Sharing& sh) {
      EXPECT_TRUE(degree_at_most_two(sh));
      ++checked;
    });
    EXPECT_GT(checked, 0);
  }
}

TEST(Protocol, SmulScalarSideUsesNoRandomness) {
  auto c = parse_circuit("field 11\ntopology 1 1 3\n(smul 3 (mul 1 (pinput 0) (pinput 0)) (mul 2 (sinput 0) (sinput 0)))");
  EXPECT_EQ(interactive_mul_gates(c), std::vector<int>{2});
  SeededRandom rng(10);
  auto r = honest_run(rng, c);
  for (const auto& v : r.res.views) {
    ASSERT_EQ(v.randomness.mul.size(), 1u);
    EXPECT_TRUE(v.trace[2].payload.empty());  // public mul
    EXPECT_EQ(v.trace[2].label, 1u);
  }
  EXPECT_EQ(r.res.outputs[0], r.s.target);
}

TEST(Views, ShapeAndEncoding) {
  SeededRandom rng(11);
  for (int t = 0; t < 50; ++t) {
    auto c = random_circuit(rng, preset_modulus("101"), {1, 2, 5, true});
    auto r = honest_run(rng, c);
    for (const auto& v : r.res.views) {
      EXPECT_TRUE(valid_view(c, v));
      auto bytes = encode_view(v);
      EXPECT_EQ(bytes.at(0), 0x56);
      EXPECT_EQ(decode_view(bytes, c.modulus), v);
      auto truncated = bytes;
      truncated.pop_back();
      EXPECT_THROW(decode_view(truncated, c.modulus), DecodeError);
      auto longer = bytes;
      longer.push_back(0);
      EXPECT_THROW(decode_view(longer, c.modulus), DecodeError);
    }
  }
}

TEST(Views, EncodingLayoutSmallExample) {
  auto c = parse_circuit("field 11\ntopology 0 1 1\n(mul 1 (sinput 0) (sinput 0))");
  View v;
  v.secret_shares = {fe(3)};
  v.randomness.mul = {{1, {fe(1), fe(2)}}};
  v.randomness.refresh = {fe(4), fe(5)};
  v.trace = {{TraceKind::SInput, 0, {}}, {TraceKind::SInput, 0, {}}, {TraceKind::Multiplication, 1, {fe(1), fe(2), fe(3), fe(4), fe(5)}}};
  v.trace.push_back({TraceKind::Open, kOpenLabel, {}});
  for (int k = 0; k < 10; ++k) v.trace.back().payload.push_back(fe(k));
  EXPECT_TRUE(valid_view(c, v));
  auto hex = to_hex(encode_view(v));
  EXPECT_EQ(hex.substr(0, 2 + 8 + 8 + 2), "56" "00000000" "00000001" "03");
  EXPECT_EQ(hex.substr(20, 8 + 8 + 4), "00000002" "00000001" "0102");
  EXPECT_EQ(hex.substr(40, 8 + 4), "ffffffff" "0405");
  EXPECT_EQ(hex.substr(52, 8), "00000004");
  EXPECT_EQ(hex.substr(60, 18), "02" "00000000" "00000000");
  EXPECT_EQ(encode_view(v).size(), 1 + 4 + 4 + 1 + 4 + 2 * (4 + 2) + 4 + 3 * 9 + 5 + 9 + 10);
}

TEST(Views, InvalidShapes) {
  SeededRandom rng(12);
  auto c = parse_circuit("field 11\ntopology 1 1 2\n(add 2 (pinput 0) (mul 1 (sinput 0) (sinput 0)))");
  auto r = honest_run(rng, c);
  auto v = r.res.views[0];
  auto bad = v;
  bad.trace.pop_back();
  EXPECT_FALSE(valid_view(c, bad));
  EXPECT_FALSE(out_messages(c, PartyId(1), bad).has_value());
  EXPECT_FALSE(local_output(c, PartyId(1), bad).has_value());
  bad = v;
  bad.randomness.mul.clear();
  EXPECT_FALSE(valid_view(c, bad));
  bad = v;
  bad.secret_shares.push_back(fe(1));
  EXPECT_FALSE(valid_view(c, bad));
  bad = v;
  bad.trace[3].payload[0] = FieldElement(preset_modulus("97"), 1);
  EXPECT_FALSE(valid_view(c, bad));
  bad = v;
  bad.trace[3].payload.pop_back();
  EXPECT_FALSE(valid_view(c, bad));
  bad = v;
  bad.trace[0].label = 9;
  EXPECT_FALSE(valid_view(c, bad));
  EXPECT_FALSE(consistent_views(c, r.s.public_inputs, bad, r.res.views[1], PartyId(1), PartyId(2)));
}

// The defining cross-check: what i's view says i sent to j is what j's view
// records as received from i.
TEST(Consistency, OutMessagesMatchRecordedIncoming) {
  SeededRandom rng(13);
  for (int t = 0; t < 40; ++t) {
    auto c = random_circuit(rng, preset_modulus("11"), {1, 2, 5, true});
    auto r = honest_run(rng, c);
    for (auto i : kAllParties) {
      auto out = out_messages(c, i, r.res.views[i.index()]);
      ASSERT_TRUE(out.has_value());
      EXPECT_EQ(out, out_messages(c, i, r.res.views[i.index()]));
      for (auto j : kAllParties) {
        const auto& tj = r.res.views[j.index()].trace;
        ASSERT_EQ(tj.size(), out->size());
        for (std::size_t k = 0; k < tj.size(); ++k) {
          if (tj[k].kind == TraceKind::Multiplication && !tj[k].payload.empty()) {
            EXPECT_EQ(tj[k].payload[i.index()], (*out)[k].payload[j.index()]);
          } else if (tj[k].kind == TraceKind::Open) {
            EXPECT_EQ(tj[k].payload[i.index()], (*out)[k].payload[j.index()]);
            EXPECT_EQ(tj[k].payload[kParties + i.index()], (*out)[k].payload[kParties]);
          } else {
            EXPECT_TRUE((*out)[k].payload.empty());
          }
        }
      }
    }
  }
}

TEST(Consistency, NoMulCircuitSendsOnlyOpening) {
  auto c = parse_circuit("field 11\ntopology 1 1 2\n(add 2 (pinput 0) (smul 1 (pinput 0) (sinput 0)))");
  SeededRandom rng(14);
  auto r = honest_run(rng, c);
  auto out = out_messages(c, PartyId(2), r.res.views[1]).value();
  for (std::size_t k = 0; k + 1 < out.size(); ++k) EXPECT_TRUE(out[k].payload.empty());
  EXPECT_EQ(out.back().payload.size(), kParties + 1);
}

TEST(Consistency, HonestLocalOutputsAndAllPairs) {
  SeededRandom rng(15);
  for (int t = 0; t < 100; ++t) {
    auto c = random_circuit(rng, preset_modulus("101"), {2, 2, 6, true});
    auto r = honest_run(rng, c);
    EXPECT_TRUE(all_pairs_consistent(c, r.s.public_inputs, r.res.views));
    for (auto i : kAllParties) {
      EXPECT_EQ(local_output(c, i, r.res.views[i.index()]), r.res.outputs[i.index()]);
      for (auto j : kAllParties) {
        if (i == j) continue;
        EXPECT_TRUE(consistent_views(c, r.s.public_inputs, r.res.views[i.index()], r.res.views[j.index()], i, j));
      }
      EXPECT_FALSE(consistent_views(c, r.s.public_inputs, r.res.views[i.index()], r.res.views[i.index()], i, i));
    }
  }
}

TEST(Consistency, FlippedMessageBreaksPair) {
  SeededRandom rng(16);
  auto c = parse_circuit("field 11\ntopology 0 2 3\n(add 3 (mul 1 (sinput 0) (sinput 1)) (mul 2 (sinput 0) (sinput 0)))");
  for (int t = 0; t < 200; ++t) {
    auto r = honest_run(rng, c);
    auto i = PartyId(1 + static_cast<int>(rng.uniform(5)));
    auto sender = PartyId(1 + static_cast<int>(rng.uniform(5)));
    auto views = r.res.views;
    auto& trace = views[i.index()].trace;
    // Either a multiplication message or a zero-share / broadcast slot.
    std::vector<std::size_t> entries;
    for (std::size_t k = 0; k < trace.size(); ++k)
      if (!trace[k].payload.empty()) entries.push_back(k);
    auto k = entries[rng.uniform(entries.size())];
    std::size_t slot = sender.index();
    if (trace[k].kind == TraceKind::Open && rng.uniform(2)) slot += kParties;
    trace[k].payload[slot] += fe(1 + static_cast<long long>(rng.uniform(10)));
    if (sender == i) {
      EXPECT_FALSE(all_pairs_consistent(c, r.s.public_inputs, views));
      continue;
    }
    EXPECT_FALSE(consistent_views(c, r.s.public_inputs, views[i.index()], views[sender.index()], i, sender));
  }
}

TEST(Consistency, PublicInputMismatch) {
  SeededRandom rng(17);
  auto c = parse_circuit("field 11\ntopology 1 1 2\n(add 2 (pinput 0) (mul 1 (sinput 0) (sinput 0)))");
  auto r = honest_run(rng, c);
  std::vector<FieldElement> other{r.s.public_inputs[0] + fe(1)};
  EXPECT_FALSE(consistent_views(c, other, r.res.views[0], r.res.views[1], PartyId(1), PartyId(2)));
  auto views = r.res.views;
  views[0].public_inputs = other;
  EXPECT_FALSE(consistent_views(c, r.s.public_inputs, views[0], views[1], PartyId(1), PartyId(2)));
}

TEST(LocalOutput, TamperedBroadcastChangesResult) {
  SeededRandom rng(18);
  auto c = parse_circuit("field 11\ntopology 0 1 1\n(mul 1 (sinput 0) (sinput 0))");
  for (int t = 0; t < 100; ++t) {
    auto r = honest_run(rng, c);
    auto i = PartyId(1 + static_cast<int>(rng.uniform(5)));
    auto other = PartyId(1 + static_cast<int>((i.index() + 1 + rng.uniform(4)) % 5));
    auto v = r.res.views[i.index()];
    v.trace.back().payload[kParties + other.index()] += fe(1);
    EXPECT_NE(local_output(c, i, v), r.res.outputs[0]);
  }
}

TEST(Reexecution, HonestViewsReproduced) {
  SeededRandom rng(19);
  for (int t = 0; t < 50; ++t) {
    auto c = random_circuit(rng, preset_modulus("11"), {1, 2, 5, true});
    auto r = honest_run(rng, c);
    auto again = reexecute_from_views(c, r.s.public_inputs, r.res.views);
    ASSERT_TRUE(again.has_value());
    EXPECT_EQ(again->views, r.res.views);
  }
}

TEST(Simulator, ViewsPassChecks) {
  SeededRandom rng(20);
  for (auto name : {"11", "101"}) {
    auto m = preset_modulus(name);
    for (int t = 0; t < 100; ++t) {
      auto c = random_circuit(rng, m, {1, 2, 5, true});
      auto x = random_inputs(rng, m, 1);
      auto i = PartyId(1 + static_cast<int>(rng.uniform(5)));
      auto j = PartyId(1 + static_cast<int>((i.index() + 1 + rng.uniform(4)) % 5));
      std::pair<std::vector<FieldElement>, std::vector<FieldElement>> sh{random_inputs(rng, m, 2), random_inputs(rng, m, 2)};
      auto y = sample_fe(rng, m);
      auto [vi, vj] = mpc_simulate(c, x, {i, j}, sh, y, rng);
      EXPECT_TRUE(valid_view(c, vi));
      EXPECT_TRUE(valid_view(c, vj));
      EXPECT_TRUE(consistent_views(c, x, vi, vj, i, j));
      EXPECT_EQ(local_output(c, i, vi), y);
      EXPECT_EQ(local_output(c, j, vj), y);
    }
  }
  auto c = parse_circuit("field 11\ntopology 0 1 0\n(sinput 0)");
  std::pair<std::vector<FieldElement>, std::vector<FieldElement>> sh{{fe(1)}, {fe(2)}};
  EXPECT_THROW(mpc_simulate(c, {}, {PartyId(2), PartyId(2)}, sh, fe(0), rng), std::invalid_argument);
}

}  // namespace
}  // namespace mith
