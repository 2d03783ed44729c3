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

#include <map>

#include "mith/sss.hpp"
#include "mith/stats.hpp"

namespace mith {
namespace {

const ModulusPtr& f11() {
  static const auto m = preset_modulus("11");
  return m;
}

FieldElement fe(long long v, const ModulusPtr& m = f11()) { return FieldElement(m, v); }

TEST(PartyIdTest, Range) {
  EXPECT_THROW(PartyId(0), std::out_of_range);
  EXPECT_THROW(PartyId(6), std::out_of_range);
  EXPECT_EQ(PartyId(3).index(), 2u);
  EXPECT_EQ(PartyId(3).point(f11()), fe(3));
}

TEST(Share, Example) {
  auto sh = share(fe(5), {fe(2), fe(3)});
  std::array<long long, 5> expect{10, 10, 5, 6, 2};
  for (auto p : kAllParties) EXPECT_EQ(sh[p], fe(expect[p.index()])) << p.value();
  EXPECT_EQ(reconstruct(sh), fe(5));
}

TEST(Share, ZeroRandomnessIsConstant) {
  for (int s = 0; s < 11; ++s) EXPECT_EQ(share(fe(s), zero_ss_randomness(f11())), public_encoding(fe(s)));
}

TEST(Share, RoundTripF97) {
  SeededRandom rng(1);
  auto m = preset_modulus("97");
  for (int t = 0; t < 1000; ++t) {
    auto s = sample_fe(rng, m);
    EXPECT_EQ(reconstruct(share(s, sample_ss_randomness(rng, m))), s);
  }
}

TEST(Share, RoundTripExhaustiveF11) {
  for (int s = 0; s < 11; ++s)
    for (int a1 = 0; a1 < 11; ++a1)
      for (int a2 = 0; a2 < 11; ++a2) ASSERT_EQ(reconstruct(share(fe(s), {fe(a1), fe(a2)})), fe(s));
}

TEST(Reconstruct, Coefficients) {
  for (auto name : {"11", "97", "p256"}) {
    auto m = preset_modulus(name);
    const auto& lambda = reconstruction_coefficients(m);
    auto sum = FieldElement::zero(m);
    for (const auto& l : lambda) sum += l;
    EXPECT_EQ(sum, FieldElement::one(m));
    // Over the integers lambda = (5, -10, 10, -5, 1).
    std::array<long long, 5> expect{5, -10, 10, -5, 1};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(lambda[i], FieldElement(m, expect[i]));
  }
}

TEST(Reconstruct, DegreeFourPolynomials) {
  SeededRandom rng(4);
  for (auto name : {"11", "101", "p256"}) {
    auto m = preset_modulus(name);
    for (int t = 0; t < 200; ++t) {
      auto coeffs = sample_fes(rng, m, 5);
      Sharing sh;
      for (auto p : kAllParties) {
        auto x = p.point(m), acc = FieldElement::zero(m), pow = FieldElement::one(m);
        for (const auto& c : coeffs) {
          acc += c * pow;
          pow *= x;
        }
        sh[p] = acc;
      }
      EXPECT_EQ(reconstruct(sh), coeffs[0]);
    }
  }
}

TEST(Reconstruct, PublicEncoding) {
  auto enc = public_encoding(fe(7));
  for (auto p : kAllParties) EXPECT_EQ(enc[p], fe(7));
  for (int v = 0; v < 11; ++v) EXPECT_EQ(reconstruct(public_encoding(fe(v))), fe(v));
  EXPECT_EQ(pub_reconstruct(PartyId(3), fe(9)), fe(9));
}

TEST(Reconstruct, AnyThreeSharesAgree) {
  SeededRandom rng(12);
  auto m = preset_modulus("97");
  for (int t = 0; t < 100; ++t) {
    auto s = sample_fe(rng, m);
    auto sh = share(s, sample_ss_randomness(rng, m));
    for (int a = 1; a <= 5; ++a)
      for (int b = a + 1; b <= 5; ++b)
        for (int c = b + 1; c <= 5; ++c) {
          std::vector<Point> pts;
          for (int k : {a, b, c}) pts.emplace_back(PartyId(k).point(m), sh[PartyId(k)]);
          EXPECT_EQ(lagrange_at_zero(pts), s);
        }
  }
}

// Enumeration over all (a1, a2): the corrupt pair's shares are uniform on
// F_11^2 for every secret and every pair.
TEST(Privacy, ExhaustivePairsF11) {
  for (int i = 1; i <= 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) {
      for (int s = 0; s < 11; ++s) {
        std::map<std::pair<std::uint64_t, std::uint64_t>, int> hist;
        for (int a1 = 0; a1 < 11; ++a1)
          for (int a2 = 0; a2 < 11; ++a2) {
            auto sh = share(fe(s), {fe(a1), fe(a2)});
            ++hist[{sh[PartyId(i)].to_u64(), sh[PartyId(j)].to_u64()}];
          }
        ASSERT_EQ(hist.size(), 121u);
        for (const auto& [k, n] : hist) ASSERT_EQ(n, 1);
      }
    }
  }
}

TEST(ShareSim, UniformAndSeeded) {
  SeededRandom rng(21), again(21);
  std::vector<std::uint64_t> counts(121, 0);
  for (int t = 0; t < 121000; ++t) {
    auto [a, b] = share_sim(rng, f11(), {PartyId(2), PartyId(5)});
    ++counts[a.to_u64() * 11 + b.to_u64()];
  }
  EXPECT_GT(chi_square_uniform_p_value(counts), 0.001);
  SeededRandom r1(5), r2(5);
  EXPECT_EQ(share_sim(r1, f11(), {PartyId(1), PartyId(2)}), share_sim(r2, f11(), {PartyId(1), PartyId(2)}));
  EXPECT_THROW(share_sim(again, f11(), {PartyId(3), PartyId(3)}), std::invalid_argument);
}

TEST(ShareSim, ExactlyTwoUniformDrawsPerCall) {
  // Scripted bytes map one-to-one to F_11 elements, so share_sim's image over
  // all 121 scripts is the whole square for every pair.
  for (int i = 1; i <= 5; ++i)
    for (int j = i + 1; j <= 5; ++j) {
      std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
      for (int a = 0; a < 11; ++a)
        for (int b = 0; b < 11; ++b) {
          ScriptedRandom rng(Bytes{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
          auto [x, y] = share_sim(rng, f11(), {PartyId(i), PartyId(j)});
          seen.insert({x.to_u64(), y.to_u64()});
          EXPECT_EQ(rng.overrun(), 0u);
        }
      EXPECT_EQ(seen.size(), 121u);
    }
}

}  // namespace
}  // namespace mith
