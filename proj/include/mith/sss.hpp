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

// Shamir sharing for five parties with threshold two. Party i holds the
// evaluation at x = i of a degree-2 polynomial whose constant term is the
// secret.

#pragma once

#include <array>
#include <stdexcept>
#include <utility>

#include "mith/field.hpp"
#include "mith/random.hpp"

namespace mith {

inline constexpr int kParties = 5;
inline constexpr int kThreshold = 2;

class PartyId {
 public:
  constexpr explicit PartyId(int id) : id_(id) {
    if (id < 1 || id > kParties) throw std::out_of_range("party id must be in 1..5");
  }

  constexpr int value() const { return id_; }
  constexpr std::size_t index() const { return static_cast<std::size_t>(id_ - 1); }

  FieldElement point(const ModulusPtr& m) const { return FieldElement(m, static_cast<long long>(id_)); }

  constexpr bool operator==(const PartyId&) const = default;
  constexpr auto operator<=>(const PartyId&) const = default;

 private:
  int id_;
};

inline constexpr std::array<PartyId, kParties> kAllParties{PartyId(1), PartyId(2), PartyId(3), PartyId(4), PartyId(5)};

// Coefficients of x and x^2.
struct SSRandomness {
  FieldElement a1;
  FieldElement a2;

  bool operator==(const SSRandomness&) const = default;
};

inline SSRandomness sample_ss_randomness(RandomSource& rng, const ModulusPtr& m) {
  auto a1 = sample_fe(rng, m);
  auto a2 = sample_fe(rng, m);
  return {std::move(a1), std::move(a2)};
}

inline SSRandomness zero_ss_randomness(const ModulusPtr& m) { return {FieldElement::zero(m), FieldElement::zero(m)}; }

struct Sharing {
  std::array<FieldElement, kParties> shares;

  const FieldElement& operator[](PartyId p) const { return shares[p.index()]; }
  FieldElement& operator[](PartyId p) { return shares[p.index()]; }

  bool operator==(const Sharing&) const = default;
};

// s + a1*x + a2*x^2 at x.
inline FieldElement eval_share_poly(const FieldElement& s, const SSRandomness& r, const FieldElement& x) {
  return s + (r.a1 + r.a2 * x) * x;
}

inline Sharing share(const FieldElement& s, const SSRandomness& r) {
  Sharing out;
  for (auto p : kAllParties) out[p] = eval_share_poly(s, r, p.point(s.modulus()));
  return out;
}

// Lagrange coefficients at zero for the points 1..5.
inline const std::array<FieldElement, kParties>& reconstruction_coefficients(const ModulusPtr& m) {
  thread_local ModulusPtr cached_for;
  thread_local std::array<FieldElement, kParties> coeffs;
  if (!cached_for || !(*cached_for == *m)) {
    for (auto i : kAllParties) {
      long long num = 1, den = 1;
      for (auto j : kAllParties) {
        if (i == j) continue;
        num *= j.value();
        den *= j.value() - i.value();
      }
      coeffs[i.index()] = FieldElement(m, num) * FieldElement(m, den).inv();
    }
    cached_for = m;
  }
  return coeffs;
}

// Degree-4 interpolation through all five shares; total on F^5, so it also
// opens the degree-4 product sharings produced inside multiplication gates.
inline FieldElement reconstruct(const Sharing& sh) {
  const auto& m = sh.shares[0].modulus();
  const auto& lambda = reconstruction_coefficients(m);
  auto acc = FieldElement::zero(m);
  for (std::size_t i = 0; i < kParties; ++i) acc += lambda[i] * sh.shares[i];
  return acc;
}

inline Sharing public_encoding(const FieldElement& v) {
  Sharing out;
  out.shares.fill(v);
  return out;
}

inline FieldElement pub_reconstruct(PartyId, const FieldElement& share) { return share; }

// Two independent uniform elements: the joint distribution of any two
// parties' shares of a degree-2 sharing, whatever the secret.
inline std::pair<FieldElement, FieldElement> share_sim(RandomSource& rng, const ModulusPtr& m,
                                                       std::pair<PartyId, PartyId> corrupt) {
  if (corrupt.first == corrupt.second) throw std::invalid_argument("share_sim: corrupt parties must be distinct");
  auto a = sample_fe(rng, m);
  auto b = sample_fe(rng, m);
  return {std::move(a), std::move(b)};
}

}  // namespace mith
