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

// Commitment schemes over MPC views.
//
// PRF commitment: c = HMAC-SHA256(k, m) with a fresh 32-byte key k, which is
// also the opening. Binding reduces to HMAC collision resistance, hiding to
// its pseudorandomness.
//
// Pedersen commitment: element-wise c_i = g^{m_i} h^{r_i} mod P in the
// order-q subgroup of Z_P^*, opening = (r_i).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mith/common.hpp"
#include "mith/crypto.hpp"
#include "mith/field.hpp"
#include "mith/random.hpp"

namespace mith {

inline constexpr std::size_t kPrfKeyBytes = 32;

struct PrfKey {
  std::array<std::uint8_t, kPrfKeyBytes> bytes{};

  bool operator==(const PrfKey&) const = default;

  static PrfKey sample(RandomSource& rng) {
    PrfKey k;
    rng.fill(k.bytes);
    return k;
  }
};

inline std::pair<Digest, PrfKey> prf_commit(const PrfKey& k, ByteView m) { return {hmac_sha256(k.bytes, m), k}; }

inline bool prf_verify(ByteView m, const Digest& c, const PrfKey& o) { return digest_equal(hmac_sha256(o.bytes, m), c); }

// --- Pedersen -----------------------------------------------------------------

struct PedersenParams {
  BigInt P;  // group prime
  BigInt q;  // subgroup order, prime, q | P-1
  BigInt g;
  BigInt h;
  ModulusPtr blinder_field;  // F_q

  static PedersenParams make(BigInt P, BigInt q, BigInt g, BigInt h) {
    PedersenParams out{std::move(P), std::move(q), std::move(g), std::move(h), nullptr};
    out.validate();
    out.blinder_field = Modulus::make(out.q);
    return out;
  }

  void validate() const {
    using boost::multiprecision::powm;
    if (!is_probable_prime(P)) throw std::invalid_argument("pedersen: P is not prime");
    if (!is_probable_prime(q)) throw std::invalid_argument("pedersen: q is not prime");
    if ((P - 1) % q != 0) throw std::invalid_argument("pedersen: q does not divide P-1");
    for (const auto* x : {&g, &h}) {
      if (*x <= 1 || *x >= P) throw std::invalid_argument("pedersen: generator out of range");
      if (powm(*x, q, P) != 1) throw std::invalid_argument("pedersen: generator order is not q");
    }
  }

  std::size_t element_width() const { return (bit_length(P) + 7) / 8; }

  // Text format: lines `P <dec>`, `q <dec>`, `g <dec>`, `h <dec>`.
  static PedersenParams parse(std::string_view text) {
    BigInt vals[4];
    bool seen[4] = {false, false, false, false};
    std::istringstream is{std::string(text)};
    for (std::string key, val; is >> key >> val;) {
      int idx = key == "P" ? 0 : key == "q" ? 1 : key == "g" ? 2 : key == "h" ? 3 : -1;
      if (idx < 0) throw std::invalid_argument("pedersen params: unknown key " + key);
      vals[idx] = parse_decimal(val);
      seen[idx] = true;
    }
    for (bool s : seen)
      if (!s) throw std::invalid_argument("pedersen params: missing key");
    return make(vals[0], vals[1], vals[2], vals[3]);
  }

  std::string print() const {
    return "P " + P.str() + "\nq " + q.str() + "\ng " + g.str() + "\nh " + h.str() + "\n";
  }

  // 64-bit safe-prime group. Insecure; for exhaustive tests only.
  static std::shared_ptr<const PedersenParams> test_group() {
    static const auto params = std::make_shared<const PedersenParams>(
        make(BigInt("13835058055282165379"), BigInt("6917529027641082689"), BigInt("3896600969037220591"),
             BigInt("9291087451995708059")));
    return params;
  }

  // 258-bit safe-prime group, q > 2^256 so every shipped field fits.
  static std::shared_ptr<const PedersenParams> default_group() {
    static const auto params = std::make_shared<const PedersenParams>(make(
        BigInt("347376267711948586270712955026063723559809953996921692118372752023739388926023"),
        BigInt("173688133855974293135356477513031861779904976998460846059186376011869694463011"),
        BigInt("182149447395460994647008142790793279247494628222646366342360652331617264715300"),
        BigInt("296980277178225540252366510669627012730300284533416175490740691226054890445284")));
    return params;
  }
};

struct PedersenCommitment {
  std::vector<BigInt> elements;

  bool operator==(const PedersenCommitment&) const = default;
};

inline BigInt pedersen_commit_one(const PedersenParams& pp, const BigInt& m, const BigInt& r) {
  using boost::multiprecision::powm;
  BigInt gm = powm(pp.g, m, pp.P);
  BigInt hr = powm(pp.h, r, pp.P);
  return BigInt(gm * hr % pp.P);
}

inline std::pair<PedersenCommitment, std::vector<FieldElement>> pedersen_commit(const PedersenParams& pp,
                                                                                std::span<const FieldElement> blinders,
                                                                                std::span<const FieldElement> msg) {
  if (blinders.size() != msg.size()) throw std::invalid_argument("pedersen_commit: blinder count differs from message");
  PedersenCommitment c;
  c.elements.reserve(msg.size());
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (msg[i].value() >= pp.q) throw std::invalid_argument("pedersen_commit: message element not below q");
    if (blinders[i].value() >= pp.q) throw std::invalid_argument("pedersen_commit: blinder not below q");
    c.elements.push_back(pedersen_commit_one(pp, msg[i].value(), blinders[i].value()));
  }
  return {std::move(c), std::vector<FieldElement>(blinders.begin(), blinders.end())};
}

inline bool pedersen_verify(const PedersenParams& pp, std::span<const FieldElement> msg, const PedersenCommitment& c,
                            std::span<const FieldElement> opening) {
  if (msg.size() != c.elements.size() || msg.size() != opening.size()) return false;
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (msg[i].value() >= pp.q || opening[i].value() >= pp.q) return false;
    if (pedersen_commit_one(pp, msg[i].value(), opening[i].value()) != c.elements[i]) return false;
  }
  return true;
}

// --- scheme selection ----------------------------------------------------------

enum class SchemeKind : std::uint8_t { Prf = 0x01, Pedersen = 0x02 };

inline std::string_view to_string(SchemeKind k) { return k == SchemeKind::Prf ? "prf" : "pedersen"; }

using Commitment = std::variant<Digest, PedersenCommitment>;
using Opening = std::variant<PrfKey, std::vector<FieldElement>>;

// What gets committed: PRF schemes hash the canonical bytes, Pedersen commits
// to the field elements one by one.
struct CommitInput {
  ByteView bytes;
  std::span<const FieldElement> elements;
};

struct CommitScheme {
  SchemeKind kind = SchemeKind::Prf;
  std::shared_ptr<const PedersenParams> pedersen;

  static CommitScheme prf() { return {SchemeKind::Prf, nullptr}; }
  static CommitScheme with_pedersen(std::shared_ptr<const PedersenParams> pp = PedersenParams::default_group()) {
    return {SchemeKind::Pedersen, std::move(pp)};
  }

  Opening sample_opening(RandomSource& rng, std::size_t element_count) const {
    if (kind == SchemeKind::Prf) return PrfKey::sample(rng);
    return sample_fes(rng, pedersen->blinder_field, element_count);
  }

  Commitment commit(const Opening& o, const CommitInput& in) const {
    if (kind == SchemeKind::Prf) return prf_commit(std::get<PrfKey>(o), in.bytes).first;
    return pedersen_commit(*pedersen, std::get<std::vector<FieldElement>>(o), in.elements).first;
  }

  // False on any shape mismatch between scheme, commitment and opening.
  bool verify(const CommitInput& in, const Commitment& c, const Opening& o) const {
    if (kind == SchemeKind::Prf) {
      const auto* d = std::get_if<Digest>(&c);
      const auto* k = std::get_if<PrfKey>(&o);
      return d && k && prf_verify(in.bytes, *d, *k);
    }
    const auto* pc = std::get_if<PedersenCommitment>(&c);
    const auto* bl = std::get_if<std::vector<FieldElement>>(&o);
    return pc && bl && pedersen_verify(*pedersen, in.elements, *pc, *bl);
  }

  void write_commitment(ByteWriter& w, const Commitment& c) const {
    if (kind == SchemeKind::Prf) {
      w.raw(std::get<Digest>(c));
      return;
    }
    const auto& pc = std::get<PedersenCommitment>(c);
    const auto width = pedersen->element_width();
    w.u32(static_cast<std::uint32_t>(pc.elements.size()));
    for (const auto& e : pc.elements) {
      std::vector<std::uint8_t> out(width, 0);
      BigInt v = e;
      for (std::size_t i = 0; i < width && v != 0; ++i) {
        out[width - 1 - i] = static_cast<std::uint8_t>(static_cast<unsigned>(v & 0xff));
        v >>= 8;
      }
      w.raw(out);
    }
  }

  Commitment read_commitment(ByteReader& r) const {
    if (kind == SchemeKind::Prf) {
      Digest d{};
      auto raw = r.raw(d.size());
      std::copy(raw.begin(), raw.end(), d.begin());
      return d;
    }
    PedersenCommitment pc;
    const auto n = r.u32();
    if (n > r.remaining()) throw DecodeError("pedersen commitment count exceeds input");
    const auto width = pedersen->element_width();
    for (std::uint32_t i = 0; i < n; ++i) {
      BigInt v = 0;
      for (auto b : r.raw(width)) v = (v << 8) | b;
      if (v >= pedersen->P) throw DecodeError("group element not reduced");
      pc.elements.push_back(std::move(v));
    }
    return pc;
  }

  void write_opening(ByteWriter& w, const Opening& o) const {
    if (kind == SchemeKind::Prf) {
      w.raw(std::get<PrfKey>(o).bytes);
      return;
    }
    const auto& bl = std::get<std::vector<FieldElement>>(o);
    w.u32(static_cast<std::uint32_t>(bl.size()));
    for (const auto& b : bl) b.write(w);
  }

  Opening read_opening(ByteReader& r) const {
    if (kind == SchemeKind::Prf) {
      PrfKey k;
      auto raw = r.raw(k.bytes.size());
      std::copy(raw.begin(), raw.end(), k.bytes.begin());
      return k;
    }
    const auto n = r.u32();
    if (n > r.remaining()) throw DecodeError("blinder count exceeds input");
    std::vector<FieldElement> bl;
    bl.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) bl.push_back(FieldElement::read(r, pedersen->blinder_field));
    return bl;
  }
};

}  // namespace mith
