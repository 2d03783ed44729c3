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

// Prime-field arithmetic over arbitrary-precision moduli (up to 1024 bits).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <memory>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mith/common.hpp"
#include "mith/random.hpp"

namespace mith {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kMaxModulusBits = 1024;

inline BigInt parse_decimal(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer: " + std::string(s));
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

// Probabilistic primality with 40 Miller-Rabin rounds (error below 2^-80).
inline bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  std::mt19937_64 gen(0x6d697468);
  return boost::multiprecision::miller_rabin_test(n, 40, gen);
}

inline std::size_t bit_length(const BigInt& v) {
  return v == 0 ? 0 : static_cast<std::size_t>(boost::multiprecision::msb(v)) + 1;
}

class Modulus;
using ModulusPtr = std::shared_ptr<const Modulus>;

class Modulus {
 public:
  // Validates primality and size before construction.
  static ModulusPtr make(const BigInt& p) {
    if (p < 11) throw std::invalid_argument("modulus must be at least 11");
    if (bit_length(p) > kMaxModulusBits) throw std::invalid_argument("modulus exceeds 1024 bits");
    if (!is_probable_prime(p)) throw std::invalid_argument("modulus is not prime: " + p.str());
    return ModulusPtr(new Modulus(p));
  }

  static ModulusPtr from_decimal(std::string_view s) { return make(parse_decimal(s)); }

  const BigInt& value() const { return p_; }
  std::size_t bits() const { return bits_; }
  // Serialized width of one element.
  std::size_t byte_width() const { return (bits_ + 7) / 8; }
  std::string to_decimal() const { return p_.str(); }

  bool operator==(const Modulus& o) const { return p_ == o.p_; }

 private:
  explicit Modulus(BigInt p) : p_(std::move(p)), bits_(bit_length(p_)) {}

  BigInt p_;
  std::size_t bits_;
};

// Shipped moduli. Returns the same instance on every call.
inline ModulusPtr preset_modulus(std::string_view name) {
  static const ModulusPtr p11 = Modulus::make(11);
  static const ModulusPtr p97 = Modulus::make(97);
  static const ModulusPtr p101 = Modulus::make(101);
  static const ModulusPtr p256 = Modulus::make((BigInt(1) << 256) - 189);
  if (name == "11" || name == "f11") return p11;
  if (name == "97" || name == "f97") return p97;
  if (name == "101" || name == "f101") return p101;
  if (name == "p256" || name == "256") return p256;
  throw std::invalid_argument("unknown field preset: " + std::string(name));
}

// Resolves a decimal modulus to the preset instance when one matches, so
// that circuits loaded from different files share one Modulus object.
inline ModulusPtr intern_modulus(const BigInt& p) {
  for (auto name : {"11", "97", "101", "p256"}) {
    auto m = preset_modulus(name);
    if (m->value() == p) return m;
  }
  return Modulus::make(p);
}

inline BigInt mod_inverse(const BigInt& a, const BigInt& p) {
  BigInt r0 = p, r1 = a % p;
  BigInt t0 = 0, t1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    BigInt t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0 != 1) throw std::domain_error("element has no inverse");
  if (t0 < 0) t0 += p;
  return t0;
}

class FieldElement {
 public:
  // Unbound element; any arithmetic on it is a usage error.
  FieldElement() = default;

  FieldElement(ModulusPtr m, BigInt v) : m_(std::move(m)) {
    if (!m_) throw std::invalid_argument("field element without modulus");
    const auto& p = m_->value();
    v_ = std::move(v) % p;
    if (v_ < 0) v_ += p;
  }

  FieldElement(ModulusPtr m, long long v) : FieldElement(std::move(m), BigInt(v)) {}

  static FieldElement zero(ModulusPtr m) { return FieldElement(std::move(m), 0LL); }
  static FieldElement one(ModulusPtr m) { return FieldElement(std::move(m), 1LL); }

  const BigInt& value() const { return v_; }
  const ModulusPtr& modulus() const { return m_; }
  bool bound() const { return m_ != nullptr; }
  bool is_zero() const { return v_ == 0; }

  // Small-field convenience; throws if the value does not fit.
  std::uint64_t to_u64() const { return v_.convert_to<std::uint64_t>(); }

  FieldElement operator+(const FieldElement& o) const {
    check_same(o);
    BigInt r = v_ + o.v_;
    if (r >= m_->value()) r -= m_->value();
    return raw(m_, std::move(r));
  }

  FieldElement operator-(const FieldElement& o) const {
    check_same(o);
    BigInt r = v_ - o.v_;
    if (r < 0) r += m_->value();
    return raw(m_, std::move(r));
  }

  FieldElement operator-() const {
    check_bound();
    return v_ == 0 ? *this : raw(m_, m_->value() - v_);
  }

  FieldElement operator*(const FieldElement& o) const {
    check_same(o);
    return raw(m_, (v_ * o.v_) % m_->value());
  }

  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  // Multiplicative inverse; zero has none.
  FieldElement inv() const {
    check_bound();
    if (v_ == 0) throw std::domain_error("inverse of zero");
    return raw(m_, mod_inverse(v_, m_->value()));
  }

  bool operator==(const FieldElement& o) const {
    if (m_ == o.m_) return v_ == o.v_;
    if (!m_ || !o.m_) return false;
    return *m_ == *o.m_ && v_ == o.v_;
  }

  // Fixed-width big-endian, ceil(bits(p)/8) bytes.
  void write(ByteWriter& w) const {
    check_bound();
    const auto width = m_->byte_width();
    std::vector<std::uint8_t> out(width, 0);
    BigInt v = v_;
    for (std::size_t i = 0; i < width && v != 0; ++i) {
      out[width - 1 - i] = static_cast<std::uint8_t>(static_cast<unsigned>(v & 0xff));
      v >>= 8;
    }
    w.raw(out);
  }

  Bytes to_bytes() const {
    ByteWriter w;
    write(w);
    return std::move(w).take();
  }

  // Rejects encodings of values >= p.
  static FieldElement read(ByteReader& r, const ModulusPtr& m) {
    auto data = r.raw(m->byte_width());
    BigInt v = 0;
    for (auto b : data) v = (v << 8) | b;
    if (v >= m->value()) throw DecodeError("field element not reduced");
    return raw(m, std::move(v));
  }

  static FieldElement from_bytes(ByteView data, const ModulusPtr& m) {
    ByteReader r(data);
    auto fe = read(r, m);
    r.expect_done();
    return fe;
  }

  friend std::ostream& operator<<(std::ostream& os, const FieldElement& fe) { return os << fe.v_; }

 private:
  static FieldElement raw(const ModulusPtr& m, BigInt v) {
    FieldElement fe;
    fe.m_ = m;
    fe.v_ = std::move(v);
    return fe;
  }

  void check_bound() const {
    if (!m_) throw std::invalid_argument("unbound field element");
  }

  void check_same(const FieldElement& o) const {
    check_bound();
    o.check_bound();
    if (m_ != o.m_ && !(*m_ == *o.m_)) throw std::invalid_argument("field modulus mismatch");
  }

  ModulusPtr m_;
  BigInt v_ = 0;
};

enum class ArithKind { Add, Sub, Mul };

inline FieldElement fe_arith(const FieldElement& a, const FieldElement& b, ArithKind kind) {
  switch (kind) {
    case ArithKind::Add: return a + b;
    case ArithKind::Sub: return a - b;
    case ArithKind::Mul: return a * b;
  }
  throw std::invalid_argument("unknown arithmetic kind");
}

inline FieldElement fe_inv(const FieldElement& a) { return a.inv(); }

using Point = std::pair<FieldElement, FieldElement>;

// Value at zero of the unique polynomial of degree |points|-1 through the
// given points. x-coordinates must be distinct and nonzero.
inline FieldElement lagrange_at_zero(std::span<const Point> points) {
  if (points.empty() || points.size() > 5) throw std::domain_error("lagrange_at_zero: need 1..5 points");
  const auto& m = points.front().first.modulus();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].first.is_zero()) throw std::domain_error("lagrange_at_zero: zero x-coordinate");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i].first == points[j].first) throw std::domain_error("lagrange_at_zero: duplicate x-coordinate");
    }
  }
  auto acc = FieldElement::zero(m);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto num = FieldElement::one(m);
    auto den = FieldElement::one(m);
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      num *= points[j].first;
      den *= points[j].first - points[i].first;
    }
    acc += points[i].second * num * den.inv();
  }
  return acc;
}

// Uniform element by rejection on ceil(bits/8)-byte draws masked to bits(p).
inline FieldElement sample_fe(RandomSource& rng, const ModulusPtr& m) {
  const auto width = m->byte_width();
  const unsigned top_bits = static_cast<unsigned>(m->bits() - 8 * (width - 1));
  const std::uint8_t mask = static_cast<std::uint8_t>(top_bits >= 8 ? 0xff : (1u << top_bits) - 1);
  std::vector<std::uint8_t> buf(width);
  for (;;) {
    rng.fill(buf);
    buf[0] &= mask;
    BigInt v = 0;
    for (auto b : buf) v = (v << 8) | b;
    if (v < m->value()) return FieldElement(m, std::move(v));
  }
}

inline std::vector<FieldElement> sample_fes(RandomSource& rng, const ModulusPtr& m, std::size_t n) {
  std::vector<FieldElement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_fe(rng, m));
  return out;
}

}  // namespace mith
