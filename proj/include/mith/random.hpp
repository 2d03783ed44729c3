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

#pragma once

#include <openssl/rand.h>

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <stdexcept>

#include "mith/common.hpp"

namespace mith {

// Source of uniform bytes. Instances are single-owner; give each thread or
// protocol run its own source.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  std::uint64_t next_u64() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = v << 8 | x;
    return v;
  }

  // Uniform in [0, bound) by rejection.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      auto v = next_u64();
      if (v < limit) return v % bound;
    }
  }
};

// Deterministic stream for tests and reproducible experiments. Not for
// production proofs.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  void fill(std::span<std::uint8_t> out) override {
    for (auto& b : out) {
      if (avail_ == 0) {
        word_ = engine_();
        avail_ = 8;
      }
      b = static_cast<std::uint8_t>(word_);
      word_ >>= 8;
      --avail_;
    }
  }

  // Independent child stream; the parent advances by one draw.
  SeededRandom fork() { return SeededRandom(engine_()); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t word_ = 0;
  int avail_ = 0;
};

// Operating-system entropy through OpenSSL's DRBG.
class OsRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
      throw std::runtime_error("RAND_bytes failed");
    }
  }
};

// Replays a fixed byte script, then falls back to zeros. Used to drive
// samplers with chosen values when enumerating distributions exactly.
class ScriptedRandom final : public RandomSource {
 public:
  ScriptedRandom() = default;
  explicit ScriptedRandom(ByteView script) : script_(script.begin(), script.end()) {}

  void push(std::uint8_t b) { script_.push_back(b); }

  void fill(std::span<std::uint8_t> out) override {
    for (auto& b : out) {
      if (script_.empty()) {
        b = 0;
        ++overrun_;
      } else {
        b = script_.front();
        script_.pop_front();
      }
    }
  }

  std::size_t remaining() const { return script_.size(); }
  std::size_t overrun() const { return overrun_; }

 private:
  std::deque<std::uint8_t> script_;
  std::size_t overrun_ = 0;
};

}  // namespace mith
