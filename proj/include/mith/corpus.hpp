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


// Circuit generators and small-field enumeration used by tests, the
// experiment harness and the benchmarks.

#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mith/circuit.hpp"
#include "mith/random.hpp"

namespace mith {

struct RandomCircuitOptions {
  int np = 1;
  int ns = 1;
  int max_depth = 6;
  bool allow_smul = true;
};

namespace detail {

class CircuitGenerator {
 public:
  CircuitGenerator(RandomSource& rng, ModulusPtr m, const RandomCircuitOptions& opt) : rng_(rng), m_(std::move(m)), opt_(opt) {}

  Circuit run() {
    auto root = node(opt_.max_depth, false);
    Circuit c{{opt_.np, opt_.ns, gates_}, std::move(root), m_};
    validate_circuit(c);
    return c;
  }

 private:
  // Gate ids increase with gaps so relabelling paths get exercised.
  int next_id() {
    ++gates_;
    id_ += 1 + static_cast<int>(rng_.uniform(3));
    return id_;
  }

  GatePtr leaf(bool public_only) {
    const auto pick = rng_.uniform(3);
    if (pick == 0 || (public_only && opt_.np == 0)) {
      return Gate::constant(next_id(), FieldElement(m_, static_cast<long long>(rng_.uniform(1000))));
    }
    if (public_only || (pick == 1 && opt_.np > 0)) return Gate::pinput(static_cast<int>(rng_.uniform(opt_.np)));
    return Gate::sinput(static_cast<int>(rng_.uniform(opt_.ns)));
  }

  GatePtr node(int depth, bool public_only) {
    if (depth <= 0 || rng_.uniform(4) == 0) return leaf(public_only);
    const auto pick = rng_.uniform(opt_.allow_smul ? 3 : 2);
    if (pick == 2) {
      auto l = node(depth - 1, true);
      auto r = node(depth - 1, public_only);
      return Gate::smul(next_id(), std::move(l), std::move(r));
    }
    auto l = node(depth - 1, public_only);
    auto r = node(depth - 1, public_only);
    return pick == 0 ? Gate::add(next_id(), std::move(l), std::move(r)) : Gate::mul(next_id(), std::move(l), std::move(r));
  }

  RandomSource& rng_;
  ModulusPtr m_;
  RandomCircuitOptions opt_;
  int gates_ = 0;
  int id_ = 0;
};

}  // namespace detail

// Random tree of depth at most opt.max_depth.
inline Circuit random_circuit(RandomSource& rng, const ModulusPtr& m, const RandomCircuitOptions& opt = {}) {
  return detail::CircuitGenerator(rng, m, opt).run();
}

inline std::vector<FieldElement> random_inputs(RandomSource& rng, const ModulusPtr& m, int n) {
  return sample_fes(rng, m, static_cast<std::size_t>(n));
}

// Every witness over a small field, in lexicographic order.
inline std::vector<Witness> all_witnesses(const Circuit& c) {
  const auto p = c.modulus->value().convert_to<std::uint64_t>();
  if (c.modulus->bits() > 16) throw std::invalid_argument("all_witnesses: field too large to enumerate");
  std::vector<Witness> out;
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(c.topology.ns), 0);
  for (;;) {
    Witness w;
    for (auto d : digits) w.secret_inputs.emplace_back(c.modulus, static_cast<long long>(d));
    out.push_back(std::move(w));
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == p) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return out;
}

// Output values reachable by some witness for fixed public inputs.
inline std::set<std::uint64_t> circuit_image(const Circuit& c, std::span<const FieldElement> pub) {
  std::set<std::uint64_t> out;
  for (const auto& w : all_witnesses(c)) out.insert(eval_gate(*c.root, pub, w.secret_inputs).to_u64());
  return out;
}

// Smallest value outside the image, if the circuit is not surjective.
inline std::optional<FieldElement> unreachable_target(const Circuit& c, std::span<const FieldElement> pub) {
  auto image = circuit_image(c, pub);
  const auto p = c.modulus->value().convert_to<std::uint64_t>();
  for (std::uint64_t v = 0; v < p; ++v)
    if (!image.contains(v)) return FieldElement(c.modulus, static_cast<long long>(v));
  return std::nullopt;
}

// Deterministic public inputs 1, 2, ..., np.
inline std::vector<FieldElement> default_public_inputs(const Circuit& c) {
  std::vector<FieldElement> out;
  for (int k = 0; k < c.topology.np; ++k) out.emplace_back(c.modulus, static_cast<long long>(k + 1));
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CorpusEntry {
  std::string name;
  std::string text;
  Circuit circuit;
};

// All *.arith files of a directory, sorted by file name.
inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".arith") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) {
    auto text = read_text_file(f);
    auto c = parse_circuit(text);
    out.push_back({f.filename().string(), std::move(text), std::move(c)});
  }
  return out;
}

// Benchmark circuits. x*x*x + c: 7 tree nodes, 2 multiplications.
inline Circuit bench_circuit_7(const ModulusPtr& m, long long c = 5) {
  auto x = [] { return Gate::sinput(0); };
  auto root = Gate::add(4, Gate::mul(2, Gate::mul(1, x(), x()), x()), Gate::constant(3, FieldElement(m, c)));
  Circuit out{{0, 1, 4}, root, m};
  validate_circuit(out);
  return out;
}

// x*x*x + (x*x + c): 11 tree nodes, 3 multiplications.
inline Circuit bench_circuit_11(const ModulusPtr& m, long long c = 5) {
  auto x = [] { return Gate::sinput(0); };
  auto cube = Gate::mul(2, Gate::mul(1, x(), x()), x());
  auto square_plus = Gate::add(5, Gate::mul(3, x(), x()), Gate::constant(4, FieldElement(m, c)));
  Circuit out{{0, 1, 6}, Gate::add(6, cube, square_plus), m};
  validate_circuit(out);
  return out;
}

}  // namespace mith
