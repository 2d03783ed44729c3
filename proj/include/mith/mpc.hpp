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

// In-the-head five-party BGW evaluation of arithmetic circuits.
//
// Every party holds a degree-2 Shamir share of each wire. Addition, scalar
// multiplication and constants are local. A multiplication gate multiplies
// shares locally (a point on a degree-4 polynomial), reshares that point with
// a fresh degree-2 polynomial and recombines the received subshares with the
// degree-4 Lagrange coefficients at zero. After the root, every party adds
// fresh sharings of zero (refresh) and broadcasts its share; the output is the
// interpolation of the five broadcast values.
//
// A party's trace lists one entry per circuit node in post-order, followed by
// one Open entry:
//
//   Multiplication   payload = h_1(i) .. h_5(i)          (subshares received)
//   Open             payload = z_1(i) .. z_5(i), b_1 .. b_5
//   anything else    payload = empty
//
// The scalar side of an SMultiplication contains no secret input; each party
// evaluates it in the clear, so its nodes carry empty entries and consume no
// randomness even when they are multiplications.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mith/circuit.hpp"
#include "mith/common.hpp"
#include "mith/field.hpp"
#include "mith/sss.hpp"

namespace mith {

template <typename T>
using PerParty = std::array<T, kParties>;

// Multiplication gates that run the interactive subprotocol, ascending by id.
inline std::vector<int> interactive_mul_gates(const Circuit& c) {
  std::vector<int> ids;
  std::function<void(const Gate&)> walk = [&](const Gate& g) {
    if (g.kind == GateKind::SMultiplication) {
      walk(*g.right);
      return;
    }
    if (g.left) walk(*g.left);
    if (g.right) walk(*g.right);
    if (g.kind == GateKind::Multiplication) ids.push_back(g.label);
  };
  walk(*c.root);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// One resharing polynomial per party for each interactive multiplication,
// plus one zero-sharing polynomial per party for the output refresh.
struct GateRandomness {
  std::map<int, PerParty<SSRandomness>> mul;
  PerParty<SSRandomness> refresh;
};

inline GateRandomness sample_gate_randomness(RandomSource& rng, const Circuit& c) {
  GateRandomness r;
  for (int id : interactive_mul_gates(c)) {
    auto& slot = r.mul[id];
    for (auto& x : slot) x = sample_ss_randomness(rng, c.modulus);
  }
  for (auto& x : r.refresh) x = sample_ss_randomness(rng, c.modulus);
  return r;
}

struct PartyRandomness {
  std::vector<std::pair<int, SSRandomness>> mul;  // ascending gate id
  SSRandomness refresh;

  bool operator==(const PartyRandomness&) const = default;

  const SSRandomness* find(int gate_id) const {
    auto it = std::lower_bound(mul.begin(), mul.end(), gate_id, [](const auto& e, int id) { return e.first < id; });
    return it != mul.end() && it->first == gate_id ? &it->second : nullptr;
  }
};

enum class TraceKind : std::uint8_t {
  PInput = 1,
  SInput = 2,
  Constant = 3,
  Addition = 4,
  Multiplication = 5,
  SMultiplication = 6,
  Open = 7,
};

inline constexpr std::uint32_t kOpenLabel = 0xffffffffu;
inline constexpr std::size_t kOpenPayload = 2 * kParties;

struct TraceEntry {
  TraceKind kind;
  std::uint32_t label;
  std::vector<FieldElement> payload;

  bool operator==(const TraceEntry&) const = default;
};

struct View {
  std::vector<FieldElement> public_inputs;
  std::vector<FieldElement> secret_shares;
  PartyRandomness randomness;
  std::vector<TraceEntry> trace;

  bool operator==(const View&) const = default;
};

struct ExecutionResult {
  PerParty<View> views;
  PerParty<FieldElement> outputs;
};

struct TraceShape {
  TraceKind kind;
  std::uint32_t label;
  std::size_t payload;

  bool operator==(const TraceShape&) const = default;
};

inline std::vector<TraceShape> trace_shape(const Circuit& c) {
  std::vector<TraceShape> out;
  std::function<void(const Gate&, bool)> walk = [&](const Gate& g, bool in_public) {
    if (g.left) walk(*g.left, in_public || g.kind == GateKind::SMultiplication);
    if (g.right) walk(*g.right, in_public);
    bool interactive = g.kind == GateKind::Multiplication && !in_public;
    out.push_back({static_cast<TraceKind>(g.kind), static_cast<std::uint32_t>(g.label), interactive ? kParties : 0u});
  };
  walk(*c.root, false);
  out.push_back({TraceKind::Open, kOpenLabel, kOpenPayload});
  return out;
}

// --- gate subprotocols ----------------------------------------------------------

inline Sharing gate_add(const Sharing& l, const Sharing& r) {
  Sharing out;
  for (std::size_t i = 0; i < kParties; ++i) out.shares[i] = l.shares[i] + r.shares[i];
  return out;
}

// scalar is a public encoding; each party scales by its copy.
inline Sharing gate_smul(const Sharing& scalar, const Sharing& x) {
  Sharing out;
  for (std::size_t i = 0; i < kParties; ++i) out.shares[i] = scalar.shares[i] * x.shares[i];
  return out;
}

inline Sharing gate_const(const FieldElement& v) { return public_encoding(v); }

struct MulGateResult {
  Sharing output;
  // messages[i][j] = h_{i+1}(j+1), sent by party i+1 to party j+1.
  PerParty<PerParty<FieldElement>> messages;
};

inline MulGateResult gate_mul(const Sharing& l, const Sharing& r, const PerParty<SSRandomness>& rand) {
  const auto& m = l.shares[0].modulus();
  const auto& lambda = reconstruction_coefficients(m);
  MulGateResult res;
  for (auto i : kAllParties) {
    auto d = l[i] * r[i];
    for (auto j : kAllParties) res.messages[i.index()][j.index()] = eval_share_poly(d, rand[i.index()], j.point(m));
  }
  for (auto j : kAllParties) {
    auto acc = FieldElement::zero(m);
    for (auto i : kAllParties) acc += lambda[i.index()] * res.messages[i.index()][j.index()];
    res.output[j] = acc;
  }
  return res;
}

struct RefreshResult {
  Sharing refreshed;  // also the broadcast vector
  PerParty<PerParty<FieldElement>> zero_messages;  // [i][j] = z_{i+1}(j+1)
  FieldElement y;
};

inline RefreshResult refresh_and_open(const Sharing& sh, const PerParty<SSRandomness>& rand) {
  const auto& m = sh.shares[0].modulus();
  const auto zero = FieldElement::zero(m);
  RefreshResult res;
  res.refreshed = sh;
  for (auto i : kAllParties) {
    for (auto j : kAllParties) {
      auto z = eval_share_poly(zero, rand[i.index()], j.point(m));
      res.zero_messages[i.index()][j.index()] = z;
      res.refreshed[j] += z;
    }
  }
  res.y = reconstruct(res.refreshed);
  return res;
}

// --- honest execution ------------------------------------------------------------

// Called after each gate with the wire's sharing.
using WireObserver = std::function<void(const Gate&, const Sharing&)>;

namespace detail {

inline void mirror_public(const Gate& g, PerParty<std::vector<TraceEntry>>& traces) {
  if (g.left) mirror_public(*g.left, traces);
  if (g.right) mirror_public(*g.right, traces);
  for (auto& t : traces) t.push_back({static_cast<TraceKind>(g.kind), static_cast<std::uint32_t>(g.label), {}});
}

class ProtocolRun {
 public:
  ProtocolRun(const Circuit& c, std::span<const FieldElement> pub, std::span<const Sharing> inputs,
              const GateRandomness& rand, const WireObserver& obs)
      : c_(c), pub_(pub), inputs_(inputs), rand_(rand), obs_(obs) {}

  ExecutionResult run() {
    auto root = eval(*c_.root);
    auto opened = refresh_and_open(root, rand_.refresh);
    for (auto j : kAllParties) {
      TraceEntry e{TraceKind::Open, kOpenLabel, {}};
      for (auto i : kAllParties) e.payload.push_back(opened.zero_messages[i.index()][j.index()]);
      for (auto i : kAllParties) e.payload.push_back(opened.refreshed[i]);
      traces_[j.index()].push_back(std::move(e));
    }
    ExecutionResult res;
    for (auto j : kAllParties) {
      auto& v = res.views[j.index()];
      v.public_inputs.assign(pub_.begin(), pub_.end());
      for (const auto& s : inputs_) v.secret_shares.push_back(s[j]);
      for (const auto& [id, slot] : rand_.mul) v.randomness.mul.emplace_back(id, slot[j.index()]);
      v.randomness.refresh = rand_.refresh[j.index()];
      v.trace = std::move(traces_[j.index()]);
      res.outputs[j.index()] = opened.y;
    }
    return res;
  }

 private:
  void push_empty(const Gate& g) {
    for (auto& t : traces_) t.push_back({static_cast<TraceKind>(g.kind), static_cast<std::uint32_t>(g.label), {}});
  }

  Sharing eval(const Gate& g) {
    Sharing out;
    switch (g.kind) {
      case GateKind::PInput:
        out = public_encoding(pub_[static_cast<std::size_t>(g.label)]);
        push_empty(g);
        break;
      case GateKind::SInput:
        out = inputs_[static_cast<std::size_t>(g.label)];
        push_empty(g);
        break;
      case GateKind::Constant:
        out = gate_const(g.value);
        push_empty(g);
        break;
      case GateKind::Addition: {
        auto l = eval(*g.left);
        auto r = eval(*g.right);
        out = gate_add(l, r);
        push_empty(g);
        break;
      }
      case GateKind::SMultiplication: {
        mirror_public(*g.left, traces_);
        auto scalar = eval_public(*g.left, pub_);
        auto r = eval(*g.right);
        out = gate_smul(public_encoding(scalar), r);
        push_empty(g);
        break;
      }
      case GateKind::Multiplication: {
        auto l = eval(*g.left);
        auto r = eval(*g.right);
        auto it = rand_.mul.find(g.label);
        if (it == rand_.mul.end())
          throw std::invalid_argument("run_protocol: no randomness for gate " + std::to_string(g.label));
        auto res = gate_mul(l, r, it->second);
        for (auto j : kAllParties) {
          TraceEntry e{TraceKind::Multiplication, static_cast<std::uint32_t>(g.label), {}};
          for (auto i : kAllParties) e.payload.push_back(res.messages[i.index()][j.index()]);
          traces_[j.index()].push_back(std::move(e));
        }
        out = std::move(res.output);
        break;
      }
    }
    if (obs_) obs_(g, out);
    return out;
  }

  const Circuit& c_;
  std::span<const FieldElement> pub_;
  std::span<const Sharing> inputs_;
  const GateRandomness& rand_;
  const WireObserver& obs_;
  PerParty<std::vector<TraceEntry>> traces_;
};

}  // namespace detail

// Evaluates the circuit on one sharing per secret wire. Every party ends with
// the same opened output.
inline ExecutionResult run_protocol(const Circuit& c, std::span<const FieldElement> public_inputs,
                                    std::span<const Sharing> input_sharings, const GateRandomness& rand,
                                    const WireObserver& observer = {}) {
  if (static_cast<int>(public_inputs.size()) != c.topology.np)
    throw std::invalid_argument("run_protocol: public input count differs from topology");
  if (static_cast<int>(input_sharings.size()) != c.topology.ns)
    throw std::invalid_argument("run_protocol: need one sharing per secret wire");
  return detail::ProtocolRun(c, public_inputs, input_sharings, rand, observer).run();
}

inline ExecutionResult run_protocol(const Statement& s, std::span<const Sharing> input_sharings,
                                    const GateRandomness& rand) {
  return run_protocol(s.circuit, s.public_inputs, input_sharings, rand);
}

// --- view-local recomputation ------------------------------------------------------

// Shape-valid: input counts match the topology, randomness covers exactly
// the interactive multiplications, trace mirrors the circuit, and every
// element lives in the circuit's field.
inline bool valid_view(const Circuit& c, const View& v) {
  const auto& m = *c.modulus;
  auto in_field = [&](const FieldElement& x) { return x.bound() && *x.modulus() == m; };
  if (static_cast<int>(v.public_inputs.size()) != c.topology.np) return false;
  if (static_cast<int>(v.secret_shares.size()) != c.topology.ns) return false;
  if (!std::all_of(v.public_inputs.begin(), v.public_inputs.end(), in_field)) return false;
  if (!std::all_of(v.secret_shares.begin(), v.secret_shares.end(), in_field)) return false;
  auto ids = interactive_mul_gates(c);
  if (ids.size() != v.randomness.mul.size()) return false;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const auto& [id, r] = v.randomness.mul[k];
    if (id != ids[k] || !in_field(r.a1) || !in_field(r.a2)) return false;
  }
  if (!in_field(v.randomness.refresh.a1) || !in_field(v.randomness.refresh.a2)) return false;
  auto shape = trace_shape(c);
  if (shape.size() != v.trace.size()) return false;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const auto& e = v.trace[k];
    if (e.kind != shape[k].kind || e.label != shape[k].label || e.payload.size() != shape[k].payload) return false;
    if (!std::all_of(e.payload.begin(), e.payload.end(), in_field)) return false;
  }
  return true;
}

// Everything one party computes from its own view.
struct PartyReplay {
  // Mirrors the trace. Multiplication: h_i(1..5). Open: z_i(1..5), b_i.
  std::vector<TraceEntry> out_messages;
  FieldElement root_share;
  FieldElement refreshed_share;
};

namespace detail {

class Replayer {
 public:
  Replayer(const Circuit& c, const View& v) : c_(c), v_(v) {}

  PartyReplay run() {
    PartyReplay out;
    out.root_share = eval(*c_.root);
    const auto& m = c_.modulus;
    const auto& rnd = v_.randomness.refresh;
    const auto& open = v_.trace[pos_];
    TraceEntry e{TraceKind::Open, kOpenLabel, {}};
    auto refreshed = out.root_share;
    for (auto j : kAllParties) e.payload.push_back(eval_share_poly(FieldElement::zero(m), rnd, j.point(m)));
    for (std::size_t k = 0; k < kParties; ++k) refreshed += open.payload[k];
    e.payload.push_back(refreshed);
    out_.push_back(std::move(e));
    out.refreshed_share = std::move(refreshed);
    out.out_messages = std::move(out_);
    return out;
  }

 private:
  void skip_public(const Gate& g) {
    std::size_t n = node_count(g);
    for (std::size_t k = 0; k < n; ++k) out_.push_back({v_.trace[pos_ + k].kind, v_.trace[pos_ + k].label, {}});
    pos_ += n;
  }

  void emit_empty() {
    out_.push_back({v_.trace[pos_].kind, v_.trace[pos_].label, {}});
    ++pos_;
  }

  FieldElement eval(const Gate& g) {
    switch (g.kind) {
      case GateKind::PInput: emit_empty(); return v_.public_inputs[static_cast<std::size_t>(g.label)];
      case GateKind::SInput: emit_empty(); return v_.secret_shares[static_cast<std::size_t>(g.label)];
      case GateKind::Constant: emit_empty(); return g.value;
      case GateKind::Addition: {
        auto l = eval(*g.left);
        auto r = eval(*g.right);
        emit_empty();
        return l + r;
      }
      case GateKind::SMultiplication: {
        skip_public(*g.left);
        auto scalar = eval_public(*g.left, v_.public_inputs);
        auto r = eval(*g.right);
        emit_empty();
        return scalar * r;
      }
      case GateKind::Multiplication: {
        auto l = eval(*g.left);
        auto r = eval(*g.right);
        const auto& m = c_.modulus;
        const auto* rnd = v_.randomness.find(g.label);
        auto d = l * r;
        TraceEntry e{TraceKind::Multiplication, static_cast<std::uint32_t>(g.label), {}};
        for (auto j : kAllParties) e.payload.push_back(eval_share_poly(d, *rnd, j.point(m)));
        const auto& in = v_.trace[pos_].payload;
        const auto& lambda = reconstruction_coefficients(m);
        auto acc = FieldElement::zero(m);
        for (std::size_t k = 0; k < kParties; ++k) acc += lambda[k] * in[k];
        out_.push_back(std::move(e));
        ++pos_;
        return acc;
      }
    }
    throw std::invalid_argument("unknown gate kind");
  }

  const Circuit& c_;
  const View& v_;
  std::size_t pos_ = 0;
  std::vector<TraceEntry> out_;
};

}  // namespace detail

// nullopt plays the role of the distinguished invalid-trace value.
inline std::optional<PartyReplay> replay_party(const Circuit& c, PartyId, const View& v) {
  if (!valid_view(c, v)) return std::nullopt;
  return detail::Replayer(c, v).run();
}

// Every message pid sent, recomputed from its view alone.
inline std::optional<std::vector<TraceEntry>> out_messages(const Circuit& c, PartyId pid, const View& v) {
  auto r = replay_party(c, pid, v);
  if (!r) return std::nullopt;
  return std::move(r->out_messages);
}

// Interpolates the recorded broadcast with pid's own recomputed share in its
// slot.
inline std::optional<FieldElement> local_output(const Circuit& c, PartyId pid, const View& v) {
  auto r = replay_party(c, pid, v);
  if (!r) return std::nullopt;
  const auto& open = v.trace.back().payload;
  Sharing b;
  for (std::size_t k = 0; k < kParties; ++k) b.shares[k] = open[kParties + k];
  b[pid] = r->refreshed_share;
  return reconstruct(b);
}

namespace detail {

// Messages recorded in `view` as coming from `sender` equal what sender's
// replay says it sent to `owner`.
inline bool incoming_match(const View& view, PartyId owner, PartyId sender, const std::vector<TraceEntry>& sender_out) {
  for (std::size_t k = 0; k < view.trace.size(); ++k) {
    const auto& rec = view.trace[k];
    const auto& sent = sender_out[k].payload;
    if (rec.kind == TraceKind::Multiplication && !rec.payload.empty()) {
      if (!(rec.payload[sender.index()] == sent[owner.index()])) return false;
    } else if (rec.kind == TraceKind::Open) {
      if (!(rec.payload[sender.index()] == sent[owner.index()])) return false;
      if (!(rec.payload[kParties + sender.index()] == sent[kParties])) return false;
    }
  }
  return true;
}

}  // namespace detail

// Pairwise consistency: both views carry the public input x, both are
// shape-valid, and the messages each recorded from the other (and from
// itself) are exactly those the sender's view implies.
inline bool consistent_views(const Circuit& c, std::span<const FieldElement> x, const View& vi, const View& vj, PartyId i,
                             PartyId j) {
  if (i == j) return false;
  auto same_x = [&](const View& v) { return std::equal(x.begin(), x.end(), v.public_inputs.begin(), v.public_inputs.end()); };
  if (!same_x(vi) || !same_x(vj)) return false;
  auto ri = replay_party(c, i, vi);
  auto rj = replay_party(c, j, vj);
  if (!ri || !rj) return false;
  return detail::incoming_match(vi, i, j, rj->out_messages) && detail::incoming_match(vj, j, i, ri->out_messages) &&
         detail::incoming_match(vi, i, i, ri->out_messages) && detail::incoming_match(vj, j, j, rj->out_messages);
}

inline bool all_pairs_consistent(const Circuit& c, std::span<const FieldElement> x, const PerParty<View>& views) {
  for (auto i : kAllParties)
    for (auto j : kAllParties)
      if (i < j && !consistent_views(c, x, views[i.index()], views[j.index()], i, j)) return false;
  return true;
}

// Rebuilds inputs and randomness from five views and runs the protocol again.
// nullopt when a view is not shape-valid.
inline std::optional<ExecutionResult> reexecute_from_views(const Circuit& c, std::span<const FieldElement> x,
                                                           const PerParty<View>& views) {
  for (const auto& v : views)
    if (!valid_view(c, v)) return std::nullopt;
  std::vector<Sharing> inputs(static_cast<std::size_t>(c.topology.ns));
  for (std::size_t w = 0; w < inputs.size(); ++w)
    for (auto p : kAllParties) inputs[w][p] = views[p.index()].secret_shares[w];
  GateRandomness rand;
  for (auto p : kAllParties) {
    for (const auto& [id, r] : views[p.index()].randomness.mul) rand.mul[id][p.index()] = r;
    rand.refresh[p.index()] = views[p.index()].randomness.refresh;
  }
  return run_protocol(c, x, inputs, rand);
}

// --- 2-privacy simulator ------------------------------------------------------------

namespace detail {

class PairSimulator {
 public:
  PairSimulator(const Circuit& c, std::span<const FieldElement> x, PartyId i, PartyId j, RandomSource& rng)
      : c_(c), x_(x), ids_{i, j}, rng_(rng) {}

  std::pair<View, View> run(const std::pair<std::vector<FieldElement>, std::vector<FieldElement>>& shares,
                            const FieldElement& y) {
    const auto& m = c_.modulus;
    for (std::size_t s = 0; s < 2; ++s) {
      views_[s].public_inputs.assign(x_.begin(), x_.end());
      views_[s].secret_shares = s == 0 ? shares.first : shares.second;
    }
    for (int id : interactive_mul_gates(c_)) {
      for (auto& v : views_) v.randomness.mul.emplace_back(id, sample_ss_randomness(rng_, m));
    }
    for (auto& v : views_) v.randomness.refresh = sample_ss_randomness(rng_, m);

    auto root = eval(*c_.root);

    // Zero-sharing subshares: corrupt senders follow their randomness, honest
    // senders' subshares are uniform.
    const auto zero = FieldElement::zero(m);
    PerParty<std::array<FieldElement, 2>> z_in;
    for (auto k : kAllParties) {
      auto s = corrupt_slot(k);
      for (std::size_t t = 0; t < 2; ++t) {
        z_in[k.index()][t] = s ? eval_share_poly(zero, views_[*s].randomness.refresh, ids_[t].point(m))
                               : sample_fe(rng_, m);
      }
    }
    std::array<FieldElement, 2> b;
    for (std::size_t t = 0; t < 2; ++t) {
      b[t] = root[t];
      for (auto k : kAllParties) b[t] += z_in[k.index()][t];
    }
    // The refreshed sharing is the degree-2 polynomial through (0, y),
    // (i, b_i), (j, b_j).
    std::array<FieldElement, kParties> broadcast;
    const auto xi = ids_[0].point(m), xj = ids_[1].point(m);
    for (auto k : kAllParties) {
      auto s = corrupt_slot(k);
      if (s) {
        broadcast[k.index()] = b[*s];
        continue;
      }
      const auto xk = k.point(m);
      auto l0 = (xk - xi) * (xk - xj) * (xi * xj).inv();
      auto li = (xk - zero) * (xk - xj) * (xi * (xi - xj)).inv();
      auto lj = (xk - zero) * (xk - xi) * (xj * (xj - xi)).inv();
      broadcast[k.index()] = y * l0 + b[0] * li + b[1] * lj;
    }
    for (std::size_t t = 0; t < 2; ++t) {
      TraceEntry e{TraceKind::Open, kOpenLabel, {}};
      for (auto k : kAllParties) e.payload.push_back(z_in[k.index()][t]);
      for (auto& v : broadcast) e.payload.push_back(v);
      views_[t].trace.push_back(std::move(e));
    }
    return {std::move(views_[0]), std::move(views_[1])};
  }

 private:
  using Pair = std::array<FieldElement, 2>;

  std::optional<std::size_t> corrupt_slot(PartyId k) const {
    if (k == ids_[0]) return 0;
    if (k == ids_[1]) return 1;
    return std::nullopt;
  }

  void push_empty(const Gate& g) {
    for (auto& v : views_) v.trace.push_back({static_cast<TraceKind>(g.kind), static_cast<std::uint32_t>(g.label), {}});
  }

  Pair eval(const Gate& g) {
    switch (g.kind) {
      case GateKind::PInput: {
        push_empty(g);
        const auto& v = x_[static_cast<std::size_t>(g.label)];
        return {v, v};
      }
      case GateKind::SInput:
        push_empty(g);
        return {views_[0].secret_shares[static_cast<std::size_t>(g.label)],
                views_[1].secret_shares[static_cast<std::size_t>(g.label)]};
      case GateKind::Constant: push_empty(g); return {g.value, g.value};
      case GateKind::Addition: {
        auto l = eval(*g.left);
        auto r = eval(*g.right);
        push_empty(g);
        return {l[0] + r[0], l[1] + r[1]};
      }
      case GateKind::SMultiplication: {
        PerParty<std::vector<TraceEntry>> scratch;
        mirror_public(*g.left, scratch);
        for (auto& v : views_) v.trace.insert(v.trace.end(), scratch[0].begin(), scratch[0].end());
        auto scalar = eval_public(*g.left, x_);
        auto r = eval(*g.right);
        push_empty(g);
        return {scalar * r[0], scalar * r[1]};
      }
      case GateKind::Multiplication: {
        auto l = eval(*g.left);
        auto r = eval(*g.right);
        const auto& m = c_.modulus;
        PerParty<Pair> in;
        for (auto k : kAllParties) {
          auto s = corrupt_slot(k);
          for (std::size_t t = 0; t < 2; ++t) {
            if (s) {
              auto d = l[*s] * r[*s];
              in[k.index()][t] = eval_share_poly(d, *views_[*s].randomness.find(g.label), ids_[t].point(m));
            } else {
              in[k.index()][t] = sample_fe(rng_, m);
            }
          }
        }
        const auto& lambda = reconstruction_coefficients(m);
        Pair out{FieldElement::zero(m), FieldElement::zero(m)};
        for (std::size_t t = 0; t < 2; ++t) {
          TraceEntry e{TraceKind::Multiplication, static_cast<std::uint32_t>(g.label), {}};
          for (auto k : kAllParties) {
            e.payload.push_back(in[k.index()][t]);
            out[t] += lambda[k.index()] * in[k.index()][t];
          }
          views_[t].trace.push_back(std::move(e));
        }
        return out;
      }
    }
    throw std::invalid_argument("unknown gate kind");
  }

  const Circuit& c_;
  std::span<const FieldElement> x_;
  std::array<PartyId, 2> ids_;
  RandomSource& rng_;
  std::array<View, 2> views_;
};

}  // namespace detail

// Joint views of two corrupt parties from their input shares and the output
// alone. Randomness is drawn in a fixed order: per interactive multiplication
// (ascending id) the two parties' resharing polynomials, then their refresh
// polynomials, then honest subshares gate by gate in post-order, then honest
// zero-sharing subshares.
inline std::pair<View, View> mpc_simulate(const Circuit& c, std::span<const FieldElement> x,
                                          std::pair<PartyId, PartyId> corrupt,
                                          const std::pair<std::vector<FieldElement>, std::vector<FieldElement>>& shares,
                                          const FieldElement& y, RandomSource& rng) {
  if (corrupt.first == corrupt.second) throw std::invalid_argument("mpc_simulate: corrupt parties must be distinct");
  if (static_cast<int>(shares.first.size()) != c.topology.ns || static_cast<int>(shares.second.size()) != c.topology.ns)
    throw std::invalid_argument("mpc_simulate: need one share per secret wire");
  return detail::PairSimulator(c, x, corrupt.first, corrupt.second, rng).run(shares, y);
}

// --- canonical view encoding --------------------------------------------------------

inline constexpr std::uint8_t kViewTag = 0x56;

// Tag 0x56; public inputs; secret shares; randomness entries (gate id,
// a1, a2) ascending, refresh last under id 0xffffffff; trace entries (kind
// byte, label, payload). Lists carry u32 big-endian counts, field elements
// are fixed-width big-endian.
inline void write_view(ByteWriter& w, const View& v) {
  w.u8(kViewTag);
  w.u32(static_cast<std::uint32_t>(v.public_inputs.size()));
  for (const auto& x : v.public_inputs) x.write(w);
  w.u32(static_cast<std::uint32_t>(v.secret_shares.size()));
  for (const auto& x : v.secret_shares) x.write(w);
  w.u32(static_cast<std::uint32_t>(v.randomness.mul.size() + 1));
  for (const auto& [id, r] : v.randomness.mul) {
    w.u32(static_cast<std::uint32_t>(id));
    r.a1.write(w);
    r.a2.write(w);
  }
  w.u32(kOpenLabel);
  v.randomness.refresh.a1.write(w);
  v.randomness.refresh.a2.write(w);
  w.u32(static_cast<std::uint32_t>(v.trace.size()));
  for (const auto& e : v.trace) {
    w.u8(static_cast<std::uint8_t>(e.kind));
    w.u32(e.label);
    w.u32(static_cast<std::uint32_t>(e.payload.size()));
    for (const auto& x : e.payload) x.write(w);
  }
}

inline Bytes encode_view(const View& v) {
  ByteWriter w;
  write_view(w, v);
  return std::move(w).take();
}

inline View read_view(ByteReader& r, const ModulusPtr& m) {
  const std::size_t width = m->byte_width();
  auto count = [&](std::size_t unit) {
    auto n = r.u32();
    if (static_cast<std::size_t>(n) * unit > r.remaining()) throw DecodeError("view list count exceeds input");
    return n;
  };
  if (r.u8() != kViewTag) throw DecodeError("bad view tag");
  View v;
  for (auto n = count(width); n > 0; --n) v.public_inputs.push_back(FieldElement::read(r, m));
  for (auto n = count(width); n > 0; --n) v.secret_shares.push_back(FieldElement::read(r, m));
  auto nr = count(4 + 2 * width);
  if (nr == 0) throw DecodeError("view lacks refresh randomness");
  for (std::uint32_t k = 0; k < nr; ++k) {
    auto id = r.u32();
    auto a1 = FieldElement::read(r, m);
    auto a2 = FieldElement::read(r, m);
    if (k + 1 == nr) {
      if (id != kOpenLabel) throw DecodeError("refresh randomness must come last");
      v.randomness.refresh = {std::move(a1), std::move(a2)};
    } else {
      if (id >= kOpenLabel || id > 0x7fffffffu) throw DecodeError("bad randomness gate id");
      if (!v.randomness.mul.empty() && v.randomness.mul.back().first >= static_cast<int>(id))
        throw DecodeError("randomness not in ascending gate order");
      v.randomness.mul.emplace_back(static_cast<int>(id), SSRandomness{std::move(a1), std::move(a2)});
    }
  }
  for (auto n = count(9); n > 0; --n) {
    auto kind = r.u8();
    if (kind < 1 || kind > 7) throw DecodeError("bad trace kind");
    TraceEntry e{static_cast<TraceKind>(kind), r.u32(), {}};
    for (auto p = count(width); p > 0; --p) e.payload.push_back(FieldElement::read(r, m));
    v.trace.push_back(std::move(e));
  }
  return v;
}

inline View decode_view(ByteView data, const ModulusPtr& m) {
  ByteReader r(data);
  auto v = read_view(r, m);
  r.expect_done();
  return v;
}

// Field elements of a view in encoding order; the message committed to under
// element-wise commitments.
inline std::vector<FieldElement> view_elements(const View& v) {
  std::vector<FieldElement> out(v.public_inputs);
  out.insert(out.end(), v.secret_shares.begin(), v.secret_shares.end());
  for (const auto& [id, r] : v.randomness.mul) {
    out.push_back(r.a1);
    out.push_back(r.a2);
  }
  out.push_back(v.randomness.refresh.a1);
  out.push_back(v.randomness.refresh.a2);
  for (const auto& e : v.trace) out.insert(out.end(), e.payload.begin(), e.payload.end());
  return out;
}

}  // namespace mith
