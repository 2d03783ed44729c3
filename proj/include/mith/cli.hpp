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


// Command-line driver: prove, verify, selftest, bench.
//
// Exit codes: 0 success or accept, 1 reject, 2 usage, parse or validation
// error, 3 I/O error, 4 session error.

#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mith/corpus.hpp"
#include "mith/harness.hpp"
#include "mith/mith.hpp"
#include "mith/session.hpp"

namespace mith {

enum ExitCode : int {
  kExitOk = 0,
  kExitReject = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitSession = 4,
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string circuit_path;
  std::string statement_path;
  std::string witness_path;
  std::string out_path;
  std::string proof_path;
  std::string pedersen_path;
  std::size_t reps = kDefaultRepetitions;
  std::string scheme = "prf";
  std::string mode = "derived";
  std::string listen;
  std::string connect;
  std::optional<std::uint64_t> seed;
  bool insecure_seed = false;
  bool verbose = false;
  std::uint64_t timeout_ms = 30000;
  // selftest
  std::string json_path;
  std::string corpus_dir;
  bool quick = false;
  // bench
  double min_ms = 100;
};

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

inline Bytes read_binary(const std::string& path) {
  auto s = read_file(path);
  return Bytes(s.begin(), s.end());
}

inline void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("error writing " + path);
}

inline std::string env_field_preset() {
  const char* v = std::getenv("MITH_FIELD_PRESET");
  return v ? std::string(v) : std::string();
}

// The statement file may name its circuit; relative paths resolve against
// the statement's directory. --circuit wins when both are given.
inline Statement load_statement(const Config& cfg) {
  if (cfg.statement_path.empty()) throw UsageError("--statement is required");
  auto sf = parse_statement_file(read_file(cfg.statement_path));
  std::string cpath = cfg.circuit_path;
  if (cpath.empty()) {
    if (!sf.circuit_path) throw UsageError("no circuit: pass --circuit or add a circuit line to the statement");
    std::filesystem::path p(*sf.circuit_path);
    if (p.is_relative()) p = std::filesystem::path(cfg.statement_path).parent_path() / p;
    cpath = p.string();
  }
  auto circuit = parse_circuit(read_file(cpath));
  if (auto preset = env_field_preset(); !preset.empty()) {
    ModulusPtr want;
    try {
      want = preset_modulus(preset);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("MITH_FIELD_PRESET: ") + e.what());
    }
    if (!(*want == *circuit.modulus))
      throw ValidationError(ValidationCode::ModulusMismatch, "circuit field " + circuit.modulus->to_decimal() +
                                                                 " differs from MITH_FIELD_PRESET=" + preset);
  }
  return bind_statement(sf, std::move(circuit));
}

inline CommitScheme load_scheme(const Config& cfg) {
  if (cfg.scheme == "prf") return CommitScheme::prf();
  if (cfg.scheme != "pedersen") throw UsageError("unknown scheme " + cfg.scheme);
  if (cfg.pedersen_path.empty()) return CommitScheme::with_pedersen();
  try {
    return CommitScheme::with_pedersen(
        std::make_shared<const PedersenParams>(PedersenParams::parse(read_file(cfg.pedersen_path))));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

inline std::unique_ptr<RandomSource> make_rng(const Config& cfg) {
  if (cfg.seed) return std::make_unique<SeededRandom>(*cfg.seed);
  return std::make_unique<OsRandom>();
}

inline void check_common(const Config& cfg) {
  if (cfg.seed && !cfg.insecure_seed) throw UsageError("--seed makes proofs predictable; add --insecure-seed to allow it");
  if (cfg.reps == 0) throw UsageError("--reps must be at least 1");
  if (cfg.mode != "derived" && cfg.mode != "session") throw UsageError("--mode must be derived or session");
}

inline std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& ep, bool allow_port_only) {
  auto colon = ep.rfind(':');
  std::string host = "127.0.0.1", port = ep;
  if (colon != std::string::npos) {
    host = ep.substr(0, colon);
    port = ep.substr(colon + 1);
  } else if (!allow_port_only) {
    throw UsageError("endpoint must be HOST:PORT, got " + ep);
  }
  try {
    std::size_t used = 0;
    auto v = std::stoul(port, &used);
    if (used != port.size() || v > 65535) throw std::out_of_range("port");
    return {host, static_cast<std::uint16_t>(v)};
  } catch (const std::exception&) {
    throw UsageError("bad port in " + ep);
  }
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline void print_soundness(std::ostream& out, std::size_t reps) {
  out << "repetitions: " << reps << "\n"
      << "soundness error per proof: " << std::setprecision(6) << soundness_bound(reps, 0.0)
      << " (plus commitment binding advantage)\n";
}

inline constexpr std::string_view kDerivedLabel =
    "challenge mode: derived (heuristic: challenges hashed from the commitments; not covered by the "
    "interactive soundness bound)";

}  // namespace cli_detail

inline int cmd_prove(const Config& cfg, std::ostream& out) {
  cli_detail::check_common(cfg);
  auto s = cli_detail::load_statement(cfg);
  if (cfg.witness_path.empty()) throw UsageError("--witness is required");
  auto w = parse_witness(cli_detail::read_file(cfg.witness_path), s.modulus());
  check_witness(s, w);
  if (!relation_holds(s, w)) throw ValidationError(ValidationCode::InputLengthMismatch, "witness does not satisfy the statement");
  auto scheme = cli_detail::load_scheme(cfg);
  auto rng = cli_detail::make_rng(cfg);
  if (cfg.seed) out << "warning: seeded randomness, proof is not zero-knowledge against anyone who knows the seed\n";
  out << "scheme: " << to_string(scheme.kind) << "\n";

  if (cfg.mode == "session") {
    if (cfg.connect.empty()) throw UsageError("--mode session needs --connect HOST:PORT");
    auto [host, port] = cli_detail::parse_endpoint(cfg.connect, false);
    const SessionOptions opt{std::chrono::milliseconds(cfg.timeout_ms)};
    auto t0 = std::chrono::steady_clock::now();
    auto transport = TcpTransport::connect(host, port, opt.timeout);
    bool accepted = prover_session(*transport, s, w, cfg.reps, *rng, scheme, opt);
    out << "challenge mode: interactive session\n";
    cli_detail::print_soundness(out, cfg.reps);
    out << "session time: " << std::fixed << std::setprecision(3) << cli_detail::ms_since(t0) << " ms\n"
        << "verdict: " << (accepted ? "accept" : "reject") << "\n";
    return accepted ? kExitOk : kExitReject;
  }

  if (cfg.out_path.empty()) throw UsageError("--out is required in derived mode");
  auto t0 = std::chrono::steady_clock::now();
  auto proof = prove_repeated(w, s, cfg.reps, *rng, scheme, ChallengeMode::Derived);
  const double prove_ms = cli_detail::ms_since(t0);
  auto bytes = encode_proof(proof, scheme);
  cli_detail::write_file(cfg.out_path, bytes);
  out << cli_detail::kDerivedLabel << "\n";
  cli_detail::print_soundness(out, cfg.reps);
  out << "proof: " << cfg.out_path << " (" << bytes.size() << " bytes)\n"
      << "prove time: " << std::fixed << std::setprecision(3) << prove_ms << " ms\n";
  return kExitOk;
}

inline int cmd_verify(const Config& cfg, std::ostream& out) {
  cli_detail::check_common(cfg);
  auto s = cli_detail::load_statement(cfg);
  auto scheme = cli_detail::load_scheme(cfg);

  if (cfg.mode == "session") {
    if (cfg.listen.empty()) throw UsageError("--mode session needs --listen [HOST:]PORT");
    auto [host, port] = cli_detail::parse_endpoint(cfg.listen, true);
    const SessionOptions opt{std::chrono::milliseconds(cfg.timeout_ms)};
    auto rng = cli_detail::make_rng(cfg);
    TcpListener listener(port, host);
    out << "listening on " << host << ":" << listener.port() << "\n" << std::flush;
    auto transport = listener.accept(opt.timeout);
    auto res = verifier_session(*transport, s, cfg.reps, *rng, scheme, opt);
    if (!cfg.out_path.empty() && res.transcript) cli_detail::write_file(cfg.out_path, encode_proof(*res.transcript, scheme));
    if (cfg.verbose && res.transcript) {
      auto v = verify_repetitions(s, *res.transcript, ChallengeMode::Transcript, scheme);
      for (std::size_t k = 0; k < v.size(); ++k) out << "repetition " << k << ": " << (v[k] ? "accept" : "reject") << "\n";
    }
    cli_detail::print_soundness(out, cfg.reps);
    out << "verdict: " << (res.accepted ? "accept" : "reject") << "\n";
    return res.accepted ? kExitOk : kExitReject;
  }

  if (cfg.proof_path.empty()) throw UsageError("--proof is required");
  auto bytes = cli_detail::read_binary(cfg.proof_path);
  Proof proof;
  try {
    proof = decode_proof(bytes, s.modulus(), scheme.pedersen ? scheme.pedersen : PedersenParams::default_group());
  } catch (const DecodeError& e) {
    out << "malformed proof: " << e.what() << "\nverdict: reject\n";
    return kExitReject;
  }
  if (proof.scheme != scheme.kind) {
    out << "proof uses scheme " << to_string(proof.scheme) << ", expected " << to_string(scheme.kind)
        << "\nverdict: reject\n";
    return kExitReject;
  }
  if (proof.mode == ChallengeMode::Derived) {
    out << cli_detail::kDerivedLabel << "\n";
  } else {
    out << "challenge mode: transcript (challenges taken from the file; only meaningful if this verifier recorded them)\n";
  }
  auto t0 = std::chrono::steady_clock::now();
  auto verdicts = verify_repetitions(s, proof, proof.mode, scheme);
  const double verify_ms = cli_detail::ms_since(t0);
  const bool ok = !verdicts.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](bool b) { return b; });
  if (verdicts.empty()) out << "proof does not match this statement or scheme\n";
  if (cfg.verbose) {
    for (std::size_t k = 0; k < verdicts.size(); ++k)
      out << "repetition " << k << " challenge " << proof.transcripts[k].challenge.first().value() << ","
          << proof.transcripts[k].challenge.second().value() << ": " << (verdicts[k] ? "accept" : "reject") << "\n";
  }
  cli_detail::print_soundness(out, proof.transcripts.size());
  out << "verify time: " << std::fixed << std::setprecision(3) << verify_ms << " ms\n"
      << "verdict: " << (ok ? "accept" : "reject") << "\n";
  return ok ? kExitOk : kExitReject;
}

inline int cmd_selftest(const Config& cfg, std::ostream& out) {
  SelftestOptions opt;
  opt.seed = cfg.seed ? *cfg.seed : OsRandom().next_u64();
  opt.quick = cfg.quick;
  std::string dir = cfg.corpus_dir;
#ifdef MITH_DATA_DIR
  if (dir.empty()) dir = std::string(MITH_DATA_DIR) + "/corpus";
#endif
  if (!dir.empty() && std::filesystem::is_directory(dir)) {
    try {
      for (auto& e : load_corpus(dir))
        if (e.circuit.modulus->value() == 11) opt.corpus_f11.push_back(std::move(e.circuit));
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  } else if (!cfg.corpus_dir.empty()) {
    throw IoError("corpus directory not found: " + cfg.corpus_dir);
  }
  auto res = run_selftest(opt);
  out << selftest_text(res);
  if (!cfg.json_path.empty()) {
    auto j = selftest_json(res);
    cli_detail::write_file(cfg.json_path, to_bytes(j));
  }
  return res.pass() ? kExitOk : kExitReject;
}

// --- bench ------------------------------------------------------------------------

struct BenchRow {
  std::string group;
  std::string name;
  // Milliseconds per call; empty cells are not applicable.
  std::optional<double> rand, share, reconstruct, protocol, commit, verify;
};

struct BenchResult {
  std::vector<BenchRow> rows;

  const BenchRow& row(std::string_view group, std::string_view name) const {
    for (const auto& r : rows)
      if (r.group == group && r.name == name) return r;
    throw std::out_of_range("no bench row " + std::string(name));
  }
};

// Mean wall time of fn in ms over at least three calls and min_ms total.
inline double time_ms(const std::function<void()>& fn, double min_ms) {
  fn();
  std::size_t n = 0;
  auto t0 = std::chrono::steady_clock::now();
  double elapsed = 0;
  do {
    fn();
    ++n;
    elapsed = cli_detail::ms_since(t0);
  } while (n < 3 || elapsed < min_ms);
  return elapsed / static_cast<double>(n);
}

// Rows follow the benchmark table layout: primitives over one field, then
// one MitH repetition for two circuits under Pedersen (A) and PRF (SA)
// commitments. Circuit gate counts include inputs and constants.
inline BenchResult run_bench(const ModulusPtr& field, double min_ms, RandomSource& rng) {
  BenchResult out;
  const std::string g = "Field: " + std::to_string(field->bits()) + " bits";
  auto x = sample_fe(rng, field), y = sample_fe(rng, field);
  auto rx = sample_ss_randomness(rng, field);
  auto sx = share(x, rx), sy = share(y, sample_ss_randomness(rng, field));

  BenchRow sss{g, "Shamir Secret Share", {}, {}, {}, {}, {}, {}};
  sss.rand = time_ms([&] { rx = sample_ss_randomness(rng, field); }, min_ms);
  sss.share = time_ms([&] { sx = share(x, rx); }, min_ms);
  sss.reconstruct = time_ms([&] { x = reconstruct(sx); }, min_ms);
  out.rows.push_back(sss);

  Sharing sink;
  BenchRow add{g, "BGW Addition", {}, {}, {}, {}, {}, {}};
  add.protocol = time_ms([&] { sink = gate_add(sx, sy); }, min_ms);
  out.rows.push_back(add);

  BenchRow smul{g, "BGW Scalar Multiplication", {}, {}, {}, {}, {}, {}};
  const auto scalar = public_encoding(y);
  smul.protocol = time_ms([&] { sink = gate_smul(scalar, sx); }, min_ms);
  out.rows.push_back(smul);

  PerParty<SSRandomness> mr;
  BenchRow mul{g, "BGW Multiplication", {}, {}, {}, {}, {}, {}};
  mul.rand = time_ms([&] { for (auto& r : mr) r = sample_ss_randomness(rng, field); }, min_ms);
  mul.protocol = time_ms([&] { sink = gate_mul(sx, sy, mr).output; }, min_ms);
  out.rows.push_back(mul);

  const auto pp = PedersenParams::default_group();
  auto blinder = sample_fe(rng, pp->blinder_field);
  const std::vector<FieldElement> msg{x};
  PedersenCommitment pc;
  bool ok = true;
  BenchRow ped{g, "Pedersen Commitment", {}, {}, {}, {}, {}, {}};
  ped.rand = time_ms([&] { blinder = sample_fe(rng, pp->blinder_field); }, min_ms);
  ped.commit = time_ms([&] { pc = pedersen_commit(*pp, std::vector<FieldElement>{blinder}, msg).first; }, min_ms);
  ped.verify = time_ms([&] { ok = ok && pedersen_verify(*pp, msg, pc, std::vector<FieldElement>{blinder}); }, min_ms);
  out.rows.push_back(ped);

  ByteWriter bw;
  x.write(bw);
  const auto xbytes = std::move(bw).take();
  auto key = PrfKey::sample(rng);
  Digest d{};
  BenchRow prf{g, "SHA256-based Commitment", {}, {}, {}, {}, {}, {}};
  prf.commit = time_ms([&] { d = prf_commit(key, xbytes).first; }, min_ms);
  prf.verify = time_ms([&] { ok = ok && prf_verify(xbytes, d, key); }, min_ms);
  out.rows.push_back(prf);
  if (!ok) throw std::logic_error("bench: commitment failed to verify");

  auto mith_rows = [&](const std::string& group, const Circuit& c, const std::string& label) {
    Statement s{c, {}, {}};
    const Witness w{{FieldElement(c.modulus, 3)}};
    s.target = eval_plain(s, w);
    for (const auto& [tag, scheme] : {std::pair{std::string("A"), CommitScheme::with_pedersen(pp)},
                                      std::pair{std::string("SA"), CommitScheme::prf()}}) {
      BenchRow r{group, tag + " MitH (" + label + ")", {}, {}, {}, {}, {}, {}};
      auto rp = sample_prover_rand(rng, s, scheme);
      r.rand = time_ms([&] { rp = sample_prover_rand(rng, s, scheme); }, min_ms);
      std::vector<Sharing> in{share(w.secret_inputs[0], rp.r_ss[0])};
      r.protocol = time_ms([&] { run_protocol(s.circuit, s.public_inputs, in, rp.r_mpc); }, min_ms);
      auto committed = prover_commit(rp, w, s, scheme);
      r.commit = time_ms([&] { committed = prover_commit(rp, w, s, scheme); }, min_ms);
      const auto ch = Challenge::from_index(3);
      auto resp = prover_respond(committed.first, ch);
      const VerifierState vs{s, scheme, committed.second, ch};
      r.verify = time_ms([&] { ok = ok && verifier_check(vs, resp); }, min_ms);
      if (!ok) throw std::logic_error("bench: honest repetition rejected");
      out.rows.push_back(r);
    }
  };
  const auto f101 = preset_modulus("f101"), f97 = preset_modulus("f97");
  auto c7 = bench_circuit_7(f101);
  auto c11 = bench_circuit_11(f97);
  mith_rows("Field value: 101", c7, std::to_string(node_count(*c7.root)) + " gates, " +
                                        std::to_string(multiplication_count(*c7.root)) + " MUL");
  mith_rows("Field value: 97", c11, std::to_string(node_count(*c11.root)) + " gates, " +
                                        std::to_string(multiplication_count(*c11.root)) + " MUL");
  return out;
}

inline std::string format_bench(const BenchResult& b) {
  std::ostringstream os;
  auto cell = [&](const std::optional<double>& v) {
    char buf[32];
    if (v) {
      std::snprintf(buf, sizeof(buf), "%12.4f", *v);
    } else {
      std::snprintf(buf, sizeof(buf), "%12s", "-");
    }
    return std::string(buf);
  };
  char head[256];
  std::snprintf(head, sizeof(head), "%-18s %-28s%12s%12s%12s%12s%12s%12s\n", "", "", "Random gen", "Share",
                "Reconstruct", "Protocol", "Commit", "Verify");
  os << "times in ms\n" << head;
  std::string last;
  for (const auto& r : b.rows) {
    char lead[64];
    std::snprintf(lead, sizeof(lead), "%-18s %-28s", r.group == last ? "" : r.group.c_str(), r.name.c_str());
    last = r.group;
    os << lead << cell(r.rand) << cell(r.share) << cell(r.reconstruct) << cell(r.protocol) << cell(r.commit)
       << cell(r.verify) << '\n';
  }
  return os.str();
}

inline int cmd_bench(const Config& cfg, std::ostream& out) {
  std::string preset = cli_detail::env_field_preset();
  if (preset.empty()) preset = "p256";
  ModulusPtr field;
  try {
    field = preset_modulus(preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("MITH_FIELD_PRESET: ") + e.what());
  }
  auto rng = cli_detail::make_rng(cfg);
  auto b = run_bench(field, cfg.quick ? 5.0 : cfg.min_ms, *rng);
  out << format_bench(b);
  const auto& ped = b.row(b.rows[0].group, "Pedersen Commitment");
  const auto& prf = b.row(b.rows[0].group, "SHA256-based Commitment");
  out << "single-element commit+verify, Pedersen / PRF: " << std::fixed << std::setprecision(1)
      << (*ped.commit + *ped.verify) / (*prf.commit + *prf.verify) << "x\n";
  return kExitOk;
}

// --- entry point ------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MPC-in-the-head zero-knowledge prover and verifier", "mith"};
  app.require_subcommand(1);
  Config cfg;
  std::uint64_t seed = 0;

  auto add_statement = [&](CLI::App* sub) {
    sub->add_option("--circuit", cfg.circuit_path, "circuit file (.arith)");
    sub->add_option("--statement", cfg.statement_path, "statement file");
    sub->add_option("--scheme", cfg.scheme, "commitment scheme")->check(CLI::IsMember({"prf", "pedersen"}));
    sub->add_option("--pedersen-params", cfg.pedersen_path, "Pedersen group file (default: built-in 258-bit group)");
    sub->add_option("--reps", cfg.reps, "repetitions");
    sub->add_option("--mode", cfg.mode, "derived or session")->check(CLI::IsMember({"derived", "session"}));
    sub->add_option("--timeout-ms", cfg.timeout_ms, "per-phase session timeout");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "deterministic randomness");
    sub->add_flag("--insecure-seed", cfg.insecure_seed, "allow --seed for prove and verify");
    sub->add_flag("--verbose", cfg.verbose, "per-repetition output");
  };

  auto* prove = app.add_subcommand("prove", "write a proof file or run the prover side of a session");
  add_statement(prove);
  add_seed(prove);
  prove->add_option("--witness", cfg.witness_path, "witness file");
  prove->add_option("--out", cfg.out_path, "proof output file");
  prove->add_option("--connect", cfg.connect, "verifier endpoint HOST:PORT (session mode)");

  auto* verify = app.add_subcommand("verify", "check a proof file or run the verifier side of a session");
  add_statement(verify);
  add_seed(verify);
  verify->add_option("--proof", cfg.proof_path, "proof file");
  verify->add_option("--listen", cfg.listen, "[HOST:]PORT to accept one prover on (session mode)");
  verify->add_option("--out", cfg.out_path, "save the session transcript as a proof file");

  auto* selftest = app.add_subcommand("selftest", "run the statistical and exhaustive experiment suite");
  add_seed(selftest);
  selftest->add_option("--json", cfg.json_path, "also write the reports as JSON");
  selftest->add_option("--corpus", cfg.corpus_dir, "directory of .arith circuits");
  selftest->add_flag("--quick", cfg.quick, "one tenth of the statistical trials");

  auto* bench = app.add_subcommand("bench", "time primitives and MitH repetitions");
  add_seed(bench);
  bench->add_option("--min-ms", cfg.min_ms, "minimum timing window per cell");
  bench->add_flag("--quick", cfg.quick, "short timing windows");

  std::vector<std::string> argv_store{"mith"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (auto* sub : {prove, verify, selftest, bench})
    if (sub->parsed() && sub->count("--seed") > 0) cfg.seed = seed;

  try {
    if (prove->parsed()) return cmd_prove(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (selftest->parsed()) return cmd_selftest(cfg, out);
    return cmd_bench(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SessionError& e) {
    err << "session error: " << e.what() << "\n";
    return kExitSession;
  } catch (const TransportError& e) {
    err << "session error: " << e.what() << "\n";
    return kExitSession;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mith
