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

// Tree-shaped arithmetic circuits: data model, text format, validation,
// cleartext evaluation and the induced NP relation.
//
// Text format (".arith"):
//
//   field 101
//   topology 0 1 3
//   (add 3 (mul 2 (sinput 0) (sinput 0)) (const 1 1))
//
// Input leaves carry a wire index; every other node carries a gate id as its
// first argument. The topology counts public wires, secret wires and
// id-bearing gates. '#' starts a comment that runs to the end of the line.

#pragma once

#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mith/common.hpp"
#include "mith/crypto.hpp"
#include "mith/field.hpp"

namespace mith {

enum class GateKind : std::uint8_t {
  PInput = 1,
  SInput = 2,
  Constant = 3,
  Addition = 4,
  Multiplication = 5,
  SMultiplication = 6,
};

inline std::string_view gate_keyword(GateKind k) {
  switch (k) {
    case GateKind::PInput: return "pinput";
    case GateKind::SInput: return "sinput";
    case GateKind::Constant: return "const";
    case GateKind::Addition: return "add";
    case GateKind::Multiplication: return "mul";
    case GateKind::SMultiplication: return "smul";
  }
  return "?";
}

struct Gate;
using GatePtr = std::shared_ptr<const Gate>;

struct Gate {
  GateKind kind;
  // Wire index for PInput/SInput, gate id otherwise.
  int label;
  FieldElement value;  // Constant only
  GatePtr left;
  GatePtr right;

  bool is_input() const { return kind == GateKind::PInput || kind == GateKind::SInput; }
  bool is_binary() const { return left != nullptr; }

  static GatePtr pinput(int wire) { return std::make_shared<Gate>(Gate{GateKind::PInput, wire, {}, nullptr, nullptr}); }
  static GatePtr sinput(int wire) { return std::make_shared<Gate>(Gate{GateKind::SInput, wire, {}, nullptr, nullptr}); }
  static GatePtr constant(int id, FieldElement v) {
    return std::make_shared<Gate>(Gate{GateKind::Constant, id, std::move(v), nullptr, nullptr});
  }
  static GatePtr add(int id, GatePtr l, GatePtr r) { return binary(GateKind::Addition, id, std::move(l), std::move(r)); }
  static GatePtr mul(int id, GatePtr l, GatePtr r) { return binary(GateKind::Multiplication, id, std::move(l), std::move(r)); }
  static GatePtr smul(int id, GatePtr l, GatePtr r) { return binary(GateKind::SMultiplication, id, std::move(l), std::move(r)); }
  static GatePtr binary(GateKind k, int id, GatePtr l, GatePtr r) {
    return std::make_shared<Gate>(Gate{k, id, {}, std::move(l), std::move(r)});
  }
};

struct Topology {
  int np = 0;  // public input wires
  int ns = 1;  // secret input wires
  int ng = 0;  // id-bearing gates (const/add/mul/smul)

  bool operator==(const Topology&) const = default;
};

struct Circuit {
  Topology topology;
  GatePtr root;
  ModulusPtr modulus;
};

enum class ValidationCode {
  BadTopology,
  MissingNode,
  NegativeLabel,
  DuplicateGateId,
  PInputOutOfRange,
  SInputOutOfRange,
  GateCountMismatch,
  SecretScalar,
  ModulusMismatch,
  InputLengthMismatch,
};

inline std::string_view to_string(ValidationCode c) {
  switch (c) {
    case ValidationCode::BadTopology: return "bad-topology";
    case ValidationCode::MissingNode: return "missing-node";
    case ValidationCode::NegativeLabel: return "negative-label";
    case ValidationCode::DuplicateGateId: return "duplicate-gate-id";
    case ValidationCode::PInputOutOfRange: return "pinput-out-of-range";
    case ValidationCode::SInputOutOfRange: return "sinput-out-of-range";
    case ValidationCode::GateCountMismatch: return "gate-count-mismatch";
    case ValidationCode::SecretScalar: return "secret-scalar";
    case ValidationCode::ModulusMismatch: return "modulus-mismatch";
    case ValidationCode::InputLengthMismatch: return "input-length-mismatch";
  }
  return "?";
}

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  ValidationCode code() const noexcept { return code_; }

 private:
  ValidationCode code_;
};

// Visits nodes left subtree, right subtree, node.
inline void for_each_postorder(const Gate& g, const std::function<void(const Gate&)>& fn) {
  if (g.left) for_each_postorder(*g.left, fn);
  if (g.right) for_each_postorder(*g.right, fn);
  fn(g);
}

inline bool contains_secret_input(const Gate& g) {
  if (g.kind == GateKind::SInput) return true;
  return (g.left && contains_secret_input(*g.left)) || (g.right && contains_secret_input(*g.right));
}

inline std::size_t node_count(const Gate& g) {
  return 1 + (g.left ? node_count(*g.left) : 0) + (g.right ? node_count(*g.right) : 0);
}

inline std::size_t multiplication_count(const Gate& g) {
  std::size_t n = 0;
  for_each_postorder(g, [&](const Gate& x) { n += x.kind == GateKind::Multiplication; });
  return n;
}

// Checks every structural invariant; throws ValidationError on the first
// violation found.
inline void validate_circuit(const Circuit& c) {
  const auto& t = c.topology;
  if (t.np < 0 || t.ns < 1 || t.ng < 0) {
    throw ValidationError(ValidationCode::BadTopology, "need np >= 0, ns >= 1, ng >= 0");
  }
  if (!c.modulus) throw ValidationError(ValidationCode::ModulusMismatch, "circuit has no field");
  if (!c.root) throw ValidationError(ValidationCode::MissingNode, "circuit has no root");
  std::set<int> ids;
  std::function<void(const Gate&)> walk = [&](const Gate& g) {
    if (g.label < 0) throw ValidationError(ValidationCode::NegativeLabel, "negative label " + std::to_string(g.label));
    switch (g.kind) {
      case GateKind::PInput:
        if (g.label >= t.np)
          throw ValidationError(ValidationCode::PInputOutOfRange, "pinput " + std::to_string(g.label));
        return;
      case GateKind::SInput:
        if (g.label >= t.ns)
          throw ValidationError(ValidationCode::SInputOutOfRange, "sinput " + std::to_string(g.label));
        return;
      default:
        break;
    }
    if (!ids.insert(g.label).second)
      throw ValidationError(ValidationCode::DuplicateGateId, "gate id " + std::to_string(g.label));
    if (g.kind == GateKind::Constant) {
      if (!g.value.bound() || !(*g.value.modulus() == *c.modulus))
        throw ValidationError(ValidationCode::ModulusMismatch, "constant " + std::to_string(g.label));
      return;
    }
    if (!g.left || !g.right)
      throw ValidationError(ValidationCode::MissingNode, "gate " + std::to_string(g.label) + " lacks an operand");
    if (g.kind == GateKind::SMultiplication && contains_secret_input(*g.left))
      throw ValidationError(ValidationCode::SecretScalar,
                            "smul " + std::to_string(g.label) + " has a secret input on its scalar side");
    walk(*g.left);
    walk(*g.right);
  };
  walk(*c.root);
  if (static_cast<int>(ids.size()) != t.ng) {
    throw ValidationError(ValidationCode::GateCountMismatch,
                          "topology declares " + std::to_string(t.ng) + " gates, tree has " + std::to_string(ids.size()));
  }
}

namespace detail {

struct Token {
  enum Kind { LParen, RParen, Atom, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip();
    Token t{Token::End, {}, line_, col_};
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (c == '(' || c == ')') {
      t.kind = c == '(' ? Token::LParen : Token::RParen;
      t.text = std::string(1, c);
      advance();
      return t;
    }
    t.kind = Token::Atom;
    while (pos_ < src_.size()) {
      c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '#') break;
      t.text.push_back(c);
      advance();
    }
    return t;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class CircuitParser {
 public:
  explicit CircuitParser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  Circuit parse() {
    expect_keyword("field");
    auto p_tok = tok_;
    auto p = integer("field modulus");
    try {
      modulus_ = intern_modulus(p);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), p_tok.line, p_tok.column);
    }
    expect_keyword("topology");
    Topology t;
    t.np = small_int("np");
    t.ns = small_int("ns");
    t.ng = small_int("ng");
    auto root = gate(0);
    if (tok_.kind != Token::End) fail("trailing input after circuit expression");
    Circuit c{t, std::move(root), modulus_};
    validate_circuit(c);
    return c;
  }

 private:
  static constexpr int kMaxDepth = 4096;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.column); }

  void bump() { tok_ = lex_.next(); }

  void expect_keyword(std::string_view kw) {
    if (tok_.kind != Token::Atom || tok_.text != kw) fail("expected '" + std::string(kw) + "'");
    bump();
  }

  BigInt integer(const std::string& what) {
    if (tok_.kind != Token::Atom) fail("expected integer " + what);
    BigInt v;
    try {
      v = parse_decimal(tok_.text);
    } catch (const std::invalid_argument&) {
      fail("expected integer " + what + ", got '" + tok_.text + "'");
    }
    bump();
    return v;
  }

  int small_int(const std::string& what) {
    auto save = tok_;
    auto v = integer(what);
    if (v < -(BigInt(1) << 30) || v > (BigInt(1) << 30)) throw ParseError(what + " out of range", save.line, save.column);
    return v.convert_to<int>();
  }

  GatePtr gate(int depth) {
    if (depth > kMaxDepth) fail("circuit nesting too deep");
    if (tok_.kind != Token::LParen) fail("expected '('");
    bump();
    if (tok_.kind != Token::Atom) fail("expected gate keyword");
    std::string kw = tok_.text;
    bump();
    GatePtr g;
    if (kw == "pinput") {
      g = Gate::pinput(small_int("wire index"));
    } else if (kw == "sinput") {
      g = Gate::sinput(small_int("wire index"));
    } else if (kw == "const") {
      int id = small_int("gate id");
      auto v = integer("constant value");
      g = Gate::constant(id, FieldElement(modulus_, v));
    } else if (kw == "add" || kw == "mul" || kw == "smul") {
      int id = small_int("gate id");
      auto l = gate(depth + 1);
      auto r = gate(depth + 1);
      auto kind = kw == "add" ? GateKind::Addition : kw == "mul" ? GateKind::Multiplication : GateKind::SMultiplication;
      g = Gate::binary(kind, id, std::move(l), std::move(r));
    } else {
      fail("unknown gate keyword '" + kw + "'");
    }
    if (tok_.kind != Token::RParen) fail("expected ')'");
    bump();
    return g;
  }

  Lexer lex_;
  Token tok_;
  ModulusPtr modulus_;
};

inline void print_gate(std::ostream& os, const Gate& g) {
  os << '(' << gate_keyword(g.kind) << ' ' << g.label;
  if (g.kind == GateKind::Constant) os << ' ' << g.value.value();
  if (g.left) {
    os << ' ';
    print_gate(os, *g.left);
    os << ' ';
    print_gate(os, *g.right);
  }
  os << ')';
}

}  // namespace detail

// Parses and validates. Syntax errors raise ParseError, invariant violations
// raise ValidationError.
inline Circuit parse_circuit(std::string_view text) { return detail::CircuitParser(text).parse(); }

inline std::string print_gate(const Gate& g) {
  std::ostringstream os;
  detail::print_gate(os, g);
  return os.str();
}

inline std::string print_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "field " << c.modulus->to_decimal() << '\n'
     << "topology " << c.topology.np << ' ' << c.topology.ns << ' ' << c.topology.ng << '\n';
  detail::print_gate(os, *c.root);
  os << '\n';
  return os.str();
}

inline bool gates_equal(const Gate& a, const Gate& b) {
  if (a.kind != b.kind || a.label != b.label) return false;
  if (a.kind == GateKind::Constant && !(a.value == b.value)) return false;
  if (a.is_binary() != b.is_binary()) return false;
  return !a.is_binary() || (gates_equal(*a.left, *b.left) && gates_equal(*a.right, *b.right));
}

inline bool circuits_equal(const Circuit& a, const Circuit& b) {
  return *a.modulus == *b.modulus && a.topology == b.topology && gates_equal(*a.root, *b.root);
}

struct Statement {
  Circuit circuit;
  std::vector<FieldElement> public_inputs;
  FieldElement target;

  const ModulusPtr& modulus() const { return circuit.modulus; }
};

struct Witness {
  std::vector<FieldElement> secret_inputs;
};

inline void check_statement(const Statement& s) {
  if (static_cast<int>(s.public_inputs.size()) != s.circuit.topology.np) {
    throw ValidationError(ValidationCode::InputLengthMismatch,
                          "statement has " + std::to_string(s.public_inputs.size()) + " public inputs, circuit expects " +
                              std::to_string(s.circuit.topology.np));
  }
}

inline void check_witness(const Statement& s, const Witness& w) {
  if (static_cast<int>(w.secret_inputs.size()) != s.circuit.topology.ns) {
    throw ValidationError(ValidationCode::InputLengthMismatch,
                          "witness has " + std::to_string(w.secret_inputs.size()) + " secret inputs, circuit expects " +
                              std::to_string(s.circuit.topology.ns));
  }
}

// Evaluates a subtree without secret inputs from public values alone.
inline FieldElement eval_public(const Gate& g, std::span<const FieldElement> pub) {
  switch (g.kind) {
    case GateKind::PInput: return pub[static_cast<std::size_t>(g.label)];
    case GateKind::SInput: throw std::invalid_argument("eval_public: secret input in public subtree");
    case GateKind::Constant: return g.value;
    case GateKind::Addition: return eval_public(*g.left, pub) + eval_public(*g.right, pub);
    case GateKind::Multiplication:
    case GateKind::SMultiplication: return eval_public(*g.left, pub) * eval_public(*g.right, pub);
  }
  throw std::invalid_argument("unknown gate kind");
}

inline FieldElement eval_gate(const Gate& g, std::span<const FieldElement> pub, std::span<const FieldElement> sec) {
  switch (g.kind) {
    case GateKind::PInput: return pub[static_cast<std::size_t>(g.label)];
    case GateKind::SInput: return sec[static_cast<std::size_t>(g.label)];
    case GateKind::Constant: return g.value;
    case GateKind::Addition: return eval_gate(*g.left, pub, sec) + eval_gate(*g.right, pub, sec);
    case GateKind::Multiplication:
    case GateKind::SMultiplication: return eval_gate(*g.left, pub, sec) * eval_gate(*g.right, pub, sec);
  }
  throw std::invalid_argument("unknown gate kind");
}

inline FieldElement eval_plain(const Statement& s, const Witness& w) {
  check_statement(s);
  check_witness(s, w);
  return eval_gate(*s.circuit.root, s.public_inputs, w.secret_inputs);
}

// Output equals the statement's target.
inline bool relation_holds(const Statement& s, const Witness& w) { return eval_plain(s, w) == s.target; }

// --- statement and witness files -------------------------------------------

struct StatementFile {
  BigInt field;
  std::optional<std::string> circuit_path;
  BigInt target;
  std::vector<BigInt> public_inputs;
};

namespace detail {

inline std::vector<std::pair<std::size_t, std::vector<std::string>>> split_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> words;
    std::istringstream is{std::string(line)};
    for (std::string w; is >> w;) words.push_back(w);
    if (!words.empty()) out.emplace_back(line_no, std::move(words));
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

inline BigInt line_int(const std::string& word, std::size_t line) {
  try {
    return parse_decimal(word);
  } catch (const std::invalid_argument&) {
    throw ParseError("expected integer, got '" + word + "'", line, 1);
  }
}

}  // namespace detail

// Lines: `field <p>`, `circuit <path>` (optional), `target <int>`,
// `public <int>*`.
inline StatementFile parse_statement_file(std::string_view text) {
  StatementFile out;
  bool have_field = false, have_target = false, have_public = false;
  for (auto& [line, words] : detail::split_lines(text)) {
    const auto& key = words[0];
    if (key == "field") {
      if (words.size() != 2) throw ParseError("field takes one integer", line, 1);
      out.field = detail::line_int(words[1], line);
      have_field = true;
    } else if (key == "circuit") {
      if (words.size() != 2) throw ParseError("circuit takes one path", line, 1);
      out.circuit_path = words[1];
    } else if (key == "target") {
      if (words.size() != 2) throw ParseError("target takes one integer", line, 1);
      out.target = detail::line_int(words[1], line);
      have_target = true;
    } else if (key == "public") {
      if (have_public) throw ParseError("duplicate public line", line, 1);
      for (std::size_t i = 1; i < words.size(); ++i) out.public_inputs.push_back(detail::line_int(words[i], line));
      have_public = true;
    } else {
      throw ParseError("unknown statement key '" + key + "'", line, 1);
    }
  }
  if (!have_field) throw ParseError("statement lacks a field line", 1, 1);
  if (!have_target) throw ParseError("statement lacks a target line", 1, 1);
  return out;
}

// Attaches a parsed statement file to its circuit; values are reduced mod p.
inline Statement bind_statement(const StatementFile& f, Circuit circuit) {
  if (f.field != circuit.modulus->value()) {
    throw ValidationError(ValidationCode::ModulusMismatch, "statement field " + f.field.str() +
                                                               " differs from circuit field " +
                                                               circuit.modulus->to_decimal());
  }
  Statement s{std::move(circuit), {}, {}};
  for (const auto& v : f.public_inputs) s.public_inputs.emplace_back(s.circuit.modulus, v);
  s.target = FieldElement(s.circuit.modulus, f.target);
  check_statement(s);
  return s;
}

// Lines: `secret <int>*`.
inline Witness parse_witness(std::string_view text, const ModulusPtr& m) {
  Witness w;
  bool seen = false;
  for (auto& [line, words] : detail::split_lines(text)) {
    if (words[0] != "secret") throw ParseError("unknown witness key '" + words[0] + "'", line, 1);
    if (seen) throw ParseError("duplicate secret line", line, 1);
    seen = true;
    for (std::size_t i = 1; i < words.size(); ++i) w.secret_inputs.emplace_back(m, detail::line_int(words[i], line));
  }
  if (!seen) throw ParseError("witness lacks a secret line", 1, 1);
  return w;
}

inline std::string print_statement(const Statement& s, std::string_view circuit_path = {}) {
  std::ostringstream os;
  os << "field " << s.modulus()->to_decimal() << '\n';
  if (!circuit_path.empty()) os << "circuit " << circuit_path << '\n';
  os << "target " << s.target.value() << '\n' << "public";
  for (const auto& x : s.public_inputs) os << ' ' << x.value();
  os << '\n';
  return os.str();
}

inline std::string print_witness(const Witness& w) {
  std::ostringstream os;
  os << "secret";
  for (const auto& x : w.secret_inputs) os << ' ' << x.value();
  os << '\n';
  return os.str();
}

// Canonical statement text: the printed circuit followed by the statement
// lines without the circuit path. Independent of file layout and formatting.
inline std::string canonical_statement(const Statement& s) {
  return "mith-statement 1\n" + print_circuit(s.circuit) + print_statement(s);
}

inline Digest statement_hash(const Statement& s) { return sha256(to_bytes(canonical_statement(s))); }

}  // namespace mith
