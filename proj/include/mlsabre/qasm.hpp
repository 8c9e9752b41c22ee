#pragma once

#include <cctype>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mlsabre/circuit.hpp"
#include "mlsabre/error.hpp"

namespace mlsabre {

namespace detail {

inline const std::set<std::string, std::less<>>& one_qubit_gate_names() {
  static const std::set<std::string, std::less<>> names = {"h",  "x",   "y",  "z",  "s",  "sdg", "t",
                                                           "tdg", "rx", "ry", "rz", "u1", "u2",  "u3"};
  return names;
}

inline const std::set<std::string, std::less<>>& two_qubit_gate_names() {
  static const std::set<std::string, std::less<>> names = {"cx", "cz", "swap"};
  return names;
}

class QasmLexer {
 public:
  enum class Kind { Identifier, Integer, Real, String, Symbol, End };

  struct Token {
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int column = 1;
  };

  explicit QasmLexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  /// Raw text up to the parenthesis matching an already consumed '(',
  /// with whitespace removed. The closing ')' is consumed.
  std::string take_parenthesized() {
    // current_ was lexed past the '('; rewind to its start.
    pos_ = token_start_;
    line_ = current_.line;
    column_ = current_.column;
    std::string out;
    int depth = 1;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) {
        bump();
        advance();
        return out;
      }
      if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
      bump();
    }
    throw ParseError(line_, column_, "unterminated parameter list");
  }

 private:
  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void advance() {
    skip_space_and_comments();
    token_start_ = pos_;
    current_ = Token{};
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Kind::End;
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      current_.kind = Kind::Identifier;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        current_.text.push_back(text_[pos_]);
        bump();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      current_.kind = Kind::Integer;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        if (text_[pos_] == '.') current_.kind = Kind::Real;
        current_.text.push_back(text_[pos_]);
        bump();
      }
    } else if (c == '"') {
      current_.kind = Kind::String;
      bump();
      while (pos_ < text_.size() && text_[pos_] != '"') {
        current_.text.push_back(text_[pos_]);
        bump();
      }
      if (pos_ >= text_.size()) throw ParseError(current_.line, current_.column, "unterminated string");
      bump();
    } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      current_.kind = Kind::Symbol;
      current_.text = "->";
      bump();
      bump();
    } else {
      current_.kind = Kind::Symbol;
      current_.text = std::string(1, c);
      bump();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t token_start_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class QasmParser {
 public:
  explicit QasmParser(std::string_view text) : lex_(text) {}

  Circuit parse() {
    // Registers must be known before gates are built; gather statements first.
    std::vector<Statement> statements;
    while (lex_.peek().kind != QasmLexer::Kind::End) statement(statements);

    Circuit circuit(total_qubits_);
    for (auto& st : statements) {
      if (st.barrier) {
        std::vector<int> qs;
        for (const auto& arg : st.args) {
          auto expanded = expand(arg);
          qs.insert(qs.end(), expanded.begin(), expanded.end());
        }
        circuit.add_barrier(std::move(qs));
        continue;
      }
      emit(circuit, st);
    }
    return circuit;
  }

 private:
  using Token = QasmLexer::Token;
  using Kind = QasmLexer::Kind;

  struct Argument {
    std::string reg;
    int index = -1;  // -1 selects the whole register
    int line = 0;
    int column = 0;
  };

  struct Statement {
    bool barrier = false;
    Token name;
    std::string params;
    std::vector<Argument> args;
  };

  struct Register {
    int offset = 0;
    int size = 0;
  };

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(t.line, t.column, message);
  }

  Token expect_symbol(const char* symbol) {
    Token t = lex_.take();
    if (t.kind != Kind::Symbol || t.text != symbol) {
      fail(t, std::string("expected '") + symbol + "'" + (t.kind == Kind::End ? " before end of input" : ""));
    }
    return t;
  }

  Token expect(Kind kind, const char* what) {
    Token t = lex_.take();
    if (t.kind != kind) fail(t, std::string("expected ") + what);
    return t;
  }

  int integer(const Token& t) const {
    try {
      return std::stoi(t.text);
    } catch (const std::exception&) {
      fail(t, "integer out of range");
    }
  }

  void statement(std::vector<Statement>& out) {
    Token head = lex_.take();
    if (head.kind != Kind::Identifier) fail(head, "expected statement");
    const std::string& word = head.text;
    if (word == "OPENQASM") {
      Token v = lex_.take();
      if ((v.kind != Kind::Real && v.kind != Kind::Integer) || v.text.rfind("2", 0) != 0) {
        fail(v, "only OPENQASM 2.x is supported");
      }
      expect_symbol(";");
    } else if (word == "include") {
      expect(Kind::String, "file name");
      expect_symbol(";");
    } else if (word == "qreg" || word == "creg") {
      Token name = expect(Kind::Identifier, "register name");
      expect_symbol("[");
      Token size = expect(Kind::Integer, "register size");
      expect_symbol("]");
      expect_symbol(";");
      if (qregs_.count(name.text) || cregs_.count(name.text)) fail(name, "register '" + name.text + "' redeclared");
      const int n = integer(size);
      if (n <= 0) fail(size, "register size must be positive");
      if (word == "qreg") {
        qregs_[name.text] = {total_qubits_, n};
        total_qubits_ += n;
      } else {
        cregs_[name.text] = {0, n};
      }
    } else if (word == "measure") {
      argument();
      expect_symbol("->");
      Token c = expect(Kind::Identifier, "classical register");
      if (lex_.peek().kind == Kind::Symbol && lex_.peek().text == "[") {
        lex_.take();
        expect(Kind::Integer, "index");
        expect_symbol("]");
      }
      if (!cregs_.count(c.text)) fail(c, "unknown classical register '" + c.text + "'");
      expect_symbol(";");
    } else if (word == "barrier") {
      Statement st;
      st.barrier = true;
      st.name = head;
      st.args = argument_list();
      out.push_back(std::move(st));
    } else if (word == "gate" || word == "opaque" || word == "if" || word == "reset") {
      fail(head, "unsupported statement '" + word + "'");
    } else {
      const bool one = one_qubit_gate_names().count(word) > 0;
      const bool two = two_qubit_gate_names().count(word) > 0;
      if (!one && !two) fail(head, "unsupported gate '" + word + "'");
      Statement st;
      st.name = head;
      if (lex_.peek().kind == Kind::Symbol && lex_.peek().text == "(") {
        lex_.take();
        st.params = lex_.take_parenthesized();
      }
      st.args = argument_list();
      const std::size_t expected = one ? 1 : 2;
      if (st.args.size() != expected) {
        fail(head, "gate '" + word + "' takes " + std::to_string(expected) + " operand(s)");
      }
      out.push_back(std::move(st));
    }
  }

  Argument argument() {
    Token name = expect(Kind::Identifier, "qubit argument");
    Argument a;
    a.reg = name.text;
    a.line = name.line;
    a.column = name.column;
    auto it = qregs_.find(name.text);
    if (it == qregs_.end()) fail(name, "unknown quantum register '" + name.text + "'");
    if (lex_.peek().kind == Kind::Symbol && lex_.peek().text == "[") {
      lex_.take();
      Token idx = expect(Kind::Integer, "qubit index");
      expect_symbol("]");
      a.index = integer(idx);
      if (a.index < 0 || a.index >= it->second.size) {
        fail(idx, "qubit index " + idx.text + " out of range for register '" + name.text + "' of size " +
                      std::to_string(it->second.size));
      }
    }
    return a;
  }

  std::vector<Argument> argument_list() {
    std::vector<Argument> args;
    args.push_back(argument());
    while (lex_.peek().kind == Kind::Symbol && lex_.peek().text == ",") {
      lex_.take();
      args.push_back(argument());
    }
    expect_symbol(";");
    return args;
  }

  std::vector<int> expand(const Argument& a) const {
    const Register& r = qregs_.at(a.reg);
    if (a.index >= 0) return {r.offset + a.index};
    std::vector<int> qs(r.size);
    for (int i = 0; i < r.size; ++i) qs[i] = r.offset + i;
    return qs;
  }

  void emit(Circuit& circuit, const Statement& st) {
    std::vector<std::vector<int>> operands;
    std::size_t width = 1;
    for (const auto& arg : st.args) {
      operands.push_back(expand(arg));
      if (operands.back().size() > 1) {
        if (width > 1 && operands.back().size() != width) fail(st.name, "register size mismatch in broadcast");
        width = operands.back().size();
      }
    }
    for (std::size_t k = 0; k < width; ++k) {
      auto pick = [&](std::size_t i) { return operands[i].size() == 1 ? operands[i][0] : operands[i][k]; };
      if (operands.size() == 1) {
        circuit.add_one_qubit(st.name.text, pick(0), st.params);
      } else {
        const int a = pick(0);
        const int b = pick(1);
        if (a == b) fail(st.name, "duplicate operands in '" + st.name.text + "'");
        circuit.add_two_qubit(st.name.text, a, b, st.params);
      }
    }
  }

  QasmLexer lex_;
  std::unordered_map<std::string, Register> qregs_;
  std::unordered_map<std::string, Register> cregs_;
  int total_qubits_ = 0;
};

inline void write_gate(std::ostream& os, const std::string& name, const std::string& params, int a, int b) {
  os << name;
  if (!params.empty()) os << '(' << params << ')';
  os << " q[" << a << ']';
  if (b >= 0) os << ",q[" << b << ']';
  os << ";\n";
}

inline void write_swap(std::ostream& os, int a, int b, SwapModel model) {
  if (model == SwapModel::Cx3) {
    write_gate(os, "cx", {}, a, b);
    write_gate(os, "cx", {}, b, a);
    write_gate(os, "cx", {}, a, b);
  } else {
    write_gate(os, "swap", {}, a, b);
  }
}

}  // namespace detail

/// Parses the supported OPENQASM 2.0 subset. Measurements are dropped and all
/// quantum registers are flattened in declaration order.
inline Circuit parse_qasm(std::string_view text) { return detail::QasmParser(text).parse(); }

/// Writes `c` over a single register `q`. Routing swaps follow `model`.
inline std::string serialize_qasm(const Circuit& c, SwapModel model = SwapModel::Unit) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "qreg q[" << c.num_qubits() << "];\n";
  const auto& barriers = c.barriers();
  std::size_t b = 0;
  auto flush_barriers = [&](int position) {
    while (b < barriers.size() && barriers[b].position == position) {
      if (!barriers[b].qubits.empty()) {
        os << "barrier ";
        for (std::size_t i = 0; i < barriers[b].qubits.size(); ++i) {
          os << (i ? "," : "") << "q[" << barriers[b].qubits[i] << ']';
        }
        os << ";\n";
      }
      ++b;
    }
  };
  for (const Gate& g : c.gates()) {
    flush_barriers(g.id);
    if (g.kind == GateKind::Swap) {
      detail::write_swap(os, g.qubits[0], g.qubits[1], model);
    } else {
      detail::write_gate(os, g.name, g.params, g.qubits[0], g.qubits[1]);
    }
  }
  flush_barriers(static_cast<int>(c.size()));
  return os.str();
}

}  // namespace mlsabre
