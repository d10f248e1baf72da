// Copyright 2026 The statflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Assembler for dataflow graphs. One statement per operator:
//
//   statement := [INT '.'] IDENT label (',' label)* ';'
//
// Argument order per mnemonic (inputs first, then outputs):
//
//   copy a,z1,z2          not a,z
//   add|sub|mul|div|and|or a,b,z
//   ndmerge a,b,z         dmerge a,b,ctl,z
//   branch a,ctl,t,f      {gt,ge,lt,le,eq,df}decider a,b,z
//
// `--` starts a comment running to end of line. A label that no statement
// produces becomes a graph input; one that no statement consumes becomes a
// graph output.

#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "statflow/graph.hpp"
#include "statflow/operator_kind.hpp"

namespace statflow {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, const std::string& what)
      : std::runtime_error("line " + std::to_string(loc.line) + ", column " +
                           std::to_string(loc.column) + ": " + what),
        loc_(loc) {}

  SourceLocation location() const { return loc_; }

 private:
  SourceLocation loc_;
};

struct Statement {
  std::optional<long> line_number;
  std::string mnemonic;
  std::vector<std::string> args;
  SourceLocation where;
};

namespace detail {

class DfasmLexer {
 public:
  enum class Tok { Ident, Int, Dot, Comma, Semi, End };

  struct Token {
    Tok kind;
    std::string text;
    SourceLocation loc;
  };

  explicit DfasmLexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blank();
    SourceLocation at = loc_;
    if (pos_ >= src_.size()) return {Tok::End, "", at};
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), at};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      }
      return {Tok::Int, std::string(src_.substr(start, pos_ - start)), at};
    }
    advance();
    switch (c) {
      case '.': return {Tok::Dot, ".", at};
      case ',': return {Tok::Comma, ",", at};
      case ';': return {Tok::Semi, ";", at};
      default:
        throw ParseError(at, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else {
      ++loc_.column;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  SourceLocation loc_;
};

inline std::string_view tok_name(DfasmLexer::Tok t) {
  using Tok = DfasmLexer::Tok;
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::End: return "end of input";
  }
  return "?";
}

}  // namespace detail

// Tokenizes and checks the statement shape and per-mnemonic arity.
inline std::vector<Statement> parse_statements(std::string_view source) {
  using Tok = detail::DfasmLexer::Tok;
  detail::DfasmLexer lex(source);
  std::vector<Statement> out;

  auto expect = [](const detail::DfasmLexer::Token& t, Tok want) {
    if (t.kind != want) {
      throw ParseError(t.loc, "expected " + std::string(detail::tok_name(want)) +
                                  ", found " +
                                  (t.kind == Tok::End ? std::string("end of input")
                                                      : "'" + t.text + "'"));
    }
  };

  for (auto tok = lex.next(); tok.kind != Tok::End; tok = lex.next()) {
    Statement st;
    st.where = tok.loc;
    if (tok.kind == Tok::Int) {
      st.line_number = std::stol(tok.text);
      expect(lex.next(), Tok::Dot);
      tok = lex.next();
    }
    expect(tok, Tok::Ident);
    st.mnemonic = tok.text;
    auto kind = kind_from_mnemonic(st.mnemonic);
    if (!kind) throw ParseError(tok.loc, "unknown mnemonic '" + st.mnemonic + "'");

    auto label = lex.next();
    expect(label, Tok::Ident);
    st.args.push_back(label.text);
    for (tok = lex.next(); tok.kind == Tok::Comma; tok = lex.next()) {
      label = lex.next();
      expect(label, Tok::Ident);
      st.args.push_back(label.text);
    }
    expect(tok, Tok::Semi);

    const std::size_t want = port_count(*kind);
    if (st.args.size() != want) {
      std::string sig;
      for (auto s : input_slots(*kind)) sig += std::string(slot_name(s)) + ",";
      for (auto s : output_slots(*kind)) sig += std::string(slot_name(s)) + ",";
      sig.pop_back();
      throw ParseError(st.where, "'" + st.mnemonic + "' expects " +
                                     std::to_string(want) + " arguments (" + sig +
                                     "), got " + std::to_string(st.args.size()));
    }
    out.push_back(std::move(st));
  }
  return out;
}

// Instance names are "<mnemonic>_<ordinal>", ordinal counting statements
// from 1. The optional `N.` prefix is ignored.
inline DataflowGraph build_graph(const std::vector<Statement>& statements) {
  DataflowGraph g;
  std::unordered_set<std::string> produced;
  std::unordered_set<std::string> consumed;
  std::vector<std::string> order;
  std::unordered_set<std::string> seen;

  for (std::size_t i = 0; i < statements.size(); ++i) {
    const Statement& st = statements[i];
    const OperatorKind kind = *kind_from_mnemonic(st.mnemonic);
    const std::size_t n_in = input_slots(kind).size();
    for (std::size_t p = 0; p < st.args.size(); ++p) {
      (p < n_in ? consumed : produced).insert(st.args[p]);
      if (seen.insert(st.args[p]).second) order.push_back(st.args[p]);
    }
    g.add_node(kind, st.mnemonic + "_" + std::to_string(i + 1), st.args);
  }
  for (const auto& l : order) {
    if (!produced.count(l)) g.add_input(l);
  }
  for (const auto& l : order) {
    if (!consumed.count(l)) g.add_output(l);
  }
  return g;
}

inline DataflowGraph parse_program(std::string_view source) {
  return build_graph(parse_statements(source));
}

// Pretty-printer; parse_program(print_program(g)) reproduces g's
// connectivity.
inline std::string print_program(const DataflowGraph& g, bool numbered = false) {
  std::string out;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const Node& n = g.nodes()[i];
    if (numbered) out += std::to_string(i + 1) + ".";
    out += mnemonic(n.kind);
    out += ' ';
    for (std::size_t p = 0; p < n.ports.size(); ++p) {
      if (p) out += ',';
      out += n.ports[p];
    }
    out += ";\n";
  }
  return out;
}

}  // namespace statflow
