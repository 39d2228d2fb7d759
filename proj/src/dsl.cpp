// Copyright 2026 The atrisk Authors. All Rights Reserved.
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

#include "dsl.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>

namespace atrisk {

namespace {

enum class Tok { kIdent, kInt, kString, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // unescaped for strings
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "meta", "param", "tree", "leaf", "ref", "or",
      "and",  "sand",  "partition", "times"};
  return kw;
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0;
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class Lexer {
 public:
  Lexer(const std::string& file, const std::string& text,
        std::vector<ParseDiagnostic>& diags)
      : file_(file), text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::kEnd;
        t.end_line = line_;
        t.end_col = col_;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (is_ident_start(c)) {
        t.kind = Tok::kIdent;
        while (pos_ < text_.size() && is_ident_char(text_[pos_]))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::kInt;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          t.text += advance();
      } else if (c == '"') {
        if (!lex_string(t)) continue;
      } else if (std::string("{}();=+-|").find(c) != std::string::npos) {
        t.kind = Tok::kPunct;
        t.text = advance();
      } else {
        std::ostringstream msg;
        msg << "unexpected character";
        if (std::isprint(static_cast<unsigned char>(c))) msg << " '" << c << "'";
        else msg << " (byte 0x" << std::hex << (static_cast<unsigned>(c) & 0xff) << ")";
        advance();
        error(msg.str(), t.line, t.col, line_, col_);
        continue;
      }
      t.end_line = line_;
      t.end_col = col_;
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool lex_string(Token& t) {
    t.kind = Tok::kString;
    advance();  // opening quote
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') {
        error("unterminated string", t.line, t.col, line_, col_);
        return false;
      }
      char c = advance();
      if (c == '"') return true;
      if (c != '\\') {
        t.text += c;
        continue;
      }
      if (pos_ >= text_.size()) continue;
      char e = advance();
      switch (e) {
        case '"': t.text += '"'; break;
        case '\\': t.text += '\\'; break;
        case 'n': t.text += '\n'; break;
        case 't': t.text += '\t'; break;
        case 'r': t.text += '\r'; break;
        default:
          error(std::string("unknown escape sequence '\\") + e + "'", line_,
                col_ - 2, line_, col_);
      }
    }
  }

  void error(std::string msg, int l0, int c0, int l1, int c1) {
    diags_.push_back({ParseDiagnostic::Severity::kError, std::move(msg),
                      SourceSpan{file_, l0, c0, l1, c1}});
  }

  const std::string& file_;
  const std::string& text_;
  std::vector<ParseDiagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError {
  std::string message;
  SourceSpan span;
};

class Parser {
 public:
  Parser(const std::string& file, std::vector<Token> toks, TreeLibrary& lib,
         std::vector<ParseDiagnostic>& diags)
      : file_(file), toks_(std::move(toks)), lib_(lib), diags_(diags) {}

  void run() {
    while (peek().kind != Tok::kEnd) {
      try {
        declaration();
      } catch (const SyntaxError& e) {
        diags_.push_back({ParseDiagnostic::Severity::kError, e.message, e.span});
        resync();
      }
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  SourceSpan span_of(const Token& t) const {
    return {file_, t.line, t.col, t.end_line, t.end_col};
  }

  SourceSpan span_between(const Token& a, const Token& b) const {
    return {file_, a.line, a.col, b.end_line, b.end_col};
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    std::string found = at.kind == Tok::kEnd      ? "end of input"
                        : at.kind == Tok::kString ? "string"
                                                  : "'" + at.text + "'";
    throw SyntaxError{msg + ", found " + found, span_of(at)};
  }

  bool is_punct(const Token& t, char c) const {
    return t.kind == Tok::kPunct && t.text.size() == 1 && t.text[0] == c;
  }

  bool is_keyword(const Token& t, const char* kw) const {
    return t.kind == Tok::kIdent && t.text == kw;
  }

  Token expect_punct(char c) {
    if (!is_punct(peek(), c)) fail(std::string("expected '") + c + "'", peek());
    return take();
  }

  std::string expect_key(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || keywords().count(t.text))
      fail(std::string("expected ") + what, t);
    return take().text;
  }

  std::string expect_name() {
    if (is_punct(peek(), '|')) {
      take();
      std::string inner = expect_key("parameter name");
      expect_punct('|');
      return "|" + inner + "|";
    }
    return expect_key("parameter name");
  }

  std::optional<std::string> opt_string() {
    if (peek().kind == Tok::kString) return take().text;
    return std::nullopt;
  }

  void resync() {
    while (peek().kind != Tok::kEnd) {
      const Token& t = peek();
      if (is_keyword(t, "tree") || is_keyword(t, "param") ||
          is_keyword(t, "meta"))
        return;
      take();
    }
  }

  void declaration() {
    const Token start = peek();
    if (is_keyword(start, "meta")) {
      take();
      std::string key = expect_key("metadata key");
      if (peek().kind != Tok::kString) fail("expected metadata string", peek());
      std::string value = take().text;
      Token end = expect_punct(';');
      if (lib_.meta(key))
        throw SyntaxError{"duplicate metadata key '" + key + "'",
                          span_between(start, end)};
      lib_.metadata.emplace_back(key, value);
    } else if (is_keyword(start, "param")) {
      take();
      std::string name = expect_name();
      std::string doc = opt_string().value_or("");
      Token end = expect_punct(';');
      if (lib_.declares(name))
        throw SyntaxError{"duplicate parameter declaration '" + name + "'",
                          span_between(start, end)};
      lib_.parameters.push_back({name, doc, span_between(start, end)});
    } else if (is_keyword(start, "tree")) {
      take();
      Tree tree;
      tree.key = expect_key("tree key");
      tree.title = opt_string().value_or("");
      if (is_punct(peek(), '{')) {
        take();
        tree.root = node();
        expect_punct('}');
      } else {
        tree.root = node();
      }
      tree.span = span_between(start, toks_[pos_ ? pos_ - 1 : 0]);
      if (lib_.trees.count(tree.key))
        throw SyntaxError{"duplicate tree key '" + tree.key + "'",
                          span_between(start, start)};
      std::string key = tree.key;
      lib_.trees.emplace(std::move(key), std::move(tree));
    } else {
      fail("expected 'tree', 'param' or 'meta'", start);
    }
  }

  std::optional<IntExpr> opt_times() {
    if (!is_keyword(peek(), "times")) return std::nullopt;
    take();
    expect_punct('(');
    IntExpr e = int_expr();
    expect_punct(')');
    return e;
  }

  IntExpr int_expr() {
    std::vector<IntExpr::Term> terms;
    bool negative = false;
    while (true) {
      const Token& t = peek();
      IntExpr::Term term;
      term.negative = negative;
      if (t.kind == Tok::kInt) {
        Token lit = take();
        std::int64_t v = 0;
        for (char c : lit.text) {
          if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
            throw SyntaxError{"integer literal too large", span_of(lit)};
          v = v * 10 + (c - '0');
        }
        term.value = v;
      } else {
        term.value = expect_name();
      }
      terms.push_back(std::move(term));
      if (is_punct(peek(), '+') || is_punct(peek(), '-')) {
        negative = take().text == "-";
      } else {
        return IntExpr(std::move(terms));
      }
    }
  }

  TreeNode node() {
    const Token start = peek();
    TreeNode n;
    if (is_keyword(start, "leaf")) {
      take();
      if (peek().kind != Tok::kString) fail("leaf requires a label string", peek());
      n.label = take().text;
      n.multiplicity = opt_times();
      Token end = expect_punct(';');
      n.span = span_between(start, end);
      return n;
    }
    if (is_keyword(start, "ref")) {
      take();
      n.reference = expect_key("referenced tree key");
      n.label = opt_string().value_or("");
      n.multiplicity = opt_times();
      Token end = expect_punct(';');
      n.span = span_between(start, end);
      return n;
    }
    if (is_keyword(start, "or")) {
      n.gate = GateKind::kOr;
    } else if (is_keyword(start, "and")) {
      n.gate = GateKind::kAnd;
    } else if (is_keyword(start, "sand")) {
      n.gate = GateKind::kSand;
    } else if (is_keyword(start, "partition")) {
      n.gate = GateKind::kPartition;
    } else {
      fail("expected 'leaf', 'ref', 'or', 'and', 'sand' or 'partition'", start);
    }
    take();
    if (n.gate == GateKind::kPartition) {
      expect_punct('(');
      PartitionConstraint c;
      c.variables.push_back(expect_key("count variable"));
      while (is_punct(peek(), '+')) {
        take();
        c.variables.push_back(expect_key("count variable"));
      }
      expect_punct('=');
      c.total = int_expr();
      expect_punct(')');
      n.constraint = std::move(c);
    }
    n.label = opt_string().value_or("");
    n.multiplicity = opt_times();
    Token open = expect_punct('{');
    if (is_punct(peek(), '}')) {
      Token close = take();
      throw SyntaxError{"gate requires at least one child",
                        span_between(open, close)};
    }
    while (!is_punct(peek(), '}')) {
      if (peek().kind == Tok::kEnd) fail("expected '}'", peek());
      n.children.push_back(node());
    }
    Token close = take();
    n.span = span_between(start, close);
    return n;
  }

  const std::string& file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  TreeLibrary& lib_;
  std::vector<ParseDiagnostic>& diags_;
};

void merge_into(TreeLibrary& dst, TreeLibrary&& src,
                std::vector<ParseDiagnostic>& diags) {
  for (auto& [k, v] : src.metadata) {
    if (dst.meta(k))
      diags.push_back({ParseDiagnostic::Severity::kError,
                       "duplicate metadata key '" + k + "'", {}});
    else
      dst.metadata.emplace_back(k, v);
  }
  for (auto& p : src.parameters) {
    if (dst.declares(p.name))
      diags.push_back({ParseDiagnostic::Severity::kError,
                       "duplicate parameter declaration '" + p.name + "'",
                       p.span});
    else
      dst.parameters.push_back(std::move(p));
  }
  for (auto& [k, t] : src.trees) {
    if (dst.trees.count(k))
      diags.push_back({ParseDiagnostic::Severity::kError,
                       "duplicate tree key '" + k + "'", t.span});
    else
      dst.trees.emplace(k, std::move(t));
  }
}

void write_node(std::ostringstream& out, const TreeNode& n, int depth) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out << indent;
  auto times = [&] {
    if (n.multiplicity) out << " times(" << n.multiplicity->str() << ")";
  };
  if (n.reference) {
    out << "ref " << *n.reference;
    if (!n.label.empty()) out << ' ' << quote_string(n.label);
    times();
    out << ";\n";
    return;
  }
  if (!n.gate) {
    out << "leaf " << quote_string(n.label);
    times();
    out << ";\n";
    return;
  }
  out << gate_name(*n.gate);
  if (n.gate == GateKind::kPartition && n.constraint)
    out << '(' << n.constraint->str() << ')';
  if (!n.label.empty()) out << ' ' << quote_string(n.label);
  times();
  out << " {\n";
  for (const auto& c : n.children) write_node(out, c, depth + 1);
  out << indent << "}\n";
}

}  // namespace

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

ParseResult parse_library(std::span<const SourceDocument> docs) {
  std::vector<const SourceDocument*> ordered;
  for (const auto& d : docs) ordered.push_back(&d);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SourceDocument* a, const SourceDocument* b) {
                     return a->name < b->name;
                   });

  ParseResult result;
  TreeLibrary merged;
  for (const auto* doc : ordered) {
    TreeLibrary part;
    auto tokens = Lexer(doc->name, doc->text, result.diagnostics).run();
    Parser(doc->name, std::move(tokens), part, result.diagnostics).run();
    merge_into(merged, std::move(part), result.diagnostics);
  }
  bool failed = std::any_of(
      result.diagnostics.begin(), result.diagnostics.end(),
      [](const ParseDiagnostic& d) {
        return d.severity == ParseDiagnostic::Severity::kError;
      });
  if (!failed) result.library = std::move(merged);
  return result;
}

ParseResult parse_library(const std::string& name, const std::string& text) {
  SourceDocument doc{name, text};
  return parse_library(std::span<const SourceDocument>(&doc, 1));
}

std::vector<SourceDocument> serialize_library(const TreeLibrary& lib,
                                              const std::string& name) {
  std::ostringstream out;
  for (const auto& [k, v] : lib.metadata)
    out << "meta " << k << ' ' << quote_string(v) << ";\n";
  for (const auto& p : lib.parameters) {
    out << "param " << p.name;
    if (!p.doc.empty()) out << ' ' << quote_string(p.doc);
    out << ";\n";
  }
  for (const auto& [key, tree] : lib.trees) {
    out << "\ntree " << key;
    if (!tree.title.empty()) out << ' ' << quote_string(tree.title);
    out << '\n';
    write_node(out, tree.root, 0);
  }
  return {SourceDocument{name, out.str()}};
}

}  // namespace atrisk
