// Copyright 2026 The streamitn Authors.
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

#include <cctype>
#include <charconv>
#include <set>

#include "itn/errors.h"
#include "itn/rules.h"

namespace itn {

RuleExpr RuleExpr::Mapping(std::string lexical, std::string written) {
  RuleExpr e;
  e.kind = Kind::kMapping;
  e.lexical = std::move(lexical);
  e.written = std::move(written);
  return e;
}

RuleExpr RuleExpr::Ref(std::string name) {
  RuleExpr e;
  e.kind = Kind::kRuleRef;
  e.name = std::move(name);
  return e;
}

RuleExpr RuleExpr::Sequence(std::vector<RuleExpr> children) {
  RuleExpr e;
  e.kind = Kind::kSequence;
  e.children = std::move(children);
  return e;
}

RuleExpr RuleExpr::Quantified(RuleExpr child, char quantifier,
                              int max_repeat) {
  RuleExpr e;
  e.kind = Kind::kQuantified;
  e.quantifier = quantifier;
  e.max_repeat = quantifier == '?' ? 0 : max_repeat;
  e.children.push_back(std::move(child));
  return e;
}

namespace {

enum class Tok {
  kIdent,
  kString,
  kNumber,
  kEquals,
  kSemicolon,
  kPipe,
  kLParen,
  kRParen,
  kColon,
  kQuestion,
  kStar,
  kPlus,
  kLBrace,
  kRBrace,
  kAt,
  kTilde,
  kEnd,
};

struct Token {
  Tok type;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  Lexer(const std::string& src, const std::string& file)
      : src_(src), file_(file) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      SkipSpaceAndComments();
      const int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          id += Advance();
        }
        out.push_back({Tok::kIdent, id, line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::string num;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '.')) {
          num += Advance();
        }
        out.push_back({Tok::kNumber, num, line, col});
      } else if (c == '"') {
        out.push_back({Tok::kString, ReadString(), line, col});
      } else {
        Advance();
        Tok t;
        switch (c) {
          case '=': t = Tok::kEquals; break;
          case ';': t = Tok::kSemicolon; break;
          case '|': t = Tok::kPipe; break;
          case '(': t = Tok::kLParen; break;
          case ')': t = Tok::kRParen; break;
          case ':': t = Tok::kColon; break;
          case '?': t = Tok::kQuestion; break;
          case '*': t = Tok::kStar; break;
          case '+': t = Tok::kPlus; break;
          case '{': t = Tok::kLBrace; break;
          case '}': t = Tok::kRBrace; break;
          case '@': t = Tok::kAt; break;
          case '~': t = Tok::kTilde; break;
          default:
            throw ParseError(file_, line, col,
                             std::string("unexpected character '") + c + "'");
        }
        out.push_back({t, std::string(1, c), line, col});
      }
    }
  }

 private:
  char Advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void SkipSpaceAndComments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') Advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else {
        return;
      }
    }
  }

  std::string ReadString() {
    const int line = line_, col = col_;
    Advance();  // opening quote
    std::string s;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw ParseError(file_, line, col, "unterminated string");
      }
      char c = Advance();
      if (c == '"') return s;
      if (c == '\\') {
        if (pos_ >= src_.size()) {
          throw ParseError(file_, line, col, "unterminated string");
        }
        s += Advance();
      } else {
        s += c;
      }
    }
  }

  const std::string& src_;
  const std::string& file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct RefSite {
  std::string name;
  std::string file;
  int line;
  int column;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, RuleSet* rs,
         std::vector<RefSite>* refs,
         std::map<std::string, RefSite>* definitions)
      : toks_(std::move(tokens)),
        file_(std::move(file)),
        rs_(rs),
        refs_(refs),
        definitions_(definitions) {}

  // Imports are returned for the caller to resolve in order.
  void ParseFile(const std::function<void(const Token&)>& on_import) {
    while (Peek().type != Tok::kEnd) {
      const Token& t = Peek();
      if (t.type == Tok::kIdent && t.text == "import" &&
          PeekAt(1).type == Tok::kString) {
        Next();
        Token name = Next();
        Expect(Tok::kSemicolon, "';' after import");
        on_import(name);
        continue;
      }
      ParseDefinition();
    }
  }

 private:
  const Token& Peek() const { return toks_[pos_]; }
  const Token& PeekAt(size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token Next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void Fail(const Token& t, const std::string& what) const {
    throw ParseError(file_, t.line, t.column, what);
  }

  Token Expect(Tok type, const char* what) {
    if (Peek().type != type) {
      Fail(Peek(), std::string("expected ") + what +
                       (Peek().type == Tok::kEnd
                            ? " before end of input"
                            : ", found '" + Peek().text + "'"));
    }
    return Next();
  }

  void ParseDefinition() {
    Token name = Expect(Tok::kIdent, "rule name");
    Expect(Tok::kEquals, "'='");
    if (Peek().type == Tok::kSemicolon) {
      Fail(Peek(), name.text == rs_->root ? "empty root rule"
                                          : "empty rule '" + name.text + "'");
    }
    RuleExpr expr = ParseAlternation();
    Expect(Tok::kSemicolon, "';'");
    if (rs_->rules.count(name.text)) {
      const RefSite& first = definitions_->at(name.text);
      Fail(name, "duplicate rule '" + name.text + "' (first defined at " +
                     first.file + ":" + std::to_string(first.line) + ")");
    }
    definitions_->emplace(name.text,
                          RefSite{name.text, file_, name.line, name.column});
    rs_->rules.emplace(name.text, std::move(expr));
    rs_->order.push_back(name.text);
  }

  RuleExpr ParseAlternation() {
    std::vector<RuleExpr> branches;
    std::vector<float> costs;
    std::vector<bool> alts;
    bool annotated = false;
    while (true) {
      branches.push_back(ParseSequence());
      float cost = 0;
      bool alt = false;
      while (Peek().type == Tok::kAt || Peek().type == Tok::kTilde) {
        Token t = Next();
        if (t.type == Tok::kAt) {
          Token num = Expect(Tok::kNumber, "cost after '@'");
          auto [p, ec] = std::from_chars(
              num.text.data(), num.text.data() + num.text.size(), cost);
          if (ec != std::errc() || p != num.text.data() + num.text.size() ||
              cost < 0) {
            Fail(num, "invalid cost '" + num.text + "'");
          }
        } else {
          Token word = Expect(Tok::kIdent, "'alt' after '~'");
          if (word.text != "alt") Fail(word, "unknown annotation '~" +
                                                 word.text + "'");
          alt = true;
        }
        annotated = true;
      }
      costs.push_back(cost);
      alts.push_back(alt);
      if (Peek().type != Tok::kPipe) break;
      Next();
    }
    if (branches.size() == 1 && !annotated) return std::move(branches[0]);
    RuleExpr e;
    e.kind = RuleExpr::Kind::kAlternation;
    e.children = std::move(branches);
    e.branch_costs = std::move(costs);
    e.branch_alt = std::move(alts);
    return e;
  }

  bool StartsAtom() const {
    Tok t = Peek().type;
    if (t == Tok::kString || t == Tok::kLParen) return true;
    // An identifier followed by '=' begins the next definition, which only
    // happens after a missing ';'.
    return t == Tok::kIdent && PeekAt(1).type != Tok::kEquals;
  }

  RuleExpr ParseSequence() {
    std::vector<RuleExpr> items;
    while (StartsAtom()) items.push_back(ParsePostfix());
    if (items.empty()) {
      Fail(Peek(), Peek().type == Tok::kEnd
                       ? "expected expression before end of input"
                       : "expected expression, found '" + Peek().text + "'");
    }
    if (items.size() == 1) return std::move(items[0]);
    return RuleExpr::Sequence(std::move(items));
  }

  RuleExpr ParsePostfix() {
    RuleExpr e = ParseAtom();
    while (true) {
      Tok t = Peek().type;
      if (t == Tok::kQuestion) {
        Next();
        e = RuleExpr::Quantified(std::move(e), '?', 0);
      } else if (t == Tok::kStar || t == Tok::kPlus) {
        Token op = Next();
        if (Peek().type != Tok::kLBrace) {
          Fail(Peek(), "'" + op.text + "' needs a bound, e.g. " + op.text +
                           "{10}");
        }
        Next();
        Token num = Expect(Tok::kNumber, "repetition bound");
        int bound = 0;
        auto [p, ec] = std::from_chars(
            num.text.data(), num.text.data() + num.text.size(), bound);
        if (ec != std::errc() || p != num.text.data() + num.text.size() ||
            bound < 1 || bound > kMaxRepeat) {
          Fail(num, "repetition bound must be an integer in 1.." +
                        std::to_string(kMaxRepeat));
        }
        Expect(Tok::kRBrace, "'}'");
        e = RuleExpr::Quantified(std::move(e), op.text[0], bound);
      } else {
        return e;
      }
    }
  }

  RuleExpr ParseAtom() {
    Token t = Next();
    if (t.type == Tok::kString) {
      if (Peek().type == Tok::kColon) {
        Next();
        Token w = Expect(Tok::kString, "written string after ':'");
        return RuleExpr::Mapping(t.text, w.text);
      }
      return RuleExpr::Mapping(t.text, t.text);
    }
    if (t.type == Tok::kIdent) {
      refs_->push_back({t.text, file_, t.line, t.column});
      return RuleExpr::Ref(t.text);
    }
    if (t.type == Tok::kLParen) {
      RuleExpr e = ParseAlternation();
      Expect(Tok::kRParen, "')'");
      return e;
    }
    Fail(t, "unexpected '" + t.text + "'");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string file_;
  RuleSet* rs_;
  std::vector<RefSite>* refs_;
  std::map<std::string, RefSite>* definitions_;
};

void CollectRefs(const RuleExpr& e, std::set<std::string>* out) {
  if (e.kind == RuleExpr::Kind::kRuleRef) out->insert(e.name);
  for (const RuleExpr& c : e.children) CollectRefs(c, out);
}

void CheckAcyclic(const RuleSet& rs,
                  const std::map<std::string, RefSite>& definitions) {
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& [name, expr] : rs.rules) CollectRefs(expr, &edges[name]);
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<std::string, int> color;
  std::vector<std::string> path;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    color[n] = 1;
    path.push_back(n);
    for (const std::string& m : edges[n]) {
      if (color[m] == 1) {
        std::string cycle;
        auto it = std::find(path.begin(), path.end(), m);
        for (; it != path.end(); ++it) cycle += *it + " -> ";
        cycle += m;
        const RefSite& site = definitions.at(m);
        throw ParseError(site.file, site.line, site.column,
                         "cyclic rule reference: " + cycle);
      }
      if (color[m] == 0) visit(m);
    }
    path.pop_back();
    color[n] = 2;
  };
  for (const auto& [name, expr] : rs.rules) {
    if (color[name] == 0) visit(name);
  }
}

}  // namespace

RuleSet ParseRules(const std::string& source, const std::string& category,
                   const std::string& file, const ImportResolver& resolver) {
  RuleSet rs;
  rs.category = category;
  std::vector<RefSite> refs;
  std::map<std::string, RefSite> definitions;
  std::set<std::string> imported;

  std::function<void(const std::string&, const std::string&)> parse_text =
      [&](const std::string& text, const std::string& name) {
        Parser parser(Lexer(text, name).Run(), name, &rs, &refs,
                      &definitions);
        parser.ParseFile([&](const Token& imp) {
          if (imported.count(imp.text)) return;
          std::optional<std::string> lib;
          if (resolver) lib = resolver(imp.text);
          if (!lib) {
            throw ParseError(name, imp.line, imp.column,
                             "cannot resolve import \"" + imp.text + "\"");
          }
          imported.insert(imp.text);
          parse_text(*lib, imp.text + ".grm");
        });
      };
  parse_text(source, file);

  for (const RefSite& r : refs) {
    if (!rs.rules.count(r.name)) {
      throw ParseError(r.file, r.line, r.column,
                       "unresolved rule reference '" + r.name + "'");
    }
  }
  if (!rs.rules.count(rs.root)) {
    throw ParseError(file, 1, 1, "empty root: no '" + rs.root + "' rule");
  }
  CheckAcyclic(rs, definitions);
  return rs;
}

}  // namespace itn
