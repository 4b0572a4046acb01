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

#include <charconv>

#include "itn/errors.h"
#include "itn/rules.h"
#include "itn/text.h"

namespace itn {
namespace {

std::vector<std::string> LexicalSymbols(const std::string& s) {
  return SplitWhitespace(s);
}

std::vector<std::string> WrittenSymbols(const std::string& s) {
  std::vector<std::string> out = Utf8Chars(s);
  for (std::string& c : out) {
    if (c == " ") c = std::string(kSpaceSymbol);
  }
  return out;
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string FormatCost(float cost) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), cost);
  std::string s(buf, p);
  // The rule lexer has no exponent syntax.
  if (s.find('e') != std::string::npos) {
    auto [q, ec2] = std::to_chars(buf, buf + sizeof(buf), cost,
                                  std::chars_format::fixed);
    s.assign(buf, q);
  }
  return s;
}

// Precedence: 0 alternation, 1 sequence, 2 postfix operand.
void Print(const RuleExpr& e, int context, std::string* out) {
  using K = RuleExpr::Kind;
  switch (e.kind) {
    case K::kMapping:
      *out += Quote(e.lexical);
      if (e.written != e.lexical) *out += ":" + Quote(e.written);
      return;
    case K::kRuleRef:
      *out += e.name;
      return;
    case K::kQuantified:
      Print(e.children[0], 2, out);
      *out += e.quantifier;
      if (e.quantifier != '?') *out += "{" + std::to_string(e.max_repeat) + "}";
      return;
    case K::kSequence: {
      const bool parens = context > 1;
      if (parens) *out += "(";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) *out += " ";
        Print(e.children[i], 2, out);
      }
      if (parens) *out += ")";
      return;
    }
    case K::kAlternation: {
      const bool parens = context > 0;
      if (parens) *out += "(";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) *out += " | ";
        Print(e.children[i], 1, out);
        // A lone branch needs some annotation to stay an alternation.
        const bool lone = e.children.size() == 1 && !e.branch_alt[i];
        if (e.branch_costs[i] != 0 || lone) {
          *out += " @" + FormatCost(e.branch_costs[i]);
        }
        if (e.branch_alt[i]) *out += " ~alt";
      }
      if (parens) *out += ")";
      return;
    }
  }
}

enum class Direction { kItn, kTn };

class Compiler {
 public:
  Compiler(const RuleSet& rs, const SymbolTablePtr& syms, Direction dir,
           bool mark_alternates)
      : rs_(rs),
        syms_(*syms),
        dir_(dir),
        mark_alternates_(mark_alternates),
        fst_(syms) {}

  Fst Build() {
    const Label open = Require(OpenTag(rs_.category));
    const Label close = Require(CloseTag(rs_.category));
    StateId s0 = fst_.AddState();
    StateId s1 = fst_.AddState();
    StateId s2 = fst_.AddState();
    StateId s3 = fst_.AddState();
    fst_.SetStart(s0);
    fst_.SetFinal(s3, 0);
    if (dir_ == Direction::kItn) {
      fst_.AddArc(s0, Arc{open, kEpsilon, 0, s1});
      fst_.AddArc(s2, Arc{close, kEpsilon, 0, s3});
    } else {
      fst_.AddArc(s0, Arc{kEpsilon, open, 0, s1});
      fst_.AddArc(s2, Arc{kEpsilon, close, 0, s3});
    }
    Emit(rs_.rules.at(rs_.root), s1, s2, 0);
    fst_.SortArcsByInput();
    return std::move(fst_);
  }

 private:
  Label Require(const std::string& sym) const {
    Label l = syms_.Find(sym);
    if (l == kNoLabel) {
      throw ConfigError("symbol '" + sym + "' missing from the table for " +
                        rs_.category);
    }
    return l;
  }

  void AddArc(StateId from, Label in, Label out, Weight w, StateId to) {
    if (dir_ == Direction::kTn) std::swap(in, out);
    fst_.AddArc(from, Arc{in, out, w, to});
  }

  // Emits a fragment for `e` from `from` to `to`. `cost` lands on the first
  // arc of every path through the fragment.
  void Emit(const RuleExpr& e, StateId from, StateId to, Weight cost) {
    using K = RuleExpr::Kind;
    switch (e.kind) {
      case K::kMapping: {
        std::vector<std::string> lex = LexicalSymbols(e.lexical);
        std::vector<std::string> wri = WrittenSymbols(e.written);
        const size_t n = std::max({lex.size(), wri.size(), size_t{1}});
        StateId cur = from;
        for (size_t i = 0; i < n; ++i) {
          StateId next = i + 1 == n ? to : fst_.AddState();
          Label in = i < lex.size() ? Require(lex[i]) : kEpsilon;
          Label out = i < wri.size() ? Require(wri[i]) : kEpsilon;
          AddArc(cur, in, out, i == 0 ? cost : 0, next);
          cur = next;
        }
        return;
      }
      case K::kRuleRef:
        Emit(rs_.rules.at(e.name), from, to, cost);
        return;
      case K::kSequence: {
        StateId cur = from;
        for (size_t i = 0; i < e.children.size(); ++i) {
          StateId next = i + 1 == e.children.size() ? to : fst_.AddState();
          Emit(e.children[i], cur, next, i == 0 ? cost : 0);
          cur = next;
        }
        return;
      }
      case K::kAlternation:
        for (size_t i = 0; i < e.children.size(); ++i) {
          const Weight w = cost + e.branch_costs[i];
          if (mark_alternates_ && e.branch_alt[i]) {
            StateId a = fst_.AddState();
            StateId b = fst_.AddState();
            // Markers go on the output side whatever the direction.
            fst_.AddArc(from, Arc{kEpsilon, Require(std::string(kAltOpenSymbol)),
                                  w, a});
            Emit(e.children[i], a, b, 0);
            fst_.AddArc(b, Arc{kEpsilon,
                               Require(std::string(kAltCloseSymbol)), 0, to});
          } else {
            Emit(e.children[i], from, to, w);
          }
        }
        return;
      case K::kQuantified: {
        const RuleExpr& child = e.children[0];
        if (e.quantifier == '?') {
          Emit(child, from, to, cost);
          AddArc(from, kEpsilon, kEpsilon, cost, to);
          return;
        }
        const bool star = e.quantifier == '*';
        StateId cur = from;
        for (int i = 0; i < e.max_repeat; ++i) {
          StateId next = i + 1 == e.max_repeat ? to : fst_.AddState();
          if (star && i == 0) AddArc(cur, kEpsilon, kEpsilon, cost, to);
          if (i > 0) AddArc(cur, kEpsilon, kEpsilon, 0, to);
          Emit(child, cur, next, i == 0 ? cost : 0);
          cur = next;
        }
        return;
      }
    }
  }

  const RuleSet& rs_;
  const SymbolTable& syms_;
  Direction dir_;
  bool mark_alternates_;
  Fst fst_;
};

void Collect(const RuleExpr& e, SymbolTable* syms) {
  if (e.kind == RuleExpr::Kind::kMapping) {
    for (const std::string& s : LexicalSymbols(e.lexical)) syms->AddSymbol(s);
    for (const std::string& s : WrittenSymbols(e.written)) syms->AddSymbol(s);
  }
  for (const RuleExpr& c : e.children) Collect(c, syms);
}

}  // namespace

std::string PrintRules(const RuleSet& rs) {
  std::string out;
  for (const std::string& name : rs.order) {
    out += name + " = ";
    Print(rs.rules.at(name), 0, &out);
    out += " ;\n";
  }
  return out;
}

std::string OpenTag(const std::string& category) {
  return "<" + category + ">";
}

std::string CloseTag(const std::string& category) {
  return "</" + category + ">";
}

void CollectSymbols(const RuleSet& rs, SymbolTable* syms) {
  syms->AddSymbol(kSpaceSymbol);
  syms->AddSymbol(kAltOpenSymbol);
  syms->AddSymbol(kAltCloseSymbol);
  syms->AddSymbol(OpenTag(rs.category));
  syms->AddSymbol(CloseTag(rs.category));
  for (const std::string& name : rs.order) Collect(rs.rules.at(name), syms);
}

Fst CompileItn(const RuleSet& rs, SymbolTablePtr syms) {
  return Compiler(rs, syms, Direction::kItn, false).Build();
}

Fst CompileTn(const RuleSet& rs, SymbolTablePtr syms, bool mark_alternates) {
  return Compiler(rs, syms, Direction::kTn, mark_alternates).Build();
}

Fst MoveTagsToOutput(const Fst& itn, const std::string& category) {
  const SymbolTable& syms = *itn.InputSymbols();
  const Label open = syms.Find(OpenTag(category));
  const Label close = syms.Find(CloseTag(category));
  if (open == kNoLabel || close == kNoLabel) {
    throw ConfigError("no tags for category " + category);
  }
  Fst out(itn.InputSymbols(), itn.OutputSymbols());
  for (StateId s = 0; s < itn.NumStates(); ++s) out.AddState();
  for (StateId s = 0; s < itn.NumStates(); ++s) {
    for (Arc arc : itn.Arcs(s)) {
      if (arc.ilabel == open || arc.ilabel == close) {
        if (arc.olabel != kEpsilon) {
          throw ConfigError("tag arc with output in " + category);
        }
        arc.olabel = arc.ilabel;
        arc.ilabel = kEpsilon;
      }
      out.AddArc(s, arc);
    }
    if (itn.IsFinal(s)) out.SetFinal(s, itn.Final(s));
  }
  out.SetStart(itn.Start());
  out.SortArcsByInput();
  return out;
}

}  // namespace itn
