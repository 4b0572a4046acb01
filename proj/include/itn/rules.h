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

// Rewrite-rule language for category grammars.
//
//   # comment
//   import "numbers" ;                 # rules from numbers.grm, same dir
//   digit = "one":"1" | "two":"2" ;    # lexical:written pairs
//   root  = "":"$" amount " dollars":"" ;
//
// A quoted pair "lex":"wri" maps lexical words (split on spaces) to written
// characters (a space becomes the token boundary <sp>). A single quoted
// string maps to itself and "" is epsilon. Operators: juxtaposition for
// sequence, `|` for alternation with optional `@cost` and `~alt` per branch,
// postfix `?`, `*{max}` and `+{max}`. `root` is the entry rule and
// references must form an acyclic graph.

#ifndef ITN_RULES_H_
#define ITN_RULES_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itn/fst.h"

namespace itn {

struct RuleExpr {
  enum class Kind { kMapping, kSequence, kAlternation, kQuantified, kRuleRef };

  Kind kind = Kind::kSequence;
  std::string lexical;   // kMapping
  std::string written;   // kMapping
  std::string name;      // kRuleRef
  char quantifier = 0;   // kQuantified: '?', '*' or '+'
  int max_repeat = 0;    // kQuantified with '*' or '+'
  std::vector<RuleExpr> children;
  // kAlternation, parallel to children.
  std::vector<float> branch_costs;
  std::vector<bool> branch_alt;

  static RuleExpr Mapping(std::string lexical, std::string written);
  static RuleExpr Ref(std::string name);
  static RuleExpr Sequence(std::vector<RuleExpr> children);
  static RuleExpr Quantified(RuleExpr child, char quantifier, int max_repeat);

  bool operator==(const RuleExpr&) const = default;
};

struct RuleSet {
  std::string category;
  std::string root = "root";
  std::map<std::string, RuleExpr> rules;
  // Definition order, imports first; used by the printer.
  std::vector<std::string> order;

  bool operator==(const RuleSet& other) const {
    return category == other.category && root == other.root &&
           rules == other.rules;
  }
};

// Returns the text of an imported library, or nullopt if unknown.
using ImportResolver =
    std::function<std::optional<std::string>(const std::string& name)>;

inline constexpr int kMaxRepeat = 64;

// Parses and validates a rule file. `file` is only used in error messages.
// Throws ParseError for syntax errors, unresolved or cyclic references,
// duplicate definitions, and a missing or empty root.
RuleSet ParseRules(const std::string& source, const std::string& category,
                   const std::string& file = "",
                   const ImportResolver& resolver = nullptr);

// Canonical text; ParseRules(PrintRules(rs)) == rs.
std::string PrintRules(const RuleSet& rs);

std::string OpenTag(const std::string& category);
std::string CloseTag(const std::string& category);

// Registers every symbol the compiled machines of `rs` use.
void CollectSymbols(const RuleSet& rs, SymbolTable* syms);

// <cat> lexical </cat>  ->  written.
Fst CompileItn(const RuleSet& rs, SymbolTablePtr syms);

// written  ->  <cat> lexical </cat>, every alternation branch kept. With
// `mark_alternates`, branches annotated `~alt` are bracketed by <alt> and
// </alt> on the output side.
Fst CompileTn(const RuleSet& rs, SymbolTablePtr syms,
              bool mark_alternates = false);

// lexical  ->  <cat> written </cat>, derived from a compiled ITN machine by
// moving its category tags from the input to the output side.
Fst MoveTagsToOutput(const Fst& itn, const std::string& category);

}  // namespace itn

#endif  // ITN_RULES_H_
