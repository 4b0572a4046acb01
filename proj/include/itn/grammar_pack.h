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

#ifndef ITN_GRAMMAR_PACK_H_
#define ITN_GRAMMAR_PACK_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itn/errors.h"
#include "itn/fst.h"
#include "itn/rules.h"

namespace itn {

struct CategoryGrammar {
  std::string name;
  // Absent when the pack was loaded from compiled machines.
  std::optional<RuleSet> rules;
  Fst itn;  // <cat> lexical </cat> -> written
  Fst tn;   // written -> <cat> lexical </cat>, ~alt branches bracketed
};

// Thrown by GrammarPack::Load when one or more rule files fail; every
// failure is listed, and the categories that did compile are kept.
class PackLoadError : public DataError {
 public:
  PackLoadError(std::vector<std::string> failures,
                std::vector<std::string> compiled);
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& compiled() const { return compiled_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> compiled_;
};

// One ITN and one TN machine per category over a shared symbol table.
// Immutable once loaded.
class GrammarPack {
 public:
  // Reads every <category>.rules file in `dir` (libraries are *.grm files
  // pulled in by `import`). If `dir` holds a manifest.txt written by Save,
  // the compiled machines are read instead.
  static GrammarPack Load(const std::string& dir);

  // Compiles in-memory rule sets; used by tests and Load.
  static GrammarPack FromRuleSets(std::vector<RuleSet> rule_sets);

  // Writes manifest.txt plus <cat>.itn.fst and <cat>.tn.fst.
  void Save(const std::string& dir) const;

  const std::vector<std::string>& categories() const { return names_; }
  size_t size() const { return grammars_.size(); }
  bool Has(const std::string& category) const;
  // Throws ConfigError for an unknown category.
  const CategoryGrammar& Get(const std::string& category) const;
  const SymbolTablePtr& symbols() const { return syms_; }

  // Lexical words the ITN machines accept (no tags, characters or markers).
  std::vector<std::string> LexicalVocabulary() const;

 private:
  static GrammarPack LoadCompiled(const std::string& dir);

  std::vector<std::string> names_;  // sorted
  std::map<std::string, CategoryGrammar> grammars_;
  SymbolTablePtr syms_;
};

// Written-side acceptor: the characters of each token, tokens separated by
// <sp>. Characters outside the table become <unk>.
Fst CompileWritten(std::span<const std::string> tokens, SymbolTablePtr syms);

// Verbalizations of a written span under one category's TN machine, best
// first: each path's olabels are <cat> lexical... </cat>, possibly with
// <alt> markers. Empty if the category rejects the span.
std::vector<Path> TnPaths(const CategoryGrammar& g,
                          std::span<const std::string> written, int max_paths);

// Lexical words of a TN path with tags and alternate markers dropped.
std::vector<std::string> LexicalWords(const Path& p, const SymbolTable& syms);

// Display tokens for a lexical span under one category's ITN machine, or
// nullopt when the grammar rejects it.
std::optional<std::vector<std::string>> ConvertSpan(
    const CategoryGrammar& g, std::span<const std::string> lexical);

// Holder for the active pack. Replace() is atomic with respect to Current():
// callers that already hold the old pointer keep using it.
class PackHandle {
 public:
  explicit PackHandle(std::shared_ptr<const GrammarPack> pack)
      : pack_(std::move(pack)) {}

  std::shared_ptr<const GrammarPack> Current() const {
    std::lock_guard<std::mutex> lock(mu_);
    return pack_;
  }
  // Pack and generation read together.
  std::pair<std::shared_ptr<const GrammarPack>, uint64_t> Snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {pack_, generation_};
  }
  uint64_t generation() const {
    std::lock_guard<std::mutex> lock(mu_);
    return generation_;
  }
  void Replace(std::shared_ptr<const GrammarPack> pack) {
    std::lock_guard<std::mutex> lock(mu_);
    pack_ = std::move(pack);
    ++generation_;
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const GrammarPack> pack_;
  uint64_t generation_ = 0;
};

}  // namespace itn

#endif  // ITN_GRAMMAR_PACK_H_
