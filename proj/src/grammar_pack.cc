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

#include "itn/grammar_pack.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "itn/errors.h"
#include "itn/fst_io.h"
#include "itn/fst_ops.h"
#include "itn/text.h"

namespace itn {

namespace fs = std::filesystem;

namespace {

constexpr char kManifest[] = "manifest.txt";
constexpr char kManifestHeader[] = "streamitn-pack 1";

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += "\n  " + l;
  return out;
}

bool IsReserved(const std::string& s) {
  return s == kEpsilonSymbol || s == kUnknownSymbol || s == kSpaceSymbol ||
         s == kAltOpenSymbol || s == kAltCloseSymbol;
}
}  // namespace

PackLoadError::PackLoadError(std::vector<std::string> failures,
                             std::vector<std::string> compiled)
    : DataError("grammar pack failed to load:" + JoinLines(failures)),
      failures_(std::move(failures)),
      compiled_(std::move(compiled)) {}

GrammarPack GrammarPack::FromRuleSets(std::vector<RuleSet> rule_sets) {
  if (rule_sets.empty()) throw DataError("no categories found");
  auto syms = std::make_shared<SymbolTable>();
  std::set<std::string> seen;
  for (const RuleSet& rs : rule_sets) {
    if (!seen.insert(rs.category).second) {
      throw DataError("duplicate category '" + rs.category + "'");
    }
    CollectSymbols(rs, syms.get());
  }
  GrammarPack pack;
  pack.syms_ = syms;
  for (RuleSet& rs : rule_sets) {
    CategoryGrammar g;
    g.name = rs.category;
    g.itn = CompileItn(rs, syms);
    g.tn = CompileTn(rs, syms, /*mark_alternates=*/true);
    g.rules = std::move(rs);
    pack.names_.push_back(g.name);
    pack.grammars_.emplace(g.name, std::move(g));
  }
  std::sort(pack.names_.begin(), pack.names_.end());
  return pack;
}

GrammarPack GrammarPack::Load(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  if (fs::exists(fs::path(dir) / kManifest)) return LoadCompiled(dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rules") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no categories found in " + dir);

  ImportResolver resolver =
      [&dir](const std::string& name) -> std::optional<std::string> {
    fs::path p = fs::path(dir) / (name + ".grm");
    if (!fs::exists(p)) return std::nullopt;
    return ReadTextFile(p.string());
  };
  std::vector<RuleSet> sets;
  std::vector<std::string> failures, compiled;
  for (const fs::path& p : files) {
    try {
      sets.push_back(ParseRules(ReadTextFile(p.string()), p.stem().string(),
                                p.filename().string(), resolver));
      compiled.push_back(p.stem().string());
    } catch (const Error& e) {
      failures.push_back(e.what());
    }
  }
  if (!failures.empty()) throw PackLoadError(failures, compiled);
  return FromRuleSets(std::move(sets));
}

void GrammarPack::Save(const std::string& dir) const {
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / kManifest);
  if (!manifest) throw IoError("cannot write manifest in " + dir);
  manifest << kManifestHeader << "\n";
  for (const std::string& name : names_) {
    const CategoryGrammar& g = grammars_.at(name);
    manifest << name << "\t" << OpenTag(name) << "\t" << CloseTag(name)
             << "\n";
    WriteFstFile(g.itn, (fs::path(dir) / (name + ".itn.fst")).string());
    WriteFstFile(g.tn, (fs::path(dir) / (name + ".tn.fst")).string());
  }
  if (!manifest) throw IoError("write failed: manifest in " + dir);
}

GrammarPack GrammarPack::LoadCompiled(const std::string& dir) {
  std::vector<std::string> lines =
      ReadLines((fs::path(dir) / kManifest).string());
  if (lines.empty() || lines[0] != kManifestHeader) {
    throw FormatError("bad pack manifest in " + dir);
  }
  GrammarPack pack;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string> cols = Split(lines[i], '\t');
    if (cols.size() != 3 || cols[1] != OpenTag(cols[0]) ||
        cols[2] != CloseTag(cols[0])) {
      throw FormatError("bad manifest line " + std::to_string(i + 1) +
                        " in " + dir);
    }
    if (pack.grammars_.count(cols[0])) {
      throw DataError("duplicate category '" + cols[0] + "' in " + dir);
    }
    CategoryGrammar g;
    g.name = cols[0];
    g.itn = ReadFstFile((fs::path(dir) / (g.name + ".itn.fst")).string());
    g.tn = ReadFstFile((fs::path(dir) / (g.name + ".tn.fst")).string());
    if (!pack.syms_) pack.syms_ = g.itn.InputSymbols();
    for (Fst* f : {&g.itn, &g.tn}) {
      if (!CompatibleSymbols(f->InputSymbols(), pack.syms_) ||
          !CompatibleSymbols(f->OutputSymbols(), pack.syms_)) {
        throw FormatError("category " + g.name +
                          " does not share the pack symbol table");
      }
      f->SetInputSymbols(pack.syms_);
      f->SetOutputSymbols(pack.syms_);
    }
    pack.names_.push_back(g.name);
    std::string name = g.name;
    pack.grammars_.emplace(name, std::move(g));
  }
  if (pack.names_.empty()) throw DataError("no categories found in " + dir);
  std::sort(pack.names_.begin(), pack.names_.end());
  return pack;
}

bool GrammarPack::Has(const std::string& category) const {
  return grammars_.count(category) > 0;
}

const CategoryGrammar& GrammarPack::Get(const std::string& category) const {
  auto it = grammars_.find(category);
  if (it == grammars_.end()) {
    throw ConfigError("unknown category '" + category + "'");
  }
  return it->second;
}

std::vector<std::string> GrammarPack::LexicalVocabulary() const {
  std::set<Label> labels;
  std::set<Label> tags;
  for (const std::string& name : names_) {
    tags.insert(syms_->Find(OpenTag(name)));
    tags.insert(syms_->Find(CloseTag(name)));
  }
  for (const std::string& name : names_) {
    const Fst& f = grammars_.at(name).itn;
    for (StateId s = 0; s < f.NumStates(); ++s) {
      for (const Arc& arc : f.Arcs(s)) {
        if (arc.ilabel != kEpsilon && !tags.count(arc.ilabel)) {
          labels.insert(arc.ilabel);
        }
      }
    }
  }
  std::vector<std::string> out;
  for (Label l : labels) {
    if (!IsReserved(syms_->Symbol(l))) out.push_back(syms_->Symbol(l));
  }
  return out;
}

Fst CompileWritten(std::span<const std::string> tokens, SymbolTablePtr syms) {
  std::vector<std::string> chars;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) chars.emplace_back(kSpaceSymbol);
    for (std::string& c : Utf8Chars(tokens[i])) chars.push_back(std::move(c));
  }
  return CompileLinear(chars, std::move(syms));
}

std::vector<Path> TnPaths(const CategoryGrammar& g,
                          std::span<const std::string> written,
                          int max_paths) {
  Fst in = CompileWritten(written, g.tn.InputSymbols());
  return ShortestPaths(Compose(in, g.tn), max_paths);
}

std::vector<std::string> LexicalWords(const Path& p, const SymbolTable& syms) {
  std::vector<std::string> out;
  for (Label l : p.olabels) {
    // Tags and alternate markers are the only bracketed symbols.
    const std::string& s = syms.Symbol(l);
    if (s.size() >= 2 && s.front() == '<' && s.back() == '>') continue;
    out.push_back(s);
  }
  return out;
}

std::optional<std::vector<std::string>> ConvertSpan(
    const CategoryGrammar& g, std::span<const std::string> lexical) {
  std::vector<std::string> tagged;
  tagged.reserve(lexical.size() + 2);
  tagged.push_back(OpenTag(g.name));
  tagged.insert(tagged.end(), lexical.begin(), lexical.end());
  tagged.push_back(CloseTag(g.name));
  return TransduceSpan(tagged, g.itn);
}

}  // namespace itn
