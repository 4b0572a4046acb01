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

#include "itn/datagen.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "itn/errors.h"
#include "itn/fst_ops.h"
#include "itn/text.h"
#include "json.hpp"

namespace itn {

struct Normalizer::Candidate {
  std::vector<std::string> tokens;  // <cat> lexical... </cat>
  std::string pool;                 // tokens with each alternate collapsed
  double cost = 0;
};

Normalizer::Normalizer(const GrammarPack& pack, const NGramModel& lm,
                       NormalizeOptions options)
    : pack_(pack), lm_(lm), options_(options) {
  if (options_.max_span < 1) throw ConfigError("max_span must be positive");
  if (options_.max_paths < 1) throw ConfigError("max_paths must be positive");
  const size_t n = pack.symbols()->size();
  for (const std::string& cat : pack.categories()) {
    const Fst& tn = pack.Get(cat).tn;
    std::vector<bool> alphabet(n, false);
    for (StateId s = 0; s < tn.NumStates(); ++s) {
      for (const Arc& a : tn.Arcs(s)) alphabet[a.ilabel] = true;
    }
    alphabets_.push_back(std::move(alphabet));
  }
}

std::vector<Normalizer::Candidate> Normalizer::Match(
    std::span<const std::string> span) const {
  const SymbolTable& syms = *pack_.symbols();
  std::vector<Label> labels;
  for (size_t i = 0; i < span.size(); ++i) {
    if (i) labels.push_back(syms.Find(kSpaceSymbol));
    for (const std::string& c : Utf8Chars(span[i])) {
      labels.push_back(syms.Find(c));
    }
  }
  // A character no grammar knows rules out every category.
  if (std::find(labels.begin(), labels.end(), kNoLabel) != labels.end()) {
    return {};
  }
  const Label alt_open = syms.Find(kAltOpenSymbol);
  const Label alt_close = syms.Find(kAltCloseSymbol);
  std::vector<Candidate> out;
  for (size_t c = 0; c < pack_.categories().size(); ++c) {
    const std::vector<bool>& alphabet = alphabets_[c];
    if (!std::all_of(labels.begin(), labels.end(),
                     [&](Label l) { return alphabet[l]; })) {
      continue;
    }
    const CategoryGrammar& g = pack_.Get(pack_.categories()[c]);
    for (const Path& p : TnPaths(g, span, options_.max_paths)) {
      Candidate cand;
      cand.cost = p.weight;
      int depth = 0;
      for (Label l : p.olabels) {
        if (l == alt_open) {
          if (depth++ == 0) cand.pool += "<alt>\x1f";
          continue;
        }
        if (l == alt_close) {
          --depth;
          continue;
        }
        cand.tokens.push_back(syms.Symbol(l));
        if (depth == 0) cand.pool += syms.Symbol(l) + '\x1f';
      }
      out.push_back(std::move(cand));
    }
  }
  return out;
}

std::string Normalizer::Run(std::span<const std::string> written,
                            uint64_t seed) const {
  std::mt19937_64 rng(seed);
  const size_t history = static_cast<size_t>(std::max(lm_.order() - 1, 1));
  std::vector<std::string> out;
  // LM history: canonical pool members, so the pool decision does not depend
  // on earlier random draws.
  std::vector<std::string> context = {kSentenceStart};
  auto push_context = [&](const std::string& t) {
    context.push_back(t);
    if (context.size() > history) context.erase(context.begin());
  };

  size_t pos = 0;
  while (pos < written.size()) {
    const size_t longest =
        std::min<size_t>(options_.max_span, written.size() - pos);
    bool matched = false;
    for (size_t len = longest; len >= 1 && !matched; --len) {
      std::vector<Candidate> cands = Match(written.subspan(pos, len));
      if (cands.empty()) continue;
      matched = true;

      // Pools in order of first appearance.
      std::vector<std::vector<size_t>> pools;
      std::unordered_map<std::string, size_t> pool_index;
      for (size_t i = 0; i < cands.size(); ++i) {
        auto [it, fresh] = pool_index.emplace(cands[i].pool, pools.size());
        if (fresh) pools.emplace_back();
        pools[it->second].push_back(i);
      }

      std::vector<std::string> right;
      const size_t end = pos + len;
      for (size_t j = end; j < written.size() && right.size() < history; ++j) {
        right.push_back(written[j]);
      }
      if (end + right.size() == written.size()) right.emplace_back(kSentenceEnd);

      auto score = [&](const Candidate& c) {
        std::vector<std::string> h = context;
        double lm = 0;
        auto step = [&](const std::string& t) {
          lm += lm_.LogProb(h, t);
          h.push_back(t);
        };
        for (const std::string& t : c.tokens) step(t);
        for (const std::string& t : right) step(t);
        return c.cost - options_.lambda * lm;
      };

      size_t best_pool = 0;
      double best = 0;
      for (size_t p = 0; p < pools.size(); ++p) {
        double s = score(cands[pools[p][0]]);
        for (size_t k = 1; k < pools[p].size(); ++k) {
          s = std::min(s, score(cands[pools[p][k]]));
        }
        if (p == 0 || s < best) {
          best = s;
          best_pool = p;
        }
      }
      const std::vector<size_t>& members = pools[best_pool];
      const size_t pick = members.size() == 1 ? 0 : rng() % members.size();
      const Candidate& chosen = cands[members[pick]];
      out.insert(out.end(), chosen.tokens.begin(), chosen.tokens.end());
      for (const std::string& t : cands[members[0]].tokens) push_context(t);
      pos = end;
    }
    if (!matched) {
      out.push_back(written[pos]);
      push_context(written[pos]);
      ++pos;
    }
  }
  return Join(out, " ");
}

std::string Normalize(std::span<const std::string> written,
                      const GrammarPack& pack, const NGramModel& lm,
                      uint64_t seed, const NormalizeOptions& options) {
  return Normalizer(pack, lm, options).Run(written, seed);
}

namespace {

// "<name>" -> name, "</name>" -> name with *close set; empty if not a tag.
std::string TagName(const std::string& token, bool* close) {
  if (token.size() < 3 || token.front() != '<' || token.back() != '>') {
    return "";
  }
  *close = token[1] == '/';
  std::string name = token.substr(*close ? 2 : 1,
                                  token.size() - (*close ? 3 : 2));
  if (name.empty() || name.find_first_of("<>/") != std::string::npos) {
    return "";
  }
  return name;
}

}  // namespace

TaggedSentence ToTrainingPairs(const std::string& xml,
                               const GrammarPack* pack) {
  TaggedSentence s;
  std::string open;  // category of the span being read
  size_t span_start = 0;
  for (const std::string& token : SplitWhitespace(xml)) {
    bool close = false;
    const std::string name = TagName(token, &close);
    if (name.empty()) {
      if (open.empty()) {
        s.tags.emplace_back(kBlankTag);
      } else {
        s.tags.push_back(s.tokens.size() == span_start ? BeginTag(open)
                                                       : ContinueTag(open));
      }
      s.tokens.push_back(token);
      continue;
    }
    if (!close) {
      if (!open.empty()) {
        throw DataError("nested span <" + name + "> inside <" + open +
                        "> in: " + xml);
      }
      if (pack && !pack->Has(name)) {
        throw DataError("unknown category in span <" + name + "> in: " + xml);
      }
      open = name;
      span_start = s.tokens.size();
      continue;
    }
    if (open.empty()) {
      throw DataError("closing </" + name + "> without an open span in: " +
                      xml);
    }
    if (name != open) {
      throw DataError("span <" + open + "> closed by </" + name + "> in: " +
                      xml);
    }
    if (s.tokens.size() == span_start) {
      throw DataError("empty span <" + open + "> in: " + xml);
    }
    open.clear();
  }
  if (!open.empty()) {
    throw DataError("unclosed span <" + open + "> in: " + xml);
  }
  return s;
}

std::string ToXml(const TaggedSentence& s) {
  ValidateTags(s);
  std::vector<std::string> out;
  std::string open;
  for (size_t i = 0; i < s.tokens.size(); ++i) {
    const std::string& tag = s.tags[i];
    const bool cont = tag.size() > 1 && tag[0] == '_';
    if (!open.empty() && !cont) {
      out.push_back(CloseTag(open));
      open.clear();
    }
    if (tag != kBlankTag && !cont) {
      open = tag;
      out.push_back(OpenTag(open));
    }
    out.push_back(s.tokens[i]);
  }
  if (!open.empty()) out.push_back(CloseTag(open));
  return Join(out, " ");
}

void ValidateTags(const TaggedSentence& s) {
  if (s.tokens.size() != s.tags.size()) {
    throw DataError("sentence has " + std::to_string(s.tokens.size()) +
                    " tokens but " + std::to_string(s.tags.size()) + " tags");
  }
  std::string open;
  for (size_t i = 0; i < s.tags.size(); ++i) {
    const std::string& tag = s.tags[i];
    if (tag.empty()) throw DataError("empty tag at token " + std::to_string(i));
    if (tag[0] == '_') {
      if (tag.substr(1) != open) {
        throw DataError("tag " + tag + " at token " + std::to_string(i) +
                        " does not continue a " + tag.substr(1) + " span");
      }
    } else {
      open = tag == kBlankTag ? "" : tag;
    }
  }
}

std::string CorpusStats::ToJson() const {
  nlohmann::ordered_json j;
  j["sentences"] = sentences;
  j["spans"] = nlohmann::ordered_json::object();
  for (const auto& [cat, n] : spans) j["spans"][cat] = n;
  return j.dump(2);
}

CorpusStats CountSpans(std::span<const TaggedSentence> corpus) {
  CorpusStats stats;
  for (const TaggedSentence& s : corpus) {
    ++stats.sentences;
    for (const std::string& tag : s.tags) {
      if (tag != kBlankTag && tag[0] != '_') ++stats.spans[tag];
    }
  }
  return stats;
}

CorpusStats GenerateCorpus(const std::string& written_path,
                           const GrammarPack& pack, const NGramModel& lm,
                           uint64_t seed, const std::string& out_path,
                           const NormalizeOptions& options) {
  const std::vector<std::string> lines = ReadLines(written_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + out_path);
  Normalizer normalizer(pack, lm, options);
  CorpusStats stats;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::vector<std::string> written = SplitWhitespace(lines[i]);
    if (written.empty()) continue;
    TaggedSentence s = ToTrainingPairs(normalizer.Run(written, seed ^ i), &pack);
    ValidateTags(s);
    WriteTsv(out, s);
    CorpusStats one = CountSpans(std::span<const TaggedSentence>(&s, 1));
    ++stats.sentences;
    for (const auto& [cat, n] : one.spans) stats.spans[cat] += n;
  }
  if (!out) throw IoError("write failed: " + out_path);
  return stats;
}

void WriteTsv(std::ostream& out, const TaggedSentence& s) {
  for (size_t i = 0; i < s.tokens.size(); ++i) {
    out << s.tokens[i] << '\t' << s.tags[i] << '\n';
  }
  out << '\n';
}

void WriteTsvFile(const std::string& path,
                  std::span<const TaggedSentence> corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const TaggedSentence& s : corpus) WriteTsv(out, s);
  if (!out) throw IoError("write failed: " + path);
}

std::vector<TaggedSentence> ReadTsv(std::istream& in,
                                    const std::string& name) {
  std::vector<TaggedSentence> corpus;
  TaggedSentence cur;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!cur.tokens.empty()) corpus.push_back(std::move(cur));
      cur = {};
      continue;
    }
    std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
      throw DataError(name + ":" + std::to_string(line_no) +
                      ": expected token<TAB>tag");
    }
    cur.tokens.push_back(std::move(cols[0]));
    cur.tags.push_back(std::move(cols[1]));
  }
  if (!cur.tokens.empty()) corpus.push_back(std::move(cur));
  for (const TaggedSentence& s : corpus) ValidateTags(s);
  return corpus;
}

std::vector<TaggedSentence> ReadTsvFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return ReadTsv(in, path);
}

}  // namespace itn
