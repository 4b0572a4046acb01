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

// Tagger training data from written text: TN machines verbalize spans and
// emit category tags, giving XML-tagged lexical text such as
//
//   <money> twenty five dollars </money> please
//
// which becomes token/tag rows (money, _money, _money, blank).

#ifndef ITN_DATAGEN_H_
#define ITN_DATAGEN_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "itn/grammar_pack.h"
#include "itn/ngram.h"

namespace itn {

inline constexpr char kBlankTag[] = "blank";

inline std::string BeginTag(const std::string& category) { return category; }
inline std::string ContinueTag(const std::string& category) {
  return "_" + category;
}

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;

  bool operator==(const TaggedSentence&) const = default;
};

struct NormalizeOptions {
  int max_span = 4;        // written tokens per candidate span
  int max_paths = 256;     // TN paths kept per category and span
  double lambda = 1.0;     // LM weight in the candidate ranking
};

// Greedy leftmost-longest verbalization of a written sentence. At each
// position the longest span accepted by some category wins; candidates of
// that length (all categories, all paths) are grouped into pools of
// interchangeable alternates, the pool is picked by
// fst_cost - lambda * LM score of the tagged lexical context, and the member
// is drawn uniformly with `seed`. Unmatched tokens pass through.
std::string Normalize(std::span<const std::string> written,
                      const GrammarPack& pack, const NGramModel& lm,
                      uint64_t seed, const NormalizeOptions& options = {});

// Normalize with the per-category input alphabets computed once. Both
// references must outlive the object.
class Normalizer {
 public:
  Normalizer(const GrammarPack& pack, const NGramModel& lm,
             NormalizeOptions options = {});

  std::string Run(std::span<const std::string> written, uint64_t seed) const;

 private:
  struct Candidate;

  // Every category's readings of one written span, in path order.
  std::vector<Candidate> Match(std::span<const std::string> span) const;

  const GrammarPack& pack_;
  const NGramModel& lm_;
  NormalizeOptions options_;
  // Written-side labels each category's TN machine reads.
  std::vector<std::vector<bool>> alphabets_;
};

// Tags from XML-tagged text. Throws DataError naming the offending span for
// nested, unbalanced or empty spans, and for categories missing from `pack`
// when one is given.
TaggedSentence ToTrainingPairs(const std::string& xml,
                               const GrammarPack* pack = nullptr);

// Inverse of ToTrainingPairs.
std::string ToXml(const TaggedSentence& s);

// Throws DataError unless lengths match and every continuation tag follows
// a tag of the same category.
void ValidateTags(const TaggedSentence& s);

struct CorpusStats {
  size_t sentences = 0;
  std::map<std::string, size_t> spans;  // category -> count

  std::string ToJson() const;
};

// Reads one written sentence per line, writes token<TAB>tag rows with a blank
// line after each sentence. Line i uses seed ^ i, so output is identical for
// identical inputs and does not depend on processing order.
CorpusStats GenerateCorpus(const std::string& written_path,
                           const GrammarPack& pack, const NGramModel& lm,
                           uint64_t seed, const std::string& out_path,
                           const NormalizeOptions& options = {});

CorpusStats CountSpans(std::span<const TaggedSentence> corpus);

void WriteTsv(std::ostream& out, const TaggedSentence& s);
void WriteTsvFile(const std::string& path,
                  std::span<const TaggedSentence> corpus);
// Throws DataError with the line number on malformed rows.
std::vector<TaggedSentence> ReadTsv(std::istream& in,
                                    const std::string& name = "<tsv>");
std::vector<TaggedSentence> ReadTsvFile(const std::string& path);

// Synthetic written sentences built from templates with category slots.
struct SyntheticSentence {
  std::vector<std::string> written;
  // Tagged lexical tokens using the slot's intended category and a uniformly
  // drawn TN reading; training text for the datagen LM.
  std::vector<std::string> lexical_xml;
  std::vector<std::string> categories;  // one per slot
};

struct SynthOptions {
  // Fraction of sentences without any slot.
  double plain_fraction = 0.1;
  // Restrict slots to these categories; empty means every category the pack
  // and the generator both know.
  std::vector<std::string> categories;
};

std::vector<SyntheticSentence> Synthesize(const GrammarPack& pack, size_t n,
                                          uint64_t seed,
                                          const SynthOptions& options = {});

// Categories the synthetic generator has value generators for.
std::vector<std::string> SynthCategories();

// Trains the datagen LM on the tagged lexical side of a synthetic corpus.
NGramModel TrainDatagenLm(std::span<const SyntheticSentence> corpus,
                          int order = kDefaultOrder);

}  // namespace itn

#endif  // ITN_DATAGEN_H_
