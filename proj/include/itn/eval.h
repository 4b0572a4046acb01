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

// Evaluation: ITN instances from token alignments, P/R/F1 over instances,
// token error rate, the full-utterance WFST + n-gram baseline and the runtime
// benchmark.

#ifndef ITN_EVAL_H_
#define ITN_EVAL_H_

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "itn/datagen.h"
#include "itn/fst.h"
#include "itn/grammar_pack.h"
#include "itn/ngram.h"

namespace itn {

class ItnEngine;

enum class EditOp { kMatch, kSubstitute, kDelete, kInsert };

// Minimum-edit alignment of a against b with unit costs. On ties the
// backtrace prefers substitution (or match), then deletion of an a token,
// then insertion of a b token.
std::vector<EditOp> Align(std::span<const std::string> a,
                          std::span<const std::string> b);
size_t EditDistance(std::span<const std::string> a,
                    std::span<const std::string> b);

// A maximal run of non-matching alignment steps: lexical tokens
// [begin, end) became `display`. A pure insertion has begin == end.
struct ItnInstance {
  size_t begin = 0;
  size_t end = 0;
  std::string display;

  bool operator==(const ItnInstance&) const = default;
};

std::vector<ItnInstance> ExtractInstances(std::span<const std::string> lexical,
                                          std::span<const std::string> display);

// Same display string and overlapping lexical spans (identical spans when
// either is empty).
bool InstancesMatch(const ItnInstance& ref, const ItnInstance& hyp);

struct Prf1 {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;

  // 0 when the denominator is 0.
  double precision() const;
  double recall() const;
  double f1() const;
  Prf1& operator+=(const Prf1& o);
};

// One sentence: hypothesis instances in position order each take the first
// unmatched matching reference instance.
Prf1 MatchSentence(std::span<const ItnInstance> ref,
                   std::span<const ItnInstance> hyp);
Prf1 ScoreInstances(const std::vector<std::vector<ItnInstance>>& ref,
                    const std::vector<std::vector<ItnInstance>>& hyp);

// 100 * edit distance over whitespace tokens / max(1, reference tokens).
double TokenErrorRate(const std::string& hyp, const std::string& ref);

// One test-set line: lexical<TAB>display[<TAB>tags].
struct EvalItem {
  std::vector<std::string> lexical;
  std::vector<std::string> reference;
  std::vector<std::string> tags;  // optional oracle tags
};

// Throws DataError with the line number on malformed lines.
std::vector<EvalItem> ReadTestSet(std::istream& in,
                                  const std::string& name = "<test>");
std::vector<EvalItem> ReadTestSetFile(const std::string& path);
void WriteTestSet(std::ostream& out, std::span<const EvalItem> items);

struct BenchRow {
  size_t length = 0;
  double baseline_seconds = 0;  // median per sentence
  double proposed_seconds = 0;
};

struct EvalReport {
  Prf1 counts;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // Corpus TER: total token edits over total reference tokens, in percent.
  double ter = 0;
  size_t sentences = 0;
  std::vector<BenchRow> runtime;
  double baseline_exponent = 0;
  double proposed_exponent = 0;

  std::string ToJson() const;
  std::string ToTable() const;
};

// Runs `system` on every item's lexical tokens and scores its display output.
EvalReport Evaluate(
    std::span<const EvalItem> items,
    const std::function<std::string(const EvalItem&)>& system);

struct BaselineOptions {
  double lambda = 1.0;   // LM weight in the rerank
  int nbest = 8;
  // Cost of copying one lexical token unchanged.
  double identity_cost = 0.5;
};

// Full-utterance conversion: every category's ITN machine (tags removed from
// its input) and an identity arc per lexicon word hang off one hub state, the
// loop through the hub is composed with the sentence, the n best outputs are
// reranked with the LM. Words outside the lexicon are added on first sight,
// so Convert is not thread-safe.
class WfstBaseline {
 public:
  WfstBaseline(const GrammarPack& pack, const NGramModel& lm,
               BaselineOptions options = {});
  ~WfstBaseline();

  struct Candidate {
    std::vector<std::string> tokens;
    double fst_cost = 0;
  };

  // n-best display candidates, lowest cost first.
  std::vector<Candidate> Candidates(std::span<const std::string> lexical);
  std::string Convert(std::span<const std::string> lexical);

  const BaselineOptions& options() const { return options_; }
  size_t NumStates() const { return utterance_.NumStates(); }

 private:
  void AddIdentity(const std::string& word);

  const NGramModel& lm_;
  BaselineOptions options_;
  std::shared_ptr<SymbolTable> syms_;
  Label space_ = kEpsilon;
  Fst utterance_;
  StateId hub_ = 0;
  StateId identity_ = 0;
  std::unordered_set<std::string> identity_words_;
};

// Least-squares slope of log(y) against log(x).
double LogLogSlope(std::span<const double> x, std::span<const double> y);

// Lexical benchmark sentences of exactly `length` tokens: each block of ten
// holds one span drawn from `spans` and filler words from `fillers`.
std::vector<std::vector<std::string>> BenchSentences(
    std::span<const std::vector<std::string>> spans,
    std::span<const std::string> fillers, size_t length, size_t count,
    uint64_t seed);

// Lexical spans and blank-tagged filler words of a tagged corpus, each list
// deduplicated and sorted.
struct BenchPool {
  std::vector<std::vector<std::string>> spans;
  std::vector<std::string> fillers;
};
BenchPool MakeBenchPool(std::span<const TaggedSentence> corpus);

struct BenchOptions {
  std::vector<size_t> lengths = {10, 20, 40, 80, 160};
  int trials = 30;
  int warmup = 5;
  uint64_t seed = 1;
};

// Median wall time per sentence of each system at each length, and the
// fitted growth exponents. `sentences(length)` supplies the inputs; trial t
// uses sentence t modulo their number.
EvalReport BenchRuntime(
    const BenchOptions& options,
    const std::function<std::vector<std::vector<std::string>>(size_t)>&
        sentences,
    const std::function<void(std::span<const std::string>)>& baseline,
    const std::function<void(std::span<const std::string>)>& proposed);

}  // namespace itn

#endif  // ITN_EVAL_H_
