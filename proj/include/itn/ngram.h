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

// Count-based n-gram model scored with stupid backoff:
//
//   S(w | h) = c(h w) / c(h)        if c(h w) > 0
//            = alpha * S(w | h')    otherwise, h' = h minus its first token
//   S(w | ())= c(w) / N, or 1 / |V| for unseen w
//
// Scores are natural logs. Sentences are padded with one <s> and one </s>.

#ifndef ITN_NGRAM_H_
#define ITN_NGRAM_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace itn {

inline constexpr char kSentenceStart[] = "<s>";
inline constexpr char kSentenceEnd[] = "</s>";
inline constexpr double kDefaultBackoff = 0.4;
inline constexpr int kDefaultOrder = 4;

class NGramModel {
 public:
  // Throws DataError on an empty corpus, ConfigError on a bad order/alpha.
  static NGramModel Train(const std::vector<std::vector<std::string>>& corpus,
                          int order = kDefaultOrder,
                          double alpha = kDefaultBackoff);

  int order() const { return order_; }
  double alpha() const { return alpha_; }

  // c(context token); context may start with <s>.
  uint64_t Count(std::span<const std::string> context,
                 const std::string& token) const;
  // Times `context` occurs followed by some token.
  uint64_t ContextCount(std::span<const std::string> context) const;

  // log S(token | history), using at most order-1 trailing history tokens.
  double LogProb(std::span<const std::string> history,
                 const std::string& token) const;

  // Sentence score including the </s> transition.
  double Score(std::span<const std::string> tokens) const;
  // Score of the tokens alone, no </s>. Never increases as tokens are added.
  double ScorePrefix(std::span<const std::string> tokens) const;

  // exp(-total score / predicted tokens), </s> included.
  double Perplexity(const std::vector<std::vector<std::string>>& corpus) const;

  // Distinct predicted types (</s> included, <s> excluded) plus one slot for
  // unseen tokens.
  size_t VocabularySize() const { return unigram_.size() + 1; }
  // Word with the highest unigram count (</s> excluded); ties go to the
  // smallest string.
  const std::string& MostFrequentToken() const { return most_frequent_; }

  // Text format: header, then one block per order of
  // count<TAB>context<TAB>token lines sorted by (context, token).
  void Write(std::ostream& out) const;
  static NGramModel Read(std::istream& in);
  void Save(const std::string& path) const;
  static NGramModel Load(const std::string& path);

  bool operator==(const NGramModel& other) const;

 private:
  // Key: tokens joined with '\x1f'.
  using Table = std::unordered_map<std::string, uint64_t>;

  void Add(std::span<const std::string> ngram, uint64_t count);
  void Finish();

  int order_ = kDefaultOrder;
  double alpha_ = kDefaultBackoff;
  double log_alpha_ = 0;
  // grams_[k] holds (k+1)-grams; contexts_[k] the k-token context counts.
  std::vector<Table> grams_;
  std::vector<Table> contexts_;
  Table unigram_;
  uint64_t total_ = 0;
  std::string most_frequent_;
};

struct RerankCandidate {
  std::vector<std::string> tokens;
  double fst_cost = 0;
};

// argmin over candidates of fst_cost - lambda * Score(tokens); the lowest
// index wins ties. Throws ConfigError on an empty list or negative lambda.
size_t Rerank(const NGramModel& m, std::span<const RerankCandidate> candidates,
              double lambda = 1.0);

}  // namespace itn

#endif  // ITN_NGRAM_H_
