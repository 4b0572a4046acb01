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

// Chunk-attention transformer tagger. A token at position i attends to every
// position j < (floor(i/C) + 1) * C, so its tag is known once its chunk is
// complete.

#ifndef ITN_TAGGER_H_
#define ITN_TAGGER_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "itn/datagen.h"

namespace itn {

// blank, then cat and _cat for every category in order.
class TagInventory {
 public:
  TagInventory() = default;
  static TagInventory FromCategories(std::vector<std::string> categories);
  // Rebuilds from a stored tag list; throws FormatError if it is not of the
  // blank/cat/_cat shape.
  static TagInventory FromTags(const std::vector<std::string>& tags);

  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::string>& categories() const { return categories_; }
  size_t size() const { return tags_.size(); }
  // -1 when unknown.
  int Find(const std::string& tag) const;
  // Throws DataError when unknown.
  int Index(const std::string& tag) const;
  const std::string& Tag(int index) const { return tags_.at(index); }

  static constexpr int kBlank = 0;
  int Begin(int category) const { return 1 + 2 * category; }
  int Continue(int category) const { return 2 + 2 * category; }
  bool IsBegin(int tag) const { return tag > 0 && tag % 2 == 1; }
  bool IsContinue(int tag) const { return tag > 0 && tag % 2 == 0; }
  // Category index of a non-blank tag.
  int CategoryOf(int tag) const { return (tag - 1) / 2; }

  bool operator==(const TagInventory& o) const { return tags_ == o.tags_; }

 private:
  std::vector<std::string> tags_;
  std::vector<std::string> categories_;
  std::map<std::string, int> index_;
};

// Word vocabulary; id 0 is <unk>.
class Vocabulary {
 public:
  Vocabulary();
  static Vocabulary Build(std::span<const TaggedSentence> corpus,
                          int min_count = 1);
  static Vocabulary FromWords(const std::vector<std::string>& words);

  int Id(const std::string& word) const;
  std::vector<int> Ids(std::span<const std::string> words) const;
  const std::vector<std::string>& words() const { return words_; }
  size_t size() const { return words_.size(); }

  bool operator==(const Vocabulary& o) const { return words_ == o.words_; }

 private:
  std::vector<std::string> words_;
  std::map<std::string, int> index_;
};

struct TaggerConfig {
  int num_blocks = 2;
  int model_dim = 64;
  int num_heads = 4;
  int ffn_dim = 128;
  int chunk_size = 6;
  // Past chunks a position may attend to; 0 means all of them.
  int history_chunks = 0;
  int max_position = 256;
  double dropout = 0.1;

  // Throws ConfigError.
  void Validate() const;
  bool operator==(const TaggerConfig&) const = default;
};

// The chunk mask: may position i attend to position j?
bool ChunkAllowed(int i, int j, int chunk_size, int history_chunks = 0);

// One tensor of the flat parameter vector.
struct TensorInfo {
  std::string name;
  size_t offset = 0;
  int rows = 0;
  int cols = 0;
  bool decay = false;  // weight decay applies
};

std::vector<TensorInfo> ParameterLayout(const TaggerConfig& cfg,
                                        size_t vocab_size, size_t num_tags);

class TaggerModel {
 public:
  TaggerModel() = default;
  // Random initialization from `seed`.
  TaggerModel(TaggerConfig config, Vocabulary vocab, TagInventory inventory,
              uint64_t seed);

  const TaggerConfig& config() const { return config_; }
  const Vocabulary& vocab() const { return vocab_; }
  const TagInventory& inventory() const { return inventory_; }
  const std::vector<TensorInfo>& layout() const { return layout_; }
  const Eigen::VectorXf& params() const { return params_; }
  Eigen::VectorXf& mutable_params() { return params_; }

  // Log-probability rows (T x tags), computed chunk by chunk exactly as the
  // streaming tagger does. Throws ConfigError for empty input or more than
  // max_position tokens.
  Eigen::MatrixXf Forward(std::span<const int> ids) const;
  // Argmax tags.
  std::vector<int> Tag(std::span<const std::string> tokens) const;

  // Checkpoint: "ITNT", version, config, vocabulary, inventory, tensors as
  // little-endian f32 with shapes, CRC32. Load throws FormatError on a bad
  // magic, version or checksum.
  void Save(const std::string& path) const;
  static TaggerModel Load(const std::string& path);
  std::string Serialize() const;
  static TaggerModel Deserialize(const std::string& bytes);

  // Same weights under a different chunk mask. The mask is not a learned
  // parameter, but a model trained with another chunk size may tag worse.
  TaggerModel WithChunkSize(int chunk_size) const;

  bool operator==(const TaggerModel& o) const;

 private:
  TaggerConfig config_;
  Vocabulary vocab_;
  TagInventory inventory_;
  std::vector<TensorInfo> layout_;
  Eigen::VectorXf params_;
};

struct EmittedTag {
  size_t position = 0;  // index in the stream
  std::string token;
  int tag = 0;
  int latency = 0;      // tokens that arrived after this one before emission
};

// Incremental tagging. Push() buffers a token and, when the chunk fills,
// returns the whole chunk's tags. Past keys and values are cached, so each
// chunk costs one pass over its own tokens. After max_position tokens (rounded
// down to whole chunks) the context restarts.
class TaggerStream {
 public:
  explicit TaggerStream(const TaggerModel& model);
  ~TaggerStream();
  TaggerStream(TaggerStream&&) noexcept;

  std::vector<EmittedTag> Push(const std::string& token);
  std::vector<EmittedTag> Flush();
  void Reset();

  // Cached keys and values; defined in the implementation.
  struct State;

 private:
  std::vector<EmittedTag> RunChunk();

  const TaggerModel* model_;
  std::unique_ptr<State> state_;
};

// Training data as ids.
struct TaggerExample {
  std::vector<int> ids;
  std::vector<int> tags;
};

TaggerExample Encode(const TaggedSentence& s, const Vocabulary& vocab,
                     const TagInventory& inventory);

// Mean token cross-entropy of `batch` and its gradient with respect to the
// flat parameters, in double precision with dropout off.
double LossAndGradient(const TaggerConfig& config, size_t vocab_size,
                       size_t num_tags, const Eigen::VectorXd& params,
                       std::span<const TaggerExample> batch,
                       Eigen::VectorXd* grad);

// Exact-match spans (category, begin, end) from a tag sequence; a
// continuation tag that does not follow its own category is ignored.
struct TagSpan {
  int category = 0;
  size_t begin = 0;
  size_t end = 0;
  bool operator==(const TagSpan&) const = default;
  auto operator<=>(const TagSpan&) const = default;
};
std::vector<TagSpan> SpansOf(std::span<const int> tags,
                             const TagInventory& inventory);

struct SpanScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double tag_accuracy = 0;
};
// Scores predicted against gold tag sequences. Precision and recall are 1
// when there is nothing to find and nothing predicted.
SpanScores ScoreTags(const std::vector<std::vector<int>>& gold,
                     const std::vector<std::vector<int>>& predicted,
                     const TagInventory& inventory);

struct TrainOptions {
  int epochs = 20;
  // Stop after this many updates when positive; same budget for every
  // configuration in a sweep.
  int max_steps = 0;
  int batch_size = 16;
  int warmup_steps = 400;
  double lr_scale = 1.0;  // noam: scale * d^-0.5 * min(s^-0.5, s * w^-1.5)
  double weight_decay = 0.01;
  double holdout_fraction = 0.1;
  int min_count = 1;
  uint64_t seed = 1;
  // Per-epoch progress; may be empty.
  std::function<void(int epoch, double loss, const SpanScores& heldout)>
      on_epoch;
};

struct TrainReport {
  std::vector<double> epoch_loss;       // mean training loss per epoch
  std::vector<double> first_epoch_batch_loss;
  std::vector<SpanScores> heldout;      // per epoch
  int best_epoch = 0;                   // 0-based
  SpanScores best;
  int steps = 0;
  size_t train_sentences = 0;
  size_t heldout_sentences = 0;
};

// Trains on `corpus` (split into train and held-out with the seed) and
// returns the model of the epoch with the best held-out span F1. Throws
// DataError for an empty corpus or tags outside the inventory.
TaggerModel Train(std::span<const TaggedSentence> corpus,
                  const TagInventory& inventory, const TaggerConfig& config,
                  const TrainOptions& options, TrainReport* report = nullptr);

// Held-out split used by Train: indices of the held-out sentences.
std::vector<size_t> HeldOutIndices(size_t n, double fraction, uint64_t seed);

}  // namespace itn

#endif  // ITN_TAGGER_H_
