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

// Streaming ITN: lexical tokens go through the chunk tagger, tagged spans are
// buffered and each closed span is converted by its category's ITN machine.

#ifndef ITN_PIPELINE_H_
#define ITN_PIPELINE_H_

#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "itn/grammar_pack.h"
#include "itn/tagger.h"

namespace itn {

// Thread-safe LRU map from (pack generation, category, lexical span) to the
// span's conversion; a rejected span is cached as nullopt.
class SpanCache {
 public:
  using Value = std::optional<std::vector<std::string>>;

  explicit SpanCache(size_t capacity = 1024);

  static std::string Key(uint64_t generation, const std::string& category,
                         std::span<const std::string> lexical);

  // nullopt on a miss.
  std::optional<Value> Get(const std::string& key);
  void Put(const std::string& key, Value value);

  size_t size() const;
  size_t capacity() const { return capacity_; }
  uint64_t hits() const;
  uint64_t misses() const;
  void Clear();

 private:
  using Entry = std::pair<std::string, Value>;

  size_t capacity_;
  mutable std::mutex mu_;
  std::list<Entry> order_;  // most recent first
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
};

struct EngineOptions {
  // Spans are force-closed and converted at this many tokens.
  size_t max_span = 10;
  size_t cache_capacity = 1024;
  bool use_cache = true;
};

// One released display token and where it came from.
struct OutputToken {
  std::string text;
  // Input positions [begin, end) it was produced from.
  size_t begin = 0;
  size_t end = 0;
  // Empty for a pass-through token; otherwise the category whose machine
  // produced it (a rejected span passes through with its category cleared).
  std::string category;
  // Input tokens that had arrived when it was released.
  size_t released_after = 0;
};

class ItnSession;

class ItnEngine {
 public:
  // Throws ConfigError unless every tagger category is in the pack.
  ItnEngine(std::shared_ptr<const TaggerModel> tagger,
            std::shared_ptr<PackHandle> pack, EngineOptions options = {});

  const TaggerModel& tagger() const { return *tagger_; }
  const EngineOptions& options() const { return options_; }
  SpanCache& cache() const { return *cache_; }
  PackHandle& pack() const { return *pack_; }

  // Swaps the grammar pack; sessions pick it up at their next conversion.
  // Throws ConfigError (keeping the old pack) on a category mismatch.
  void ReplacePack(std::shared_ptr<const GrammarPack> pack);

  ItnSession NewSession() const;

  // Whole-sentence conversion: offline tagging, then span assembly.
  std::vector<OutputToken> ConvertTokens(
      std::span<const std::string> tokens) const;
  std::string Convert(std::span<const std::string> tokens) const;
  std::string Convert(const std::string& sentence) const;

  // Conversion under given tags (names from the tagger inventory).
  std::vector<OutputToken> ConvertTaggedTokens(
      std::span<const std::string> tokens,
      std::span<const std::string> tags) const;
  std::string ConvertTagged(std::span<const std::string> tokens,
                            std::span<const std::string> tags) const;

  // Display tokens for one span, through the cache when enabled; nullopt when
  // the grammar rejects it.
  SpanCache::Value ConvertSpanCached(int category,
                                     std::span<const std::string> lexical) const;

 private:
  friend class ItnSession;
  static void CheckConsistent(const TagInventory& inventory,
                              const GrammarPack& pack);

  std::shared_ptr<const TaggerModel> tagger_;
  std::shared_ptr<PackHandle> pack_;
  EngineOptions options_;
  std::unique_ptr<SpanCache> cache_;
};

// Single-stream state. Not thread-safe; sessions of one engine may run on
// different threads.
class ItnSession {
 public:
  explicit ItnSession(const ItnEngine& engine, bool external_tags = false);

  // Feeds one lexical token; returns the display tokens released by it.
  std::vector<OutputToken> Push(const std::string& token);
  // Same, with the tag supplied instead of predicted.
  std::vector<OutputToken> PushTagged(const std::string& token,
                                      const std::string& tag);
  // Ends the utterance: tags the partial chunk, closes any open span and
  // releases everything. The session can be reused afterwards.
  std::vector<OutputToken> Flush();

 private:
  void Accept(const std::string& token, int tag,
              std::vector<OutputToken>* out);
  void CloseSpan(std::vector<OutputToken>* out);

  const ItnEngine* engine_;
  std::optional<TaggerStream> stream_;
  size_t arrived_ = 0;    // tokens pushed
  size_t position_ = 0;   // tokens tagged so far
  int span_category_ = -1;
  size_t span_begin_ = 0;
  std::vector<std::string> span_tokens_;
};

// Joins display tokens with single spaces.
std::string JoinOutput(std::span<const OutputToken> tokens);

}  // namespace itn

#endif  // ITN_PIPELINE_H_
