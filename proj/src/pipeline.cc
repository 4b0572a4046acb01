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

#include "itn/pipeline.h"

#include <spdlog/spdlog.h>

#include "itn/errors.h"
#include "itn/text.h"

namespace itn {

SpanCache::SpanCache(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("span cache capacity must be positive");
}

std::string SpanCache::Key(uint64_t generation, const std::string& category,
                           std::span<const std::string> lexical) {
  std::string key = std::to_string(generation);
  key += '\x1f';
  key += category;
  for (const std::string& w : lexical) {
    key += '\x1f';
    key += w;
  }
  return key;
}

std::optional<SpanCache::Value> SpanCache::Get(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  order_.splice(order_.begin(), order_, it->second);
  return it->second->second;
}

void SpanCache::Put(const std::string& key, Value value) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = index_.find(key);
  if (it != index_.end()) {
    it->second->second = std::move(value);
    order_.splice(order_.begin(), order_, it->second);
    return;
  }
  order_.emplace_front(key, std::move(value));
  index_[key] = order_.begin();
  if (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
}

size_t SpanCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return order_.size();
}

uint64_t SpanCache::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

uint64_t SpanCache::misses() const {
  std::lock_guard<std::mutex> lock(mu_);
  return misses_;
}

void SpanCache::Clear() {
  std::lock_guard<std::mutex> lock(mu_);
  order_.clear();
  index_.clear();
  hits_ = misses_ = 0;
}

ItnEngine::ItnEngine(std::shared_ptr<const TaggerModel> tagger,
                     std::shared_ptr<PackHandle> pack, EngineOptions options)
    : tagger_(std::move(tagger)),
      pack_(std::move(pack)),
      options_(options),
      cache_(std::make_unique<SpanCache>(options.cache_capacity)) {
  if (!tagger_ || !pack_ || !pack_->Current()) {
    throw ConfigError("engine needs a tagger and a grammar pack");
  }
  if (options_.max_span == 0) throw ConfigError("max_span must be positive");
  CheckConsistent(tagger_->inventory(), *pack_->Current());
}

void ItnEngine::CheckConsistent(const TagInventory& inventory,
                                const GrammarPack& pack) {
  std::vector<std::string> missing;
  for (const std::string& c : inventory.categories()) {
    if (!pack.Has(c)) missing.push_back(c);
  }
  if (!missing.empty()) {
    throw ConfigError("tagger categories missing from the grammar pack: " +
                      Join(missing, ", "));
  }
}

void ItnEngine::ReplacePack(std::shared_ptr<const GrammarPack> pack) {
  if (!pack) throw ConfigError("null grammar pack");
  CheckConsistent(tagger_->inventory(), *pack);
  pack_->Replace(std::move(pack));
}

ItnSession ItnEngine::NewSession() const { return ItnSession(*this); }

SpanCache::Value ItnEngine::ConvertSpanCached(
    int category, std::span<const std::string> lexical) const {
  const std::string& name = tagger_->inventory().categories().at(category);
  auto [pack, generation] = pack_->Snapshot();
  std::string key;
  if (options_.use_cache) {
    key = SpanCache::Key(generation, name, lexical);
    if (std::optional<SpanCache::Value> hit = cache_->Get(key)) return *hit;
  }
  SpanCache::Value value = ConvertSpan(pack->Get(name), lexical);
  if (options_.use_cache) cache_->Put(key, value);
  return value;
}

namespace {

void EmitSpan(const ItnEngine& engine, int category, size_t begin,
              std::span<const std::string> lexical, size_t released_after,
              std::vector<OutputToken>* out) {
  SpanCache::Value display = engine.ConvertSpanCached(category, lexical);
  if (!display) {
    // The grammar rejects the span: keep the words as spoken.
    for (size_t i = 0; i < lexical.size(); ++i) {
      out->push_back({lexical[i], begin + i, begin + i + 1, "", released_after});
    }
    return;
  }
  const std::string& name =
      engine.tagger().inventory().categories().at(category);
  for (std::string& t : *display) {
    out->push_back(
        {std::move(t), begin, begin + lexical.size(), name, released_after});
  }
}

void WarnOrphan(const TagInventory& inv, int tag, size_t position) {
  spdlog::warn("continuation tag {} at token {} has no open span; "
               "treating it as blank",
               inv.Tag(tag), position);
}

}  // namespace

std::vector<OutputToken> ItnEngine::ConvertTaggedTokens(
    std::span<const std::string> tokens,
    std::span<const std::string> tags) const {
  if (tokens.size() != tags.size()) {
    throw ConfigError("token and tag counts differ");
  }
  const TagInventory& inv = tagger_->inventory();
  std::vector<int> ids;
  for (const std::string& t : tags) ids.push_back(inv.Index(t));

  std::vector<OutputToken> out;
  const size_t n = tokens.size();
  int cat = -1;
  size_t begin = 0;
  auto close = [&](size_t end) {
    if (cat < 0) return;
    EmitSpan(*this, cat, begin, tokens.subspan(begin, end - begin), n, &out);
    cat = -1;
  };
  for (size_t i = 0; i < n; ++i) {
    const int t = ids[i];
    if (inv.IsContinue(t) && cat == inv.CategoryOf(t)) {
      // extends the open span
    } else {
      close(i);
      if (inv.IsBegin(t)) {
        cat = inv.CategoryOf(t);
        begin = i;
      } else {
        if (inv.IsContinue(t)) WarnOrphan(inv, t, i);
        out.push_back({tokens[i], i, i + 1, "", n});
      }
    }
    if (cat >= 0 && i + 1 - begin == options_.max_span) close(i + 1);
  }
  close(n);
  return out;
}

std::vector<OutputToken> ItnEngine::ConvertTokens(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) return {};
  std::vector<std::string> tags;
  for (int t : tagger_->Tag(tokens)) {
    tags.push_back(tagger_->inventory().Tag(t));
  }
  return ConvertTaggedTokens(tokens, tags);
}

std::string ItnEngine::Convert(std::span<const std::string> tokens) const {
  return JoinOutput(ConvertTokens(tokens));
}

std::string ItnEngine::Convert(const std::string& sentence) const {
  return Convert(SplitWhitespace(sentence));
}

std::string ItnEngine::ConvertTagged(std::span<const std::string> tokens,
                                     std::span<const std::string> tags) const {
  return JoinOutput(ConvertTaggedTokens(tokens, tags));
}

ItnSession::ItnSession(const ItnEngine& engine, bool external_tags)
    : engine_(&engine) {
  if (!external_tags) stream_.emplace(*engine.tagger_);
}

std::vector<OutputToken> ItnSession::Push(const std::string& token) {
  if (!stream_) throw ConfigError("session was opened for external tags");
  ++arrived_;
  std::vector<OutputToken> out;
  for (const EmittedTag& e : stream_->Push(token)) Accept(e.token, e.tag, &out);
  return out;
}

std::vector<OutputToken> ItnSession::PushTagged(const std::string& token,
                                                const std::string& tag) {
  if (stream_) throw ConfigError("session tags tokens itself");
  ++arrived_;
  std::vector<OutputToken> out;
  Accept(token, engine_->tagger().inventory().Index(tag), &out);
  return out;
}

std::vector<OutputToken> ItnSession::Flush() {
  std::vector<OutputToken> out;
  if (stream_) {
    for (const EmittedTag& e : stream_->Flush()) Accept(e.token, e.tag, &out);
  }
  CloseSpan(&out);
  arrived_ = 0;
  position_ = 0;
  return out;
}

void ItnSession::Accept(const std::string& token, int tag,
                        std::vector<OutputToken>* out) {
  const TagInventory& inv = engine_->tagger().inventory();
  const size_t pos = position_++;
  if (inv.IsContinue(tag) && span_category_ == inv.CategoryOf(tag)) {
    span_tokens_.push_back(token);
  } else {
    CloseSpan(out);
    if (inv.IsBegin(tag)) {
      span_category_ = inv.CategoryOf(tag);
      span_begin_ = pos;
      span_tokens_ = {token};
    } else {
      if (inv.IsContinue(tag)) WarnOrphan(inv, tag, pos);
      out->push_back({token, pos, pos + 1, "", arrived_});
    }
  }
  if (span_category_ >= 0 &&
      span_tokens_.size() == engine_->options().max_span) {
    CloseSpan(out);
  }
}

void ItnSession::CloseSpan(std::vector<OutputToken>* out) {
  if (span_category_ < 0) return;
  EmitSpan(*engine_, span_category_, span_begin_, span_tokens_, arrived_, out);
  span_category_ = -1;
  span_tokens_.clear();
}

std::string JoinOutput(std::span<const OutputToken> tokens) {
  std::string s;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ' ';
    s += tokens[i].text;
  }
  return s;
}

}  // namespace itn
