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

#include "itn/ngram.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "itn/errors.h"
#include "itn/text.h"

namespace itn {
namespace {

constexpr char kSep = '\x1f';
constexpr char kMagic[] = "\\streamitn-ngram";

std::string Key(std::span<const std::string> tokens) {
  std::string key;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) key += kSep;
    key += tokens[i];
  }
  return key;
}

std::vector<std::string> Padded(std::span<const std::string> tokens,
                                bool with_end) {
  std::vector<std::string> out;
  out.reserve(tokens.size() + 2);
  out.emplace_back(kSentenceStart);
  out.insert(out.end(), tokens.begin(), tokens.end());
  if (with_end) out.emplace_back(kSentenceEnd);
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

NGramModel NGramModel::Train(
    const std::vector<std::vector<std::string>>& corpus, int order,
    double alpha) {
  if (order < 1) throw ConfigError("n-gram order must be at least 1");
  if (!(alpha > 0 && alpha < 1)) {
    throw ConfigError("backoff alpha must be in (0, 1)");
  }
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  NGramModel m;
  m.order_ = order;
  m.alpha_ = alpha;
  m.grams_.assign(order, {});
  m.contexts_.assign(order, {});
  for (const std::vector<std::string>& sentence : corpus) {
    std::vector<std::string> padded = Padded(sentence, true);
    // Every position after <s> is predicted from up to order-1 tokens.
    for (size_t i = 1; i < padded.size(); ++i) {
      const size_t max_ctx = std::min<size_t>(order - 1, i);
      for (size_t k = 0; k <= max_ctx; ++k) {
        m.Add(std::span<const std::string>(padded).subspan(i - k, k + 1), 1);
      }
    }
  }
  m.Finish();
  return m;
}

void NGramModel::Add(std::span<const std::string> ngram, uint64_t count) {
  const size_t k = ngram.size() - 1;
  grams_[k][Key(ngram)] += count;
  contexts_[k][Key(ngram.first(k))] += count;
}

void NGramModel::Finish() {
  log_alpha_ = std::log(alpha_);
  unigram_ = grams_[0];
  total_ = 0;
  most_frequent_.clear();
  uint64_t best = 0;
  for (const auto& [w, c] : unigram_) {
    total_ += c;
    if (w == kSentenceEnd) continue;
    if (c > best || (c == best && w < most_frequent_)) {
      best = c;
      most_frequent_ = w;
    }
  }
}

uint64_t NGramModel::Count(std::span<const std::string> context,
                           const std::string& token) const {
  if (context.size() >= static_cast<size_t>(order_)) return 0;
  std::vector<std::string> gram(context.begin(), context.end());
  gram.push_back(token);
  const Table& t = grams_[context.size()];
  auto it = t.find(Key(gram));
  return it == t.end() ? 0 : it->second;
}

uint64_t NGramModel::ContextCount(std::span<const std::string> context) const {
  if (context.size() >= static_cast<size_t>(order_)) return 0;
  const Table& t = contexts_[context.size()];
  auto it = t.find(Key(context));
  return it == t.end() ? 0 : it->second;
}

double NGramModel::LogProb(std::span<const std::string> history,
                           const std::string& token) const {
  const size_t n = std::min<size_t>(history.size(), order_ - 1);
  std::span<const std::string> ctx = history.last(n);
  std::string key = Key(ctx);
  for (size_t k = n;; --k) {
    // key holds the last k history tokens.
    std::string gram = k ? key + kSep + token : token;
    auto it = grams_[k].find(gram);
    if (it != grams_[k].end()) {
      const uint64_t denom = contexts_[k].at(key);
      return std::log(static_cast<double>(it->second)) -
             std::log(static_cast<double>(denom)) +
             static_cast<double>(n - k) * log_alpha_;
    }
    if (k == 0) break;
    size_t cut = key.find(kSep);
    key = cut == std::string::npos ? std::string() : key.substr(cut + 1);
  }
  return -std::log(static_cast<double>(VocabularySize())) +
         static_cast<double>(n) * log_alpha_;
}

double NGramModel::Score(std::span<const std::string> tokens) const {
  std::vector<std::string> padded = Padded(tokens, true);
  double total = 0;
  for (size_t i = 1; i < padded.size(); ++i) {
    total += LogProb(std::span<const std::string>(padded).first(i), padded[i]);
  }
  return total;
}

double NGramModel::ScorePrefix(std::span<const std::string> tokens) const {
  std::vector<std::string> padded = Padded(tokens, false);
  double total = 0;
  for (size_t i = 1; i < padded.size(); ++i) {
    total += LogProb(std::span<const std::string>(padded).first(i), padded[i]);
  }
  return total;
}

double NGramModel::Perplexity(
    const std::vector<std::vector<std::string>>& corpus) const {
  double total = 0;
  size_t predicted = 0;
  for (const auto& sentence : corpus) {
    total += Score(sentence);
    predicted += sentence.size() + 1;
  }
  if (predicted == 0) throw DataError("perplexity of an empty corpus");
  return std::exp(-total / static_cast<double>(predicted));
}

void NGramModel::Write(std::ostream& out) const {
  out << kMagic << "\n";
  out << "order\t" << order_ << "\n";
  out << "alpha\t" << FormatDouble(alpha_) << "\n";
  for (int k = 0; k < order_; ++k) {
    std::map<std::pair<std::string, std::string>, uint64_t> sorted;
    for (const auto& [key, c] : grams_[k]) {
      std::vector<std::string> parts = Split(key, kSep);
      std::string token = parts.back();
      parts.pop_back();
      sorted[{Join(parts, " "), token}] = c;
    }
    out << "\\" << (k + 1) << "-grams\t" << sorted.size() << "\n";
    for (const auto& [ct, c] : sorted) {
      out << c << "\t" << ct.first << "\t" << ct.second << "\n";
    }
  }
  out << "\\end\n";
}

NGramModel NGramModel::Read(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw FormatError(std::string("n-gram model truncated: expected ") +
                        what);
    }
    ++line_no;
  };
  auto bad = [&](const std::string& what) {
    return FormatError("n-gram model line " + std::to_string(line_no) + ": " +
                       what);
  };
  auto field = [&](const std::string& name) {
    next(name.c_str());
    std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 2 || cols[0] != name) throw bad("expected " + name);
    return cols[1];
  };
  next("header");
  if (line != kMagic) throw bad("not an n-gram model");
  NGramModel m;
  const std::string order_text = field("order");
  auto [p, ec] = std::from_chars(order_text.data(),
                                 order_text.data() + order_text.size(),
                                 m.order_);
  if (ec != std::errc() || m.order_ < 1 || m.order_ > 64) {
    throw bad("bad order");
  }
  const std::string alpha_text = field("alpha");
  auto [q, ec2] = std::from_chars(alpha_text.data(),
                                  alpha_text.data() + alpha_text.size(),
                                  m.alpha_);
  if (ec2 != std::errc() || !(m.alpha_ > 0 && m.alpha_ < 1)) {
    throw bad("bad alpha");
  }
  m.grams_.assign(m.order_, {});
  m.contexts_.assign(m.order_, {});
  for (int k = 0; k < m.order_; ++k) {
    next("block header");
    std::vector<std::string> head = Split(line, '\t');
    if (head.size() != 2 || head[0] != "\\" + std::to_string(k + 1) + "-grams") {
      throw bad("expected block for order " + std::to_string(k + 1));
    }
    const size_t n = std::stoull(head[1]);
    for (size_t i = 0; i < n; ++i) {
      next("n-gram line");
      std::vector<std::string> cols = Split(line, '\t');
      if (cols.size() != 3) throw bad("expected count, context and token");
      uint64_t c = 0;
      auto [r, ec3] = std::from_chars(cols[0].data(),
                                      cols[0].data() + cols[0].size(), c);
      if (ec3 != std::errc() || c == 0) throw bad("bad count");
      std::vector<std::string> gram =
          cols[1].empty() ? std::vector<std::string>{} : Split(cols[1], ' ');
      if (gram.size() != static_cast<size_t>(k)) throw bad("context length");
      gram.push_back(cols[2]);
      m.Add(gram, c);
    }
  }
  next("end marker");
  if (line != "\\end") throw bad("expected \\end");
  m.Finish();
  return m;
}

void NGramModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  Write(out);
  if (!out) throw IoError("write failed: " + path);
}

NGramModel NGramModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return Read(in);
}

bool NGramModel::operator==(const NGramModel& other) const {
  return order_ == other.order_ && alpha_ == other.alpha_ &&
         grams_ == other.grams_ && contexts_ == other.contexts_;
}

size_t Rerank(const NGramModel& m, std::span<const RerankCandidate> candidates,
              double lambda) {
  if (candidates.empty()) throw ConfigError("rerank needs candidates");
  if (!(lambda >= 0)) throw ConfigError("rerank lambda must be >= 0");
  size_t best = 0;
  double best_cost = 0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double cost = candidates[i].fst_cost;
    if (lambda != 0) cost -= lambda * m.Score(candidates[i].tokens);
    if (i == 0 || cost < best_cost) {
      best = i;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace itn
