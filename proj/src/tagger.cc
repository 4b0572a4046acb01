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

#include "itn/tagger.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <zlib.h>

#include "itn/errors.h"
#include "itn/fst_io.h"
#include "tagger_net.h"

namespace itn {

using internal::BlockIndex;
using internal::FinalIndex;
using internal::Mat;

TagInventory TagInventory::FromCategories(std::vector<std::string> categories) {
  TagInventory inv;
  inv.categories_ = std::move(categories);
  inv.tags_.emplace_back(kBlankTag);
  for (const std::string& c : inv.categories_) {
    if (c.empty() || c[0] == '_' || c == kBlankTag) {
      throw ConfigError("bad category name for a tag: '" + c + "'");
    }
    inv.tags_.push_back(BeginTag(c));
    inv.tags_.push_back(ContinueTag(c));
  }
  for (size_t i = 0; i < inv.tags_.size(); ++i) {
    if (!inv.index_.emplace(inv.tags_[i], static_cast<int>(i)).second) {
      throw ConfigError("duplicate tag " + inv.tags_[i]);
    }
  }
  return inv;
}

TagInventory TagInventory::FromTags(const std::vector<std::string>& tags) {
  if (tags.empty() || tags[0] != kBlankTag || tags.size() % 2 != 1) {
    throw FormatError("tag inventory must be blank followed by tag pairs");
  }
  std::vector<std::string> cats;
  for (size_t i = 1; i < tags.size(); i += 2) {
    if (tags[i + 1] != ContinueTag(tags[i])) {
      throw FormatError("tag " + tags[i + 1] + " does not continue " +
                        tags[i]);
    }
    cats.push_back(tags[i]);
  }
  return FromCategories(std::move(cats));
}

int TagInventory::Find(const std::string& tag) const {
  auto it = index_.find(tag);
  return it == index_.end() ? -1 : it->second;
}

int TagInventory::Index(const std::string& tag) const {
  const int i = Find(tag);
  if (i < 0) throw DataError("tag not in the inventory: " + tag);
  return i;
}

Vocabulary::Vocabulary() : words_{std::string(kUnknownSymbol)} {
  index_[words_[0]] = 0;
}

Vocabulary Vocabulary::Build(std::span<const TaggedSentence> corpus,
                             int min_count) {
  std::map<std::string, int> counts;
  for (const TaggedSentence& s : corpus) {
    for (const std::string& t : s.tokens) ++counts[t];
  }
  std::vector<std::string> words;
  for (const auto& [w, c] : counts) {
    if (c >= min_count && w != kUnknownSymbol) words.push_back(w);
  }
  return FromWords(words);
}

Vocabulary Vocabulary::FromWords(const std::vector<std::string>& words) {
  Vocabulary v;
  for (const std::string& w : words) {
    if (w == kUnknownSymbol) continue;
    if (v.index_.emplace(w, static_cast<int>(v.words_.size())).second) {
      v.words_.push_back(w);
    }
  }
  return v;
}

int Vocabulary::Id(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? 0 : it->second;
}

std::vector<int> Vocabulary::Ids(std::span<const std::string> words) const {
  std::vector<int> ids;
  ids.reserve(words.size());
  for (const std::string& w : words) ids.push_back(Id(w));
  return ids;
}

void TaggerConfig::Validate() const {
  if (num_blocks < 1 || model_dim < 1 || num_heads < 1 || ffn_dim < 1 ||
      chunk_size < 1 || max_position < 1) {
    throw ConfigError("tagger sizes and chunk size must be positive");
  }
  if (model_dim % num_heads != 0) {
    throw ConfigError("model_dim " + std::to_string(model_dim) +
                      " is not divisible by num_heads " +
                      std::to_string(num_heads));
  }
  if (history_chunks < 0) throw ConfigError("history_chunks must be >= 0");
  if (!(dropout >= 0 && dropout < 1)) {
    throw ConfigError("dropout must be in [0, 1)");
  }
}

bool ChunkAllowed(int i, int j, int chunk_size, int history_chunks) {
  if (j >= (i / chunk_size + 1) * chunk_size) return false;
  return j >= internal::AttendBegin(i, chunk_size, history_chunks);
}

std::vector<TensorInfo> ParameterLayout(const TaggerConfig& cfg,
                                        size_t vocab_size, size_t num_tags) {
  cfg.Validate();
  const int d = cfg.model_dim, f = cfg.ffn_dim;
  std::vector<TensorInfo> out;
  size_t offset = 0;
  auto add = [&](std::string name, int rows, int cols, bool decay) {
    out.push_back({std::move(name), offset, rows, cols, decay});
    offset += static_cast<size_t>(rows) * cols;
  };
  add("tok_emb", static_cast<int>(vocab_size), d, true);
  add("pos_emb", cfg.max_position, d, true);
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const std::string p = "block" + std::to_string(b) + ".";
    add(p + "ln1_g", 1, d, false);
    add(p + "ln1_b", 1, d, false);
    add(p + "wq", d, d, true);
    add(p + "bq", 1, d, false);
    add(p + "wk", d, d, true);
    add(p + "bk", 1, d, false);
    add(p + "wv", d, d, true);
    add(p + "bv", 1, d, false);
    add(p + "wo", d, d, true);
    add(p + "bo", 1, d, false);
    add(p + "ln2_g", 1, d, false);
    add(p + "ln2_b", 1, d, false);
    add(p + "w1", d, f, true);
    add(p + "b1", 1, f, false);
    add(p + "w2", f, d, true);
    add(p + "b2", 1, d, false);
  }
  add("lnf_g", 1, d, false);
  add("lnf_b", 1, d, false);
  add("wout", d, static_cast<int>(num_tags), true);
  add("bout", 1, static_cast<int>(num_tags), false);
  return out;
}

namespace {

size_t NumParams(const std::vector<TensorInfo>& layout) {
  const TensorInfo& t = layout.back();
  return t.offset + static_cast<size_t>(t.rows) * t.cols;
}

double Normal(std::mt19937_64& rng) {
  // Box-Muller on two 53-bit uniforms.
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TaggerModel::TaggerModel(TaggerConfig config, Vocabulary vocab,
                         TagInventory inventory, uint64_t seed)
    : config_(config),
      vocab_(std::move(vocab)),
      inventory_(std::move(inventory)) {
  layout_ = ParameterLayout(config_, vocab_.size(), inventory_.size());
  params_.setZero(static_cast<Eigen::Index>(NumParams(layout_)));
  std::mt19937_64 rng(seed);
  const double residual_scale = 1.0 / std::sqrt(2.0 * config_.num_blocks);
  for (const TensorInfo& t : layout_) {
    float* p = params_.data() + t.offset;
    const size_t n = static_cast<size_t>(t.rows) * t.cols;
    const bool gain = t.name.ends_with("_g");
    if (gain) {
      std::fill(p, p + n, 1.0f);
      continue;
    }
    if (!t.decay) continue;  // biases start at zero
    double stddev = t.name.ends_with("emb") ? 0.1 : 1.0 / std::sqrt(t.rows);
    if (t.name.ends_with("wo") || t.name.ends_with("w2")) {
      stddev *= residual_scale;
    }
    for (size_t i = 0; i < n; ++i) {
      p[i] = static_cast<float>(stddev * Normal(rng));
    }
  }
}

// Incremental forward state: cached keys and values per block.
struct TaggerStream::State {
  std::vector<Mat<float>> keys, values;
  int length = 0;  // positions filled in the current segment
  size_t emitted = 0;
  std::vector<std::string> tokens;
  std::vector<int> ids;

  explicit State(const TaggerConfig& cfg) {
    for (int b = 0; b < cfg.num_blocks; ++b) {
      keys.emplace_back(cfg.max_position, cfg.model_dim);
      values.emplace_back(cfg.max_position, cfg.model_dim);
    }
  }
};

namespace {

// Log-probability rows for one chunk that starts at state.length. Every
// position of the chunk sees the cached past and the whole chunk.
Eigen::MatrixXf ProcessChunk(const TaggerModel& m, TaggerStream::State& st,
                             std::span<const int> ids) {
  const TaggerConfig& cfg = m.config();
  internal::Net<float> net(cfg, m.layout(), m.params().data());
  const int n = static_cast<int>(ids.size());
  const int d = cfg.model_dim, heads = cfg.num_heads, dh = d / heads;
  const int start = st.length;
  const int end = start + n;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));

  Mat<float> h(n, d);
  auto tok = net.W(internal::kTokEmb);
  auto pos = net.W(internal::kPosEmb);
  for (int r = 0; r < n; ++r) h.row(r) = tok.row(ids[r]) + pos.row(start + r);

  for (int b = 0; b < cfg.num_blocks; ++b) {
    using internal::LayerNorm;
    Mat<float> a = LayerNorm<float>(h, net.W(BlockIndex(b, internal::kLn1G)),
                                    net.W(BlockIndex(b, internal::kLn1B)),
                                    nullptr);
    Mat<float> q = (a * net.W(BlockIndex(b, internal::kWq))).rowwise() +
                   net.W(BlockIndex(b, internal::kBq)).row(0);
    st.keys[b].middleRows(start, n) =
        (a * net.W(BlockIndex(b, internal::kWk))).rowwise() +
        net.W(BlockIndex(b, internal::kBk)).row(0);
    st.values[b].middleRows(start, n) =
        (a * net.W(BlockIndex(b, internal::kWv))).rowwise() +
        net.W(BlockIndex(b, internal::kBv)).row(0);
    // Every row of the chunk has the same key range.
    const int lo = internal::AttendBegin(start, cfg.chunk_size,
                                         cfg.history_chunks);
    Mat<float> o(n, d);
    for (int hd = 0; hd < heads; ++hd) {
      Mat<float> scores =
          q.middleCols(hd * dh, dh) *
          st.keys[b].block(lo, hd * dh, end - lo, dh).transpose() * scale;
      for (int r = 0; r < n; ++r) {
        const float mx = scores.row(r).maxCoeff();
        scores.row(r) = (scores.row(r).array() - mx).exp();
        scores.row(r) /= scores.row(r).sum();
      }
      o.middleCols(hd * dh, dh) =
          scores * st.values[b].block(lo, hd * dh, end - lo, dh);
    }
    h += (o * net.W(BlockIndex(b, internal::kWo))).rowwise() +
         net.W(BlockIndex(b, internal::kBo)).row(0);
    Mat<float> c = LayerNorm<float>(h, net.W(BlockIndex(b, internal::kLn2G)),
                                    net.W(BlockIndex(b, internal::kLn2B)),
                                    nullptr);
    Mat<float> u = ((c * net.W(BlockIndex(b, internal::kW1))).rowwise() +
                    net.W(BlockIndex(b, internal::kB1)).row(0))
                       .cwiseMax(0.0f);
    h += (u * net.W(BlockIndex(b, internal::kW2))).rowwise() +
         net.W(BlockIndex(b, internal::kB2)).row(0);
  }
  const int nb = cfg.num_blocks;
  Mat<float> f = internal::LayerNorm<float>(
      h, net.W(FinalIndex(nb, internal::kLnfG)),
      net.W(FinalIndex(nb, internal::kLnfB)), nullptr);
  Mat<float> logits = (f * net.W(FinalIndex(nb, internal::kWout))).rowwise() +
                      net.W(FinalIndex(nb, internal::kBout)).row(0);
  Eigen::MatrixXf out(n, logits.cols());
  for (int r = 0; r < n; ++r) {
    const float mx = logits.row(r).maxCoeff();
    const float lse = mx + std::log((logits.row(r).array() - mx).exp().sum());
    out.row(r) = logits.row(r).array() - lse;
  }
  st.length = end;
  return out;
}

// Positions per context segment of a stream: whole chunks only.
int SegmentLength(const TaggerConfig& cfg) {
  return std::max(cfg.chunk_size,
                  cfg.max_position / cfg.chunk_size * cfg.chunk_size);
}

int Argmax(const Eigen::MatrixXf& rows, int r) {
  Eigen::Index best;
  rows.row(r).maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace

Eigen::MatrixXf TaggerModel::Forward(std::span<const int> ids) const {
  if (ids.empty()) throw ConfigError("cannot tag an empty sequence");
  if (static_cast<int>(ids.size()) > config_.max_position) {
    throw ConfigError("sequence of " + std::to_string(ids.size()) +
                      " tokens exceeds max_position " +
                      std::to_string(config_.max_position) +
                      "; split the input into shorter segments");
  }
  if (config_.chunk_size > config_.max_position) {
    throw ConfigError("chunk_size exceeds max_position");
  }
  TaggerStream::State st(config_);
  Eigen::MatrixXf out(static_cast<Eigen::Index>(ids.size()),
                      static_cast<Eigen::Index>(inventory_.size()));
  for (size_t s = 0; s < ids.size(); s += config_.chunk_size) {
    const size_t n = std::min<size_t>(config_.chunk_size, ids.size() - s);
    out.middleRows(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(n)) =
        ProcessChunk(*this, st, ids.subspan(s, n));
  }
  return out;
}

std::vector<int> TaggerModel::Tag(std::span<const std::string> tokens) const {
  if (tokens.empty()) return {};
  const std::vector<int> ids = vocab_.Ids(tokens);
  std::vector<int> tags;
  tags.reserve(ids.size());
  // Long inputs restart the context the way the stream does.
  const size_t seg = static_cast<size_t>(SegmentLength(config_));
  for (size_t s = 0; s < ids.size(); s += seg) {
    const size_t n = std::min(seg, ids.size() - s);
    Eigen::MatrixXf rows =
        Forward(std::span<const int>(ids).subspan(s, n));
    for (int r = 0; r < rows.rows(); ++r) tags.push_back(Argmax(rows, r));
  }
  return tags;
}

TaggerStream::TaggerStream(const TaggerModel& model)
    : model_(&model), state_(std::make_unique<State>(model.config())) {}
TaggerStream::~TaggerStream() = default;
TaggerStream::TaggerStream(TaggerStream&&) noexcept = default;

std::vector<EmittedTag> TaggerStream::Push(const std::string& token) {
  state_->tokens.push_back(token);
  state_->ids.push_back(model_->vocab().Id(token));
  if (static_cast<int>(state_->ids.size()) < model_->config().chunk_size) {
    return {};
  }
  return RunChunk();
}

std::vector<EmittedTag> TaggerStream::Flush() {
  std::vector<EmittedTag> out;
  if (!state_->ids.empty()) out = RunChunk();
  Reset();
  return out;
}

void TaggerStream::Reset() {
  state_->length = 0;
  state_->emitted = 0;
  state_->tokens.clear();
  state_->ids.clear();
}

std::vector<EmittedTag> TaggerStream::RunChunk() {
  State& st = *state_;
  const int n = static_cast<int>(st.ids.size());
  if (st.length + n > SegmentLength(model_->config())) st.length = 0;
  Eigen::MatrixXf rows = ProcessChunk(*model_, st, st.ids);
  std::vector<EmittedTag> out;
  out.reserve(n);
  for (int r = 0; r < n; ++r) {
    out.push_back({st.emitted + r, std::move(st.tokens[r]), Argmax(rows, r),
                   n - 1 - r});
  }
  st.emitted += n;
  st.tokens.clear();
  st.ids.clear();
  return out;
}

// Checkpoint layout. Fields are little-endian.
namespace {

constexpr char kMagic[4] = {'I', 'T', 'N', 'T'};
constexpr uint32_t kVersion = 1;

}  // namespace

std::string TaggerModel::Serialize() const {
  using namespace binio;
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, 4);
  WriteU32(out, kVersion);
  WriteU32(out, static_cast<uint32_t>(config_.num_blocks));
  WriteU32(out, static_cast<uint32_t>(config_.model_dim));
  WriteU32(out, static_cast<uint32_t>(config_.num_heads));
  WriteU32(out, static_cast<uint32_t>(config_.ffn_dim));
  WriteU32(out, static_cast<uint32_t>(config_.chunk_size));
  WriteU32(out, static_cast<uint32_t>(config_.history_chunks));
  WriteU32(out, static_cast<uint32_t>(config_.max_position));
  out.write(reinterpret_cast<const char*>(&config_.dropout), 8);
  WriteU32(out, static_cast<uint32_t>(vocab_.size()));
  for (const std::string& w : vocab_.words()) WriteString(out, w);
  WriteU32(out, static_cast<uint32_t>(inventory_.size()));
  for (const std::string& t : inventory_.tags()) WriteString(out, t);
  WriteU32(out, static_cast<uint32_t>(layout_.size()));
  for (const TensorInfo& t : layout_) {
    WriteString(out, t.name);
    WriteU32(out, static_cast<uint32_t>(t.rows));
    WriteU32(out, static_cast<uint32_t>(t.cols));
    out.write(reinterpret_cast<const char*>(params_.data() + t.offset),
              static_cast<std::streamsize>(sizeof(float) * t.rows * t.cols));
  }
  std::string body = out.str();
  const uint32_t crc = static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(body.data()),
            static_cast<uInt>(body.size())));
  body.append(reinterpret_cast<const char*>(&crc), 4);
  return body;
}

TaggerModel TaggerModel::Deserialize(const std::string& bytes) {
  using namespace binio;
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("not a tagger checkpoint (bad magic)");
  }
  uint32_t version;
  std::memcpy(&version, bytes.data() + 4, 4);
  if (version != kVersion) {
    throw FormatError("unsupported tagger checkpoint version " +
                      std::to_string(version));
  }
  uint32_t stored;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  const uint32_t crc = static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size() - 4)));
  if (crc != stored) {
    throw FormatError("tagger checkpoint checksum mismatch (corrupt or "
                      "truncated file)");
  }
  std::istringstream in(bytes.substr(8, bytes.size() - 12), std::ios::binary);
  TaggerModel m;
  TaggerConfig& c = m.config_;
  c.num_blocks = static_cast<int>(ReadU32(in));
  c.model_dim = static_cast<int>(ReadU32(in));
  c.num_heads = static_cast<int>(ReadU32(in));
  c.ffn_dim = static_cast<int>(ReadU32(in));
  c.chunk_size = static_cast<int>(ReadU32(in));
  c.history_chunks = static_cast<int>(ReadU32(in));
  c.max_position = static_cast<int>(ReadU32(in));
  in.read(reinterpret_cast<char*>(&c.dropout), 8);
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("bad tagger config: ") + e.what());
  }
  std::vector<std::string> words(ReadU32(in));
  for (std::string& w : words) w = ReadString(in);
  if (words.empty() || words[0] != kUnknownSymbol) {
    throw FormatError("vocabulary must start with <unk>");
  }
  m.vocab_ = Vocabulary::FromWords(words);
  std::vector<std::string> tags(ReadU32(in));
  for (std::string& t : tags) t = ReadString(in);
  m.inventory_ = TagInventory::FromTags(tags);
  m.layout_ = ParameterLayout(c, m.vocab_.size(), m.inventory_.size());
  const uint32_t count = ReadU32(in);
  if (count != m.layout_.size()) throw FormatError("tensor count mismatch");
  m.params_.resize(static_cast<Eigen::Index>(NumParams(m.layout_)));
  for (const TensorInfo& t : m.layout_) {
    const std::string name = ReadString(in);
    const int rows = static_cast<int>(ReadU32(in));
    const int cols = static_cast<int>(ReadU32(in));
    if (name != t.name || rows != t.rows || cols != t.cols) {
      throw FormatError("tensor " + name + " does not match the config");
    }
    const size_t n = sizeof(float) * rows * cols;
    in.read(reinterpret_cast<char*>(m.params_.data() + t.offset),
            static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n) {
      throw FormatError("unexpected end of tensor data");
    }
  }
  if (!m.params_.allFinite()) throw FormatError("non-finite parameters");
  return m;
}

void TaggerModel::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const std::string bytes = Serialize();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

TaggerModel TaggerModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Deserialize(buf.str());
}

TaggerModel TaggerModel::WithChunkSize(int chunk_size) const {
  TaggerModel m = *this;
  m.config_.chunk_size = chunk_size;
  m.config_.Validate();
  return m;
}

bool TaggerModel::operator==(const TaggerModel& o) const {
  return config_ == o.config_ && vocab_ == o.vocab_ &&
         inventory_ == o.inventory_ && params_.size() == o.params_.size() &&
         std::memcmp(params_.data(), o.params_.data(),
                     sizeof(float) * params_.size()) == 0;
}

TaggerExample Encode(const TaggedSentence& s, const Vocabulary& vocab,
                     const TagInventory& inventory) {
  ValidateTags(s);
  TaggerExample e;
  e.ids = vocab.Ids(s.tokens);
  for (const std::string& t : s.tags) e.tags.push_back(inventory.Index(t));
  return e;
}

double LossAndGradient(const TaggerConfig& config, size_t vocab_size,
                       size_t num_tags, const Eigen::VectorXd& params,
                       std::span<const TaggerExample> batch,
                       Eigen::VectorXd* grad) {
  const std::vector<TensorInfo> layout =
      ParameterLayout(config, vocab_size, num_tags);
  if (static_cast<size_t>(params.size()) != NumParams(layout)) {
    throw ConfigError("parameter vector does not match the layout");
  }
  if (grad) grad->resize(params.size());
  internal::Net<double> net(config, layout, params.data());
  return net.LossAndGradient(batch, grad ? grad->data() : nullptr, nullptr);
}

std::vector<TagSpan> SpansOf(std::span<const int> tags,
                             const TagInventory& inventory) {
  std::vector<TagSpan> out;
  bool open = false;
  for (size_t i = 0; i < tags.size(); ++i) {
    const int t = tags[i];
    if (inventory.IsContinue(t) && open &&
        out.back().category == inventory.CategoryOf(t)) {
      out.back().end = i + 1;
      continue;
    }
    open = inventory.IsBegin(t);
    if (open) out.push_back({inventory.CategoryOf(t), i, i + 1});
  }
  return out;
}

SpanScores ScoreTags(const std::vector<std::vector<int>>& gold,
                     const std::vector<std::vector<int>>& predicted,
                     const TagInventory& inventory) {
  if (gold.size() != predicted.size()) {
    throw ConfigError("gold and predicted corpora differ in size");
  }
  size_t tp = 0, n_gold = 0, n_pred = 0, correct = 0, tokens = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw ConfigError("gold and predicted sentence lengths differ");
    }
    for (size_t i = 0; i < gold[s].size(); ++i) {
      correct += gold[s][i] == predicted[s][i];
    }
    tokens += gold[s].size();
    std::vector<TagSpan> g = SpansOf(gold[s], inventory);
    std::vector<TagSpan> p = SpansOf(predicted[s], inventory);
    std::set<TagSpan> gs(g.begin(), g.end());
    for (const TagSpan& x : p) tp += gs.count(x);
    n_gold += g.size();
    n_pred += p.size();
  }
  SpanScores r;
  r.precision = n_pred ? static_cast<double>(tp) / n_pred : 1.0;
  r.recall = n_gold ? static_cast<double>(tp) / n_gold : 1.0;
  r.f1 = r.precision + r.recall > 0
             ? 2 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  r.tag_accuracy = tokens ? static_cast<double>(correct) / tokens : 1.0;
  return r;
}

std::vector<size_t> HeldOutIndices(size_t n, double fraction, uint64_t seed) {
  if (!(fraction >= 0 && fraction < 1)) {
    throw ConfigError("held-out fraction must be in [0, 1)");
  }
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  size_t k = static_cast<size_t>(std::llround(fraction * n));
  if (fraction > 0 && k == 0 && n >= 2) k = 1;
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace itn
