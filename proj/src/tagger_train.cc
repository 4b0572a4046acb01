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

#include <algorithm>
#include <cmath>
#include <random>

#include "itn/errors.h"
#include "itn/tagger.h"
#include "tagger_net.h"

namespace itn {
namespace {

std::vector<std::vector<int>> Predict(const TaggerModel& m,
                                      std::span<const TaggedSentence> data) {
  std::vector<std::vector<int>> out;
  out.reserve(data.size());
  for (const TaggedSentence& s : data) out.push_back(m.Tag(s.tokens));
  return out;
}

}  // namespace

TaggerModel Train(std::span<const TaggedSentence> corpus,
                  const TagInventory& inventory, const TaggerConfig& config,
                  const TrainOptions& options, TrainReport* report) {
  config.Validate();
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  if (options.batch_size < 1 || options.epochs < 1 ||
      options.warmup_steps < 1) {
    throw ConfigError("batch size, epochs and warmup must be positive");
  }
  for (const TaggedSentence& s : corpus) {
    ValidateTags(s);
    for (const std::string& t : s.tags) inventory.Index(t);
    if (s.tokens.size() > static_cast<size_t>(config.max_position)) {
      throw DataError("training sentence of " +
                      std::to_string(s.tokens.size()) +
                      " tokens exceeds max_position");
    }
  }

  const std::vector<size_t> held =
      HeldOutIndices(corpus.size(), options.holdout_fraction, options.seed);
  std::vector<TaggedSentence> train_set, held_set;
  for (size_t i = 0, h = 0; i < corpus.size(); ++i) {
    if (h < held.size() && held[h] == i) {
      held_set.push_back(corpus[i]);
      ++h;
    } else {
      train_set.push_back(corpus[i]);
    }
  }

  Vocabulary vocab = Vocabulary::Build(train_set, options.min_count);
  TaggerModel model(config, vocab, inventory, options.seed);
  std::vector<TaggerExample> examples;
  for (const TaggedSentence& s : train_set) {
    if (!s.tokens.empty()) examples.push_back(Encode(s, vocab, inventory));
  }
  std::vector<std::vector<int>> held_gold;
  for (const TaggedSentence& s : held_set) {
    held_gold.push_back(Encode(s, vocab, inventory).tags);
  }

  const std::vector<TensorInfo>& layout = model.layout();
  Eigen::VectorXf& w = model.mutable_params();
  const Eigen::Index n = w.size();
  Eigen::VectorXf grad(n), m1 = Eigen::VectorXf::Zero(n),
      m2 = Eigen::VectorXf::Zero(n), decay = Eigen::VectorXf::Zero(n);
  for (const TensorInfo& t : layout) {
    if (t.decay) {
      decay.segment(static_cast<Eigen::Index>(t.offset), t.rows * t.cols)
          .setOnes();
    }
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.98, kEps = 1e-9;

  TrainReport rep;
  rep.train_sentences = train_set.size();
  rep.heldout_sentences = held_set.size();
  std::mt19937_64 rng(options.seed ^ 0x5eed);
  std::vector<size_t> order(examples.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Eigen::VectorXf best_params = w;
  double best_f1 = -1;
  int step = 0;
  internal::Net<float> net(config, layout, w.data());
  bool done = false;

  for (int epoch = 0; epoch < options.epochs && !done; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double loss_sum = 0;
    size_t batches = 0;
    for (size_t b = 0; b < order.size(); b += options.batch_size) {
      std::vector<TaggerExample> batch;
      for (size_t k = b; k < std::min(order.size(), b + options.batch_size);
           ++k) {
        batch.push_back(examples[order[k]]);
      }
      const float loss = net.LossAndGradient(batch, grad.data(), &rng);
      ++step;
      const double s = step;
      const double lr = options.lr_scale / std::sqrt(config.model_dim) *
                        std::min(1.0 / std::sqrt(s),
                                 s * std::pow(options.warmup_steps, -1.5));
      const double c1 = 1 - std::pow(kBeta1, s), c2 = 1 - std::pow(kBeta2, s);
      m1 = kBeta1 * m1 + (1 - kBeta1) * grad;
      m2 = kBeta2 * m2 + (1 - kBeta2) * grad.cwiseProduct(grad);
      const float step_size = static_cast<float>(lr / c1);
      const float v_scale = static_cast<float>(1.0 / c2);
      w.array() -=
          step_size * m1.array() / ((m2.array() * v_scale).sqrt() +
                                    static_cast<float>(kEps)) +
          static_cast<float>(lr * options.weight_decay) * decay.array() *
              w.array();
      loss_sum += loss;
      ++batches;
      if (epoch == 0) rep.first_epoch_batch_loss.push_back(loss);
      if (options.max_steps > 0 && step >= options.max_steps) {
        done = true;
        break;
      }
    }
    if (!w.allFinite()) throw DataError("training diverged (non-finite)");
    rep.epoch_loss.push_back(batches ? loss_sum / batches : 0.0);
    SpanScores scores;
    if (!held_set.empty()) {
      scores = ScoreTags(held_gold, Predict(model, held_set), inventory);
    }
    rep.heldout.push_back(scores);
    // Without a held-out split the last epoch wins.
    const double key = held_set.empty() ? epoch : scores.f1;
    if (key > best_f1) {
      best_f1 = key;
      best_params = w;
      rep.best_epoch = epoch;
      rep.best = scores;
    }
    if (options.on_epoch) options.on_epoch(epoch, rep.epoch_loss.back(), scores);
  }
  w = best_params;
  rep.steps = step;
  if (report) *report = std::move(rep);
  return model;
}

}  // namespace itn
