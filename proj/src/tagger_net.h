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

// Training-time forward and backward pass of the tagger over a batch of
// sentences packed into one row block. Templated on the scalar so gradient
// checks can run in double.

#ifndef ITN_SRC_TAGGER_NET_H_
#define ITN_SRC_TAGGER_NET_H_

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "itn/tagger.h"

namespace itn::internal {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kLayerNormEps = 1e-5;

// Tensor order in the flat parameter vector.
inline constexpr int kTokEmb = 0;
inline constexpr int kPosEmb = 1;
inline constexpr int kBlockBase = 2;
inline constexpr int kPerBlock = 16;
enum BlockTensor {
  kLn1G, kLn1B, kWq, kBq, kWk, kBk, kWv, kBv, kWo, kBo,
  kLn2G, kLn2B, kW1, kB1, kW2, kB2
};
enum FinalTensor { kLnfG, kLnfB, kWout, kBout };

inline int BlockIndex(int block, int tensor) {
  return kBlockBase + kPerBlock * block + tensor;
}
inline int FinalIndex(int num_blocks, int tensor) {
  return kBlockBase + kPerBlock * num_blocks + tensor;
}

// First and one-past-last key position for query i.
inline int AttendBegin(int i, int c, int history) {
  if (history <= 0) return 0;
  return std::max(0, (i / c - history) * c);
}
inline int AttendEnd(int i, int c, int length) {
  return std::min(length, (i / c + 1) * c);
}

template <typename S>
struct LayerNormCache {
  Mat<S> xhat;
  Eigen::Matrix<S, Eigen::Dynamic, 1> rstd;
};

template <typename S, typename G, typename B>
Mat<S> LayerNorm(const Mat<S>& x, const G& g, const B& b,
                 LayerNormCache<S>* cache) {
  const Eigen::Index n = x.rows(), d = x.cols();
  Mat<S> xhat(n, d);
  Eigen::Matrix<S, Eigen::Dynamic, 1> rstd(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const S mu = x.row(r).mean();
    const S var = (x.row(r).array() - mu).square().mean();
    rstd(r) = S(1) / std::sqrt(var + S(kLayerNormEps));
    xhat.row(r) = (x.row(r).array() - mu) * rstd(r);
  }
  Mat<S> y = (xhat.array().rowwise() * g.row(0).array()).rowwise() +
             b.row(0).array();
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->rstd = std::move(rstd);
  }
  return y;
}

// Returns dx; accumulates dg, db.
template <typename S, typename G, typename DG, typename DB>
Mat<S> LayerNormBackward(const Mat<S>& dy, const G& g,
                         const LayerNormCache<S>& cache, DG dg, DB db) {
  dg += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  db += dy.colwise().sum();
  Mat<S> dxhat = dy.array().rowwise() * g.row(0).array();
  Mat<S> dx(dy.rows(), dy.cols());
  const S d = static_cast<S>(dy.cols());
  for (Eigen::Index r = 0; r < dy.rows(); ++r) {
    const S mean_dxhat = dxhat.row(r).sum() / d;
    const S mean_dot = dxhat.row(r).dot(cache.xhat.row(r)) / d;
    dx.row(r) = cache.rstd(r) *
                (dxhat.row(r).array() - mean_dxhat -
                 cache.xhat.row(r).array() * mean_dot);
  }
  return dx;
}

// Inverted dropout mask, or an empty matrix when dropout is off.
template <typename S>
Mat<S> DropoutMask(Eigen::Index rows, Eigen::Index cols, double p,
                   std::mt19937_64* rng) {
  if (!rng || p <= 0) return {};
  Mat<S> m(rows, cols);
  const S keep = S(1.0 / (1.0 - p));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double u = static_cast<double>((*rng)() >> 11) * 0x1.0p-53;
    m.data()[i] = u < p ? S(0) : keep;
  }
  return m;
}

template <typename S>
void ApplyMask(Mat<S>* x, const Mat<S>& mask) {
  if (mask.size()) x->array() *= mask.array();
}

template <typename S>
class Net {
 public:
  Net(const TaggerConfig& cfg, const std::vector<TensorInfo>& layout,
      const S* params)
      : cfg_(cfg), layout_(layout), p_(params) {}

  using ConstMap = Eigen::Map<const Mat<S>>;
  using Map = Eigen::Map<Mat<S>>;

  ConstMap W(int k) const {
    const TensorInfo& t = layout_[k];
    return ConstMap(p_ + t.offset, t.rows, t.cols);
  }
  Map G(S* grad, int k) const {
    const TensorInfo& t = layout_[k];
    return Map(grad + t.offset, t.rows, t.cols);
  }

  // Mean cross-entropy over all tokens of the batch. `grad` (same size as
  // the parameters) is overwritten when non-null; `rng` enables dropout.
  S LossAndGradient(std::span<const TaggerExample> batch, S* grad,
                    std::mt19937_64* rng) const {
    const int d = cfg_.model_dim, heads = cfg_.num_heads, dh = d / heads;
    const int nb = cfg_.num_blocks;
    const double p = cfg_.dropout;
    std::vector<int> starts, lengths;
    int n = 0;
    for (const TaggerExample& e : batch) {
      starts.push_back(n);
      lengths.push_back(static_cast<int>(e.ids.size()));
      n += static_cast<int>(e.ids.size());
    }
    if (n == 0) return S(0);

    // Embeddings.
    Mat<S> h(n, d);
    {
      ConstMap tok = W(kTokEmb), pos = W(kPosEmb);
      int r = 0;
      for (const TaggerExample& e : batch) {
        for (size_t t = 0; t < e.ids.size(); ++t, ++r) {
          h.row(r) = tok.row(e.ids[t]) + pos.row(static_cast<int>(t));
        }
      }
    }
    const Mat<S> emb_mask = DropoutMask<S>(n, d, p, rng);
    ApplyMask(&h, emb_mask);

    struct BlockCache {
      LayerNormCache<S> ln1, ln2;
      Mat<S> a, q, k, v, o, c, u, r;
      std::vector<Mat<S>> probs;  // per (sentence, head)
      Mat<S> attn_mask, ffn_mask;
    };
    std::vector<BlockCache> cache(nb);
    const S scale = S(1) / std::sqrt(static_cast<S>(dh));

    for (int b = 0; b < nb; ++b) {
      BlockCache& bc = cache[b];
      bc.a = LayerNorm(h, W(BlockIndex(b, kLn1G)), W(BlockIndex(b, kLn1B)),
                       &bc.ln1);
      bc.q = (bc.a * W(BlockIndex(b, kWq))).rowwise() +
             W(BlockIndex(b, kBq)).row(0);
      bc.k = (bc.a * W(BlockIndex(b, kWk))).rowwise() +
             W(BlockIndex(b, kBk)).row(0);
      bc.v = (bc.a * W(BlockIndex(b, kWv))).rowwise() +
             W(BlockIndex(b, kBv)).row(0);
      bc.o = Mat<S>::Zero(n, d);
      for (size_t s = 0; s < starts.size(); ++s) {
        const int s0 = starts[s], len = lengths[s];
        for (int hd = 0; hd < heads; ++hd) {
          Mat<S> scores = bc.q.block(s0, hd * dh, len, dh) *
                          bc.k.block(s0, hd * dh, len, dh).transpose() * scale;
          Mat<S> prob = Mat<S>::Zero(len, len);
          for (int i = 0; i < len; ++i) {
            const int lo = AttendBegin(i, cfg_.chunk_size, cfg_.history_chunks);
            const int hi = AttendEnd(i, cfg_.chunk_size, len);
            auto row = scores.row(i).segment(lo, hi - lo);
            const S mx = row.maxCoeff();
            auto e = (row.array() - mx).exp();
            prob.row(i).segment(lo, hi - lo) = e / e.sum();
          }
          bc.o.block(s0, hd * dh, len, dh) =
              prob * bc.v.block(s0, hd * dh, len, dh);
          bc.probs.push_back(std::move(prob));
        }
      }
      Mat<S> z = (bc.o * W(BlockIndex(b, kWo))).rowwise() +
                 W(BlockIndex(b, kBo)).row(0);
      bc.attn_mask = DropoutMask<S>(n, d, p, rng);
      ApplyMask(&z, bc.attn_mask);
      h += z;

      bc.c = LayerNorm(h, W(BlockIndex(b, kLn2G)), W(BlockIndex(b, kLn2B)),
                       &bc.ln2);
      bc.u = (bc.c * W(BlockIndex(b, kW1))).rowwise() +
             W(BlockIndex(b, kB1)).row(0);
      bc.r = bc.u.cwiseMax(S(0));
      Mat<S> y = (bc.r * W(BlockIndex(b, kW2))).rowwise() +
                 W(BlockIndex(b, kB2)).row(0);
      bc.ffn_mask = DropoutMask<S>(n, d, p, rng);
      ApplyMask(&y, bc.ffn_mask);
      h += y;
    }

    LayerNormCache<S> lnf;
    Mat<S> f = LayerNorm(h, W(FinalIndex(nb, kLnfG)), W(FinalIndex(nb, kLnfB)),
                         &lnf);
    Mat<S> logits = (f * W(FinalIndex(nb, kWout))).rowwise() +
                    W(FinalIndex(nb, kBout)).row(0);
    // Softmax rows and loss.
    S loss = 0;
    Mat<S> dlogits(n, logits.cols());
    {
      int r = 0;
      for (const TaggerExample& e : batch) {
        for (size_t t = 0; t < e.ids.size(); ++t, ++r) {
          const S mx = logits.row(r).maxCoeff();
          auto ex = (logits.row(r).array() - mx).exp();
          const S z = ex.sum();
          loss -= logits(r, e.tags[t]) - mx - std::log(z);
          dlogits.row(r) = ex / z;
          dlogits(r, e.tags[t]) -= S(1);
        }
      }
    }
    loss /= static_cast<S>(n);
    if (!grad) return loss;
    dlogits /= static_cast<S>(n);

    Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, 1>>(
        grad, static_cast<Eigen::Index>(layout_.back().offset +
                                        layout_.back().rows *
                                            layout_.back().cols))
        .setZero();

    G(grad, FinalIndex(nb, kWout)).noalias() += f.transpose() * dlogits;
    G(grad, FinalIndex(nb, kBout)) += dlogits.colwise().sum();
    Mat<S> df = dlogits * W(FinalIndex(nb, kWout)).transpose();
    Mat<S> dres = LayerNormBackward<S>(df, W(FinalIndex(nb, kLnfG)), lnf,
                                     G(grad, FinalIndex(nb, kLnfG)),
                                     G(grad, FinalIndex(nb, kLnfB)));

    for (int b = nb - 1; b >= 0; --b) {
      BlockCache& bc = cache[b];
      // h_out = h_mid + dropout(relu(c W1 + b1) W2 + b2)
      Mat<S> dy = dres;
      ApplyMask(&dy, bc.ffn_mask);
      G(grad, BlockIndex(b, kW2)).noalias() += bc.r.transpose() * dy;
      G(grad, BlockIndex(b, kB2)) += dy.colwise().sum();
      Mat<S> du = dy * W(BlockIndex(b, kW2)).transpose();
      du.array() *= (bc.u.array() > S(0)).template cast<S>();
      G(grad, BlockIndex(b, kW1)).noalias() += bc.c.transpose() * du;
      G(grad, BlockIndex(b, kB1)) += du.colwise().sum();
      Mat<S> dc = du * W(BlockIndex(b, kW1)).transpose();
      dres += LayerNormBackward<S>(dc, W(BlockIndex(b, kLn2G)), bc.ln2,
                                 G(grad, BlockIndex(b, kLn2G)),
                                 G(grad, BlockIndex(b, kLn2B)));

      // h_mid = h_in + dropout(o Wo + bo)
      Mat<S> dz = dres;
      ApplyMask(&dz, bc.attn_mask);
      G(grad, BlockIndex(b, kWo)).noalias() += bc.o.transpose() * dz;
      G(grad, BlockIndex(b, kBo)) += dz.colwise().sum();
      Mat<S> dout = dz * W(BlockIndex(b, kWo)).transpose();
      Mat<S> dq = Mat<S>::Zero(n, d), dk = Mat<S>::Zero(n, d),
             dv = Mat<S>::Zero(n, d);
      size_t pi = 0;
      for (size_t s = 0; s < starts.size(); ++s) {
        const int s0 = starts[s], len = lengths[s];
        for (int hd = 0; hd < heads; ++hd, ++pi) {
          const Mat<S>& prob = bc.probs[pi];
          auto doh = dout.block(s0, hd * dh, len, dh);
          dv.block(s0, hd * dh, len, dh).noalias() += prob.transpose() * doh;
          Mat<S> dprob = doh * bc.v.block(s0, hd * dh, len, dh).transpose();
          // Softmax backward; masked entries have prob 0 and stay 0.
          Eigen::Matrix<S, Eigen::Dynamic, 1> dot =
              (dprob.array() * prob.array()).rowwise().sum();
          Mat<S> dscores =
              prob.array() * (dprob.array().colwise() - dot.array());
          dscores *= scale;
          dq.block(s0, hd * dh, len, dh).noalias() +=
              dscores * bc.k.block(s0, hd * dh, len, dh);
          dk.block(s0, hd * dh, len, dh).noalias() +=
              dscores.transpose() * bc.q.block(s0, hd * dh, len, dh);
        }
      }
      G(grad, BlockIndex(b, kWq)).noalias() += bc.a.transpose() * dq;
      G(grad, BlockIndex(b, kBq)) += dq.colwise().sum();
      G(grad, BlockIndex(b, kWk)).noalias() += bc.a.transpose() * dk;
      G(grad, BlockIndex(b, kBk)) += dk.colwise().sum();
      G(grad, BlockIndex(b, kWv)).noalias() += bc.a.transpose() * dv;
      G(grad, BlockIndex(b, kBv)) += dv.colwise().sum();
      Mat<S> da = dq * W(BlockIndex(b, kWq)).transpose();
      da.noalias() += dk * W(BlockIndex(b, kWk)).transpose();
      da.noalias() += dv * W(BlockIndex(b, kWv)).transpose();
      dres += LayerNormBackward<S>(da, W(BlockIndex(b, kLn1G)), bc.ln1,
                                 G(grad, BlockIndex(b, kLn1G)),
                                 G(grad, BlockIndex(b, kLn1B)));
    }

    ApplyMask(&dres, emb_mask);
    Map dtok = G(grad, kTokEmb), dpos = G(grad, kPosEmb);
    int r = 0;
    for (const TaggerExample& e : batch) {
      for (size_t t = 0; t < e.ids.size(); ++t, ++r) {
        dtok.row(e.ids[t]) += dres.row(r);
        dpos.row(static_cast<int>(t)) += dres.row(r);
      }
    }
    return loss;
  }

 private:
  const TaggerConfig& cfg_;
  const std::vector<TensorInfo>& layout_;
  const S* p_;
};

}  // namespace itn::internal

#endif  // ITN_SRC_TAGGER_NET_H_
