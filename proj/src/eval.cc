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

#include "itn/eval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "itn/errors.h"
#include "itn/fst_ops.h"
#include "itn/rules.h"
#include "itn/text.h"
#include "json.hpp"

namespace itn {

std::vector<EditOp> Align(std::span<const std::string> a,
                          std::span<const std::string> b) {
  const size_t n = a.size(), m = b.size();
  std::vector<size_t> d((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> size_t& { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      at(i, j) = std::min({at(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  std::vector<EditOp> ops;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (a[i - 1] != b[j - 1])) {
      ops.push_back(a[i - 1] == b[j - 1] ? EditOp::kMatch
                                         : EditOp::kSubstitute);
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ops.push_back(EditOp::kDelete);
      --i;
    } else {
      ops.push_back(EditOp::kInsert);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

size_t EditDistance(std::span<const std::string> a,
                    std::span<const std::string> b) {
  // Two-row DP; Align is only needed when the path matters.
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j - 1] + (a[i - 1] != b[j - 1]), prev[j] + 1,
                         cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<ItnInstance> ExtractInstances(
    std::span<const std::string> lexical,
    std::span<const std::string> display) {
  std::vector<ItnInstance> out;
  size_t i = 0, j = 0;
  bool open = false;
  std::vector<std::string> shown;
  auto close = [&] {
    if (!open) return;
    out.back().end = i;
    out.back().display = Join(shown, " ");
    shown.clear();
    open = false;
  };
  for (EditOp op : Align(lexical, display)) {
    if (op == EditOp::kMatch) {
      close();
      ++i;
      ++j;
      continue;
    }
    if (!open) {
      out.push_back({i, i, ""});
      open = true;
    }
    if (op != EditOp::kInsert) ++i;
    if (op != EditOp::kDelete) shown.push_back(display[j++]);
  }
  close();
  return out;
}

bool InstancesMatch(const ItnInstance& ref, const ItnInstance& hyp) {
  if (ref.display != hyp.display) return false;
  if (ref.begin == ref.end || hyp.begin == hyp.end) {
    return ref.begin == hyp.begin && ref.end == hyp.end;
  }
  return std::max(ref.begin, hyp.begin) < std::min(ref.end, hyp.end);
}

double Prf1::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
}

double Prf1::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
}

double Prf1::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0 ? 0.0 : 2 * p * r / (p + r);
}

Prf1& Prf1::operator+=(const Prf1& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

Prf1 MatchSentence(std::span<const ItnInstance> ref,
                   std::span<const ItnInstance> hyp) {
  std::vector<const ItnInstance*> order;
  for (const ItnInstance& h : hyp) order.push_back(&h);
  std::stable_sort(order.begin(), order.end(),
                   [](const ItnInstance* x, const ItnInstance* y) {
                     return x->begin < y->begin;
                   });
  std::vector<bool> used(ref.size(), false);
  Prf1 r;
  for (const ItnInstance* h : order) {
    bool hit = false;
    for (size_t k = 0; k < ref.size() && !hit; ++k) {
      if (!used[k] && InstancesMatch(ref[k], *h)) used[k] = hit = true;
    }
    ++(hit ? r.tp : r.fp);
  }
  r.fn = ref.size() - r.tp;
  return r;
}

Prf1 ScoreInstances(const std::vector<std::vector<ItnInstance>>& ref,
                    const std::vector<std::vector<ItnInstance>>& hyp) {
  if (ref.size() != hyp.size()) {
    throw ConfigError("reference and hypothesis sentence counts differ");
  }
  Prf1 total;
  for (size_t s = 0; s < ref.size(); ++s) total += MatchSentence(ref[s], hyp[s]);
  return total;
}

double TokenErrorRate(const std::string& hyp, const std::string& ref) {
  const std::vector<std::string> h = SplitWhitespace(hyp);
  const std::vector<std::string> r = SplitWhitespace(ref);
  return 100.0 * EditDistance(h, r) / std::max<size_t>(1, r.size());
}

std::vector<EvalItem> ReadTestSet(std::istream& in, const std::string& name) {
  std::vector<EvalItem> items;
  std::string line;
  for (size_t no = 1; std::getline(in, line); ++no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::vector<std::string> cols = Split(line, '\t');
    if (cols.size() != 2 && cols.size() != 3) {
      throw DataError(name + ":" + std::to_string(no) +
                      ": expected lexical<TAB>display[<TAB>tags]");
    }
    EvalItem item{SplitWhitespace(cols[0]), SplitWhitespace(cols[1]), {}};
    if (cols.size() == 3) {
      item.tags = SplitWhitespace(cols[2]);
      if (item.tags.size() != item.lexical.size()) {
        throw DataError(name + ":" + std::to_string(no) +
                        ": tag count differs from token count");
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<EvalItem> ReadTestSetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return ReadTestSet(in, path);
}

void WriteTestSet(std::ostream& out, std::span<const EvalItem> items) {
  for (const EvalItem& item : items) {
    out << Join(item.lexical, " ") << '\t' << Join(item.reference, " ");
    if (!item.tags.empty()) out << '\t' << Join(item.tags, " ");
    out << '\n';
  }
}

std::string EvalReport::ToJson() const {
  nlohmann::ordered_json j;
  j["sentences"] = sentences;
  j["precision"] = precision;
  j["recall"] = recall;
  j["f1"] = f1;
  j["ter"] = ter;
  j["true_positives"] = counts.tp;
  j["false_positives"] = counts.fp;
  j["false_negatives"] = counts.fn;
  if (!runtime.empty()) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const BenchRow& r : runtime) {
      rows.push_back({{"length", r.length},
                      {"baseline_seconds", r.baseline_seconds},
                      {"proposed_seconds", r.proposed_seconds}});
    }
    j["runtime"] = rows;
    j["baseline_exponent"] = baseline_exponent;
    j["proposed_exponent"] = proposed_exponent;
  }
  return j.dump(2);
}

std::string EvalReport::ToTable() const {
  std::ostringstream out;
  char buf[160];
  if (sentences > 0) {
    std::snprintf(buf, sizeof(buf),
                  "sentences %zu\nprecision %.4f  recall %.4f  f1 %.4f\n"
                  "tp %zu  fp %zu  fn %zu\nTER %.2f%%\n",
                  sentences, precision, recall, f1, counts.tp, counts.fp,
                  counts.fn, ter);
    out << buf;
  }
  if (!runtime.empty()) {
    out << "length  baseline_ms  proposed_ms\n";
    for (const BenchRow& r : runtime) {
      std::snprintf(buf, sizeof(buf), "%6zu  %11.3f  %11.3f\n", r.length,
                    1e3 * r.baseline_seconds, 1e3 * r.proposed_seconds);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "growth exponent: baseline %.3f  proposed %.3f\n",
                  baseline_exponent, proposed_exponent);
    out << buf;
  }
  return out.str();
}

EvalReport Evaluate(
    std::span<const EvalItem> items,
    const std::function<std::string(const EvalItem&)>& system) {
  EvalReport report;
  size_t edits = 0, ref_tokens = 0;
  for (const EvalItem& item : items) {
    const std::vector<std::string> hyp = SplitWhitespace(system(item));
    report.counts += MatchSentence(ExtractInstances(item.lexical, item.reference),
                                   ExtractInstances(item.lexical, hyp));
    edits += EditDistance(hyp, item.reference);
    ref_tokens += item.reference.size();
  }
  report.sentences = items.size();
  report.precision = report.counts.precision();
  report.recall = report.counts.recall();
  report.f1 = report.counts.f1();
  report.ter = 100.0 * edits / std::max<size_t>(1, ref_tokens);
  return report;
}

WfstBaseline::WfstBaseline(const GrammarPack& pack, const NGramModel& lm,
                           BaselineOptions options)
    : lm_(lm), options_(options) {
  if (options_.nbest < 1) throw ConfigError("baseline n-best must be >= 1");
  if (!(options_.lambda >= 0)) throw ConfigError("baseline lambda must be >= 0");
  if (!(options_.identity_cost >= 0)) {
    throw ConfigError("identity cost must be >= 0");
  }
  syms_ = std::make_shared<SymbolTable>(*pack.symbols());
  space_ = syms_->AddSymbol(kSpaceSymbol);
  utterance_ = Fst(syms_);
  hub_ = utterance_.AddState();
  utterance_.SetStart(hub_);
  utterance_.SetFinal(hub_, 0);
  for (const std::string& name : pack.categories()) {
    const Fst& itn = pack.Get(name).itn;
    const Label open = syms_->Find(OpenTag(name));
    const Label close = syms_->Find(CloseTag(name));
    const StateId offset = static_cast<StateId>(utterance_.NumStates());
    for (size_t s = 0; s < itn.NumStates(); ++s) utterance_.AddState();
    for (StateId s = 0; s < itn.NumStates(); ++s) {
      for (Arc arc : itn.Arcs(s)) {
        if (arc.ilabel == open || arc.ilabel == close) arc.ilabel = kEpsilon;
        arc.nextstate += offset;
        utterance_.AddArc(s + offset, arc);
      }
      // Back to the hub with a token boundary.
      if (itn.IsFinal(s)) {
        utterance_.AddArc(s + offset, {kEpsilon, space_, itn.Final(s), hub_});
      }
    }
    utterance_.AddArc(hub_, {kEpsilon, kEpsilon, 0, itn.Start() + offset});
  }
  // Identity words return through one shared state.
  identity_ = utterance_.AddState();
  utterance_.AddArc(identity_, {kEpsilon, space_, 0, hub_});
  for (const std::string& w : pack.LexicalVocabulary()) AddIdentity(w);
  utterance_.SortArcsByInput();
}

WfstBaseline::~WfstBaseline() = default;

void WfstBaseline::AddIdentity(const std::string& word) {
  if (!identity_words_.insert(word).second) return;
  const Label l = syms_->AddSymbol(word);
  utterance_.AddArc(
      hub_, {l, l, static_cast<Weight>(options_.identity_cost), identity_});
}

std::vector<WfstBaseline::Candidate> WfstBaseline::Candidates(
    std::span<const std::string> lexical) {
  bool added = false;
  for (const std::string& w : lexical) {
    if (!identity_words_.contains(w)) {
      AddIdentity(w);
      added = true;
    }
  }
  if (added) utterance_.SortArcsByInput();
  Fst lattice = Compose(CompileLinear(lexical, syms_), utterance_);
  std::vector<Candidate> out;
  for (const Path& p : ShortestPaths(lattice, options_.nbest)) {
    out.push_back({GlueSymbols(p.olabels, *syms_), p.weight});
  }
  return out;
}

std::string WfstBaseline::Convert(std::span<const std::string> lexical) {
  if (lexical.empty()) return "";
  std::vector<Candidate> cands = Candidates(lexical);
  if (cands.empty()) return Join(lexical, " ");
  std::vector<RerankCandidate> rerank;
  for (Candidate& c : cands) rerank.push_back({std::move(c.tokens), c.fst_cost});
  return Join(rerank[Rerank(lm_, rerank, options_.lambda)].tokens, " ");
}

double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("slope fit needs two or more matching points");
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw ConfigError("slope fit needs distinct x values");
  return sxy / sxx;
}

std::vector<std::vector<std::string>> BenchSentences(
    std::span<const std::vector<std::string>> spans,
    std::span<const std::string> fillers, size_t length, size_t count,
    uint64_t seed) {
  if (spans.empty() || fillers.empty()) {
    throw ConfigError("benchmark needs spans and filler words");
  }
  std::mt19937_64 rng(seed ^ (length * 0x9e3779b97f4a7c15ULL));
  std::vector<std::vector<std::string>> out;
  for (size_t c = 0; c < count; ++c) {
    std::vector<std::string> s;
    while (s.size() < length) {
      const size_t block = std::min<size_t>(10, length - s.size());
      const std::vector<std::string>& span = spans[rng() % spans.size()];
      std::vector<std::string> b;
      if (span.size() < block) b = span;
      while (b.size() < block) {
        b.insert(b.begin() + rng() % (b.size() + 1),
                 fillers[rng() % fillers.size()]);
      }
      s.insert(s.end(), b.begin(), b.end());
    }
    out.push_back(std::move(s));
  }
  return out;
}

BenchPool MakeBenchPool(std::span<const TaggedSentence> corpus) {
  std::set<std::vector<std::string>> spans;
  std::set<std::string> fillers;
  for (const TaggedSentence& s : corpus) {
    std::vector<std::string> span;
    auto close = [&] {
      if (!span.empty()) spans.insert(std::move(span));
      span.clear();
    };
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      const std::string& tag = s.tags[i];
      if (tag == kBlankTag) {
        close();
        fillers.insert(s.tokens[i]);
      } else {
        if (tag[0] != '_') close();
        span.push_back(s.tokens[i]);
      }
    }
    close();
  }
  return {{spans.begin(), spans.end()}, {fillers.begin(), fillers.end()}};
}

namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <typename F>
double TimeOnce(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

EvalReport BenchRuntime(
    const BenchOptions& options,
    const std::function<std::vector<std::vector<std::string>>(size_t)>&
        sentences,
    const std::function<void(std::span<const std::string>)>& baseline,
    const std::function<void(std::span<const std::string>)>& proposed) {
  if (options.lengths.size() < 2 || options.trials < 1 || options.warmup < 0) {
    throw ConfigError("benchmark needs two or more lengths and trials >= 1");
  }
  EvalReport report;
  std::vector<double> xs, base, prop;
  for (size_t length : options.lengths) {
    const std::vector<std::vector<std::string>> input = sentences(length);
    if (input.empty()) throw ConfigError("no benchmark sentences");
    std::vector<double> tb, tp;
    for (int t = -options.warmup; t < options.trials; ++t) {
      const std::vector<std::string>& s =
          input[static_cast<size_t>(t + options.warmup) % input.size()];
      const double b = TimeOnce([&] { baseline(s); });
      const double p = TimeOnce([&] { proposed(s); });
      if (t >= 0) {
        tb.push_back(b);
        tp.push_back(p);
      }
    }
    report.runtime.push_back({length, Median(tb), Median(tp)});
    xs.push_back(static_cast<double>(length));
    base.push_back(report.runtime.back().baseline_seconds);
    prop.push_back(report.runtime.back().proposed_seconds);
  }
  report.baseline_exponent = LogLogSlope(xs, base);
  report.proposed_exponent = LogLogSlope(xs, prop);
  return report;
}

}  // namespace itn
