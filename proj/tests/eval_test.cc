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

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "corpus_fixture.h"
#include "doctest.h"
#include "itn/errors.h"
#include "itn/eval.h"
#include "itn/fst_ops.h"
#include "itn/pipeline.h"
#include "itn/rules.h"
#include "itn/text.h"
#include "metric_fixture.h"

namespace itn {
namespace {

using Strings = std::vector<std::string>;

Strings W(const std::string& s) { return SplitWhitespace(s); }

// Plain recursive edit distance, exponential; fine for short inputs.
size_t SlowDistance(const Strings& a, size_t i, const Strings& b, size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  return std::min({SlowDistance(a, i + 1, b, j + 1) + (a[i] != b[j]),
                   SlowDistance(a, i + 1, b, j) + 1,
                   SlowDistance(a, i, b, j + 1) + 1});
}

TEST_CASE("alignment examples and tie-break") {
  using enum EditOp;
  CHECK(Align(W("at four thirty"), W("at 4:30")) ==
        std::vector<EditOp>{kMatch, kDelete, kSubstitute});
  CHECK(Align(W("a b"), W("c")) == std::vector<EditOp>{kDelete, kSubstitute});
  CHECK(Align(W("a"), W("b c")) == std::vector<EditOp>{kInsert, kSubstitute});
  CHECK(Align({}, {}).empty());

  CHECK(ExtractInstances(W("at four thirty"), W("at 4:30")) ==
        std::vector<ItnInstance>{{1, 3, "4:30"}});
  CHECK(ExtractInstances(W("four fifty"), W("450")) ==
        std::vector<ItnInstance>{{0, 2, "450"}});
  CHECK(ExtractInstances(W("see you soon"), W("see you soon")).empty());
  CHECK(ExtractInstances(W("twenty five dollars please"),
                         W("$25.00 please")) ==
        std::vector<ItnInstance>{{0, 3, "$25.00"}});
  // Two separate regions.
  CHECK(ExtractInstances(W("meet at five on may third"),
                         W("meet at 5 on may 3rd")) ==
        std::vector<ItnInstance>{{2, 3, "5"}, {5, 6, "3rd"}});
  // Pure insertion.
  CHECK(ExtractInstances(W("a b"), W("a x b")) ==
        std::vector<ItnInstance>{{1, 1, "x"}});
}

TEST_CASE("alignment agrees with a recursive edit distance") {
  std::mt19937 rng(4);
  const Strings alphabet = {"a", "b", "c"};
  for (int trial = 0; trial < 400; ++trial) {
    Strings a, b;
    for (int i = 0, n = rng() % 6; i < n; ++i) a.push_back(alphabet[rng() % 3]);
    for (int i = 0, n = rng() % 6; i < n; ++i) b.push_back(alphabet[rng() % 3]);
    const size_t want = SlowDistance(a, 0, b, 0);
    CHECK(EditDistance(a, b) == want);
    // The op sequence turns a into b at the same cost.
    std::vector<EditOp> ops = Align(a, b);
    size_t i = 0, j = 0, cost = 0;
    for (EditOp op : ops) {
      switch (op) {
        case EditOp::kMatch:
          CHECK(a[i++] == b[j++]);
          break;
        case EditOp::kSubstitute:
          CHECK(a[i++] != b[j++]);
          ++cost;
          break;
        case EditOp::kDelete:
          ++i;
          ++cost;
          break;
        case EditOp::kInsert:
          ++j;
          ++cost;
          break;
      }
    }
    CHECK(i == a.size());
    CHECK(j == b.size());
    CHECK(cost == want);
    // Deterministic, and instances never overlap.
    std::vector<ItnInstance> inst = ExtractInstances(a, b);
    CHECK(ExtractInstances(a, b) == inst);
    for (size_t k = 1; k < inst.size(); ++k) {
      CHECK(inst[k - 1].end <= inst[k].begin);
    }
  }
}

TEST_CASE("metric fixture matches the hand counts") {
  std::vector<std::vector<ItnInstance>> ref, hyp;
  size_t edits = 0, ref_tokens = 0;
  std::vector<EvalItem> items;
  for (const testing::MetricCase& c : testing::kMetricCases) {
    CAPTURE(c.lexical);
    Strings lex = W(c.lexical), r = W(c.reference), h = W(c.hypothesis);
    ref.push_back(ExtractInstances(lex, r));
    hyp.push_back(ExtractInstances(lex, h));
    Prf1 one = MatchSentence(ref.back(), hyp.back());
    CHECK(one.tp == c.tp);
    CHECK(one.fp == c.fp);
    CHECK(one.fn == c.fn);
    CHECK(EditDistance(h, r) == c.edits);
    CHECK(r.size() == c.ref_tokens);
    CHECK(TokenErrorRate(c.hypothesis, c.reference) ==
          doctest::Approx(100.0 * c.edits / c.ref_tokens));
    edits += c.edits;
    ref_tokens += c.ref_tokens;
    items.push_back({lex, r, {}});
  }
  CHECK(edits == 16);
  CHECK(ref_tokens == 29);

  Prf1 total = ScoreInstances(ref, hyp);
  CHECK(total.tp == testing::kMetricTp);
  CHECK(total.fp == testing::kMetricFp);
  CHECK(total.fn == testing::kMetricFn);
  CHECK(total.precision() == doctest::Approx(testing::kMetricPrecision));
  CHECK(total.recall() == doctest::Approx(testing::kMetricRecall));
  CHECK(total.f1() == doctest::Approx(testing::kMetricF1));

  size_t k = 0;
  EvalReport report = Evaluate(items, [&](const EvalItem&) {
    return std::string(testing::kMetricCases[k++].hypothesis);
  });
  CHECK(report.sentences == 10);
  CHECK(report.f1 == doctest::Approx(testing::kMetricF1));
  CHECK(report.ter == doctest::Approx(testing::kMetricTer));

  // Sentence order does not matter.
  std::reverse(ref.begin(), ref.end());
  std::reverse(hyp.begin(), hyp.end());
  Prf1 reversed = ScoreInstances(ref, hyp);
  CHECK(reversed.tp == total.tp);
  CHECK(reversed.fp == total.fp);
  CHECK(reversed.fn == total.fn);
}

TEST_CASE("prf1 and ter edge cases") {
  std::vector<std::vector<ItnInstance>> ref = {{{1, 3, "4:30"}}, {}};
  Prf1 perfect = ScoreInstances(ref, ref);
  CHECK(perfect.precision() == 1.0);
  CHECK(perfect.recall() == 1.0);
  CHECK(perfect.f1() == 1.0);
  Prf1 nothing = ScoreInstances(ref, {{}, {}});
  CHECK(nothing.precision() == 0.0);
  CHECK(nothing.recall() == 0.0);
  CHECK(nothing.f1() == 0.0);
  CHECK_THROWS_AS(ScoreInstances(ref, {{}}), ConfigError);

  // Same string, overlapping but shifted span still counts.
  CHECK(InstancesMatch({1, 3, "4:30"}, {2, 3, "4:30"}));
  CHECK_FALSE(InstancesMatch({1, 3, "4:30"}, {3, 4, "4:30"}));
  CHECK_FALSE(InstancesMatch({1, 3, "4:30"}, {1, 3, "430"}));
  // Each reference matches once.
  Prf1 twice = MatchSentence(std::vector<ItnInstance>{{0, 2, "5"}},
                             std::vector<ItnInstance>{{0, 1, "5"}, {1, 2, "5"}});
  CHECK(twice.tp == 1);
  CHECK(twice.fp == 1);

  CHECK(TokenErrorRate("at 4:30", "at 4:30") == 0.0);
  CHECK(TokenErrorRate("call 555 1234", "call 555-1234") == 100.0);
  CHECK(TokenErrorRate("  at 4:30 \t", "at 4:30\n") == 0.0);
  CHECK(TokenErrorRate("a", "") == 100.0);
}

TEST_CASE("test set format") {
  std::stringstream in(
      "at four thirty\tat 4:30\n\nfour\t4\tnum\n");
  std::vector<EvalItem> items = ReadTestSet(in);
  REQUIRE(items.size() == 2);
  CHECK(items[0].reference == W("at 4:30"));
  CHECK(items[1].tags == Strings{"num"});
  std::stringstream out;
  WriteTestSet(out, items);
  CHECK(out.str() == "at four thirty\tat 4:30\nfour\t4\tnum\n");

  std::stringstream bad("only one column\n");
  try {
    ReadTestSet(bad, "t.tsv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("t.tsv:1") != std::string::npos);
  }
  std::stringstream mismatch("a b\tc\tnum\n");
  CHECK_THROWS_AS(ReadTestSet(mismatch), DataError);
  CHECK_THROWS_AS(ReadTestSetFile("/nonexistent/test.tsv"), IoError);
}

TEST_CASE("report json") {
  EvalReport r;
  r.counts = {2, 1, 1};
  r.precision = r.recall = r.f1 = 2.0 / 3;
  r.sentences = 3;
  r.runtime = {{10, 0.5, 0.25}};
  const std::string json = r.ToJson();
  CHECK(json.find("\"false_negatives\": 1") != std::string::npos);
  CHECK(json.find("\"baseline_seconds\": 0.5") != std::string::npos);
  CHECK(r.ToTable().find("growth exponent") != std::string::npos);
}

NGramModel WrittenLm(size_t n, uint64_t seed) {
  std::vector<Strings> written;
  for (const SyntheticSentence& s :
       Synthesize(testing::StarterPack(), n, seed)) {
    written.push_back(s.written);
  }
  return NGramModel::Train(written, 3);
}

TEST_CASE("wfst baseline examples") {
  std::vector<Strings> corpus;
  for (int i = 0; i < 20; ++i) {
    corpus.push_back(W("see you at 4:30"));
    corpus.push_back(W("meet me at 5:15 today"));
  }
  corpus.push_back(W("route 430 is closed"));
  NGramModel lm = NGramModel::Train(corpus, 3);
  WfstBaseline b(testing::StarterPack(), lm);
  CHECK(b.Convert(W("see you at four thirty")) == "see you at 4:30");
  CHECK(b.Convert(W("hello there friend")) == "hello there friend");
  CHECK(b.Convert(Strings{}).empty());

  std::vector<WfstBaseline::Candidate> cands = b.Candidates(W("four thirty"));
  Strings shown;
  for (const auto& c : cands) shown.push_back(Join(c.tokens, " "));
  CHECK(std::find(shown.begin(), shown.end(), "4:30") != shown.end());
  CHECK(std::find(shown.begin(), shown.end(), "430") != shown.end());
  for (size_t i = 1; i < cands.size(); ++i) {
    CHECK(cands[i - 1].fst_cost <= cands[i].fst_cost);
  }

  BaselineOptions bad;
  bad.nbest = 0;
  CHECK_THROWS_AS(WfstBaseline(testing::StarterPack(), lm, bad), ConfigError);
}

// Cheapest segmentation into identity tokens and category spans, each span
// costed by its own tagged ITN machine.
double BestSegmentationCost(const Strings& s, double identity_cost) {
  const GrammarPack& pack = testing::StarterPack();
  std::vector<double> best(s.size() + 1, INFINITY);
  best[0] = 0;
  for (size_t end = 1; end <= s.size(); ++end) {
    for (size_t begin = 0; begin < end; ++begin) {
      double seg = end == begin + 1 ? identity_cost : INFINITY;
      for (const std::string& cat : pack.categories()) {
        Strings tagged = {OpenTag(cat)};
        tagged.insert(tagged.end(), s.begin() + begin, s.begin() + end);
        tagged.push_back(CloseTag(cat));
        const Fst& itn = pack.Get(cat).itn;
        std::vector<Path> p =
            ShortestPaths(Compose(CompileLinear(tagged, itn.InputSymbols()),
                                  itn),
                          1);
        if (!p.empty()) seg = std::min(seg, p[0].weight);
      }
      best[end] = std::min(best[end], best[begin] + seg);
    }
  }
  return best[s.size()];
}

TEST_CASE("baseline best path is the cheapest segmentation") {
  NGramModel lm = WrittenLm(200, 3);
  BaselineOptions opts;
  opts.lambda = 0;
  opts.nbest = 1;
  WfstBaseline b(testing::StarterPack(), lm, opts);
  testing::TaggedCorpus corpus = testing::MakeTaggedCorpus(60, 41);
  int checked = 0;
  for (const TaggedSentence& s : corpus.tagged) {
    if (s.tokens.size() > 7) continue;
    CAPTURE(Join(s.tokens, " "));
    std::vector<WfstBaseline::Candidate> c = b.Candidates(s.tokens);
    REQUIRE(c.size() == 1);
    CHECK(c[0].fst_cost ==
          doctest::Approx(BestSegmentationCost(s.tokens, opts.identity_cost)));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("oracle tags give perfect instance scores") {
  testing::TaggedCorpus corpus = testing::MakeTaggedCorpus(500, 43);
  TaggerConfig cfg;
  cfg.num_blocks = 1;
  cfg.model_dim = 16;
  cfg.num_heads = 2;
  cfg.ffn_dim = 32;
  auto tagger = std::make_shared<const TaggerModel>(
      cfg, Vocabulary::FromWords({}),
      TagInventory::FromCategories(testing::StarterPack().categories()), 1);
  ItnEngine engine(tagger,
                   std::make_shared<PackHandle>(
                       std::make_shared<const GrammarPack>(
                           testing::StarterPack())));
  std::vector<EvalItem> items;
  for (size_t i = 0; i < corpus.tagged.size(); ++i) {
    items.push_back({corpus.tagged[i].tokens, corpus.synthetic[i].written,
                     corpus.tagged[i].tags});
  }
  EvalReport r = Evaluate(items, [&](const EvalItem& item) {
    return engine.ConvertTagged(item.lexical, item.tags);
  });
  CHECK(r.counts.tp > 300);
  CHECK(r.f1 == 1.0);
  CHECK(r.ter == 0.0);
  // Pass-through scores zero recall on the same set.
  EvalReport none = Evaluate(items, [](const EvalItem& item) {
    return Join(item.lexical, " ");
  });
  CHECK(none.recall == 0.0);
}

TEST_CASE("benchmark helpers") {
  const std::vector<double> x = {10, 20, 40, 80};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * std::pow(v, 1.5));
  CHECK(LogLogSlope(x, y) == doctest::Approx(1.5));
  CHECK_THROWS_AS(LogLogSlope(std::vector<double>{1}, std::vector<double>{1}),
                  ConfigError);

  std::vector<Strings> spans = {W("four thirty"), W("twenty five dollars")};
  Strings fillers = {"see", "you", "then"};
  for (size_t length : {1, 10, 25, 160}) {
    auto s = BenchSentences(spans, fillers, length, 5, 7);
    REQUIRE(s.size() == 5);
    for (const Strings& t : s) CHECK(t.size() == length);
    CHECK(BenchSentences(spans, fillers, length, 5, 7) == s);
  }

  // Quadratic against linear busy work.
  volatile double sink = 0;
  auto work = [&](size_t n) {
    for (size_t i = 0; i < n; ++i) sink = sink + std::sqrt(double(i));
  };
  BenchOptions opts;
  opts.lengths = {10, 20, 40, 80};
  opts.trials = 5;
  opts.warmup = 1;
  EvalReport r = BenchRuntime(
      opts,
      [&](size_t length) { return BenchSentences(spans, fillers, length, 3, 1); },
      [&](std::span<const std::string> s) { work(200 * s.size() * s.size()); },
      [&](std::span<const std::string> s) { work(20000 * s.size()); });
  REQUIRE(r.runtime.size() == 4);
  CHECK(r.baseline_exponent > 1.6);
  CHECK(r.proposed_exponent < 1.3);
}

}  // namespace
}  // namespace itn
