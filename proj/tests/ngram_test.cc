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
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "itn/errors.h"
#include "itn/ngram.h"
#include "itn/text.h"

namespace itn {
namespace {

using Sentence = std::vector<std::string>;
using Corpus = std::vector<Sentence>;

// Reference stupid-backoff scorer over explicitly enumerated n-grams.
class BruteForceLm {
 public:
  BruteForceLm(const Corpus& corpus, int order, double alpha)
      : order_(order), alpha_(alpha) {
    for (const Sentence& s : corpus) {
      Sentence p = {"<s>"};
      p.insert(p.end(), s.begin(), s.end());
      p.push_back("</s>");
      for (size_t i = 1; i < p.size(); ++i) {
        for (size_t start = i >= static_cast<size_t>(order - 1)
                                ? i - (order - 1)
                                : 0;
             start <= i; ++start) {
          Sentence gram(p.begin() + start, p.begin() + i + 1);
          ++grams_[gram];
        }
        types_.insert(p[i]);
      }
    }
  }

  double Prob(Sentence history, const std::string& w) const {
    if (history.size() > static_cast<size_t>(order_ - 1)) {
      history.erase(history.begin(),
                    history.end() - (order_ - 1));
    }
    double factor = 1;
    while (true) {
      Sentence gram = history;
      gram.push_back(w);
      auto it = grams_.find(gram);
      if (it != grams_.end()) {
        // Context count: occurrences of history followed by anything.
        double denom = 0;
        for (const auto& [g, c] : grams_) {
          if (g.size() == history.size() + 1 &&
              std::equal(history.begin(), history.end(), g.begin())) {
            denom += c;
          }
        }
        return factor * it->second / denom;
      }
      if (history.empty()) return factor / (types_.size() + 1.0);
      history.erase(history.begin());
      factor *= alpha_;
    }
  }

  double Score(const Sentence& s) const {
    Sentence p = {"<s>"};
    p.insert(p.end(), s.begin(), s.end());
    p.push_back("</s>");
    double total = 0;
    for (size_t i = 1; i < p.size(); ++i) {
      total += std::log(Prob(Sentence(p.begin(), p.begin() + i), p[i]));
    }
    return total;
  }

 private:
  int order_;
  double alpha_;
  std::map<Sentence, double> grams_;
  std::set<std::string> types_;
};

Corpus RandomCorpus(std::mt19937& rng, int sentences, int vocab) {
  Corpus c;
  std::uniform_int_distribution<int> len(0, 7);
  // Skewed token choice so some n-grams repeat.
  std::geometric_distribution<int> tok(0.35);
  for (int i = 0; i < sentences; ++i) {
    Sentence s;
    for (int j = 0, n = len(rng); j < n; ++j) {
      s.push_back("w" + std::to_string(std::min(tok(rng), vocab - 1)));
    }
    c.push_back(s);
  }
  return c;
}

TEST_CASE("counts of the two-token example") {
  NGramModel m = NGramModel::Train({{"a", "b"}}, 2);
  Sentence s = {"<s>"}, a = {"a"}, b = {"b"};
  CHECK(m.Count(s, "a") == 1);
  CHECK(m.Count(a, "b") == 1);
  CHECK(m.Count(b, "</s>") == 1);
  CHECK(m.Count(a, "a") == 0);
  CHECK(m.ContextCount(s) == 1);
  CHECK(m.VocabularySize() == 4);  // a, b, </s>, unseen

  CHECK(m.Score(Sentence{"a", "b"}) == 0.0);
  // </s> after <s> never seen: back off once to the unigram 1/3.
  CHECK(m.Score(Sentence{}) == doctest::Approx(std::log(0.4 / 3.0)));
}

TEST_CASE("order one gives unigram relative frequencies") {
  Corpus c = {{"a", "b", "a"}, {"a"}};
  NGramModel m = NGramModel::Train(c, 1);
  // a:3, b:1, </s>:2
  Sentence h = {"b", "a"};
  CHECK(m.LogProb(h, "a") == doctest::Approx(std::log(3.0 / 6.0)));
  CHECK(m.LogProb({}, "b") == doctest::Approx(std::log(1.0 / 6.0)));
  CHECK(m.LogProb(h, "</s>") == doctest::Approx(std::log(2.0 / 6.0)));
  CHECK(m.LogProb(h, "zzz") == doctest::Approx(std::log(1.0 / 4.0)));
  CHECK(m.MostFrequentToken() == "a");
}

TEST_CASE("scores agree with a brute-force backoff scorer") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int order = 1 + trial % 4;
    Corpus train = RandomCorpus(rng, 40, 6);
    NGramModel m = NGramModel::Train(train, order, 0.4);
    BruteForceLm ref(train, order, 0.4);
    Corpus test = RandomCorpus(rng, 20, 8);  // w6, w7 are unseen
    for (const Sentence& s : test) {
      CHECK(m.Score(s) == doctest::Approx(ref.Score(s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("training perplexity is at most the uniform perplexity") {
  std::mt19937 rng(5);
  for (int order = 1; order <= 5; ++order) {
    Corpus train = RandomCorpus(rng, 200, 10);
    NGramModel m = NGramModel::Train(train, order);
    double uniform_log = 0;
    size_t n = 0;
    for (const Sentence& s : train) {
      uniform_log += (s.size() + 1) * std::log(1.0 / m.VocabularySize());
      n += s.size() + 1;
    }
    const double uniform = std::exp(-uniform_log / n);
    CHECK(uniform == doctest::Approx(m.VocabularySize()));
    CHECK(m.Perplexity(train) <= uniform);
  }
}

TEST_CASE("prefix score never increases when a token is appended") {
  std::mt19937 rng(9);
  Corpus train = RandomCorpus(rng, 100, 8);
  NGramModel m = NGramModel::Train(train, 3);
  for (const Sentence& s : RandomCorpus(rng, 200, 10)) {
    for (size_t k = 0; k < s.size(); ++k) {
      std::span<const std::string> all(s);
      CHECK(m.ScorePrefix(all.first(k + 1)) <= m.ScorePrefix(all.first(k)));
    }
    CHECK(m.Score(s) <= 0.0);
  }
}

TEST_CASE("an unseen token scores below the most frequent unigram") {
  Corpus train = {{"see", "you", "at", "four"},
                  {"see", "you", "soon"},
                  {"at", "four", "thirty"},
                  {"you", "and", "me"}};
  NGramModel m = NGramModel::Train(train, 3);
  const std::string top = m.MostFrequentToken();
  CHECK(top == "you");
  for (const Sentence& s : train) {
    for (size_t i = 0; i < s.size(); ++i) {
      Sentence oov = s, freq = s;
      oov[i] = "qqq";
      freq[i] = top;
      CAPTURE(Join(oov, " "));
      CHECK(m.Score(oov) < m.Score(freq));
    }
  }
}

TEST_CASE("rerank") {
  Corpus train = {{"see", "you", "at", "4:30"},
                  {"meet", "at", "4:30", "today"},
                  {"call", "me", "at", "5:15"},
                  {"on", "route", "430"}};
  NGramModel m = NGramModel::Train(train, 3);

  std::vector<RerankCandidate> c = {{{"x"}, 2.0}, {{"y"}, 1.0}, {{"z"}, 1.0}};
  CHECK(Rerank(m, c, 0.0) == 1);

  std::vector<RerankCandidate> time = {
      {{"see", "you", "at", "430"}, 0.0},
      {{"see", "you", "at", "4:30"}, 0.0}};
  CHECK(Rerank(m, time) == 1);
  for (double lambda : {0.01, 0.5, 1.0, 3.0}) {
    CHECK(Rerank(m, time, lambda) == 1);
  }
  CHECK(Rerank(m, time, 0.0) == 0);

  std::mt19937 rng(1);
  std::uniform_int_distribution<int> q(0, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RerankCandidate> cands;
    for (int i = 0; i < 5; ++i) {
      cands.push_back({{train[q(rng) % 4][q(rng) % 3]}, 0.25 * q(rng)});
    }
    const size_t best = Rerank(m, cands, 0.7);
    for (auto& cand : cands) cand.fst_cost += 4.0;
    CHECK(Rerank(m, cands, 0.7) == best);
  }
  CHECK_THROWS_AS(Rerank(m, {}, 1.0), ConfigError);
  CHECK_THROWS_AS(Rerank(m, c, -1.0), ConfigError);
}

TEST_CASE("text format round trip is exact") {
  std::mt19937 rng(21);
  Corpus train = RandomCorpus(rng, 100, 9);
  NGramModel m = NGramModel::Train(train, 4, 0.37);
  std::stringstream a;
  m.Write(a);
  NGramModel back = NGramModel::Read(a);
  CHECK(back == m);
  CHECK(back.alpha() == 0.37);
  for (const Sentence& s : RandomCorpus(rng, 50, 12)) {
    CHECK(back.Score(s) == m.Score(s));
  }
  std::stringstream b;
  back.Write(b);
  CHECK(b.str() == a.str());

  NGramModel small = NGramModel::Train({{"a", "b"}}, 2);
  std::stringstream t;
  small.Write(t);
  CHECK(t.str() ==
        "\\streamitn-ngram\norder\t2\nalpha\t0.4\n"
        "\\1-grams\t3\n1\t\t</s>\n1\t\ta\n1\t\tb\n"
        "\\2-grams\t3\n1\t<s>\ta\n1\ta\tb\n1\tb\t</s>\n\\end\n");
}

TEST_CASE("bad input") {
  CHECK_THROWS_AS(NGramModel::Train({}, 2), DataError);
  CHECK_THROWS_AS(NGramModel::Train({{"a"}}, 0), ConfigError);
  CHECK_THROWS_AS(NGramModel::Train({{"a"}}, 2, 1.0), ConfigError);
  std::stringstream junk("not a model\n");
  CHECK_THROWS_AS(NGramModel::Read(junk), FormatError);
  std::stringstream truncated("\\streamitn-ngram\norder\t2\nalpha\t0.4\n"
                              "\\1-grams\t3\n1\t\ta\n");
  CHECK_THROWS_AS(NGramModel::Read(truncated), FormatError);
  CHECK_THROWS_AS(NGramModel::Load("/nonexistent/lm.txt"), IoError);
}

}  // namespace
}  // namespace itn
