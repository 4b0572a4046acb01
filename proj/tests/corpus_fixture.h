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

// Synthetic tagged corpora shared by the tagger, pipeline and acceptance
// tests.

#ifndef ITN_TESTS_CORPUS_FIXTURE_H_
#define ITN_TESTS_CORPUS_FIXTURE_H_

#include <vector>

#include "itn/datagen.h"
#include "itn/grammar_pack.h"

namespace itn::testing {

inline const GrammarPack& StarterPack() {
  static const GrammarPack pack = GrammarPack::Load(ITN_GRAMMAR_DIR);
  return pack;
}

struct TaggedCorpus {
  std::vector<SyntheticSentence> synthetic;
  std::vector<TaggedSentence> tagged;  // datagen output for each sentence
};

// Synthesize, train the datagen LM on the result, normalize every sentence.
inline TaggedCorpus MakeTaggedCorpus(size_t n, uint64_t seed,
                                     const SynthOptions& options = {}) {
  TaggedCorpus c;
  c.synthetic = Synthesize(StarterPack(), n, seed, options);
  const NGramModel lm = TrainDatagenLm(c.synthetic);
  Normalizer norm(StarterPack(), lm);
  for (size_t i = 0; i < n; ++i) {
    c.tagged.push_back(ToTrainingPairs(
        norm.Run(c.synthetic[i].written, seed ^ i), &StarterPack()));
  }
  return c;
}

}  // namespace itn::testing

#endif  // ITN_TESTS_CORPUS_FIXTURE_H_
