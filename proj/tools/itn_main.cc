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

// itn: command-line front end.
//
//   itn compile-rules --pack grammars/en --out build/pack
//   itn synth --pack grammars/en --count 5000 --out written.txt --lm dg.lm
//   itn gen-data --pack grammars/en --lm dg.lm --in written.txt --out train.tsv
//   itn train --data train.tsv --config desk.cfg --pack grammars/en --out m.itnt
//   itn run --model m.itnt --pack grammars/en [--stream]
//   itn eval --model m.itnt --pack grammars/en --test test.tsv
//   itn bench --pack grammars/en --model m.itnt
//   itn sweep-chunk --data train.tsv --config desk.cfg --pack grammars/en
//
// Exit codes: 0 ok, 1 usage or configuration error, 2 data or parse error,
// 3 internal error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "itn/datagen.h"
#include "itn/errors.h"
#include "itn/eval.h"
#include "itn/logging.h"
#include "itn/ngram.h"
#include "itn/pipeline.h"
#include "itn/tagger.h"
#include "itn/text.h"

namespace itn {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Training hyperparameters from a flat key=value file; '#' starts a comment.
struct TrainConfig {
  TaggerConfig tagger;
  TrainOptions train;
};

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError("config key " + key + ": bad value '" + value + "'");
  }
  return out;
}

TrainConfig ReadTrainConfig(const std::string& path) {
  TrainConfig c;
  if (path.empty()) return c;
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = std::string(Trim(line));
    if (t.empty()) continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(no) +
                        ": expected key = value");
    }
    const std::string key = std::string(Trim(t.substr(0, eq)));
    const std::string value = std::string(Trim(t.substr(eq + 1)));
    TaggerConfig& m = c.tagger;
    TrainOptions& o = c.train;
    if (key == "num_blocks") m.num_blocks = ParseNumber<int>(key, value);
    else if (key == "model_dim") m.model_dim = ParseNumber<int>(key, value);
    else if (key == "num_heads") m.num_heads = ParseNumber<int>(key, value);
    else if (key == "ffn_dim") m.ffn_dim = ParseNumber<int>(key, value);
    else if (key == "chunk_size") m.chunk_size = ParseNumber<int>(key, value);
    else if (key == "history_chunks") m.history_chunks = ParseNumber<int>(key, value);
    else if (key == "max_position") m.max_position = ParseNumber<int>(key, value);
    else if (key == "dropout") m.dropout = ParseNumber<double>(key, value);
    else if (key == "epochs") o.epochs = ParseNumber<int>(key, value);
    else if (key == "max_steps") o.max_steps = ParseNumber<int>(key, value);
    else if (key == "batch_size") o.batch_size = ParseNumber<int>(key, value);
    else if (key == "warmup_steps") o.warmup_steps = ParseNumber<int>(key, value);
    else if (key == "lr_scale") o.lr_scale = ParseNumber<double>(key, value);
    else if (key == "weight_decay") o.weight_decay = ParseNumber<double>(key, value);
    else if (key == "holdout_fraction") o.holdout_fraction = ParseNumber<double>(key, value);
    else if (key == "min_count") o.min_count = ParseNumber<int>(key, value);
    else if (key == "seed") o.seed = ParseNumber<uint64_t>(key, value);
    else throw ConfigError(path + ":" + std::to_string(no) + ": unknown key " + key);
  }
  c.tagger.Validate();
  return c;
}

std::shared_ptr<PackHandle> LoadHandle(const std::string& dir) {
  return std::make_shared<PackHandle>(
      std::make_shared<const GrammarPack>(GrammarPack::Load(dir)));
}

// Category inventory: the pack's when given, else the categories in the data.
TagInventory InventoryFor(const std::string& pack_dir,
                          std::span<const TaggedSentence> corpus) {
  if (!pack_dir.empty()) {
    return TagInventory::FromCategories(GrammarPack::Load(pack_dir).categories());
  }
  std::set<std::string> cats;
  for (const TaggedSentence& s : corpus) {
    for (const std::string& t : s.tags) {
      if (t != kBlankTag) cats.insert(t[0] == '_' ? t.substr(1) : t);
    }
  }
  return TagInventory::FromCategories({cats.begin(), cats.end()});
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// --- compile-rules ---------------------------------------------------------

struct CompileArgs {
  std::string pack, out;
};

int CompileRules(const CompileArgs& a) {
  GrammarPack pack;
  int code = 0;
  try {
    pack = GrammarPack::Load(a.pack);
  } catch (const PackLoadError& e) {
    for (const std::string& f : e.failures()) std::cerr << f << "\n";
    std::cout << e.compiled().size() << " categories compiled, "
              << e.failures().size() << " failed\n";
    return kExitData;
  }
  for (const std::string& name : pack.categories()) {
    const CategoryGrammar& g = pack.Get(name);
    std::cout << "  " << name << ": itn " << g.itn.NumStates() << " states "
              << g.itn.NumArcs() << " arcs, tn " << g.tn.NumStates()
              << " states " << g.tn.NumArcs() << " arcs\n";
  }
  if (!a.out.empty()) pack.Save(a.out);
  std::cout << pack.size() << " categories compiled\n";
  return code;
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string pack, out, lm, written_lm;
  size_t count = 1000;
  uint64_t seed = 1;
  int order = kDefaultOrder;
  double plain_fraction = 0.1;
  std::vector<std::string> categories;
};

int Synth(const SynthArgs& a) {
  const GrammarPack pack = GrammarPack::Load(a.pack);
  SynthOptions opts;
  opts.plain_fraction = a.plain_fraction;
  opts.categories = a.categories;
  const std::vector<SyntheticSentence> corpus =
      Synthesize(pack, a.count, a.seed, opts);
  std::ostringstream text;
  std::vector<std::vector<std::string>> written;
  for (const SyntheticSentence& s : corpus) {
    text << Join(s.written, " ") << "\n";
    written.push_back(s.written);
  }
  WriteFile(a.out, text.str());
  if (!a.lm.empty()) TrainDatagenLm(corpus, a.order).Save(a.lm);
  if (!a.written_lm.empty()) {
    NGramModel::Train(written, std::min(a.order, 3)).Save(a.written_lm);
  }
  std::cout << corpus.size() << " sentences written to " << a.out << "\n";
  return 0;
}

// --- gen-data --------------------------------------------------------------

struct GenArgs {
  std::string pack, lm, in, out, test_out, stats;
  uint64_t seed = 1;
  double lambda = 1.0;
};

int GenData(const GenArgs& a) {
  const GrammarPack pack = GrammarPack::Load(a.pack);
  const NGramModel lm = NGramModel::Load(a.lm);
  NormalizeOptions opts;
  opts.lambda = a.lambda;
  const CorpusStats stats = GenerateCorpus(a.in, pack, lm, a.seed, a.out, opts);
  if (!a.test_out.empty()) {
    // Sentence i of the TSV is the i-th non-empty input line.
    const std::vector<TaggedSentence> tagged = ReadTsvFile(a.out);
    std::vector<EvalItem> items;
    size_t k = 0;
    for (const std::string& line : ReadLines(a.in)) {
      std::vector<std::string> written = SplitWhitespace(line);
      if (written.empty()) continue;
      const TaggedSentence& t = tagged.at(k++);
      items.push_back({t.tokens, std::move(written), t.tags});
    }
    std::ofstream out(a.test_out);
    if (!out) throw IoError("cannot write " + a.test_out);
    WriteTestSet(out, items);
  }
  const std::string json = stats.ToJson();
  if (!a.stats.empty()) WriteFile(a.stats, json + "\n");
  std::cout << json << "\n";
  return 0;
}

// --- train -----------------------------------------------------------------

struct TrainArgs {
  std::string data, config, out, pack;
  int epochs = 0;
  uint64_t seed = 0;
};

int TrainCmd(const TrainArgs& a) {
  TrainConfig cfg = ReadTrainConfig(a.config);
  if (a.epochs > 0) cfg.train.epochs = a.epochs;
  if (a.seed > 0) cfg.train.seed = a.seed;
  const std::vector<TaggedSentence> corpus = ReadTsvFile(a.data);
  const TagInventory inv = InventoryFor(a.pack, corpus);
  cfg.train.on_epoch = [](int epoch, double loss, const SpanScores& h) {
    std::cout << "epoch " << epoch + 1 << "  loss " << Fixed(loss)
              << "  heldout P " << Fixed(h.precision) << " R "
              << Fixed(h.recall) << " F1 " << Fixed(h.f1) << " acc "
              << Fixed(h.tag_accuracy) << std::endl;
  };
  TrainReport report;
  const TaggerModel model = Train(corpus, inv, cfg.tagger, cfg.train, &report);
  model.Save(a.out);
  std::cout << "best epoch " << report.best_epoch + 1 << "  heldout F1 "
            << Fixed(report.best.f1) << "  accuracy "
            << Fixed(report.best.tag_accuracy) << "  (" << report.steps
            << " steps, " << report.train_sentences << " train / "
            << report.heldout_sentences << " held out)\n";
  return 0;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string model, pack;
  bool stream = false;
  bool flush_on_newline = false;
  bool force = false;
  int chunk = 0;
  size_t max_span = 10;
  size_t cache = 1024;
};

int RunCmd(const RunArgs& a) {
  auto model = std::make_shared<TaggerModel>(TaggerModel::Load(a.model));
  if (a.chunk > 0 && a.chunk != model->config().chunk_size) {
    if (!a.force) {
      throw ConfigError("--chunk " + std::to_string(a.chunk) +
                        " differs from the model's chunk size " +
                        std::to_string(model->config().chunk_size) +
                        " (use --force to run anyway)");
    }
    *model = model->WithChunkSize(a.chunk);
  }
  EngineOptions opts;
  opts.max_span = a.max_span;
  opts.cache_capacity = a.cache;
  ItnEngine engine(model, LoadHandle(a.pack), opts);
  std::string line;
  if (!a.stream) {
    while (std::getline(std::cin, line)) {
      std::cout << engine.Convert(line) << "\n";
    }
    return 0;
  }
  // One token per line; display tokens are printed as they are released.
  ItnSession session = engine.NewSession();
  auto print = [](const std::vector<OutputToken>& out) {
    for (const OutputToken& t : out) std::cout << t.text << "\n";
    std::cout.flush();
  };
  while (std::getline(std::cin, line)) {
    const std::string token = std::string(Trim(line));
    if (token.empty()) {
      if (a.flush_on_newline) {
        print(session.Flush());
        std::cout << "\n";
        std::cout.flush();
      }
      continue;
    }
    print(session.Push(token));
  }
  print(session.Flush());
  return 0;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string model, pack, test, baseline, lm, json;
  bool oracle = false;
  double lambda = 1.0;
  int nbest = 8;
  size_t max_span = 10;
};

int EvalCmd(const EvalArgs& a) {
  const std::vector<EvalItem> items = ReadTestSetFile(a.test);
  EvalReport report;
  if (!a.baseline.empty()) {
    if (a.baseline != "wfst-ngram") {
      throw ConfigError("unknown baseline " + a.baseline);
    }
    if (a.lm.empty()) throw ConfigError("--baseline needs --lm");
    const GrammarPack pack = GrammarPack::Load(a.pack);
    const NGramModel lm = NGramModel::Load(a.lm);
    BaselineOptions bo;
    bo.lambda = a.lambda;
    bo.nbest = a.nbest;
    WfstBaseline baseline(pack, lm, bo);
    report = Evaluate(items, [&](const EvalItem& item) {
      return baseline.Convert(item.lexical);
    });
  } else {
    if (a.model.empty()) throw ConfigError("eval needs --model or --baseline");
    EngineOptions opts;
    opts.max_span = a.max_span;
    ItnEngine engine(std::make_shared<const TaggerModel>(TaggerModel::Load(a.model)),
                     LoadHandle(a.pack), opts);
    report = Evaluate(items, [&](const EvalItem& item) {
      if (!a.oracle) return engine.Convert(item.lexical);
      if (item.tags.empty()) {
        throw DataError("--oracle needs a tag column in the test set");
      }
      return engine.ConvertTagged(item.lexical, item.tags);
    });
  }
  std::cout << report.ToTable();
  if (!a.json.empty()) WriteFile(a.json, report.ToJson() + "\n");
  return 0;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string pack, model, lm, json;
  std::vector<size_t> lengths = {10, 20, 40, 80, 160};
  int trials = 30;
  int warmup = 5;
  uint64_t seed = 1;
  size_t sentences = 10;
};

// Tagged corpus for benchmark inputs and, without --lm, the written LM.
struct BenchData {
  std::vector<TaggedSentence> tagged;
  std::vector<std::vector<std::string>> written;
};

BenchData MakeBenchData(const GrammarPack& pack, uint64_t seed) {
  BenchData d;
  const std::vector<SyntheticSentence> synth = Synthesize(pack, 500, seed);
  const NGramModel lm = TrainDatagenLm(synth);
  Normalizer norm(pack, lm);
  for (size_t i = 0; i < synth.size(); ++i) {
    d.tagged.push_back(ToTrainingPairs(norm.Run(synth[i].written, seed ^ i)));
    d.written.push_back(synth[i].written);
  }
  return d;
}

int BenchCmd(const BenchArgs& a) {
  SetLogLevel("error");
  auto pack = std::make_shared<const GrammarPack>(GrammarPack::Load(a.pack));
  const BenchData data = MakeBenchData(*pack, a.seed);
  const NGramModel lm = a.lm.empty() ? NGramModel::Train(data.written, 3)
                                     : NGramModel::Load(a.lm);
  std::shared_ptr<const TaggerModel> model;
  if (!a.model.empty()) {
    model = std::make_shared<const TaggerModel>(TaggerModel::Load(a.model));
  } else {
    // Timing does not depend on the weights.
    std::vector<TaggedSentence> corpus = data.tagged;
    model = std::make_shared<const TaggerModel>(
        TaggerConfig{}, Vocabulary::Build(corpus, 1),
        TagInventory::FromCategories(pack->categories()), a.seed);
  }
  ItnEngine engine(model, std::make_shared<PackHandle>(pack));
  WfstBaseline baseline(*pack, lm);
  const BenchPool pool = MakeBenchPool(data.tagged);
  BenchOptions opts;
  opts.lengths = a.lengths;
  opts.trials = a.trials;
  opts.warmup = a.warmup;
  opts.seed = a.seed;
  const EvalReport report = BenchRuntime(
      opts,
      [&](size_t length) {
        return BenchSentences(pool.spans, pool.fillers, length, a.sentences,
                              a.seed);
      },
      [&](std::span<const std::string> s) { baseline.Convert(s); },
      [&](std::span<const std::string> s) { engine.Convert(s); });
  std::cout << report.ToTable();
  if (!a.json.empty()) WriteFile(a.json, report.ToJson() + "\n");
  return 0;
}

// --- sweep-chunk -----------------------------------------------------------

struct SweepArgs {
  std::string data, config, pack, test, json;
  std::vector<int> sizes = {1, 2, 4, 6, 11};
};

// Mean emit latency over one stream whose length is a multiple of `chunk`.
double MeasureLatency(const TaggerModel& model,
                      std::span<const TaggedSentence> corpus) {
  const int chunk = model.config().chunk_size;
  std::vector<std::string> tokens;
  for (const TaggedSentence& s : corpus) {
    tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
    if (tokens.size() >= 600) break;
  }
  tokens.resize(tokens.size() / chunk * chunk);
  if (tokens.empty()) throw DataError("corpus too small to measure latency");
  TaggerStream stream(model);
  size_t total = 0, count = 0;
  for (const std::string& t : tokens) {
    for (const EmittedTag& e : stream.Push(t)) {
      total += e.latency;
      ++count;
    }
  }
  return static_cast<double>(total) / count;
}

int SweepCmd(const SweepArgs& a) {
  const TrainConfig base = ReadTrainConfig(a.config);
  const std::vector<TaggedSentence> corpus = ReadTsvFile(a.data);
  const TagInventory inv = InventoryFor(a.pack, corpus);
  std::vector<EvalItem> test;
  std::shared_ptr<PackHandle> handle;
  if (!a.test.empty()) {
    if (a.pack.empty()) throw ConfigError("--test needs --pack");
    test = ReadTestSetFile(a.test);
    handle = LoadHandle(a.pack);
  }
  std::ostringstream json;
  json << "[";
  std::cout << "chunk  latency  precision  recall  f1" << (test.empty() ? "" : "  itn_f1")
            << "\n";
  for (size_t k = 0; k < a.sizes.size(); ++k) {
    TrainConfig cfg = base;
    cfg.tagger.chunk_size = a.sizes[k];
    TrainReport report;
    auto model = std::make_shared<const TaggerModel>(
        Train(corpus, inv, cfg.tagger, cfg.train, &report));
    const double latency = MeasureLatency(*model, corpus);
    std::cout << a.sizes[k] << "  " << Fixed(latency, 2) << "  "
              << Fixed(report.best.precision) << "  "
              << Fixed(report.best.recall) << "  " << Fixed(report.best.f1);
    json << (k ? "," : "") << "\n  {\"chunk\": " << a.sizes[k]
         << ", \"latency\": " << latency
         << ", \"precision\": " << report.best.precision
         << ", \"recall\": " << report.best.recall
         << ", \"f1\": " << report.best.f1;
    if (!test.empty()) {
      ItnEngine engine(model, handle);
      const EvalReport r = Evaluate(test, [&](const EvalItem& item) {
        return engine.Convert(item.lexical);
      });
      std::cout << "  " << Fixed(r.f1);
      json << ", \"itn_f1\": " << r.f1;
    }
    json << "}";
    std::cout << std::endl;
  }
  json << "\n]\n";
  if (!a.json.empty()) WriteFile(a.json, json.str());
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Streaming inverse text normalization"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level,
                 "trace, debug, info, warn, error or off");

  CompileArgs compile;
  CLI::App* c = app.add_subcommand("compile-rules", "compile a grammar pack");
  c->add_option("--pack", compile.pack, "directory of .rules files")
      ->required();
  c->add_option("--out", compile.out, "directory for the compiled machines");

  SynthArgs synth;
  CLI::App* sy = app.add_subcommand("synth", "write synthetic written text");
  sy->add_option("--pack", synth.pack)->required();
  sy->add_option("--out", synth.out, "written sentences, one per line")
      ->required();
  sy->add_option("--count", synth.count)->check(CLI::PositiveNumber);
  sy->add_option("--seed", synth.seed);
  sy->add_option("--lm", synth.lm, "datagen LM over tagged lexical text");
  sy->add_option("--written-lm", synth.written_lm,
                 "trigram over the written text, for the baseline");
  sy->add_option("--order", synth.order)->check(CLI::Range(1, 8));
  sy->add_option("--plain-fraction", synth.plain_fraction)
      ->check(CLI::Range(0.0, 1.0));
  sy->add_option("--categories", synth.categories)->delimiter(',');

  GenArgs gen;
  CLI::App* g = app.add_subcommand("gen-data", "tag written text via TN");
  g->add_option("--pack", gen.pack)->required();
  g->add_option("--lm", gen.lm)->required();
  g->add_option("--in", gen.in)->required();
  g->add_option("--out", gen.out, "token<TAB>tag rows")->required();
  g->add_option("--test-out", gen.test_out,
                "also write lexical<TAB>written<TAB>tags lines");
  g->add_option("--stats", gen.stats, "write the stats JSON here");
  g->add_option("--seed", gen.seed);
  g->add_option("--lambda", gen.lambda)->check(CLI::NonNegativeNumber);

  TrainArgs train;
  CLI::App* t = app.add_subcommand("train", "train the tagger");
  t->add_option("--data", train.data)->required();
  t->add_option("--config", train.config, "key = value hyperparameters");
  t->add_option("--out", train.out)->required();
  t->add_option("--pack", train.pack, "take the tag inventory from a pack");
  t->add_option("--epochs", train.epochs)->check(CLI::PositiveNumber);
  t->add_option("--seed", train.seed);

  RunArgs run;
  CLI::App* r = app.add_subcommand("run", "convert stdin to stdout");
  r->add_option("--model", run.model)->required();
  r->add_option("--pack", run.pack)->required();
  r->add_flag("--stream", run.stream, "one token per input line");
  r->add_flag("--flush-on-newline", run.flush_on_newline,
              "an empty line ends the utterance");
  r->add_option("--chunk", run.chunk)->check(CLI::PositiveNumber);
  r->add_flag("--force", run.force, "allow --chunk to differ from the model");
  r->add_option("--max-span", run.max_span)->check(CLI::PositiveNumber);
  r->add_option("--cache", run.cache)->check(CLI::PositiveNumber);

  EvalArgs eval;
  CLI::App* e = app.add_subcommand("eval", "score a test set");
  e->add_option("--model", eval.model);
  e->add_option("--pack", eval.pack)->required();
  e->add_option("--test", eval.test)->required();
  e->add_flag("--oracle", eval.oracle, "use the test set's tag column");
  e->add_option("--baseline", eval.baseline, "wfst-ngram");
  e->add_option("--lm", eval.lm, "written LM for the baseline");
  e->add_option("--lambda", eval.lambda)->check(CLI::NonNegativeNumber);
  e->add_option("--nbest", eval.nbest)->check(CLI::PositiveNumber);
  e->add_option("--max-span", eval.max_span)->check(CLI::PositiveNumber);
  e->add_option("--json", eval.json, "write the report as JSON");

  BenchArgs bench;
  CLI::App* b = app.add_subcommand("bench", "runtime scaling benchmark");
  b->add_option("--pack", bench.pack)->required();
  b->add_option("--model", bench.model, "default: untrained desk model");
  b->add_option("--lm", bench.lm, "default: trigram on synthetic text");
  b->add_option("--lengths", bench.lengths)->delimiter(',');
  b->add_option("--trials", bench.trials)->check(CLI::PositiveNumber);
  b->add_option("--warmup", bench.warmup)->check(CLI::NonNegativeNumber);
  b->add_option("--sentences", bench.sentences)->check(CLI::PositiveNumber);
  b->add_option("--seed", bench.seed);
  b->add_option("--json", bench.json);

  SweepArgs sweep;
  CLI::App* s = app.add_subcommand("sweep-chunk", "train across chunk sizes");
  s->add_option("--data", sweep.data)->required();
  s->add_option("--config", sweep.config);
  s->add_option("--pack", sweep.pack);
  s->add_option("--test", sweep.test, "also report end-to-end ITN F1");
  s->add_option("--sizes", sweep.sizes)->delimiter(',');
  s->add_option("--json", sweep.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    SetLogLevel(log_level);
    if (*c) return CompileRules(compile);
    if (*sy) return Synth(synth);
    if (*g) return GenData(gen);
    if (*t) return TrainCmd(train);
    if (*r) return RunCmd(run);
    if (*e) return EvalCmd(eval);
    if (*b) return BenchCmd(bench);
    if (*s) return SweepCmd(sweep);
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const DataError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitData;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitData;
  } catch (const FormatError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitData;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace itn

int main(int argc, char** argv) { return itn::Main(argc, argv); }
