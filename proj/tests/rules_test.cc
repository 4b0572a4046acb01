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

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "fst_oracle.h"
#include "grammar_oracle.h"
#include "itn/errors.h"
#include "itn/fst_ops.h"
#include "itn/grammar_pack.h"
#include "itn/rules.h"
#include "itn/text.h"

namespace itn {
namespace {

namespace fs = std::filesystem;

using Strings = std::vector<std::string>;
using Pair = std::pair<Strings, Strings>;
using StringRelation = std::map<Pair, double>;

std::string ErrorOf(const std::string& src) {
  try {
    ParseRules(src, "t");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

// Direct semantics of a rule expression: every (lexical words, written
// symbols) pair with its cheapest cost.
StringRelation Denote(const RuleSet& rs, const RuleExpr& e) {
  using K = RuleExpr::Kind;
  auto concat = [](const StringRelation& a, const StringRelation& b) {
    StringRelation out;
    for (const auto& [ka, wa] : a) {
      for (const auto& [kb, wb] : b) {
        Pair k = ka;
        k.first.insert(k.first.end(), kb.first.begin(), kb.first.end());
        k.second.insert(k.second.end(), kb.second.begin(), kb.second.end());
        auto it = out.find(k);
        if (it == out.end() || wa + wb < it->second) out[k] = wa + wb;
      }
    }
    return out;
  };
  auto merge = [](StringRelation* into, const StringRelation& from,
                  double extra) {
    for (const auto& [k, w] : from) {
      auto it = into->find(k);
      if (it == into->end() || w + extra < it->second) (*into)[k] = w + extra;
    }
  };
  const StringRelation unit{{Pair{}, 0.0}};
  switch (e.kind) {
    case K::kMapping: {
      Strings wri;
      for (const std::string& c : Utf8Chars(e.written)) {
        wri.push_back(c == " " ? std::string(kSpaceSymbol) : c);
      }
      return {{Pair{SplitWhitespace(e.lexical), wri}, 0.0}};
    }
    case K::kRuleRef:
      return Denote(rs, rs.rules.at(e.name));
    case K::kSequence: {
      StringRelation acc = unit;
      for (const RuleExpr& c : e.children) acc = concat(acc, Denote(rs, c));
      return acc;
    }
    case K::kAlternation: {
      StringRelation out;
      for (size_t i = 0; i < e.children.size(); ++i) {
        merge(&out, Denote(rs, e.children[i]), e.branch_costs[i]);
      }
      return out;
    }
    case K::kQuantified: {
      StringRelation child = Denote(rs, e.children[0]);
      StringRelation out;
      if (e.quantifier != '+') merge(&out, unit, 0);
      const int max = e.quantifier == '?' ? 1 : e.max_repeat;
      StringRelation power = unit;
      for (int i = 1; i <= max; ++i) {
        power = concat(power, child);
        merge(&out, power, 0);
      }
      return out;
    }
  }
  return {};
}

StringRelation ToStrings(const oracle::Relation& rel, const SymbolTable& in,
                         const SymbolTable& out) {
  StringRelation result;
  for (const auto& [k, w] : rel) {
    Pair p;
    for (Label l : k.first) p.first.push_back(in.Symbol(l));
    for (Label l : k.second) p.second.push_back(out.Symbol(l));
    result[p] = w;
  }
  return result;
}

// Number of start-to-final paths of an acyclic machine, saturating.
double CountPaths(const Fst& f) {
  std::vector<double> memo(f.NumStates(), -1);
  std::function<double(StateId)> count = [&](StateId s) {
    if (memo[s] >= 0) return memo[s];
    double n = f.IsFinal(s) ? 1 : 0;
    for (const Arc& arc : f.Arcs(s)) n += count(arc.nextstate);
    return memo[s] = std::min(n, 1e12);
  };
  return count(f.Start());
}

constexpr double kMaxPaths = 20000;

class RandomRules {
 public:
  explicit RandomRules(uint32_t seed) : rng_(seed) {}

  RuleSet Make(bool with_alt_marks) {
    RuleSet rs;
    rs.category = "t";
    const Strings names = {"root", "r1", "r2"};
    for (int i = static_cast<int>(names.size()) - 1; i >= 0; --i) {
      refs_.assign(names.begin() + i + 1, names.end());
      rs.rules[names[i]] = Expr(2, with_alt_marks);
      rs.order.insert(rs.order.begin(), names[i]);
    }
    return rs;
  }

 private:
  int Pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  RuleExpr Expr(int depth, bool alt_marks) {
    static const Strings kLex = {"", "a", "b", "a b"};
    static const Strings kWri = {"", "x", "y", "xy", "x y", "\"\\"};
    int kind = depth == 0 ? Pick(2) : Pick(6);
    if (kind == 1 && refs_.empty()) kind = 0;
    switch (kind) {
      case 0:
        return RuleExpr::Mapping(kLex[Pick(kLex.size())],
                                 kWri[Pick(kWri.size())]);
      case 1:
        return RuleExpr::Ref(refs_[Pick(refs_.size())]);
      case 2: {
        std::vector<RuleExpr> c;
        for (int i = 0, n = 2 + Pick(2); i < n; ++i) {
          c.push_back(Expr(depth - 1, alt_marks));
        }
        return RuleExpr::Sequence(std::move(c));
      }
      case 3:
      case 4: {
        RuleExpr e;
        e.kind = RuleExpr::Kind::kAlternation;
        for (int i = 0, n = 1 + Pick(3); i < n; ++i) {
          e.children.push_back(Expr(depth - 1, alt_marks));
          e.branch_costs.push_back(0.25f * Pick(5));
          e.branch_alt.push_back(alt_marks && Pick(2));
        }
        // A single unannotated branch is not an alternation.
        if (e.children.size() == 1 && e.branch_costs[0] == 0 &&
            !e.branch_alt[0]) {
          e.branch_costs[0] = 0.5f;
        }
        return e;
      }
      default: {
        const char q = "?*+"[Pick(3)];
        return RuleExpr::Quantified(Expr(depth - 1, alt_marks), q,
                                    q == '?' ? 0 : 1 + Pick(2));
      }
    }
  }

  std::mt19937 rng_;
  Strings refs_;
};

std::string Digits(int n) { return std::to_string(n); }

Strings LexicalReadings(const GrammarPack& pack, const std::string& cat,
                        const std::string& written) {
  Strings out;
  Strings span = SplitWhitespace(written);
  for (const Path& p : TnPaths(pack.Get(cat), span, 1000)) {
    out.push_back(Join(LexicalWords(p, *pack.symbols()), " "));
  }
  return out;
}

const GrammarPack& Starter() {
  static const GrammarPack pack = GrammarPack::Load(ITN_GRAMMAR_DIR);
  return pack;
}

TEST_CASE("parse: transformation, insertion and sub-rule references") {
  RuleSet a = ParseRules("root = \"five\":\"5\" ;", "num");
  CHECK(a.rules.at("root") == RuleExpr::Mapping("five", "5"));

  RuleSet b = ParseRules("root = \"\":\",\" ;", "num");
  CHECK(b.rules.at("root") == RuleExpr::Mapping("", ","));

  RuleSet c = ParseRules(
      "root = a b ; a = \"four\":\"4\" ; b = \"thirty\":\":30\" ;", "time");
  CHECK(c.rules.at("root") ==
        RuleExpr::Sequence({RuleExpr::Ref("a"), RuleExpr::Ref("b")}));
  CHECK(c.rules.size() == 3);
  CHECK(c.order == Strings{"root", "a", "b"});
}

TEST_CASE("parse: quantifiers, costs and alternate marks") {
  RuleSet rs = ParseRules(
      "# digits\nroot = d+{3} (\"x\" @1.5 | \"y\" ~alt | \"z\" @2 ~alt)? ;\n"
      "d = \"one\":\"1\" ;",
      "t");
  const RuleExpr& root = rs.rules.at("root");
  REQUIRE(root.kind == RuleExpr::Kind::kSequence);
  CHECK(root.children[0] == RuleExpr::Quantified(RuleExpr::Ref("d"), '+', 3));
  const RuleExpr& opt = root.children[1];
  REQUIRE(opt.kind == RuleExpr::Kind::kQuantified);
  const RuleExpr& alt = opt.children[0];
  CHECK(alt.branch_costs == std::vector<float>{1.5f, 0.0f, 2.0f});
  CHECK(alt.branch_alt == std::vector<bool>{false, true, true});
}

TEST_CASE("parse errors carry line and column") {
  CHECK(ErrorOf("root = \"a\" \n  | ;") == "<input>:2:5: expected expression, "
                                          "found ';'");
  CHECK(ErrorOf("root = \"a\"") ==
        "<input>:1:11: expected ';' before end of input");
  CHECK(ErrorOf("root = missing ;") ==
        "<input>:1:8: unresolved rule reference 'missing'");
  CHECK(ErrorOf("root = a ; a = b ; b = a ;").find("cyclic rule reference") !=
        std::string::npos);
  CHECK(ErrorOf("root = \"a\" ; root = \"b\" ;")
            .find("1:14: duplicate rule 'root'") != std::string::npos);
  CHECK(ErrorOf("other = \"a\" ;") == "<input>:1:1: empty root: no 'root' rule");
  CHECK(ErrorOf("root = ;") == "<input>:1:8: empty root rule");
  CHECK(ErrorOf("root = \"a\"*{0} ;").find("repetition bound") !=
        std::string::npos);
  CHECK(ErrorOf("root = \"a\"+{65} ;").find("repetition bound") !=
        std::string::npos);
  CHECK(ErrorOf("root = \"a\"* ;").find("needs a bound") != std::string::npos);
  CHECK(ErrorOf("root = \"a ;").find("unterminated string") !=
        std::string::npos);
  CHECK(ErrorOf("import \"lib\" ; root = x ;")
            .find("cannot resolve import \"lib\"") != std::string::npos);
  CHECK(ErrorOf("root = \"a\" @-1 ;") != "");
  CHECK(ErrorOf("root = \"a\" ~foo ;").find("unknown annotation") !=
        std::string::npos);
  CHECK(ErrorOf("root = self ; self = self ;").find("self -> self") !=
        std::string::npos);
}

TEST_CASE("imports resolve library rules once") {
  ImportResolver resolver = [](const std::string& name)
      -> std::optional<std::string> {
    if (name == "lib") return "import \"base\" ; two = one one ;";
    if (name == "base") return "one = \"one\":\"1\" ;";
    return std::nullopt;
  };
  RuleSet rs = ParseRules("import \"lib\" ; import \"base\" ; root = two ;",
                          "t", "t.rules", resolver);
  CHECK(rs.rules.size() == 3);
  CHECK(rs.order == Strings{"one", "two", "root"});

  ImportResolver broken = [](const std::string&)
      -> std::optional<std::string> { return "x = ;"; };
  try {
    ParseRules("import \"lib\" ; root = x ;", "t", "t.rules", broken);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.file() == "lib.grm");
    CHECK(e.line() == 1);
  }
}

TEST_CASE("print then parse is the identity on the AST") {
  for (const auto& entry : fs::directory_iterator(ITN_GRAMMAR_DIR)) {
    if (entry.path().extension() != ".rules") continue;
    CAPTURE(entry.path().string());
    RuleSet rs = ParseRules(
        ReadTextFile(entry.path().string()), entry.path().stem().string(),
        entry.path().filename().string(), [](const std::string& name) {
          return std::optional<std::string>(ReadTextFile(
              (fs::path(ITN_GRAMMAR_DIR) / (name + ".grm")).string()));
        });
    CHECK(ParseRules(PrintRules(rs), rs.category) == rs);
  }
  for (uint32_t seed = 0; seed < 300; ++seed) {
    RuleSet rs = RandomRules(seed).Make(true);
    std::string text = PrintRules(rs);
    CAPTURE(text);
    RuleSet back = ParseRules(text, "t");
    CHECK(back == rs);
    CHECK(PrintRules(back) == text);
  }
}

TEST_CASE("compiled ITN relation matches the direct semantics") {
  int checked = 0;
  for (uint32_t seed = 0; seed < 300; ++seed) {
    RuleSet rs = RandomRules(1000 + seed).Make(false);
    auto syms = std::make_shared<SymbolTable>();
    CollectSymbols(rs, syms.get());
    Fst itn = CompileItn(rs, syms);
    CHECK(IsAcyclic(itn));
    if (CountPaths(itn) > kMaxPaths) continue;
    ++checked;

    StringRelation want;
    for (const auto& [k, w] : Denote(rs, rs.rules.at(rs.root))) {
      Pair tagged = k;
      tagged.first.insert(tagged.first.begin(), OpenTag("t"));
      tagged.first.push_back(CloseTag("t"));
      want[tagged] = w;
    }
    StringRelation got =
        ToStrings(oracle::RelationOf(itn, SIZE_MAX, SIZE_MAX), *syms, *syms);
    CAPTURE(PrintRules(rs));
    REQUIRE(got.size() == want.size());
    for (const auto& [k, w] : want) {
      auto it = got.find(k);
      REQUIRE(it != got.end());
      CHECK(it->second == doctest::Approx(w).epsilon(1e-9));
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("TN relation is the inverse of the ITN relation") {
  int checked = 0;
  for (uint32_t seed = 0; seed < 300; ++seed) {
    RuleSet rs = RandomRules(5000 + seed).Make(seed % 2 == 0);
    auto syms = std::make_shared<SymbolTable>();
    CollectSymbols(rs, syms.get());
    Fst itn_fst = CompileItn(rs, syms);
    if (CountPaths(itn_fst) > kMaxPaths) continue;
    ++checked;
    oracle::Relation itn = oracle::RelationOf(itn_fst, SIZE_MAX, SIZE_MAX);
    oracle::Relation tn =
        oracle::RelationOf(CompileTn(rs, syms), SIZE_MAX, SIZE_MAX);
    oracle::Relation inverted;
    for (const auto& [k, w] : itn) inverted[{k.second, k.first}] = w;
    REQUIRE(tn.size() == inverted.size());
    for (const auto& [k, w] : inverted) {
      auto it = tn.find(k);
      REQUIRE(it != tn.end());
      CHECK(it->second == doctest::Approx(w).epsilon(1e-9));
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("marked alternates only add brackets on the TN output") {
  RuleSet rs = ParseRules(
      "root = \"one\":\"1\" ~alt | \"won\":\"1\" ~alt | \"two\":\"2\" ;", "n");
  auto syms = std::make_shared<SymbolTable>();
  CollectSymbols(rs, syms.get());
  Fst tn = CompileTn(rs, syms, /*mark_alternates=*/true);
  Strings one = {"1"};
  std::set<std::string> got;
  for (const Path& p : ShortestPaths(Compose(CompileWritten(one, syms), tn),
                                     10)) {
    Strings out;
    for (Label l : p.olabels) out.push_back(syms->Symbol(l));
    got.insert(Join(out, " "));
  }
  CHECK(got == std::set<std::string>{"<n> <alt> one </alt> </n>",
                                     "<n> <alt> won </alt> </n>"});
}

TEST_CASE("ITN span transduction for small grammars") {
  RuleSet time = ParseRules(
      "root = hour \"\":\":\" minute ;\n"
      "hour = \"four\":\"4\" | \"five\":\"5\" ;\n"
      "minute = \"thirty\":\"30\" | \"fifteen\":\"15\" ;",
      "time");
  auto syms = std::make_shared<SymbolTable>();
  CollectSymbols(time, syms.get());
  Fst itn = CompileItn(time, syms);
  Strings span = {"<time>", "four", "thirty", "</time>"};
  CHECK(TransduceSpan(span, itn) == Strings{"4:30"});
  Strings untagged = {"four", "thirty"};
  CHECK(TransduceSpan(untagged, itn) == std::nullopt);

  RuleSet num = ParseRules("root = \"five\":\"5\" ;", "num");
  auto syms2 = std::make_shared<SymbolTable>();
  CollectSymbols(num, syms2.get());
  Strings five = {"<num>", "five", "</num>"};
  CHECK(TransduceSpan(five, CompileItn(num, syms2)) == Strings{"5"});
}

TEST_CASE("starter pack: sixteen categories, two machines each") {
  const GrammarPack& pack = Starter();
  CHECK(pack.size() == 16);
  CHECK(pack.categories() ==
        Strings{"abbreviation", "address", "alnum", "date", "email",
                "fraction", "math", "measure", "money", "num", "ordinal",
                "percent", "phone", "postalcode", "time", "url"});
  for (const std::string& cat : pack.categories()) {
    const CategoryGrammar& g = pack.Get(cat);
    CHECK(g.itn.NumStates() > 0);
    CHECK(g.tn.NumStates() > 0);
    CHECK(IsAcyclic(g.itn));
    CHECK(IsAcyclic(g.tn));
    CHECK(pack.symbols()->Find(OpenTag(cat)) != kNoLabel);
    CHECK(pack.symbols()->Find(CloseTag(cat)) != kNoLabel);
  }
}

TEST_CASE("starter cardinals 0-9999 round trip against the verbalizer") {
  const GrammarPack& pack = Starter();
  const CategoryGrammar& num = pack.Get("num");
  for (int n = 0; n < 10000; ++n) {
    CAPTURE(n);
    std::set<std::string> want = oracle::NumReadings(n);
    Strings tn = LexicalReadings(pack, "num", Digits(n));
    CHECK(std::set<std::string>(tn.begin(), tn.end()) == want);
    CHECK(tn.size() == want.size());
    for (const std::string& reading : want) {
      Strings words = SplitWhitespace(reading);
      CHECK(ConvertSpan(num, words) == Strings{Digits(n)});
    }
  }
}

TEST_CASE("starter cardinals above 9999 on a sample") {
  const GrammarPack& pack = Starter();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(10000, 999999);
  for (int i = 0; i < 500; ++i) {
    int n = pick(rng);
    CAPTURE(n);
    for (const std::string& reading : oracle::NumReadings(n)) {
      Strings words = SplitWhitespace(reading);
      CHECK(ConvertSpan(pack.Get("num"), words) == Strings{Digits(n)});
    }
  }
  Strings too_big = {"one", "thousand", "thousand"};
  CHECK(ConvertSpan(pack.Get("num"), too_big) == std::nullopt);
}

TEST_CASE("ITN is a function on starter readings") {
  const GrammarPack& pack = Starter();
  auto unique_best = [&](const std::string& cat, const std::string& reading) {
    Strings tagged = SplitWhitespace(reading);
    tagged.insert(tagged.begin(), OpenTag(cat));
    tagged.push_back(CloseTag(cat));
    Fst lattice = Compose(CompileLinear(tagged, pack.symbols()),
                          pack.Get(cat).itn);
    std::vector<Path> best = ShortestPaths(lattice, 2);
    return best.size() == 1 || best[1].weight > best[0].weight;
  };
  for (int n = 0; n < 2000; n += 7) {
    for (const std::string& r : oracle::NumReadings(n)) {
      CHECK(unique_best("num", r));
    }
  }
  for (int h = 1; h <= 12; ++h) {
    for (int m = 0; m < 60; ++m) {
      for (const std::string& r : oracle::Time(h, m, 2)) {
        CHECK(unique_best("time", r));
      }
    }
  }
}

TEST_CASE("TN of the worked examples") {
  const GrammarPack& pack = Starter();
  Strings money = {"$25.00"};
  std::vector<Path> paths = TnPaths(pack.Get("money"), money, 10);
  REQUIRE(paths.size() == 1);
  Strings symbols;
  for (Label l : paths[0].olabels) symbols.push_back(pack.symbols()->Symbol(l));
  CHECK(Join(symbols, " ") == "<money> twenty five dollars </money>");

  Strings time = LexicalReadings(pack, "time", "1:45");
  CHECK(std::set<std::string>(time.begin(), time.end()) ==
        std::set<std::string>{"one forty five", "quarter to two"});
}

TEST_CASE("TN readings of money and times match the verbalizer") {
  const GrammarPack& pack = Starter();
  std::mt19937 rng(11);
  for (int i = 0; i < 400; ++i) {
    int d = std::uniform_int_distribution<int>(0, 9999)(rng);
    int c = std::uniform_int_distribution<int>(0, 99)(rng);
    std::string w = oracle::MoneyWritten(d, c);
    CAPTURE(w);
    Strings got = LexicalReadings(pack, "money", w);
    CHECK(std::set<std::string>(got.begin(), got.end()) == oracle::Money(d, c));
  }
  for (int h = 1; h <= 12; ++h) {
    for (int m = 0; m < 60; ++m) {
      for (int s = 0; s < 3; ++s) {
        std::string w = oracle::TimeWritten(h, m, s);
        CAPTURE(w);
        Strings got = LexicalReadings(pack, "time", w);
        CHECK(std::set<std::string>(got.begin(), got.end()) ==
              oracle::Time(h, m, s));
      }
    }
  }
}

struct TempDir {
  TempDir() {
    path = fs::temp_directory_path() /
           ("itn_rules_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
  }
  fs::path path;
};

TEST_CASE("pack loading: counts, empty directory, aggregated errors") {
  {
    TempDir dir;
    dir.Write("time.rules", "root = \"four\":\"4\" ;");
    dir.Write("money.rules", "root = \"one dollar\":\"$1.00\" ;");
    GrammarPack pack = GrammarPack::Load(dir.path.string());
    CHECK(pack.size() == 2);
    CHECK(pack.categories() == Strings{"money", "time"});
  }
  {
    TempDir dir;
    try {
      GrammarPack::Load(dir.path.string());
      FAIL("expected an error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("no categories found") !=
            std::string::npos);
    }
  }
  {
    TempDir dir;
    dir.Write("good.rules", "root = \"a\" ;");
    dir.Write("bad1.rules", "root = ;");
    dir.Write("bad2.rules", "root = nope ;");
    try {
      GrammarPack::Load(dir.path.string());
      FAIL("expected an error");
    } catch (const PackLoadError& e) {
      REQUIRE(e.failures().size() == 2);
      CHECK(e.failures()[0].find("bad1.rules:1:8") == 0);
      CHECK(e.failures()[1].find("bad2.rules:1:8") == 0);
      CHECK(e.compiled() == Strings{"good"});
    }
  }
  std::vector<RuleSet> dup = {ParseRules("root = \"a\" ;", "x"),
                              ParseRules("root = \"b\" ;", "x")};
  CHECK_THROWS_AS(GrammarPack::FromRuleSets(dup), DataError);
  CHECK_THROWS_AS(Starter().Get("nope"), ConfigError);
}

TEST_CASE("compiled pack round trips through its directory format") {
  TempDir dir;
  Starter().Save(dir.path.string());
  GrammarPack back = GrammarPack::Load(dir.path.string());
  REQUIRE(back.categories() == Starter().categories());
  CHECK(*back.symbols() == *Starter().symbols());
  for (const std::string& cat : back.categories()) {
    CHECK(back.Get(cat).itn == Starter().Get(cat).itn);
    CHECK(back.Get(cat).tn == Starter().Get(cat).tn);
    CHECK_FALSE(back.Get(cat).rules.has_value());
  }
  Strings span = {"twenty", "five", "dollars"};
  CHECK(ConvertSpan(back.Get("money"), span) == Strings{"$25.00"});
}

TEST_CASE("pack handle swaps atomically for new readers only") {
  auto first = std::make_shared<const GrammarPack>(
      GrammarPack::FromRuleSets({ParseRules("root = \"a\":\"1\" ;", "x")}));
  auto second = std::make_shared<const GrammarPack>(
      GrammarPack::FromRuleSets({ParseRules("root = \"a\":\"2\" ;", "x")}));
  PackHandle handle(first);
  std::shared_ptr<const GrammarPack> held = handle.Current();
  CHECK(handle.generation() == 0);
  handle.Replace(second);
  CHECK(handle.generation() == 1);
  Strings a = {"a"};
  CHECK(ConvertSpan(held->Get("x"), a) == Strings{"1"});
  CHECK(ConvertSpan(handle.Current()->Get("x"), a) == Strings{"2"});
}

TEST_CASE("lexical vocabulary excludes tags and markers") {
  Strings vocab = Starter().LexicalVocabulary();
  std::set<std::string> v(vocab.begin(), vocab.end());
  CHECK(v.count("twenty"));
  CHECK(v.count("o'clock"));
  CHECK(v.count("dollars"));
  CHECK_FALSE(v.count("<money>"));
  CHECK_FALSE(v.count("<alt>"));
  CHECK_FALSE(v.count("<sp>"));
}

}  // namespace
}  // namespace itn
