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

// Template sentences with category slots for the synthetic corpus. Values
// stay inside what the starter grammars cover; contexts mix cue words with
// generic frames shared by every category so that some spans can only be
// told apart by the words that follow them.

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "itn/datagen.h"
#include "itn/errors.h"
#include "itn/text.h"

namespace itn {
namespace {

using Rng = std::mt19937_64;

size_t Pick(Rng& rng, size_t n) { return rng() % n; }
int Range(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}
double Unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T, size_t N>
const T& Choose(Rng& rng, const T (&items)[N]) {
  return items[Pick(rng, N)];
}

std::string Digits(Rng& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('0' + Pick(rng, 10));
  return s;
}

// Mostly small numbers; short readings are the common case in speech.
int SmallNumber(Rng& rng) {
  const double u = Unit(rng);
  if (u < 0.6) return Range(rng, 0, 99);
  if (u < 0.85) return Range(rng, 100, 999);
  return Range(rng, 1000, 99999);
}

std::string WithCommas(int n) {
  std::string s = std::to_string(n);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) {
    s.insert(static_cast<size_t>(i), ",");
  }
  return s;
}

std::string Decimal(Rng& rng) {
  return std::to_string(Range(rng, 0, 99)) + "." +
         Digits(rng, Range(rng, 1, 2));
}

using Value = std::vector<std::string>;

Value Num(Rng& rng) { return {std::to_string(SmallNumber(rng))}; }

Value Money(Rng& rng) {
  const double u = Unit(rng);
  int dollars;
  if (u < 0.05) {
    dollars = 0;
  } else if (u < 0.75) {
    dollars = Range(rng, 1, 99);
  } else if (u < 0.92) {
    dollars = Range(rng, 100, 999);
  } else {
    dollars = Range(rng, 1000, 9999);
  }
  // No cents on four-digit amounts: their readings run past ten tokens.
  const int cents = dollars == 0 || (dollars < 1000 && Unit(rng) < 0.4)
                        ? Range(rng, 1, 99)
                        : 0;
  std::string c = std::to_string(cents);
  if (c.size() < 2) c = "0" + c;
  return {"$" + WithCommas(dollars) + "." + c};
}

Value Time(Rng& rng) {
  static const int kMinutes[] = {0, 15, 30, 45};
  const int hour = Range(rng, 1, 12);
  const int minute = Unit(rng) < 0.5 ? Choose(rng, kMinutes) : Range(rng, 1, 59);
  std::string m = std::to_string(minute);
  if (m.size() < 2) m = "0" + m;
  Value v = {std::to_string(hour) + ":" + m};
  const double u = Unit(rng);
  if (u < 0.2) {
    v.push_back("am");
  } else if (u < 0.4) {
    v.push_back("pm");
  }
  return v;
}

std::string OrdinalText(int n) {
  const char* suffix = "th";
  if (n % 100 < 11 || n % 100 > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(n) + suffix;
}

Value Ordinal(Rng& rng) {
  return {OrdinalText(Unit(rng) < 0.7 ? Range(rng, 1, 31) : Range(rng, 1, 100))};
}

Value Date(Rng& rng) {
  static const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  const std::string day = std::to_string(Range(rng, 1, 31));
  if (Unit(rng) < 0.5) return {Choose(rng, kMonths), day};
  return {Choose(rng, kMonths), day + ",", std::to_string(Range(rng, 1900, 2099))};
}

Value Fraction(Rng& rng) {
  const int n = Range(rng, 1, 9);
  return {std::to_string(n) + "/" + std::to_string(Range(rng, 2, 10))};
}

Value Measure(Rng& rng) {
  static const char* kUnits[] = {"kg", "g",  "km", "m",  "cm", "mm",
                                 "lb", "oz", "mi", "ft", "l"};
  const double u = Unit(rng);
  std::string q;
  if (u < 0.1) {
    q = "1";
  } else if (u < 0.8) {
    q = std::to_string(Range(rng, 2, 99));
  } else if (u < 0.9) {
    q = std::to_string(Range(rng, 100, 999));
  } else {
    q = Decimal(rng);
  }
  return {q, Choose(rng, kUnits)};
}

Value Percent(Rng& rng) {
  return {(Unit(rng) < 0.85 ? std::to_string(Range(rng, 0, 100))
                            : Decimal(rng)) +
          "%"};
}

Value Math(Rng& rng) {
  static const char* kOps[] = {"+", "-", "×"};
  std::string s = std::to_string(Range(rng, 0, 20)) + Choose(rng, kOps) +
                  std::to_string(Range(rng, 0, 20));
  if (Unit(rng) < 0.3) s += "=" + std::to_string(Range(rng, 0, 99));
  return {s};
}

const char* kSites[] = {"google", "example",   "amazon", "wikipedia", "github",
                        "youtube", "yahoo",    "reddit", "netflix",   "mysite"};
const char* kTlds[] = {"com", "org", "net", "edu", "gov", "io"};

std::string Domain(Rng& rng) {
  return std::string(Choose(rng, kSites)) + "." + Choose(rng, kTlds);
}

Value Url(Rng& rng) {
  return {(Unit(rng) < 0.5 ? "www." : "") + Domain(rng)};
}

Value Email(Rng& rng) {
  static const char* kUsers[] = {"john",  "mary",  "jane",    "alex", "info",
                                 "support", "sales", "admin", "contact", "team"};
  return {std::string(Choose(rng, kUsers)) + "@" + Domain(rng)};
}

Value Phone(Rng& rng) {
  std::string local = Digits(rng, 3) + "-" + Digits(rng, 4);
  if (Unit(rng) < 0.5) return {local};
  return {Digits(rng, 3) + "-" + local};
}

Value PostalCode(Rng& rng) { return {Digits(rng, 5)}; }

Value Alnum(Rng& rng) {
  std::string s;
  for (int i = 0, n = Range(rng, 1, 3); i < n; ++i) {
    s += static_cast<char>('A' + Pick(rng, 26));
  }
  s += Digits(rng, 1);
  for (int i = 0, n = Range(rng, 0, 3); i < n; ++i) {
    s += Unit(rng) < 0.7 ? Digits(rng, 1)
                         : std::string(1, static_cast<char>('A' + Pick(rng, 26)));
  }
  return {s};
}

Value Address(Rng& rng) {
  static const char* kStreets[] = {"Main", "Oak",  "Maple", "Elm",  "Park",
                                   "Pine", "Cedar", "Lake", "Hill", "Washington"};
  static const char* kSuffixes[] = {"St", "Ave", "Rd", "Blvd", "Dr", "Ln"};
  const int house = Unit(rng) < 0.7 ? Range(rng, 1, 999) : Range(rng, 1000, 9999);
  return {std::to_string(house), Choose(rng, kStreets), Choose(rng, kSuffixes)};
}

Value Abbreviation(Rng& rng) {
  static const char* kAbbrev[] = {"Dr.", "Mr.", "Mrs.", "Prof.", "vs.",
                                  "etc.", "Jr.", "Sr.", "approx.", "Dept."};
  return {Choose(rng, kAbbrev)};
}

struct Generator {
  std::function<Value(Rng&)> value;
  // Frames with one "{}" slot.
  std::vector<std::string> frames;
};

const std::map<std::string, Generator>& Generators() {
  static const auto* g = new std::map<std::string, Generator>{
      {"abbreviation",
       {Abbreviation,
        {"i talked to {} smith", "ask {} jones about it",
         "{} brown is here", "apples {} oranges", "pens paper {}"}}},
      {"address",
       {Address,
        {"i live at {}", "send it to {}", "the office is on {}",
         "drive to {} now", "meet me at {}"}}},
      {"alnum",
       {Alnum,
        {"take route {}", "the code is {}", "my seat is {}",
         "flight {} is late", "model {} is sold out"}}},
      {"date",
       {Date,
        {"on {}", "born on {}", "the deadline is {}",
         "we leave on {}", "the party is on {} right"}}},
      {"email",
       {Email,
        {"email me at {}", "send it to {}", "my address is {}",
         "write to {} today"}}},
      {"fraction",
       {Fraction,
        {"add {} cup of sugar", "about {} of them", "{} of the class",
         "cut it into {}"}}},
      {"math",
       {Math,
        {"what is {}", "compute {}", "solve {} for me", "is it true that {}"}}},
      {"measure",
       {Measure,
        {"it weighs {}", "the road is {} long", "add {} of water",
         "i ran {} today", "it is {} tall"}}},
      {"money",
       {Money,
        {"it costs {}", "pay {} now", "{} please", "the bill is {}",
         "i owe you {}", "that will be {}"}}},
      {"num",
       {Num,
        {"i have {} apples", "there are {} people here", "{} cats",
         "we need {} more", "count to {}", "page {}"}}},
      {"ordinal",
       {Ordinal,
        {"he came {}", "the {} floor", "my {} try", "on the {} day",
         "she finished {}"}}},
      {"percent",
       {Percent,
        {"the rate is {}", "battery at {}", "{} of people agree",
         "a {} discount"}}},
      {"phone",
       {Phone,
        {"call me at {}", "my number is {}", "dial {}", "text {} later"}}},
      {"postalcode",
       {PostalCode,
        {"the zip code is {}", "zip {}", "ship it to zip {}",
         "my postal code is {}"}}},
      {"time",
       {Time,
        {"see you at {}", "the meeting is at {}", "wake me up at {}",
         "it starts at {}", "the train leaves at {}"}}},
      {"url",
       {Url,
        {"go to {}", "visit {}", "the site is {}", "open {} please"}}},
  };
  return *g;
}

// Frames every category can fill.
const char* kGenericFrames[] = {
    "it is {}",        "i said {}",      "the answer was {}", "{} is fine",
    "maybe {} then",   "write down {}",  "check {} again",    "just {}",
    "i think {}",      "it was {} okay", "we got {}",         "about {}"};

const char* kFillers[] = {"okay", "so", "well", "yes", "hey", "please",
                          "thanks", "now", "really", "then"};

const char* kPlainWords[] = {
    "hello", "how",   "are",   "you",    "the",  "weather", "is",  "nice",
    "today", "i",     "want",  "to",     "go",   "home",    "we",  "should",
    "talk",  "later", "that",  "sounds", "good", "what",    "do",  "think",
    "call",  "mom",   "tell",  "me",     "more", "about",   "it",  "please",
    "play",  "music", "stop",  "turn",   "off",  "lights",  "yes", "no"};

std::vector<std::string> Words(const std::string& s) {
  return SplitWhitespace(s);
}

void AddFillers(Rng& rng, std::vector<std::string>* out) {
  for (int i = 0, n = Range(rng, 0, 2); i < n; ++i) {
    out->push_back(Choose(rng, kFillers));
  }
}

}  // namespace

std::vector<std::string> SynthCategories() {
  std::vector<std::string> out;
  for (const auto& [name, gen] : Generators()) out.push_back(name);
  return out;
}

std::vector<SyntheticSentence> Synthesize(const GrammarPack& pack, size_t n,
                                          uint64_t seed,
                                          const SynthOptions& options) {
  std::vector<std::string> cats;
  if (options.categories.empty()) {
    for (const std::string& c : SynthCategories()) {
      if (pack.Has(c)) cats.push_back(c);
    }
  } else {
    for (const std::string& c : options.categories) {
      if (!Generators().count(c)) {
        throw ConfigError("no synthetic generator for category " + c);
      }
      if (!pack.Has(c)) throw ConfigError("category not in pack: " + c);
      cats.push_back(c);
    }
  }
  if (cats.empty()) throw ConfigError("no categories to synthesize");
  if (options.plain_fraction < 0 || options.plain_fraction > 1) {
    throw ConfigError("plain_fraction must be in [0, 1]");
  }

  Rng rng(seed);
  std::vector<SyntheticSentence> out;
  out.reserve(n);
  while (out.size() < n) {
    SyntheticSentence s;
    AddFillers(rng, &s.written);
    s.lexical_xml = s.written;
    if (Unit(rng) < options.plain_fraction) {
      for (int i = 0, k = Range(rng, 3, 8); i < k; ++i) {
        s.written.push_back(Choose(rng, kPlainWords));
      }
      s.lexical_xml = s.written;
      out.push_back(std::move(s));
      continue;
    }
    const std::string& cat = cats[Pick(rng, cats.size())];
    const Generator& gen = Generators().at(cat);
    const std::string frame =
        Unit(rng) < 0.3 ? std::string(Choose(rng, kGenericFrames))
                        : gen.frames[Pick(rng, gen.frames.size())];
    const Value value = gen.value(rng);
    const CategoryGrammar& g = pack.Get(cat);
    const std::vector<Path> paths = TnPaths(g, value, 256);
    if (paths.empty()) {
      throw DataError("grammar " + cat + " rejects generated value: " +
                      Join(value, " "));
    }
    const std::vector<std::string> lexical =
        LexicalWords(paths[Pick(rng, paths.size())], *pack.symbols());
    for (const std::string& w : Words(frame)) {
      if (w == "{}") {
        s.written.insert(s.written.end(), value.begin(), value.end());
        s.lexical_xml.push_back(OpenTag(cat));
        s.lexical_xml.insert(s.lexical_xml.end(), lexical.begin(),
                             lexical.end());
        s.lexical_xml.push_back(CloseTag(cat));
      } else {
        s.written.push_back(w);
        s.lexical_xml.push_back(w);
      }
    }
    const size_t before = s.written.size();
    AddFillers(rng, &s.written);
    s.lexical_xml.insert(s.lexical_xml.end(), s.written.begin() + before,
                         s.written.end());
    s.categories.push_back(cat);
    out.push_back(std::move(s));
  }
  return out;
}

NGramModel TrainDatagenLm(std::span<const SyntheticSentence> corpus,
                          int order) {
  std::vector<std::vector<std::string>> text;
  text.reserve(corpus.size());
  for (const SyntheticSentence& s : corpus) text.push_back(s.lexical_xml);
  return NGramModel::Train(text, order);
}

}  // namespace itn
