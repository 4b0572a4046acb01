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

// Straightforward English verbalizers for the starter grammars, written
// without reference to the rule files. Each returns every accepted reading.

#ifndef ITN_TESTS_GRAMMAR_ORACLE_H_
#define ITN_TESTS_GRAMMAR_ORACLE_H_

#include <cstdio>
#include <set>
#include <string>

namespace itn::oracle {

inline const char* kOnes[] = {"zero", "one", "two", "three", "four",
                              "five", "six", "seven", "eight", "nine",
                              "ten", "eleven", "twelve", "thirteen",
                              "fourteen", "fifteen", "sixteen",
                              "seventeen", "eighteen", "nineteen"};
inline const char* kTens[] = {"", "", "twenty", "thirty", "forty",
                              "fifty", "sixty", "seventy", "eighty",
                              "ninety"};

// 1-99
inline std::string BelowHundred(int n) {
  if (n < 20) return kOnes[n];
  std::string s = kTens[n / 10];
  if (n % 10) s += std::string(" ") + kOnes[n % 10];
  return s;
}

inline std::set<std::string> Prefixed(const std::string& head,
                                      const std::set<std::string>& tails) {
  std::set<std::string> out;
  for (const std::string& t : tails) out.insert(head + t);
  return out;
}

// Readings of n in 1-999; "and" may join hundreds to a remainder below 100.
inline std::set<std::string> BelowThousand(int n) {
  if (n < 100) return {BelowHundred(n)};
  std::string head = std::string(kOnes[n / 100]) + " hundred";
  int rest = n % 100;
  if (rest == 0) return {head};
  return {head + " " + BelowHundred(rest),
          head + " and " + BelowHundred(rest)};
}

// Every reading of n in 0-999999.
inline std::set<std::string> Cardinal(int n) {
  if (n == 0) return {"zero"};
  if (n < 1000) return BelowThousand(n);
  std::set<std::string> out;
  int rest = n % 1000;
  for (const std::string& head : BelowThousand(n / 1000)) {
    std::string h = head + " thousand";
    if (rest == 0) {
      out.insert(h);
    } else if (rest >= 100) {
      for (const std::string& t : BelowThousand(rest)) out.insert(h + " " + t);
    } else {
      out.insert(h + " " + BelowHundred(rest));
      out.insert(h + " and " + BelowHundred(rest));
    }
  }
  return out;
}

// Cardinal readings plus the colloquial pair form the num category accepts:
// 450 -> "four fifty", 1950 -> "nineteen fifty".
inline std::set<std::string> NumReadings(int n) {
  std::set<std::string> out = Cardinal(n);
  const int head = n / 100, tail = n % 100;
  if (head >= 1 && head <= 99 && tail >= 10) {
    out.insert(BelowHundred(head) + " " + BelowHundred(tail));
  }
  return out;
}

inline std::string MoneyWritten(int dollars, int cents) {
  char buf[32];
  if (dollars >= 1000) {
    std::snprintf(buf, sizeof(buf), "$%d,%03d.%02d", dollars / 1000,
                  dollars % 1000, cents);
  } else {
    std::snprintf(buf, sizeof(buf), "$%d.%02d", dollars, cents);
  }
  return buf;
}

inline std::set<std::string> Money(int dollars, int cents) {
  std::set<std::string> cent_words;
  if (cents == 1) {
    cent_words = {"one cent"};
  } else if (cents > 0) {
    cent_words = {BelowHundred(cents) + " cents"};
  }
  if (dollars == 0) {
    if (cents == 0) return {"zero dollars"};
    return cent_words;
  }
  std::set<std::string> dollar_words;
  if (dollars == 1) {
    dollar_words = {"one dollar"};
  } else {
    for (const std::string& c : Cardinal(dollars)) {
      dollar_words.insert(c + " dollars");
    }
  }
  if (cents == 0) return dollar_words;
  std::set<std::string> out;
  for (const std::string& d : dollar_words) {
    for (const std::string& c : cent_words) {
      out.insert(d + " and " + c);
      out.insert(d + " " + c);
    }
  }
  return out;
}

// suffix: 0 none, 1 am, 2 pm.
inline std::string TimeWritten(int hour, int minute, int suffix) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%d:%02d%s", hour, minute,
                suffix == 0 ? "" : suffix == 1 ? " am" : " pm");
  return buf;
}

inline std::set<std::string> Time(int hour, int minute, int suffix) {
  std::set<std::string> out;
  const std::string h = kOnes[hour];
  if (minute == 0) {
    out.insert(h + " o'clock");
  } else {
    out.insert(h + " " + (minute < 10 ? "oh " + std::string(kOnes[minute])
                                      : BelowHundred(minute)));
  }
  if (minute == 15) out.insert("quarter past " + h);
  if (minute == 30) out.insert("half past " + h);
  if (minute == 45) out.insert("quarter to " + std::string(kOnes[hour % 12 + 1]));
  if (suffix == 0) return out;
  std::set<std::string> with;
  for (const std::string& s : out) with.insert(s + (suffix == 1 ? " a m" : " p m"));
  return with;
}

}  // namespace itn::oracle

#endif  // ITN_TESTS_GRAMMAR_ORACLE_H_
