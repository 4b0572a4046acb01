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

#include "itn/fst.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "itn/errors.h"

namespace itn {

StateId Fst::AddState() {
  states_.emplace_back();
  finals_.push_back(kZeroWeight);
  return static_cast<StateId>(states_.size() - 1);
}

void Fst::ReserveStates(size_t n) {
  states_.reserve(n);
  finals_.reserve(n);
}

void Fst::SetStart(StateId s) { start_ = s; }

void Fst::SetFinal(StateId s, Weight w) { finals_.at(s) = w; }

void Fst::AddArc(StateId s, const Arc& arc) {
  auto& arcs = states_.at(s);
  if (!arcs.empty() && arcs.back().ilabel > arc.ilabel) input_sorted_ = false;
  arcs.push_back(arc);
}

size_t Fst::NumArcs() const {
  size_t n = 0;
  for (const auto& arcs : states_) n += arcs.size();
  return n;
}

void Fst::SortArcsByInput() {
  for (auto& arcs : states_) {
    std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
      if (a.ilabel != b.ilabel) return a.ilabel < b.ilabel;
      return a.olabel < b.olabel;
    });
  }
  input_sorted_ = true;
}

void Fst::Validate() const {
  const size_t n = states_.size();
  if (n == 0) throw ConfigError("fst has no states");
  if (start_ >= n) throw ConfigError("fst start state out of range");
  for (size_t s = 0; s < n; ++s) {
    if (std::isnan(finals_[s]) || finals_[s] < 0) {
      throw ConfigError("invalid final weight at state " + std::to_string(s));
    }
    for (const Arc& arc : states_[s]) {
      if (arc.nextstate >= n) {
        throw ConfigError("arc target out of range at state " +
                          std::to_string(s));
      }
      if (std::isnan(arc.weight) || arc.weight < 0) {
        throw ConfigError("invalid arc weight at state " + std::to_string(s));
      }
    }
  }
}

bool Fst::operator==(const Fst& other) const {
  return start_ == other.start_ && states_ == other.states_ &&
         finals_ == other.finals_ &&
         CompatibleSymbols(isyms_, other.isyms_) &&
         CompatibleSymbols(osyms_, other.osyms_);
}

}  // namespace itn
