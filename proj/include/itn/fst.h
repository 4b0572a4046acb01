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

// Weighted finite-state transducer over the tropical semiring (min, +).
// Weights are non-negative costs; +infinity is the semiring zero.

#ifndef ITN_FST_H_
#define ITN_FST_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "itn/symbol_table.h"

namespace itn {

using StateId = uint32_t;
using Weight = float;

inline constexpr StateId kNoState = UINT32_MAX;
inline constexpr Weight kZeroWeight = std::numeric_limits<Weight>::infinity();

struct Arc {
  Label ilabel = kEpsilon;
  Label olabel = kEpsilon;
  Weight weight = 0;
  StateId nextstate = kNoState;

  bool operator==(const Arc&) const = default;
};

class Fst {
 public:
  Fst() = default;
  explicit Fst(SymbolTablePtr syms) : isyms_(syms), osyms_(std::move(syms)) {}
  Fst(SymbolTablePtr isyms, SymbolTablePtr osyms)
      : isyms_(std::move(isyms)), osyms_(std::move(osyms)) {}

  StateId AddState();
  void SetStart(StateId s);
  void SetFinal(StateId s, Weight w);
  void AddArc(StateId s, const Arc& arc);
  void ReserveStates(size_t n);

  StateId Start() const { return start_; }
  Weight Final(StateId s) const { return finals_[s]; }
  bool IsFinal(StateId s) const { return finals_[s] != kZeroWeight; }
  std::span<const Arc> Arcs(StateId s) const { return states_[s]; }
  size_t NumStates() const { return states_.size(); }
  size_t NumArcs() const;

  const SymbolTablePtr& InputSymbols() const { return isyms_; }
  const SymbolTablePtr& OutputSymbols() const { return osyms_; }
  void SetInputSymbols(SymbolTablePtr syms) { isyms_ = std::move(syms); }
  void SetOutputSymbols(SymbolTablePtr syms) { osyms_ = std::move(syms); }

  // Stable sort of every state's arcs by (ilabel, olabel). Composition looks
  // up the right-hand machine's arcs by input label.
  void SortArcsByInput();
  bool InputSorted() const { return input_sorted_; }

  // Throws ConfigError if the start or any arc target is out of range or a
  // weight is negative or NaN.
  void Validate() const;

  bool operator==(const Fst& other) const;

 private:
  std::vector<std::vector<Arc>> states_;
  std::vector<Weight> finals_;
  StateId start_ = kNoState;
  SymbolTablePtr isyms_;
  SymbolTablePtr osyms_;
  bool input_sorted_ = true;
};

// One accepting path: output labels without epsilons, and the sum of its arc
// weights plus the final weight of its last state.
struct Path {
  std::vector<Label> olabels;
  double weight = 0;

  bool operator==(const Path&) const = default;
};

}  // namespace itn

#endif  // ITN_FST_H_
