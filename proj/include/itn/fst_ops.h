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

#ifndef ITN_FST_OPS_H_
#define ITN_FST_OPS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itn/fst.h"

namespace itn {

// Linear acceptor for `tokens`; tokens missing from `syms` become <unk>.
Fst CompileLinear(std::span<const std::string> tokens, SymbolTablePtr syms);

// Weighted composition a o b with the three-state epsilon filter, so every
// pair of matching paths yields exactly one composed path. The result is
// trimmed to states that are both accessible and coaccessible; an empty
// relation is a single non-final start state. Throws ConfigError unless
// a's output table matches b's input table.
Fst Compose(const Fst& a, const Fst& b);

// Removes states that are not on some start-to-final path.
Fst Connect(const Fst& f);

Fst Union(std::span<const Fst> fsts);
Fst Concat(const Fst& a, const Fst& b);
// Kleene star; the empty string is accepted at weight 0.
Fst Closure(const Fst& f);
// Swaps input and output labels and symbol tables.
Fst Invert(const Fst& f);

bool IsAcyclic(const Fst& f);

// Up to `n` paths with distinct output strings, ordered by weight and then by
// the lexicographic order of their output labels. Only the coaccessible part
// of `f` is searched; it must be acyclic (ConfigError otherwise). Returns an
// empty vector when nothing is accepted.
std::vector<Path> ShortestPaths(const Fst& f, int n);

// Display tokens for a symbol string: symbols are concatenated and <sp>
// starts a new token. Epsilon is skipped.
std::vector<std::string> GlueSymbols(std::span<const Label> labels,
                                     const SymbolTable& syms);

// Best path of compose(linear(span), f) glued into display tokens, or nullopt
// when `f` rejects the span.
std::optional<std::vector<std::string>> TransduceSpan(
    std::span<const std::string> span, const Fst& f);

}  // namespace itn

#endif  // ITN_FST_OPS_H_
