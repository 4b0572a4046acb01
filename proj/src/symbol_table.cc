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

#include "itn/symbol_table.h"

namespace itn {

SymbolTable::SymbolTable() {
  AddSymbol(kEpsilonSymbol);
  AddSymbol(kUnknownSymbol);
}

Label SymbolTable::AddSymbol(std::string_view symbol) {
  auto it = index_.find(symbol);
  if (it != index_.end()) return it->second;
  Label label = static_cast<Label>(symbols_.size());
  symbols_.emplace_back(symbol);
  index_.emplace(symbols_.back(), label);
  return label;
}

Label SymbolTable::Find(std::string_view symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? kNoLabel : it->second;
}

}  // namespace itn
