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

#ifndef ITN_SYMBOL_TABLE_H_
#define ITN_SYMBOL_TABLE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace itn {

using Label = uint32_t;

inline constexpr Label kEpsilon = 0;
inline constexpr Label kUnknown = 1;
inline constexpr Label kNoLabel = UINT32_MAX;

inline constexpr std::string_view kEpsilonSymbol = "<eps>";
inline constexpr std::string_view kUnknownSymbol = "<unk>";
// Token boundary on the written side of a grammar.
inline constexpr std::string_view kSpaceSymbol = "<sp>";
// Brackets emitted by annotated TN machines around interchangeable branches.
inline constexpr std::string_view kAltOpenSymbol = "<alt>";
inline constexpr std::string_view kAltCloseSymbol = "</alt>";

// Bidirectional symbol <-> label map. Label 0 is always epsilon and label 1 is
// always <unk>; neither can be re-registered under another id.
class SymbolTable {
 public:
  SymbolTable();

  // Returns the existing label if `symbol` is already registered.
  Label AddSymbol(std::string_view symbol);

  // kNoLabel when absent.
  Label Find(std::string_view symbol) const;
  Label FindOrUnknown(std::string_view symbol) const {
    Label l = Find(symbol);
    return l == kNoLabel ? kUnknown : l;
  }
  bool Contains(std::string_view symbol) const {
    return Find(symbol) != kNoLabel;
  }

  const std::string& Symbol(Label label) const { return symbols_.at(label); }
  size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const SymbolTable& other) const {
    return symbols_ == other.symbols_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Label, Hash, std::equal_to<>> index_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

// Same object or same contents.
inline bool CompatibleSymbols(const SymbolTablePtr& a,
                              const SymbolTablePtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace itn

#endif  // ITN_SYMBOL_TABLE_H_
