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

// Binary FST format, all integers little-endian:
//
//   "ITNF" | version u16
//   input symbols  : count u32, then (length u32, UTF-8 bytes) in id order
//   output symbols : same layout
//   start u32
//   states : count u32, then per state: arc count u32 and arcs as
//            (ilabel u32, olabel u32, weight f32, next u32)
//   finals : count u32, then (state u32, weight f32) in state order

#ifndef ITN_FST_IO_H_
#define ITN_FST_IO_H_

#include <iosfwd>
#include <string>

#include "itn/fst.h"

namespace itn {

inline constexpr uint16_t kFstFormatVersion = 1;

void WriteFst(const Fst& f, std::ostream& out);
// When both tables in the file are identical the result shares one table.
Fst ReadFst(std::istream& in);

void WriteFstFile(const Fst& f, const std::string& path);
Fst ReadFstFile(const std::string& path);

// Lower-level helpers shared with the other binary formats.
namespace binio {

void WriteU16(std::ostream& out, uint16_t v);
void WriteU32(std::ostream& out, uint32_t v);
void WriteF32(std::ostream& out, float v);
void WriteString(std::ostream& out, const std::string& s);
void WriteSymbols(std::ostream& out, const SymbolTable& syms);

uint16_t ReadU16(std::istream& in);
uint32_t ReadU32(std::istream& in);
float ReadF32(std::istream& in);
std::string ReadString(std::istream& in);
SymbolTable ReadSymbols(std::istream& in);

}  // namespace binio
}  // namespace itn

#endif  // ITN_FST_IO_H_
