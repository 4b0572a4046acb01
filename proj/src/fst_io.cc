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

#include "itn/fst_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "itn/errors.h"

namespace itn {
namespace binio {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

void WriteRaw(std::ostream& out, const void* p, size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void ReadRaw(std::istream& in, void* p, size_t n) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) {
    throw FormatError("unexpected end of file");
  }
}

// Guards allocations driven by counts read from untrusted files.
constexpr uint32_t kMaxCount = 1u << 28;

uint32_t ReadCount(std::istream& in) {
  uint32_t n = ReadU32(in);
  if (n > kMaxCount) throw FormatError("implausible element count");
  return n;
}

}  // namespace

void WriteU16(std::ostream& out, uint16_t v) { WriteRaw(out, &v, 2); }
void WriteU32(std::ostream& out, uint32_t v) { WriteRaw(out, &v, 4); }
void WriteF32(std::ostream& out, float v) { WriteRaw(out, &v, 4); }

void WriteString(std::ostream& out, const std::string& s) {
  WriteU32(out, static_cast<uint32_t>(s.size()));
  WriteRaw(out, s.data(), s.size());
}

void WriteSymbols(std::ostream& out, const SymbolTable& syms) {
  WriteU32(out, static_cast<uint32_t>(syms.size()));
  for (const std::string& s : syms.symbols()) WriteString(out, s);
}

uint16_t ReadU16(std::istream& in) {
  uint16_t v;
  ReadRaw(in, &v, 2);
  return v;
}

uint32_t ReadU32(std::istream& in) {
  uint32_t v;
  ReadRaw(in, &v, 4);
  return v;
}

float ReadF32(std::istream& in) {
  float v;
  ReadRaw(in, &v, 4);
  return v;
}

std::string ReadString(std::istream& in) {
  std::string s(ReadCount(in), '\0');
  ReadRaw(in, s.data(), s.size());
  return s;
}

SymbolTable ReadSymbols(std::istream& in) {
  const uint32_t n = ReadCount(in);
  SymbolTable syms;
  for (uint32_t i = 0; i < n; ++i) {
    std::string s = ReadString(in);
    if (syms.AddSymbol(s) != i) {
      throw FormatError("symbol table is not a bijection at id " +
                        std::to_string(i));
    }
  }
  if (n < 2) throw FormatError("symbol table lacks reserved symbols");
  return syms;
}

}  // namespace binio

void WriteFst(const Fst& f, std::ostream& out) {
  using namespace binio;
  out.write("ITNF", 4);
  WriteU16(out, kFstFormatVersion);
  WriteSymbols(out, *f.InputSymbols());
  WriteSymbols(out, *f.OutputSymbols());
  WriteU32(out, f.Start());
  WriteU32(out, static_cast<uint32_t>(f.NumStates()));
  for (StateId s = 0; s < f.NumStates(); ++s) {
    auto arcs = f.Arcs(s);
    WriteU32(out, static_cast<uint32_t>(arcs.size()));
    for (const Arc& arc : arcs) {
      WriteU32(out, arc.ilabel);
      WriteU32(out, arc.olabel);
      WriteF32(out, arc.weight);
      WriteU32(out, arc.nextstate);
    }
  }
  uint32_t num_finals = 0;
  for (StateId s = 0; s < f.NumStates(); ++s) num_finals += f.IsFinal(s);
  WriteU32(out, num_finals);
  for (StateId s = 0; s < f.NumStates(); ++s) {
    if (!f.IsFinal(s)) continue;
    WriteU32(out, s);
    WriteF32(out, f.Final(s));
  }
}

Fst ReadFst(std::istream& in) {
  using namespace binio;
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "ITNF", 4) != 0) {
    throw FormatError("not an FST file (bad magic)");
  }
  const uint16_t version = ReadU16(in);
  if (version != kFstFormatVersion) {
    throw FormatError("unsupported FST format version " +
                      std::to_string(version));
  }
  auto isyms = std::make_shared<const SymbolTable>(ReadSymbols(in));
  auto osyms = std::make_shared<const SymbolTable>(ReadSymbols(in));
  if (*isyms == *osyms) osyms = isyms;
  Fst f(isyms, osyms);
  const uint32_t start = ReadU32(in);
  const uint32_t num_states = ReadCount(in);
  f.ReserveStates(num_states);
  for (uint32_t s = 0; s < num_states; ++s) f.AddState();
  for (uint32_t s = 0; s < num_states; ++s) {
    const uint32_t num_arcs = ReadCount(in);
    for (uint32_t i = 0; i < num_arcs; ++i) {
      Arc arc;
      arc.ilabel = ReadU32(in);
      arc.olabel = ReadU32(in);
      arc.weight = ReadF32(in);
      arc.nextstate = ReadU32(in);
      if (arc.ilabel >= isyms->size() || arc.olabel >= osyms->size()) {
        throw FormatError("arc label outside the symbol table");
      }
      f.AddArc(s, arc);
    }
  }
  const uint32_t num_finals = ReadCount(in);
  for (uint32_t i = 0; i < num_finals; ++i) {
    const uint32_t s = ReadU32(in);
    const float w = ReadF32(in);
    if (s >= num_states) throw FormatError("final state out of range");
    f.SetFinal(s, w);
  }
  if (num_states > 0) f.SetStart(start);
  try {
    if (num_states > 0) f.Validate();
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
  return f;
}

void WriteFstFile(const Fst& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  WriteFst(f, out);
  if (!out) throw IoError("write failed: " + path);
}

Fst ReadFstFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  return ReadFst(in);
}

}  // namespace itn
