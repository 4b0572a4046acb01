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

#ifndef ITN_TEXT_H_
#define ITN_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itn {

std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(std::span<const std::string> parts, std::string_view sep);
std::string_view Trim(std::string_view s);

// Code points of a UTF-8 string, each as its own string. Invalid bytes are
// passed through one at a time.
std::vector<std::string> Utf8Chars(std::string_view s);

// Reads a whole file; throws IoError naming the path.
std::string ReadTextFile(const std::string& path);
std::vector<std::string> ReadLines(const std::string& path);

}  // namespace itn

#endif  // ITN_TEXT_H_
