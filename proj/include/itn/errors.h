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

#ifndef ITN_ERRORS_H_
#define ITN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace itn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible components: symbol tables, inventories, chunk sizes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed user data: rule files, TSV rows, XML-tagged text.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::string file, int line, int column, const std::string& what)
      : DataError(Format(file, line, column, what)),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string Format(const std::string& file, int line, int column,
                            const std::string& what) {
    std::string loc = file.empty() ? "<input>" : file;
    return loc + ":" + std::to_string(line) + ":" + std::to_string(column) +
           ": " + what;
  }

  std::string file_;
  int line_;
  int column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Binary files with a bad magic, version or checksum.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace itn

#endif  // ITN_ERRORS_H_
