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

#ifndef ITN_LOGGING_H_
#define ITN_LOGGING_H_

#include <string>

namespace itn {

// Sets the library log threshold: trace, debug, info, warn, error or off.
// Throws ConfigError for other names.
void SetLogLevel(const std::string& level);

}  // namespace itn

#endif  // ITN_LOGGING_H_
