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

#include "itn/logging.h"

#include <spdlog/spdlog.h>

#include "itn/errors.h"

namespace itn {

void SetLogLevel(const std::string& level) {
  spdlog::level::level_enum l = spdlog::level::from_str(level);
  // from_str maps unknown names to off.
  if (l == spdlog::level::off && level != "off") {
    throw ConfigError("unknown log level: " + level);
  }
  spdlog::set_level(l);
}

}  // namespace itn
