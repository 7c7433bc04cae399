//
// Copyright 2026 The Lipschitz DP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "lipdp/format.h"

#include <cstdio>

namespace lipdp {

std::string FormatDouble(double value) {
  char buffer[32];
  const int len = std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return std::string(buffer, len);
}

}  // namespace lipdp
