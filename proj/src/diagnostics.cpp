// Copyright 2026 The rdr-sim Authors
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

#include "rdr/diagnostics.hpp"

#include <utility>

namespace rdr {

namespace {
thread_local std::vector<std::string> g_warnings;
}

void report_warning(std::string message) { g_warnings.push_back(std::move(message)); }

std::vector<std::string> take_warnings() {
    std::vector<std::string> out;
    out.swap(g_warnings);
    return out;
}

}  // namespace rdr
