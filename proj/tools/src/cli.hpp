// Copyright 2026 The Kinfeas Authors
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


#ifndef KINFEAS_TOOLS_CLI_HPP_
#define KINFEAS_TOOLS_CLI_HPP_

#include <iosfwd>

namespace kinfeas::cli {

// Exit statuses shared by all commands.
enum ExitCode : int {
  kOk = 0,
  kBadConfig = 1,
  kMissingFile = 2,
  kMismatch = 3,
  kUnwritable = 4,
};

// Entry point for `kinfeas <command> [flags]`; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kinfeas::cli

#endif  // KINFEAS_TOOLS_CLI_HPP_
