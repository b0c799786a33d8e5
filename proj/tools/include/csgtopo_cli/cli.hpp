// Copyright 2026 The csgtopo Authors.
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

#pragma once

#include <exception>
#include <ostream>

namespace csgtopo::cli {

/// Exit codes of the csgtopo tool.
enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kLanguageError = 3,
  kInternalError = 4,
};

/// Exit code for an exception escaping a command: language errors 3,
/// internal failures 4, every other input or validation failure 2.
int exit_code_for(const std::exception& error);

/// Runs the command line `argv` and returns the exit code. Regular output
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csgtopo::cli
