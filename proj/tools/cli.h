/*
 * Copyright 2026 The zslvec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ZSLVEC_TOOLS_CLI_H_
#define ZSLVEC_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

#include "zslvec/error.h"

namespace zslvec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitConfig = 4;

int ExitCodeFor(ErrorCode code);

// Runs one invocation. `args` excludes the program name. Normal output goes
// to `out`; diagnostics and warnings to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace zslvec::cli

#endif  // ZSLVEC_TOOLS_CLI_H_
