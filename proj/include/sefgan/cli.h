// sefgan/cli.h

// Copyright 2026 The SEFGAN Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEFGAN_CLI_H_
#define SEFGAN_CLI_H_

#include <string>
#include <string_view>

#include "sefgan/error.h"

namespace sefgan {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Usage-class errors (bad flags, missing files, invalid configs) map to
/// kExitUsage, everything else to kExitRuntime.
int ExitCodeFor(ErrorKind kind);

/// Single machine-parsable line: error kind=<kind> msg="<escaped message>".
std::string FormatErrorLine(std::string_view kind, const std::string &msg);

/// Entry point of the `sefgan` tool. Never throws.
int RunCli(int argc, const char *const *argv);

}  // namespace sefgan

#endif  // SEFGAN_CLI_H_
