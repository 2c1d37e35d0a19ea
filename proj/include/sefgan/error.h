// sefgan/error.h

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

#ifndef SEFGAN_ERROR_H_
#define SEFGAN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sefgan {

enum class ErrorKind {
  kShape,       // tensor / signal dimensions disagree
  kLength,      // signal length not compatible with the squeeze factor
  kConfig,      // invalid or inconsistent configuration
  kNumerical,   // non-finite value or singular matrix
  kDegenerate,  // zero-energy signal where energy is required
  kFormat,      // bad file contents (wav header, sample rate, ...)
  kIo,          // file could not be opened / read / written
  kVersion,     // checkpoint format version or config hash mismatch
  kUsage,       // bad command-line usage
};

std::string_view ErrorKindName(ErrorKind kind);

/// All library failures are reported with this exception. The kind lets the
/// CLI map failures to exit codes and machine-parsable messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

}  // namespace sefgan

#endif  // SEFGAN_ERROR_H_
