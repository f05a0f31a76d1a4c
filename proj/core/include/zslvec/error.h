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

#ifndef ZSLVEC_ERROR_H_
#define ZSLVEC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zslvec {

enum class ErrorCode {
  kDimension,
  kParse,
  kIo,
  kValidation,
  kMissingToken,
  kNumerical,
  kConfig,
  kVersion,
  kCorrupt,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// lets front ends map failures onto exit-status categories.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal diagnostics collected by loaders and builders. Operations take an
// optional sink; a null sink routes messages to stderr.
class Warnings {
 public:
  void Add(std::string message);
  const std::vector<std::string>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }
  bool Contains(std::string_view needle) const;

 private:
  std::vector<std::string> messages_;
};

void Warn(Warnings* sink, std::string message);

}  // namespace zslvec

#endif  // ZSLVEC_ERROR_H_
