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

#include "zslvec/error.h"

#include <cstdio>
#include <utility>

namespace zslvec {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimension:
      return "dimension";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kMissingToken:
      return "missing-token";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kVersion:
      return "version";
    case ErrorCode::kCorrupt:
      return "corrupt";
  }
  return "unknown";
}

void Warnings::Add(std::string message) {
  messages_.push_back(std::move(message));
}

bool Warnings::Contains(std::string_view needle) const {
  for (const auto& m : messages_) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

void Warn(Warnings* sink, std::string message) {
  if (sink != nullptr) {
    sink->Add(std::move(message));
  } else {
    std::fprintf(stderr, "warning: %s\n", message.c_str());
  }
}

}  // namespace zslvec
