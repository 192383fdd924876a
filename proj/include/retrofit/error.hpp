// Copyright 2026 The Retrofit Authors
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace retrofit {

enum class ErrorKind {
  MissingKey,
  DuplicateUnit,
  NotAnArray,
  UnreadableFile,
  UnitOutsideRoot,
  OverlappingEdits,
  StoreWriteFailure,
  StoreSchemaTooNew,
  CopyFailure,
  LineOutOfRange,
  InvalidConfig,
  MalformedTrace,
};

std::string_view to_string(ErrorKind kind);

/// Hard failure raised by the loaders, the state store and the orchestrator.
/// Recoverable conditions inside a single file are reported as diagnostics or
/// warnings instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace retrofit
