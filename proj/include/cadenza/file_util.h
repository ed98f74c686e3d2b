// Copyright 2026 The Cadenza Eval Authors. All Rights Reserved.
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

#ifndef CADENZA_FILE_UTIL_H_
#define CADENZA_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cadenza {

absl::StatusOr<std::string> ReadTextFile(const std::filesystem::path& path);

// Writes `contents`, creating parent directories as needed.
absl::Status WriteTextFile(const std::filesystem::path& path,
                           std::string_view contents);

}  // namespace cadenza

#endif  // CADENZA_FILE_UTIL_H_
