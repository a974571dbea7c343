// Copyright 2026 The qsteal Authors
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

#pragma once

#include <string>

#include <json.hpp>

namespace qsteal {

/// Writes `contents` to a sibling temp file, then renames it over `path`.
void write_atomic(const std::string& path, const std::string& contents);

std::string read_text(const std::string& path);

nlohmann::json read_json(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& doc);

}  // namespace qsteal
