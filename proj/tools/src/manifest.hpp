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


#ifndef KINFEAS_TOOLS_MANIFEST_HPP_
#define KINFEAS_TOOLS_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kinfeas::cli {

// Hex SHA-1 of "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(const std::string& content);

// {"command", "config", "hash", "out", "outputs"}; the hash covers the
// compact dump of `config` only, so it is independent of the output location.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             const std::filesystem::path& out_dir,
                             const std::vector<std::string>& outputs);

// Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace kinfeas::cli

#endif  // KINFEAS_TOOLS_MANIFEST_HPP_
