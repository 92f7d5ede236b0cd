// mimo-rfsel  RF-chain activation and antenna selection for downlink massive MIMO
// Copyright (C) 2026 mimo-rfsel contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rfsel/experiments.hpp"

namespace rfsel
{

inline constexpr const char *kToolVersion = "0.1.0";

/// Parses one `key = value` assignment into the config. Throws
/// std::invalid_argument for unknown keys or unparsable values.
void apply_config_key(ExperimentConfig &cfg, const std::string &key, const std::string &value);

/// Flat key/value config file: one `key = value` per line, '#' comments,
/// blank lines ignored.
ExperimentConfig load_config_file(const std::filesystem::path &path);

/// Comma-separated doubles, e.g. "4,8,12".
std::vector<double> parse_value_list(const std::string &text);

/// Comma-separated algorithm names.
std::vector<Algorithm> parse_algorithm_list(const std::string &text);

/// Run manifest: the resolved configuration echo plus provenance. Every
/// output directory holds exactly one manifest describing its CSV files.
struct RunManifest
{
    std::string command;
    std::string version = kToolVersion;
    ExperimentConfig config;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs;
    // (point index, algorithm label) -> skipped trial count
    std::vector<std::tuple<int, std::string, std::uint64_t>> skips;
};

void write_manifest(const std::filesystem::path &path, const RunManifest &manifest);

/// Reads back the configuration of a previous run; re-running it reproduces
/// the CSV outputs byte for byte.
RunManifest load_manifest(const std::filesystem::path &path);

/// UTC timestamp, ISO-8601 with seconds.
std::string utc_timestamp_now();

} // namespace rfsel
