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

#include <stdexcept>
#include <string>

namespace rfsel
{

// Parameter and configuration problems (bad flags, malformed config files,
// invalid dimensions) map to std::invalid_argument / std::domain_error.
// The types below mark conditions that can only be detected at run time.

// Gram matrix is numerically singular (condition estimate beyond the limit).
struct singular_gram_error : std::runtime_error
{
    explicit singular_gram_error(const std::string &msg) : std::runtime_error(msg) {}
};

// A subset with fewer antennas than users cannot support zero forcing.
struct infeasible_subset_error : std::invalid_argument
{
    explicit infeasible_subset_error(const std::string &msg) : std::invalid_argument(msg) {}
};

// The circuit power budget cannot host K active chains with positive transmit power.
struct infeasible_budget_error : std::runtime_error
{
    explicit infeasible_budget_error(const std::string &msg) : std::runtime_error(msg) {}
};

// An exhaustive enumeration would exceed the configured subset cap.
struct capacity_error : std::runtime_error
{
    explicit capacity_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Aggregates with different sweep schemas cannot be merged.
struct merge_error : std::invalid_argument
{
    explicit merge_error(const std::string &msg) : std::invalid_argument(msg) {}
};

} // namespace rfsel
