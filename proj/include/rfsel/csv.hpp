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

#include <cstdint>
#include <string>

namespace rfsel
{

/// Locale-independent float rendering: shortest-of general format with 9
/// significant digits, '.' decimal point. Shared by all CSV output.
std::string format_float(double value);

std::string format_u64(std::uint64_t value);

} // namespace rfsel
