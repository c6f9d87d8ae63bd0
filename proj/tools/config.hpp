// SPDX-License-Identifier: Apache-2.0
//
// mmhp - multiuser hybrid precoding simulator for millimeter-wave downlinks
// Copyright (C) 2026 The mmhp authors
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

#ifndef MMHP_TOOLS_CONFIG_HPP
#define MMHP_TOOLS_CONFIG_HPP

#include "mmhp/evaluation.hpp"

#include <istream>
#include <string>
#include <vector>

namespace mmhp::cli
{

struct Settings
{
    std::string name = "custom"; // basename of the output files
    ScenarioConfig scenario;
    double histogram_snr_db = 0.0;
    double bin_width = 0.5;
    int bench_runs = 20;
    bool plot = false;
};

struct ConfigEntry
{
    std::string key;
    std::string value;
    int line = 0;
};

/// Defaults shared by every preset: K = 8, 8x8 BS array, N_RF = 8, SNR -10:5:40 dB, 1000 runs.
Settings default_settings();

/// fig3a, fig3b, fig4, fig6 or fig7. Throws ConfigError for anything else.
Settings preset(const std::string &name);

/// `key = value` lines; `#` starts a comment, blank lines are skipped. Errors carry
/// "<source>:<line>: " prefixes.
std::vector<ConfigEntry> parse_config(std::istream &in, const std::string &source);

/// Applies one setting; throws ConfigError naming the key on bad values.
void apply_setting(Settings &settings, const std::string &key, const std::string &value);

/// Applies every entry except `preset`, prefixing errors with the entry's location.
void apply_entries(Settings &settings, const std::vector<ConfigEntry> &entries, const std::string &source);

/// "a:step:b" (inclusive) or a comma-separated list, in dB.
std::vector<double> parse_snr_grid(const std::string &text);
std::vector<Algorithm> parse_algorithm_list(const std::string &text);
ArrayGeometry parse_geometry(const std::string &text);

} // namespace mmhp::cli

#endif
