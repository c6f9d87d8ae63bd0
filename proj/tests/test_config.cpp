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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "config.hpp"

#include <sstream>

using namespace mmhp;
using namespace mmhp::cli;

namespace
{

std::string error_of(const std::string &text)
{
    std::istringstream in(text);
    try
    {
        Settings s = default_settings();
        apply_entries(s, parse_config(in, "run.cfg"), "run.cfg");
        s.scenario.validate();
    }
    catch (const ConfigError &e)
    {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("snr grid syntax")
{
    CHECK(parse_snr_grid("-10:5:40") == std::vector<double>{-10, -5, 0, 5, 10, 15, 20, 25, 30, 35, 40});
    CHECK(parse_snr_grid("0:2.5:5") == std::vector<double>{0, 2.5, 5});
    CHECK(parse_snr_grid("3") == std::vector<double>{3});
    CHECK(parse_snr_grid("0, 10,20") == std::vector<double>{0, 10, 20});
    CHECK_THROWS_AS(parse_snr_grid("0:0:10"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("10:5:0"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("abc"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("inf"), ConfigError);
}

TEST_CASE("algorithm lists and geometries")
{
    CHECK(parse_algorithm_list("LISA, LC-H-LISA,BD") ==
          std::vector<Algorithm>{Algorithm::lisa, Algorithm::lc_h_lisa, Algorithm::bd});
    CHECK_THROWS_AS(parse_algorithm_list(""), ConfigError);
    CHECK_THROWS_AS(parse_algorithm_list(" , "), ConfigError);
    CHECK_THROWS_AS(parse_algorithm_list("LISA,ZF"), ConfigError);
    CHECK(parse_geometry("4x4") == ArrayGeometry(4, 4));
    CHECK(parse_geometry("2 x 1") == ArrayGeometry(2, 1));
    CHECK_THROWS_AS(parse_geometry("0x4"), ConfigError);
    CHECK_THROWS_AS(parse_geometry("16"), ConfigError);
}

TEST_CASE("presets")
{
    const Settings a = preset("fig3a");
    CHECK(a.scenario.num_paths == 1);
    CHECK(a.scenario.ms == ArrayGeometry(1, 1));
    CHECK(a.scenario.algorithms.size() == 7);
    CHECK(a.scenario.runs == 1000);
    CHECK(a.scenario.snr_db.size() == 11);
    CHECK(preset("fig3b").scenario.num_paths == 3);

    const Settings f4 = preset("fig4");
    CHECK(f4.scenario.algorithms == std::vector<Algorithm>{Algorithm::lisa, Algorithm::h_lisa});
    CHECK(f4.histogram_snr_db == 0.0);

    const Settings f6 = preset("fig6");
    CHECK(f6.scenario.ms.size() == 2);
    CHECK(f6.scenario.effective_n_rf_ms() == 2);
    CHECK(f6.scenario.algorithms.back() == Algorithm::bd);

    const Settings f7 = preset("fig7");
    CHECK(f7.scenario.ms.size() == 16);
    CHECK(f7.scenario.effective_n_rf_ms() == 2);
    CHECK(f7.scenario.algorithms.size() == 9);

    for (const char *name : {"fig3a", "fig3b", "fig4", "fig6", "fig7"})
        CHECK_NOTHROW(preset(name).scenario.validate());
    CHECK_THROWS_AS(preset("fig5"), ConfigError);
}

TEST_CASE("config file parsing")
{
    std::istringstream in("# comment\n\npreset = fig6\nusers = 4   # trailing\nn_rf = 4\nsnr_db = 0:10:20\n"
                          "ms_array = 2x1\nplot = true\n");
    const auto entries = parse_config(in, "x.cfg");
    REQUIRE(entries.size() == 6);
    CHECK(entries[0].key == "preset");
    CHECK(entries[0].line == 3);
    CHECK(entries[1].value == "4");
    Settings s = preset(entries[0].value);
    apply_entries(s, entries, "x.cfg");
    CHECK(s.scenario.num_users == 4);
    CHECK(s.scenario.n_rf == 4);
    CHECK(s.scenario.snr_db == std::vector<double>{0, 10, 20});
    CHECK(s.plot);
    CHECK(s.scenario.algorithms.back() == Algorithm::bd); // preset value kept
}

TEST_CASE("errors carry the line number")
{
    CHECK(error_of("users = 8\nbogus = 1\n") == "run.cfg:2: unknown key 'bogus'");
    CHECK(error_of("users = eight\n") == "run.cfg:1: users: expected an integer, got 'eight'");
    CHECK(error_of("\n\nusers\n") == "run.cfg:3: expected 'key = value'");
    CHECK(error_of("users =\n") == "run.cfg:1: missing value for 'users'");
    CHECK(error_of("runs = 5\nruns = 6\n") == "run.cfg:2: duplicate key 'runs' (first set on line 1)");
    CHECK(error_of("algorithms = LISA,FOO\n") == "run.cfg:1: algorithms: unknown algorithm 'FOO'");
    CHECK(error_of("plot = maybe\n") == "run.cfg:1: plot: expected true or false, got 'maybe'");
    CHECK(error_of("algorithms = LISA\nruns = 3\n").empty());
}

TEST_CASE("inconsistent dimensions are rejected by validation")
{
    CHECK_FALSE(error_of("algorithms = LISA\nn_rf = 65\n").empty());
    CHECK_FALSE(error_of("algorithms = LISA\nms_array = 2x1\nn_rf_ms = 3\n").empty());
    CHECK_FALSE(error_of("algorithms = 2SMUHPA\nusers = 4\n").empty());
    CHECK_FALSE(error_of("algorithms = BD\nms_array = 3x1\n").empty());
    CHECK_FALSE(error_of("algorithms = LISA\nruns = 0\n").empty());
}
