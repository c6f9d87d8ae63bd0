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

#ifndef MMHP_TOOLS_PLOT_HPP
#define MMHP_TOOLS_PLOT_HPP

#include "mmhp/evaluation.hpp"

#include <string>

namespace mmhp::cli
{

/// Mean sum rate against SNR, one polyline per algorithm.
std::string render_curves_svg(const MonteCarloResult &result, const std::string &title);

} // namespace mmhp::cli

#endif
