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


#ifndef KINFEAS_TOOLS_SVG_HPP_
#define KINFEAS_TOOLS_SVG_HPP_

#include <string>

#include "kinfeas/metrics.hpp"

namespace kinfeas::cli {

// Top-down view of one episode: base path in yellow, end-effector path in
// green, desired end-effector path dashed grey, IK failures as red dots.
std::string render_trace_svg(const EpisodeTrace& trace);

}  // namespace kinfeas::cli

#endif  // KINFEAS_TOOLS_SVG_HPP_
