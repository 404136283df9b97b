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


#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

namespace kinfeas::cli {
namespace {

constexpr double kSize = 600.0;
constexpr double kMargin = 20.0;

struct Frame {
  double x0, y0, scale;
  double px(double x) const { return kMargin + (x - x0) * scale; }
  double py(double y) const { return kSize - kMargin - (y - y0) * scale; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string polyline(const Frame& f, const std::vector<Vec3>& pts, const std::string& style) {
  std::ostringstream out;
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (const Vec3& p : pts) out << num(f.px(p.x())) << ',' << num(f.py(p.y())) << ' ';
  out << "\"/>\n";
  return out.str();
}

}  // namespace

std::string render_trace_svg(const EpisodeTrace& trace) {
  std::vector<Vec3> base{Vec3(trace.start_base.x, trace.start_base.y, 0.0)};
  std::vector<Vec3> ee{trace.start_ee.position};
  std::vector<Vec3> desired{trace.start_ee.position};
  std::vector<Vec3> fails;
  for (const StepRecord& s : trace.steps) {
    base.emplace_back(s.base.x, s.base.y, 0.0);
    ee.push_back(s.ee.position);
    desired.push_back(s.desired.position);
    if (s.ik_failed) fails.emplace_back(s.base.x, s.base.y, 0.0);
  }
  double lo_x = base.front().x(), hi_x = lo_x, lo_y = base.front().y(), hi_y = lo_y;
  for (const auto* set : {&base, &ee, &desired}) {
    for (const Vec3& p : *set) {
      lo_x = std::min(lo_x, p.x());
      hi_x = std::max(hi_x, p.x());
      lo_y = std::min(lo_y, p.y());
      hi_y = std::max(hi_y, p.y());
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 0.5});
  const Frame f{lo_x, lo_y, (kSize - 2.0 * kMargin) / span};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << polyline(f, desired, "stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
  out << polyline(f, base, "stroke=\"#f2c200\" stroke-width=\"3\"");
  out << polyline(f, ee, "stroke=\"#1a9e1a\" stroke-width=\"2\"");
  for (const Vec3& p : fails) {
    out << "<circle cx=\"" << num(f.px(p.x())) << "\" cy=\"" << num(f.py(p.y())) << "\" r=\"2\" fill=\"#d62728\"/>\n";
  }
  out << "<circle cx=\"" << num(f.px(base.front().x())) << "\" cy=\"" << num(f.py(base.front().y()))
      << "\" r=\"4\" fill=\"#f2c200\" stroke=\"black\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace kinfeas::cli
