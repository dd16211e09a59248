// Copyright 2026 The qmlverify Authors
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

#include <doctest.h>

#include <filesystem>
#include <string>

#include "qmv/errors.hpp"
#include "qmv/io.hpp"
#include "qmv/plot.hpp"

using namespace qmv;
namespace fs = std::filesystem;

TEST_CASE("number formatting") {
  CHECK(io::format_g(0.1, 12) == "0.1");
  CHECK(io::format_g(1.0 / 3.0, 12) == "0.333333333333");
  CHECK(io::format_exact(0.1) == "0.10000000000000001");
  double v = 0;
  CHECK(io::parse_double(io::format_exact(1.0 / 3.0), v));
  CHECK(v == 1.0 / 3.0);
}

TEST_CASE("strict token parsing") {
  double d = 0;
  std::uint64_t u = 0;
  int i = 0;
  CHECK(io::parse_double("1e-3", d));
  CHECK_FALSE(io::parse_double("1.5x", d));
  CHECK_FALSE(io::parse_double("", d));
  CHECK(io::parse_u64("18446744073709551615", u));
  CHECK_FALSE(io::parse_u64("-1", u));
  CHECK_FALSE(io::parse_int("3.0", i));
  CHECK(io::trim("  a b \t") == "a b");
  CHECK(io::split_ws(" S  1 2 ").size() == 3);
}

TEST_CASE("atomic writes") {
  const auto dir = fs::temp_directory_path() / "qmv_io_tests" / "nested";
  fs::remove_all(dir.parent_path());
  const auto path = dir / "out.txt";
  io::write_file_atomic(path, "first\n");
  io::write_file_atomic(path, "second\n");
  CHECK(io::read_file(path) == "second\n");
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().filename() == "out.txt");
  CHECK_THROWS_AS(io::read_file(dir / "missing"), IoError);
}

namespace {

CsvTable grid_table() {
  CsvTable t;
  t.header = {"trueAngle", "meanThetaHat"};
  t.rows = {{"0", "0.05"}, {"0.785398163397", "0.79"}, {"1.57079632679", "1.5"}};
  return t;
}

}  // namespace

TEST_CASE("csv output") {
  CHECK(grid_table().to_csv() ==
        "trueAngle,meanThetaHat\n0,0.05\n0.785398163397,0.79\n1.57079632679,1.5\n");
  CHECK(grid_table().column("meanThetaHat") == 1);
  CHECK(grid_table().column("nope") == -1);
}

TEST_CASE("svg rendering") {
  plot::AxesSpec axes{"t", "trueAngle", {"meanThetaHat"}, "", "x", "y", false, true};
  SUBCASE("identity line and markers") {
    const auto svg = plot::render_svg(grid_table(), axes);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    std::size_t circles = 0;
    for (auto p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++circles;
    CHECK(circles == 3);
    CHECK(svg.find("href") == std::string::npos);
  }
  SUBCASE("single point") {
    CsvTable t;
    t.header = {"trueAngle", "meanThetaHat"};
    t.rows = {{"0.5", "0.5"}};
    const auto svg = plot::render_svg(t, axes);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<circle", svg.find("<circle") + 1) == std::string::npos);
  }
  SUBCASE("deterministic bytes") {
    CHECK(plot::render_svg(grid_table(), axes) == plot::render_svg(grid_table(), axes));
  }
  SUBCASE("errors") {
    CsvTable empty;
    empty.header = {"trueAngle", "meanThetaHat"};
    CHECK_THROWS_AS(plot::render_svg(empty, axes), ValidationError);
    auto bad = axes;
    bad.xColumn = "missing";
    CHECK_THROWS_AS(plot::render_svg(grid_table(), bad), ValidationError);
  }
}
