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

// Minimal self-contained SVG 1.1 line/scatter plots from CSV tables.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qmv/table.hpp"

namespace qmv::plot {

struct AxesSpec {
  std::string title;
  std::string xColumn;
  std::vector<std::string> yColumns;
  // When set, rows are split into one series per distinct value of this
  // column (e.g. one line per adversary strategy).
  std::string groupColumn;
  std::string xLabel;
  std::string yLabel;
  bool logX = false;
  bool identityLine = false;  // dashed y = x reference
};

/// Deterministic: identical input yields identical bytes.
std::string render_svg(const CsvTable& table, const AxesSpec& axes);

void emit_plot(const CsvTable& table, const AxesSpec& axes, const std::filesystem::path& path);

}  // namespace qmv::plot
