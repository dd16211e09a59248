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

#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <stdexcept>

#include "qmv/errors.hpp"
#include "qmv/io.hpp"
#include "qmv/xharness.hpp"

using namespace qmv;
using namespace qmv::xharness;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qmv_xharness_tests" / name;
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("kind names round trip") {
  for (auto k : {ExperimentKind::AngleGrid, ExperimentKind::NSweepAngle, ExperimentKind::NSweepFidelity,
                 ExperimentKind::SoundnessSweep, ExperimentKind::CompletenessSweep,
                 ExperimentKind::TrainAndVerify, ExperimentKind::MultiGroup}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_kind("fig-3"), ValidationError);
}

TEST_CASE("trial seeds") {
  const auto a = trial_seeds(1, 2, 3), b = trial_seeds(1, 2, 3);
  CHECK(a.oracle == b.oracle);
  CHECK(a.prover == b.prover);
  CHECK(a.protocol == b.protocol);
  CHECK(a.oracle != a.prover);
  CHECK(trial_seeds(1, 2, 4).oracle != a.oracle);
  CHECK(trial_seeds(1, 3, 3).oracle != a.oracle);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(50,
                               [](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  CHECK_NOTHROW(parallel_for(0, [](std::size_t) { throw std::runtime_error("never"); }));
}

TEST_CASE("parse_angle") {
  CHECK(parse_angle("0.5") == 0.5);
  CHECK(parse_angle("0.3pi") == Approx(0.3 * kPi));
  CHECK(parse_angle(" 0.5*pi ") == Approx(kPi / 2));
  CHECK(parse_angle("pi") == Approx(kPi));
  CHECK_THROWS_AS(parse_angle("half"), ValidationError);
  CHECK_THROWS_AS(parse_angle(""), ValidationError);
}

TEST_CASE("config text") {
  const auto m = parse_config_text("# comment\nseed = 7\n\n  n=300  # trailing\ngamma = 0.2\n");
  CHECK(m.size() == 3);
  CHECK(m.at("seed") == "7");
  CHECK(m.at("n") == "300");
  CHECK(m.at("gamma") == "0.2");
  CHECK_THROWS_AS(parse_config_text("seed 7\n"), ValidationError);
  CHECK_THROWS_AS(parse_config_text("seed =\n"), ValidationError);
  CHECK_THROWS_AS(load_config_file(scratch("none") / "missing.cfg"), IoError);
}

TEST_CASE("parameters are validated before any work") {
  auto spec = [](ExperimentKind k, ParamMap p) { return ExperimentSpec{k, std::move(p), scratch("v")}; };
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::AngleGrid, {{"claim", "1"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::AngleGrid, {{"trials", "x"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::AngleGrid, {{"grid-points", "1"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::AngleGrid, {{"orientation", "diag"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::NSweepAngle, {{"n-list", "300,90"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::NSweepAngle, {{"n-list", "2,90"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::NSweepAngle, {{"n-list", "30,,90"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::SoundnessSweep, {{"trials", "99"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::SoundnessSweep, {{"strategies", "oracle"}})),
                  ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::CompletenessSweep, {{"gamma", "2"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::TrainAndVerify, {{"claim", "2"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::TrainAndVerify, {{"layers", "0"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::MultiGroup, {{"groups", "1"}})), ValidationError);
  CHECK_THROWS_AS(validate_spec(spec(ExperimentKind::MultiGroup, {{"exact", "maybe"}})), ValidationError);
  CHECK_NOTHROW(validate_spec(spec(ExperimentKind::TrainAndVerify, {{"claim", "0.3pi"}, {"n", "900"}})));
  // Nothing was written by failed validation.
  CHECK_FALSE(fs::exists(scratch("v")));
}

TEST_CASE("angle grid interior point") {
  AngleGridSettings s;
  s.gridPoints = 3;  // 0, pi/4, pi/2
  const auto rows = run_angle_grid(s);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].trueAngle == 0.0);
  CHECK(rows[1].trueAngle == Approx(kPi / 4));
  CHECK(rows[2].trueAngle == kPi / 2);
  CHECK(std::abs(rows[1].meanThetaHat - kPi / 4) <= 0.03);
  CHECK(rows[1].trials == 20);
}

TEST_CASE("n sweep on a trained embedding") {
  NSweepSettings s;
  s.nList = {90, 9000};
  const auto angle = run_n_sweep(s, SweepQuantity::Angle);
  const auto fid = run_n_sweep(s, SweepQuantity::Fidelity);
  REQUIRE(angle.size() == 2);
  CHECK(angle[0].trueValue == angle[1].trueValue);
  CHECK(fid[0].trueValue == fid[1].trueValue);
  CHECK(std::abs(angle[1].estimate - angle[1].trueValue) <= 0.05);
  CHECK(std::abs(fid[1].estimate - fid[1].trueValue) <= 0.05);
  CHECK(std::cos(angle[0].trueValue) * std::cos(angle[0].trueValue) ==
        Approx(fid[0].trueValue).epsilon(1e-12));
}

TEST_CASE("completeness sweep") {
  CompletenessSettings s;
  const auto rows = run_completeness_sweep(s);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].n == 3000);
  CHECK(rows[2].acceptRate >= 0.99);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].acceptRate >= rows[k - 1].acceptRate);
}

TEST_CASE("soundness sweep") {
  SoundnessSettings s;
  s.trials = 100;
  const auto rows = run_soundness_sweep(s);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.acceptRate <= 0.01);
}

TEST_CASE("train and verify") {
  TrainVerifySettings s;
  const auto rep = run_train_and_verify(s);
  const auto& v = rep.protocol.verdict;
  CHECK(std::abs(v.thetaHat - rep.model.trueAngle) <= 0.05);
  CHECK(verifier::decide(v.thetaHat, rep.protocol.transcript.config) == v.flag);
  CHECK(rep.model.history.back() < rep.model.history.front());
  CHECK(rep.protocol.transcript.config.claimedAngle == Approx(0.3 * kPi));
}

TEST_CASE("multi group") {
  MultiGroupSettings s;
  s.exact = true;
  const auto exact = run_multi_group(s);
  for (double a : exact.estimated.angles) {
    if (a != 0.0) CHECK(std::abs(a - kPi / 3) <= 1e-10);
  }
  s.exact = false;
  const auto sampled = run_multi_group(s);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::abs(sampled.estimated.angle(i, j) - sampled.trueAngles[i * 3 + j]) <= 0.1);
    }
  }
}

TEST_CASE("run_experiment writes stable artifacts") {
  struct Case {
    ExperimentKind kind;
    ParamMap params;
    std::string header;
  };
  const std::vector<Case> cases = {
      {ExperimentKind::AngleGrid, {{"trials", "2"}, {"grid-points", "3"}, {"n", "300"}},
       "trueAngle,meanThetaHat,stdThetaHat,trials"},
      {ExperimentKind::NSweepAngle, {{"n-list", "30,300"}, {"iterations", "50"}}, "N,estimate,trueValue"},
      {ExperimentKind::NSweepFidelity, {{"n", "300"}, {"iterations", "50"}}, "N,estimate,trueValue"},
      {ExperimentKind::SoundnessSweep, {{"n", "90"}, {"trials", "100"}, {"strategies", "random-assign"}},
       "strategy,N,acceptRate,meanThetaHat"},
      {ExperimentKind::CompletenessSweep, {{"n-list", "30,90"}, {"trials", "100"}}, "N,acceptRate"},
      {ExperimentKind::TrainAndVerify, {{"n", "300"}, {"iterations", "20"}}, "iteration,cost"},
      {ExperimentKind::MultiGroup, {{"groups", "3"}, {"n", "300"}}, "pair,i,j,thetaHat,trueAngle"},
  };
  for (const auto& c : cases) {
    CAPTURE(to_string(c.kind));
    const auto dir_a = scratch(std::string(to_string(c.kind)) + "-a");
    const auto dir_b = scratch(std::string(to_string(c.kind)) + "-b");
    const auto a = run_experiment({c.kind, c.params, dir_a});
    const auto b = run_experiment({c.kind, c.params, dir_b});
    CHECK(first_line(a.table.to_csv()) == c.header);
    REQUIRE(a.files.size() == b.files.size());
    CHECK(fs::exists(dir_a / (a.name + ".csv")));
    CHECK(fs::exists(dir_a / (a.name + ".svg")));
    CHECK(fs::exists(dir_a / (a.name + ".txt")));
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      CHECK(io::read_file(a.files[i]) == io::read_file(b.files[i]));
    }
    for (const auto& row : a.table.rows) CHECK(row.size() == a.table.header.size());
  }
}

TEST_CASE("train-verify transcript replays") {
  const auto dir = scratch("tv-replay");
  const auto out = run_experiment({ExperimentKind::TrainAndVerify, {{"n", "600"}, {"iterations", "30"}}, dir});
  const auto path = dir / "train-verify.transcript";
  REQUIRE(fs::exists(path));
  CHECK_NOTHROW(verifier::transcript_replay(path));
  CHECK(out.report.find("decide_consistent = yes") != std::string::npos);
}

TEST_CASE("csv cells carry 12 significant digits") {
  CHECK(cell(kPi) == "3.14159265359");
  CHECK(cell(0.1) == "0.1");
}
