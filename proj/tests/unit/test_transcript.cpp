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
#include <numbers>
#include <string>

#include "qmv/errors.hpp"
#include "qmv/io.hpp"
#include "qmv/verifier.hpp"

using namespace qmv;
using namespace qmv::verifier;
namespace fs = std::filesystem;

namespace {

ProtocolResult sample_run(std::uint64_t seed, std::uint64_t n = 60) {
  auto p = provers::synthetic_angle_prover({0.9, 0.1, seed}, embedding::blob_label);
  ProtocolConfig cfg;
  cfg.nPerGroup = n;
  cfg.seed = seed;
  cfg.claimedAngle = 0.3 * std::numbers::pi;
  return run_protocol({embedding::Distribution::SeparableBlobs, 0.3, seed + 1}, *p, cfg);
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qmv_transcript_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string replace_first(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("serialization round trips") {
  const auto r = sample_run(1);
  const auto text = transcript_serialize(r.transcript);
  const auto parsed = transcript_parse(text);
  CHECK(parsed.config.nPerGroup == r.transcript.config.nPerGroup);
  CHECK(parsed.config.gamma == r.transcript.config.gamma);
  CHECK(parsed.config.claimedAngle == r.transcript.config.claimedAngle);
  CHECK(parsed.config.seed == r.transcript.config.seed);
  CHECK(parsed.sends == r.transcript.sends);
  CHECK(parsed.records == r.transcript.records);
  CHECK(parsed.verdict.flag == r.verdict.flag);
  CHECK(parsed.verdict.fidelityHat == r.verdict.fidelityHat);
  CHECK(transcript_serialize(parsed) == text);
}

TEST_CASE("header and verdict layout") {
  const auto text = transcript_serialize(sample_run(2).transcript);
  CHECK(text.rfind("QMVT 1 n=60 gamma=0.10000000000000001 claim=0.94247779607693793 seed=2 mode=streaming\n", 0) == 0);
  const auto last = text.substr(text.rfind('\n', text.size() - 2) + 1);
  CHECK(last.rfind("V ", 0) == 0);
  CHECK(text.find("label") == std::string::npos);
}

TEST_CASE("write then replay reproduces the verdict") {
  for (std::uint64_t seed = 3; seed < 6; ++seed) {
    const auto r = sample_run(seed, 120);
    const auto path = scratch("run" + std::to_string(seed) + ".qmvt");
    transcript_write(r.transcript, path);
    const auto v = transcript_replay(path);
    CHECK(v.flag == r.verdict.flag);
    CHECK(v.thetaHat == r.verdict.thetaHat);
    CHECK(v.fidelityHat == r.verdict.fidelityHat);
    CHECK(v.rhoPsiHat == r.verdict.rhoPsiHat);
    CHECK(v.rhoPhiHat == r.verdict.rhoPhiHat);
  }
}

TEST_CASE("malformed transcripts") {
  const auto text = transcript_serialize(sample_run(7).transcript);
  SUBCASE("truncated in the middle") {
    CHECK_THROWS_AS(transcript_parse(text.substr(0, text.size() / 2)), ParseError);
  }
  SUBCASE("missing verdict line") {
    const auto cut = text.substr(0, text.rfind("V "));
    CHECK_THROWS_AS(transcript_parse(cut), ParseError);
  }
  SUBCASE("missing final newline") {
    CHECK_THROWS_AS(transcript_parse(text.substr(0, text.size() - 1)), ParseError);
  }
  SUBCASE("empty") { CHECK_THROWS_AS(transcript_parse(""), ParseError); }
  SUBCASE("unknown version") {
    CHECK_THROWS_AS(transcript_parse(replace_first(text, "QMVT 1 ", "QMVT 2 ")), ParseError);
  }
  SUBCASE("label injected into a send event") {
    const auto pos = text.find("\nS ");
    const auto eol = text.find('\n', pos + 1);
    std::string bad = text;
    bad.insert(eol, " 1");
    CHECK_THROWS_AS(transcript_parse(bad), ValidationError);
  }
  SUBCASE("bad measurement fields") {
    const auto pos = text.find("\nM ") + 1;
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol - pos);
    auto bad = text;
    bad.replace(pos, line.size(), line.substr(0, line.size() - 1) + "7");
    CHECK_THROWS_AS(transcript_parse(bad), ParseError);
  }
  SUBCASE("trailing content") { CHECK_THROWS_AS(transcript_parse(text + "S 0 0 0\n"), ParseError); }
}

TEST_CASE("tampered verdicts fail replay") {
  const auto r = sample_run(8);
  const auto text = transcript_serialize(r.transcript);
  const std::string flag = r.verdict.flag == Flag::Accept ? "V ACCEPT" : "V REJECT";
  const std::string other = r.verdict.flag == Flag::Accept ? "V REJECT" : "V ACCEPT";
  CHECK_THROWS_AS(transcript_replay_text(replace_first(text, flag, other)), ProtocolError);
  CHECK_NOTHROW(transcript_replay_text(text));
}

TEST_CASE("reading a missing file") {
  CHECK_THROWS_AS(transcript_read(scratch("does-not-exist.qmvt")), IoError);
}
