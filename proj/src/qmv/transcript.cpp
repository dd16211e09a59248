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

#include <string>
#include <unordered_set>

#include "qmv/errors.hpp"
#include "qmv/io.hpp"
#include "qmv/verifier.hpp"

namespace qmv::verifier {

namespace {

constexpr std::string_view kMagic = "QMVT";

std::string_view mode_name(ProverMode m) {
  return m == ProverMode::Streaming ? "streaming" : "batched";
}

[[noreturn]] void fail(std::size_t line_no, const std::string& msg) {
  throw ParseError("transcript line " + std::to_string(line_no) + ": " + msg);
}

std::string_view expect_key(std::string_view tok, std::string_view key, std::size_t line_no) {
  if (tok.size() <= key.size() || tok.substr(0, key.size()) != key ||
      tok[key.size()] != '=') {
    fail(line_no, "expected '" + std::string(key) + "=...'");
  }
  return tok.substr(key.size() + 1);
}

ProtocolConfig parse_header(std::string_view line) {
  const auto tok = io::split_ws(line);
  if (tok.size() < 2 || tok[0] != kMagic) fail(1, "not a transcript (missing QMVT header)");
  int version = 0;
  if (!io::parse_int(tok[1], version)) fail(1, "bad version field");
  if (version != kTranscriptVersion) {
    fail(1, "unsupported transcript version " + std::string(tok[1]));
  }
  if (tok.size() != 7) fail(1, "config record must have 5 fields");
  ProtocolConfig cfg;
  if (!io::parse_u64(expect_key(tok[2], "n", 1), cfg.nPerGroup)) fail(1, "bad n");
  if (!io::parse_double(expect_key(tok[3], "gamma", 1), cfg.gamma)) fail(1, "bad gamma");
  if (!io::parse_double(expect_key(tok[4], "claim", 1), cfg.claimedAngle)) fail(1, "bad claim");
  if (!io::parse_u64(expect_key(tok[5], "seed", 1), cfg.seed)) fail(1, "bad seed");
  const auto mode = expect_key(tok[6], "mode", 1);
  if (mode == "streaming") {
    cfg.mode = ProverMode::Streaming;
  } else if (mode == "batched") {
    cfg.mode = ProverMode::BatchedReplay;
  } else {
    fail(1, "unknown mode");
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    fail(1, e.what());
  }
  return cfg;
}

}  // namespace

std::string format_theta(double thetaHat) { return io::format_g(thetaHat, 12); }

std::string transcript_serialize(const Transcript& t) {
  std::string out;
  out.reserve(64 * (t.sends.size() + t.records.size() + 2));
  const auto& c = t.config;
  out += std::string(kMagic) + " " + std::to_string(kTranscriptVersion) +
         " n=" + std::to_string(c.nPerGroup) + " gamma=" + io::format_exact(c.gamma) +
         " claim=" + io::format_exact(c.claimedAngle) + " seed=" + std::to_string(c.seed) +
         " mode=" + std::string(mode_name(c.mode)) + "\n";
  for (const auto& s : t.sends) {
    out += "S " + std::to_string(s.index) + " " + io::format_exact(s.x1) + " " +
           io::format_exact(s.x2) + "\n";
  }
  for (const auto& r : t.records) {
    out += "M " + std::to_string(r.requestIndex) + " " + std::to_string(r.group) + " " +
           std::to_string(static_cast<int>(r.basis)) + " " + std::to_string(r.outcome) + "\n";
  }
  out += "V " + std::string(to_string(t.verdict.flag)) + " " + format_theta(t.verdict.thetaHat) +
         " " + io::format_exact(t.verdict.fidelityHat) + "\n";
  return out;
}

Transcript transcript_parse(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) {
        // A final line without its newline means the write was cut short.
        fail(lines.size() + 1, "truncated (missing line terminator)");
      }
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }
  if (lines.empty()) throw ParseError("transcript is empty");

  Transcript t;
  t.config = parse_header(lines[0]);
  const std::uint64_t expected = 2 * t.config.nPerGroup;

  std::size_t i = 1;
  std::unordered_set<std::uint64_t> send_ids;
  for (; i < lines.size() && !lines[i].empty() && lines[i][0] == 'S'; ++i) {
    const auto tok = io::split_ws(lines[i]);
    if (tok.size() > 4) {
      throw ValidationError("transcript line " + std::to_string(i + 1) +
                            ": send event carries extra fields; sends must not contain labels");
    }
    if (tok.size() != 4 || tok[0] != "S") fail(i + 1, "malformed send event");
    SendEvent s;
    if (!io::parse_u64(tok[1], s.index) || !io::parse_double(tok[2], s.x1) ||
        !io::parse_double(tok[3], s.x2)) {
      fail(i + 1, "malformed send event");
    }
    if (!send_ids.insert(s.index).second) fail(i + 1, "duplicate request index");
    t.sends.push_back(s);
  }
  std::unordered_set<std::uint64_t> record_ids;
  std::array<std::uint64_t, 2> per_group{};
  for (; i < lines.size() && !lines[i].empty() && lines[i][0] == 'M'; ++i) {
    const auto tok = io::split_ws(lines[i]);
    if (tok.size() != 5 || tok[0] != "M") fail(i + 1, "malformed measurement record");
    MeasurementRecord r;
    int basis = -1;
    if (!io::parse_u64(tok[1], r.requestIndex) || !io::parse_int(tok[2], r.group) ||
        !io::parse_int(tok[3], basis) || !io::parse_int(tok[4], r.outcome)) {
      fail(i + 1, "malformed measurement record");
    }
    if (r.group != 0 && r.group != 1) fail(i + 1, "group must be 0 or 1");
    if (basis < 0 || basis > 2) fail(i + 1, "basis must be 0, 1 or 2");
    if (r.outcome != 0 && r.outcome != 1) fail(i + 1, "outcome must be 0 or 1");
    if (!send_ids.contains(r.requestIndex)) fail(i + 1, "record refers to an unknown request");
    if (!record_ids.insert(r.requestIndex).second) fail(i + 1, "duplicate measurement record");
    r.basis = static_cast<MeasBasis>(basis);
    ++per_group[static_cast<std::size_t>(r.group)];
    t.records.push_back(r);
  }
  if (i >= lines.size()) fail(i + 1, "truncated (missing verdict record)");
  if (t.sends.size() != expected) fail(i + 1, "send count does not equal 2N");
  if (t.records.size() != expected) fail(i + 1, "record count does not equal 2N");
  if (per_group[0] != t.config.nPerGroup || per_group[1] != t.config.nPerGroup) {
    fail(i + 1, "each group must have exactly N records");
  }

  const auto tok = io::split_ws(lines[i]);
  if (tok.size() != 4 || tok[0] != "V") fail(i + 1, "malformed verdict record");
  if (tok[1] == "ACCEPT") {
    t.verdict.flag = Flag::Accept;
  } else if (tok[1] == "REJECT") {
    t.verdict.flag = Flag::Reject;
  } else {
    fail(i + 1, "verdict flag must be ACCEPT or REJECT");
  }
  if (!io::parse_double(tok[2], t.verdict.thetaHat) ||
      !io::parse_double(tok[3], t.verdict.fidelityHat)) {
    fail(i + 1, "malformed verdict numbers");
  }
  if (i + 1 != lines.size()) fail(i + 2, "unexpected content after the verdict record");

  // Derived fields are recomputed, never trusted from the file.
  try {
    const Verdict v = verdict_from_records(t.config, t.records, &t.probs);
    t.verdict.rhoPsiHat = v.rhoPsiHat;
    t.verdict.rhoPhiHat = v.rhoPhiHat;
  } catch (const ValidationError& e) {
    fail(i + 1, e.what());
  }
  return t;
}

void transcript_write(const Transcript& t, const std::filesystem::path& path) {
  io::write_file_atomic(path, transcript_serialize(t));
}

Transcript transcript_read(const std::filesystem::path& path) {
  return transcript_parse(io::read_file(path));
}

Verdict transcript_replay_text(std::string_view text) {
  const Transcript t = transcript_parse(text);
  const Verdict v = verdict_from_records(t.config, t.records);
  if (v.flag != t.verdict.flag || format_theta(v.thetaHat) != format_theta(t.verdict.thetaHat) ||
      v.fidelityHat != t.verdict.fidelityHat) {
    throw ProtocolError("replayed verdict (" + std::string(to_string(v.flag)) + ", " +
                        format_theta(v.thetaHat) + ") differs from the stored verdict (" +
                        std::string(to_string(t.verdict.flag)) + ", " +
                        format_theta(t.verdict.thetaHat) + ")");
  }
  return v;
}

Verdict transcript_replay(const std::filesystem::path& path) {
  return transcript_replay_text(io::read_file(path));
}

}  // namespace qmv::verifier
