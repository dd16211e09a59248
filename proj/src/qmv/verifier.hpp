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

// Verifier side of the separation-certification protocol.
//
// One session:
//   1. draw N samples per group from the data oracle;
//   2. fix a random basis for every sample (about N/3 per basis per group);
//   3. send all 2N feature vectors, without labels, in uniformly shuffled
//      order;
//   4. measure each returned qubit once, in its pre-assigned basis;
//   5. estimate the + outcome frequency per basis and group, and rebuild
//      each group's density matrix by linear inversion;
//   6. report the Bures angle between the two reconstructions and accept or
//      reject the prover's claimed separation.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmv/embedding.hpp"
#include "qmv/provers.hpp"
#include "qmv/qcore.hpp"
#include "qmv/random.hpp"

namespace qmv::verifier {

using qcore::MeasBasis;
using qcore::ProbTriple;
using qcore::QubitDensity;

enum class Flag { Accept, Reject };

std::string_view to_string(Flag f) noexcept;

/// How requests reach the prover. BatchedReplay shows the prover every
/// request first (prepare) and collects the answers in a second pass.
enum class ProverMode { Streaming, BatchedReplay };

struct ProtocolConfig {
  std::uint64_t nPerGroup = 3000;
  double gamma = 0.1;
  double claimedAngle = std::numbers::pi / 2;
  std::uint64_t seed = 0;
  ProverMode mode = ProverMode::Streaming;

  void validate() const;
};

/// Margin guideline reflecting binomial estimation error:
/// max(0.05, 3 sqrt(3 / N)).
double suggested_gamma(std::uint64_t nPerGroup);

struct SendEvent {
  std::uint64_t index = 0;
  double x1 = 0.0;
  double x2 = 0.0;

  bool operator==(const SendEvent&) const = default;
};

struct MeasurementRecord {
  std::uint64_t requestIndex = 0;
  int group = 0;  // 0 = Psi, 1 = Phi
  MeasBasis basis = MeasBasis::Standard;
  int outcome = 0;

  bool operator==(const MeasurementRecord&) const = default;
};

struct Verdict {
  Flag flag = Flag::Reject;
  double thetaHat = 0.0;
  double fidelityHat = 1.0;
  QubitDensity rhoPsiHat = QubitDensity::maximally_mixed();
  QubitDensity rhoPhiHat = QubitDensity::maximally_mixed();

  bool operator==(const Verdict&) const = default;
};

struct Transcript {
  ProtocolConfig config;
  std::vector<SendEvent> sends;
  std::vector<MeasurementRecord> records;
  std::array<ProbTriple, 2> probs{};
  Verdict verdict;
};

/// floor(n/3) of each basis plus the remainder round-robin
/// (Standard, then Hadamard), uniformly permuted.
std::vector<MeasBasis> allocate_bases(std::size_t n, RandomStream& rng);

/// Where a send came from. Held privately by the verifier.
struct SendOrigin {
  int group = 0;
  std::size_t slot = 0;  // position within the group's sample list
};

struct SendSchedule {
  std::vector<SendEvent> sends;     // what the prover sees
  std::vector<SendOrigin> origins;  // parallel to sends
};

/// Uniformly random interleaving of both groups. The pooled samples are put
/// in feature order before shuffling, so the send stream depends only on
/// the feature multiset and the random stream, never on hidden labels.
SendSchedule interleave_sends(std::span<const embedding::DataSample> psi,
                              std::span<const embedding::DataSample> phi, RandomStream& rng);

/// Per basis, the fraction of outcome-0 records (normalized by the actual
/// per-basis count). Throws if any basis has no records.
ProbTriple estimate_probs(std::span<const MeasurementRecord> records);

/// claim = pi/2: ACCEPT iff thetaHat >= pi/2 - gamma.
/// otherwise:    ACCEPT iff |thetaHat - claim| <= gamma.
Flag decide(double thetaHat, const ProtocolConfig& cfg);

/// Steps 5-6 from a complete record set: estimation, reconstruction,
/// fidelity, angle and decision.
Verdict verdict_from_records(const ProtocolConfig& cfg,
                             std::span<const MeasurementRecord> records,
                             std::array<ProbTriple, 2>* probs_out = nullptr);

struct ProtocolResult {
  Verdict verdict;
  Transcript transcript;
};

ProtocolResult run_protocol(const embedding::OracleConfig& oracle, provers::Prover& prover,
                            const ProtocolConfig& cfg);

struct MultiGroupResult {
  std::size_t groups = 0;
  std::vector<double> angles;  // K x K row-major, symmetric, zero diagonal
  double minAngle = 0.0;
  double meanAngle = 0.0;
  bool allPass = false;

  double angle(std::size_t i, std::size_t j) const { return angles[i * groups + j]; }
};

/// Pairwise Bures angles between K >= 2 reconstructed group states.
/// allPass requires every pair to exceed pi/2 - gamma.
MultiGroupResult multi_group_verify(std::span<const QubitDensity> groups, double gamma);

inline constexpr int kTranscriptVersion = 1;

/// Line-oriented text form:
///   QMVT 1 n=<N> gamma=<g> claim=<c> seed=<s> mode=<streaming|batched>
///   S <index> <x1> <x2>                     (2N lines)
///   M <index> <group> <basis> <outcome>     (2N lines)
///   V <ACCEPT|REJECT> <thetaHat, 12 sig. digits> <fidelityHat>
std::string transcript_serialize(const Transcript& t);
Transcript transcript_parse(std::string_view text);

void transcript_write(const Transcript& t, const std::filesystem::path& path);
Transcript transcript_read(const std::filesystem::path& path);

/// Recomputes the verdict from the stored records and checks it against the
/// stored verdict line. Throws ProtocolError on mismatch.
Verdict transcript_replay(const std::filesystem::path& path);
Verdict transcript_replay_text(std::string_view text);

/// thetaHat formatted as stored in transcripts.
std::string format_theta(double thetaHat);

}  // namespace qmv::verifier
