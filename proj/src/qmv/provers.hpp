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

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_map>

#include "qmv/embedding.hpp"
#include "qmv/qcore.hpp"

namespace qmv::provers {

/// What the prover sees for one request. There is deliberately no label
/// field: group membership never crosses this boundary.
struct Request {
  std::uint64_t index = 0;
  double x1 = 0.0;
  double x2 = 0.0;
};

/// The prover side of the interaction: one qubit state per request.
///
/// Streaming provers answer each request as it arrives. Provers that report
/// needs_batch() act only after prepare() has shown them every request of
/// the session (two-phase replay mode).
class Prover {
 public:
  virtual ~Prover() = default;

  virtual qcore::QubitDensity respond(const Request& req) = 0;

  virtual bool needs_batch() const { return false; }
  virtual void prepare(std::span<const Request> /*all*/) {}
};

using ProverPtr = std::shared_ptr<Prover>;

/// Maps features to a class, supplied by the experiment harness to
/// synthetic provers only.
using Labeler = std::function<int(double x1, double x2)>;

/// Answers |U(x, theta)|0> with the trained embedding. Stateless.
ProverPtr honest_prover(embedding::EmbeddingParams theta);

enum class ReferenceFrame {
  Haar,           // first reference state Haar random
  Computational,  // first reference |0>, second cos(t)|0> + sin(t)|1>
};

struct SyntheticProverConfig {
  double targetAngle = 0.0;   // radians, [0, pi/2]
  double perturbSigma = 0.0;  // radians
  std::uint64_t seed = 0;
  ReferenceFrame frame = ReferenceFrame::Haar;

  void validate() const;
};

/// Two reference pure states at Bures angle exactly targetAngle: the first
/// Haar random (or |0>), the second cos(t)|a> + sin(t) e^{i phi}|a_perp>. Each
/// response is the reference state of labeler(x), rotated by
/// |N(0, perturbSigma)| about a random axis.
ProverPtr synthetic_angle_prover(const SyntheticProverConfig& cfg, Labeler labeler);

/// The two reference states a synthetic prover built from `cfg` uses.
std::pair<qcore::PureQubit, qcore::PureQubit> synthetic_reference_states(
    const SyntheticProverConfig& cfg);

enum class AdversaryStrategy { RandomAssign, ConstantState, ClusterGuess };

std::string_view to_string(AdversaryStrategy s) noexcept;
AdversaryStrategy parse_adversary(std::string_view name);

/// RandomAssign: fair coin between |0><0| and |1><1| per request.
/// ConstantState: one Haar-random pure state for every request.
/// ClusterGuess: 2-means over all buffered features, then |0><0| / |1><1|
/// by cluster. Requires batched replay; responding without prepare()
/// throws ProtocolError.
ProverPtr adversarial_prover(AdversaryStrategy strategy, std::uint64_t seed);

/// (1 - p) rho_inner + p I/2.
ProverPtr depolarize_wrap(ProverPtr inner, double p);

/// Two-means clustering of 2-D points (Lloyd iterations, deterministic
/// farthest-point initialization). Returns a 0/1 assignment per point.
std::vector<int> two_means(std::span<const Request> points, int max_iter = 100);

}  // namespace qmv::provers
