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

// Toy trainable single-qubit embedding, a synthetic labeled data oracle and
// an overlap-based metric-learning trainer (RMSProp).
//
// The ansatz applies L layers to |0>:
//
//   layer l = RY(x1) RZ(x2) RY(theta[2l]) RZ(theta[2l+1])
//
// with RY(a) = exp(-i a sy / 2), RZ(a) = exp(-i a sz / 2). It is a small
// stand-in for a QAOA-style feature embedding, not a port of one.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qmv/qcore.hpp"
#include "qmv/random.hpp"

namespace qmv::embedding {

struct DataSample {
  double x1 = 0.0;
  double x2 = 0.0;
  int label = 0;
};

/// Trainable angles, length 2L for L >= 1 layers.
class EmbeddingParams {
 public:
  explicit EmbeddingParams(std::vector<double> theta);
  static EmbeddingParams zeros(int layers);

  int layers() const noexcept { return static_cast<int>(theta_.size() / 2); }
  std::size_t size() const noexcept { return theta_.size(); }
  std::span<const double> values() const noexcept { return theta_; }
  double operator[](std::size_t k) const { return theta_[k]; }

  bool operator==(const EmbeddingParams&) const = default;

 private:
  std::vector<double> theta_;
};

enum class Distribution {
  // Class 0 ~ N((-1,-1), s^2 I), class 1 ~ N((+1,+1), s^2 I).
  SeparableBlobs,
  // Both classes ~ N((0,0), s^2 I): labels carry no feature information.
  HiddenLabels,
};

struct OracleConfig {
  Distribution distribution = Distribution::SeparableBlobs;
  double spread = 0.3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainConfig {
  int layers = 3;
  double stepSize = 0.01;
  int iterations = 500;
  int batchA = 8;
  int batchB = 8;
  std::uint64_t seed = 0;
  // 0 = exact overlaps; > 0 = each overlap estimated from this many
  // simulated SWAP-test shots.
  int shots = 0;

  void validate() const;
};

/// n samples of the given label.
std::vector<DataSample> oracle_draw(const OracleConfig& cfg, std::size_t n, int label,
                                    RandomStream& rng);

/// Bayes decision rule for SeparableBlobs: 1 iff x1 + x2 >= 0.
int blob_label(double x1, double x2) noexcept;

qcore::PureQubit embed(double x1, double x2, const EmbeddingParams& theta);
inline qcore::PureQubit embed(const DataSample& s, const EmbeddingParams& theta) {
  return embed(s.x1, s.x2, theta);
}

/// Mean intra-class (aa, bb, diagonal pairs included) and inter-class (ab)
/// squared overlaps.
struct OverlapTerms {
  double aa = 0.0;
  double bb = 0.0;
  double ab = 0.0;
};

OverlapTerms overlap_terms(const EmbeddingParams& theta, std::span<const DataSample> batchA,
                           std::span<const DataSample> batchB);

/// Same as overlap_terms but each overlap is estimated from `shots` SWAP-test
/// outcomes, P(ancilla = 0) = (1 + |<a|b>|^2) / 2.
OverlapTerms sampled_overlap_terms(const EmbeddingParams& theta,
                                   std::span<const DataSample> batchA,
                                   std::span<const DataSample> batchB, int shots,
                                   RandomStream& rng);

/// 1 - 0.5 (-2 ab + aa + bb)
double cost_from_terms(const OverlapTerms& t) noexcept;

double cost(const EmbeddingParams& theta, std::span<const DataSample> batchA,
            std::span<const DataSample> batchB);

inline constexpr double kGradientStep = 1e-3;

/// Central finite differences with h = 1e-3.
std::vector<double> cost_gradient(const EmbeddingParams& theta,
                                  std::span<const DataSample> batchA,
                                  std::span<const DataSample> batchB);

struct RmsPropUpdate {
  std::vector<double> theta;
  std::vector<double> accum;
};

inline constexpr double kRmsDecay = 0.9;
inline constexpr double kRmsEpsilon = 1e-8;

/// accum' = 0.9 accum + 0.1 g^2; theta' = theta - step g / (sqrt(accum') + 1e-8).
RmsPropUpdate rmsprop_step(std::span<const double> theta, std::span<const double> grad,
                           std::span<const double> accum, double stepSize);

struct TrainResult {
  EmbeddingParams theta;
  std::vector<double> history;
};

/// Called after each iteration with the updated parameters and the batch
/// cost measured before the update.
using TrainObserver = std::function<void(int iteration, const EmbeddingParams&, double cost)>;

/// theta ~ Uniform(-0.1, 0.1) from cfg.seed; fresh batches per iteration
/// from the oracle stream.
TrainResult train(const TrainConfig& cfg, const OracleConfig& oracle,
                  const TrainObserver& observer = {});

/// Exact ensemble density of the embedded samples carrying `label`.
qcore::QubitDensity ensemble_density(const EmbeddingParams& theta,
                                     std::span<const DataSample> samples, int label);

/// Fidelity of the two class ensembles. Throws if a class is missing.
double true_fidelity(const EmbeddingParams& theta, std::span<const DataSample> samples);

/// Bures angle between the two class ensembles.
double true_angle(const EmbeddingParams& theta, std::span<const DataSample> samples);

}  // namespace qmv::embedding
