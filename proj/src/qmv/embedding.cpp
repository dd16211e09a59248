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

#include "qmv/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "qmv/errors.hpp"

namespace qmv::embedding {

using qcore::Complex;
using qcore::PureQubit;
using qcore::QubitDensity;

EmbeddingParams::EmbeddingParams(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.size() < 2 || theta_.size() % 2 != 0) {
    throw ValidationError("EmbeddingParams: length must be even and >= 2");
  }
  for (double t : theta_) {
    if (!std::isfinite(t)) throw ValidationError("EmbeddingParams: non-finite angle");
  }
}

EmbeddingParams EmbeddingParams::zeros(int layers) {
  if (layers < 1) throw ValidationError("EmbeddingParams: layers must be >= 1");
  return EmbeddingParams(std::vector<double>(2 * static_cast<std::size_t>(layers), 0.0));
}

void OracleConfig::validate() const {
  if (!std::isfinite(spread) || !(spread > 0.0)) {
    throw ValidationError("oracle spread must be finite and positive");
  }
}

void TrainConfig::validate() const {
  if (layers < 1) throw ValidationError("train: layers must be >= 1");
  if (!std::isfinite(stepSize) || !(stepSize > 0.0)) {
    throw ValidationError("train: stepSize must be positive");
  }
  if (iterations < 0) throw ValidationError("train: iterations must be >= 0");
  if (batchA < 2 || batchB < 2) throw ValidationError("train: batch sizes must be >= 2");
  if (shots < 0) throw ValidationError("train: shots must be >= 0");
}

std::vector<DataSample> oracle_draw(const OracleConfig& cfg, std::size_t n, int label,
                                    RandomStream& rng) {
  cfg.validate();
  if (n < 1) throw ValidationError("oracle_draw: n must be >= 1");
  if (label != 0 && label != 1) throw ValidationError("oracle_draw: label must be 0 or 1");
  double center = 0.0;
  if (cfg.distribution == Distribution::SeparableBlobs) center = label == 0 ? -1.0 : 1.0;
  std::vector<DataSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.normal(center, cfg.spread);
    const double x2 = rng.normal(center, cfg.spread);
    out.push_back({x1, x2, label});
  }
  return out;
}

int blob_label(double x1, double x2) noexcept { return x1 + x2 >= 0.0 ? 1 : 0; }

namespace {

struct Amp {
  Complex a;
  Complex b;
};

Amp apply_ry(const Amp& s, double phi) {
  const double c = std::cos(0.5 * phi);
  const double sn = std::sin(0.5 * phi);
  return {c * s.a - sn * s.b, sn * s.a + c * s.b};
}

Amp apply_rz(const Amp& s, double phi) {
  const Complex lo = std::polar(1.0, -0.5 * phi);
  const Complex hi = std::polar(1.0, 0.5 * phi);
  return {lo * s.a, hi * s.b};
}

std::vector<PureQubit> embed_all(std::span<const DataSample> batch, const EmbeddingParams& theta) {
  std::vector<PureQubit> out;
  out.reserve(batch.size());
  for (const auto& s : batch) out.push_back(embed(s, theta));
  return out;
}

double mean_overlap(const std::vector<PureQubit>& u, const std::vector<PureQubit>& v) {
  double sum = 0.0;
  for (const auto& a : u) {
    for (const auto& b : v) sum += qcore::overlap(a, b);
  }
  return sum / static_cast<double>(u.size() * v.size());
}

double swap_test_estimate(const PureQubit& a, const PureQubit& b, int shots, RandomStream& rng) {
  const double p0 = 0.5 * (1.0 + qcore::overlap(a, b));
  int zeros = 0;
  for (int k = 0; k < shots; ++k) zeros += rng.uniform() < p0 ? 1 : 0;
  return std::clamp(2.0 * zeros / shots - 1.0, 0.0, 1.0);
}

double sampled_mean_overlap(const std::vector<PureQubit>& u, const std::vector<PureQubit>& v,
                            int shots, RandomStream& rng) {
  double sum = 0.0;
  for (const auto& a : u) {
    for (const auto& b : v) sum += swap_test_estimate(a, b, shots, rng);
  }
  return sum / static_cast<double>(u.size() * v.size());
}

void check_batches(std::span<const DataSample> a, std::span<const DataSample> b) {
  if (a.empty() || b.empty()) throw ValidationError("cost: batches must be non-empty");
}

}  // namespace

PureQubit embed(double x1, double x2, const EmbeddingParams& theta) {
  Amp s{1.0, 0.0};
  for (int l = 0; l < theta.layers(); ++l) {
    // Rightmost factor acts first.
    s = apply_rz(s, theta[2 * l + 1]);
    s = apply_ry(s, theta[2 * l]);
    s = apply_rz(s, x2);
    s = apply_ry(s, x1);
  }
  return PureQubit::normalized(s.a, s.b);
}

OverlapTerms overlap_terms(const EmbeddingParams& theta, std::span<const DataSample> batchA,
                           std::span<const DataSample> batchB) {
  check_batches(batchA, batchB);
  const auto ea = embed_all(batchA, theta);
  const auto eb = embed_all(batchB, theta);
  return {mean_overlap(ea, ea), mean_overlap(eb, eb), mean_overlap(ea, eb)};
}

OverlapTerms sampled_overlap_terms(const EmbeddingParams& theta,
                                   std::span<const DataSample> batchA,
                                   std::span<const DataSample> batchB, int shots,
                                   RandomStream& rng) {
  check_batches(batchA, batchB);
  if (shots < 1) throw ValidationError("sampled_overlap_terms: shots must be >= 1");
  const auto ea = embed_all(batchA, theta);
  const auto eb = embed_all(batchB, theta);
  const double aa = sampled_mean_overlap(ea, ea, shots, rng);
  const double bb = sampled_mean_overlap(eb, eb, shots, rng);
  const double ab = sampled_mean_overlap(ea, eb, shots, rng);
  return {aa, bb, ab};
}

double cost_from_terms(const OverlapTerms& t) noexcept {
  return 1.0 - 0.5 * (-2.0 * t.ab + t.aa + t.bb);
}

double cost(const EmbeddingParams& theta, std::span<const DataSample> batchA,
            std::span<const DataSample> batchB) {
  return cost_from_terms(overlap_terms(theta, batchA, batchB));
}

std::vector<double> cost_gradient(const EmbeddingParams& theta,
                                  std::span<const DataSample> batchA,
                                  std::span<const DataSample> batchB) {
  check_batches(batchA, batchB);
  std::vector<double> grad(theta.size());
  std::vector<double> probe(theta.values().begin(), theta.values().end());
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const double t0 = probe[k];
    probe[k] = t0 + kGradientStep;
    const double up = cost(EmbeddingParams(probe), batchA, batchB);
    probe[k] = t0 - kGradientStep;
    const double down = cost(EmbeddingParams(probe), batchA, batchB);
    probe[k] = t0;
    grad[k] = (up - down) / (2.0 * kGradientStep);
  }
  return grad;
}

RmsPropUpdate rmsprop_step(std::span<const double> theta, std::span<const double> grad,
                           std::span<const double> accum, double stepSize) {
  if (theta.size() != grad.size() || theta.size() != accum.size()) {
    throw ValidationError("rmsprop_step: shape mismatch");
  }
  RmsPropUpdate out{std::vector<double>(theta.size()), std::vector<double>(theta.size())};
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double a = kRmsDecay * accum[k] + (1.0 - kRmsDecay) * grad[k] * grad[k];
    out.accum[k] = a;
    out.theta[k] = theta[k] - stepSize * grad[k] / (std::sqrt(a) + kRmsEpsilon);
  }
  return out;
}

TrainResult train(const TrainConfig& cfg, const OracleConfig& oracle,
                  const TrainObserver& observer) {
  cfg.validate();
  oracle.validate();
  const RandomStream master(cfg.seed);
  RandomStream init_rng = master.child(0);
  RandomStream shot_rng = master.child(1);
  RandomStream data_rng(oracle.seed);

  std::vector<double> theta(2 * static_cast<std::size_t>(cfg.layers));
  for (double& t : theta) t = init_rng.uniform(-0.1, 0.1);
  std::vector<double> accum(theta.size(), 0.0);

  TrainResult result{EmbeddingParams(theta), {}};
  result.history.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int it = 0; it < cfg.iterations; ++it) {
    const auto batchA = oracle_draw(oracle, static_cast<std::size_t>(cfg.batchA), 0, data_rng);
    const auto batchB = oracle_draw(oracle, static_cast<std::size_t>(cfg.batchB), 1, data_rng);
    const EmbeddingParams current(theta);

    double c;
    std::vector<double> grad;
    if (cfg.shots == 0) {
      c = cost(current, batchA, batchB);
      grad = cost_gradient(current, batchA, batchB);
    } else {
      c = cost_from_terms(sampled_overlap_terms(current, batchA, batchB, cfg.shots, shot_rng));
      grad.resize(theta.size());
      std::vector<double> probe = theta;
      for (std::size_t k = 0; k < theta.size(); ++k) {
        probe[k] = theta[k] + kGradientStep;
        const double up = cost_from_terms(
            sampled_overlap_terms(EmbeddingParams(probe), batchA, batchB, cfg.shots, shot_rng));
        probe[k] = theta[k] - kGradientStep;
        const double down = cost_from_terms(
            sampled_overlap_terms(EmbeddingParams(probe), batchA, batchB, cfg.shots, shot_rng));
        probe[k] = theta[k];
        grad[k] = (up - down) / (2.0 * kGradientStep);
      }
    }

    auto step = rmsprop_step(theta, grad, accum, cfg.stepSize);
    theta = std::move(step.theta);
    accum = std::move(step.accum);
    result.history.push_back(c);
    if (observer) observer(it, EmbeddingParams(theta), c);
  }
  result.theta = EmbeddingParams(std::move(theta));
  return result;
}

QubitDensity ensemble_density(const EmbeddingParams& theta, std::span<const DataSample> samples,
                              int label) {
  std::vector<QubitDensity> members;
  for (const auto& s : samples) {
    if (s.label == label) members.push_back(QubitDensity::pure(embed(s, theta)));
  }
  if (members.empty()) throw ValidationError("ensemble_density: no samples carry the label");
  return QubitDensity::average(members);
}

double true_fidelity(const EmbeddingParams& theta, std::span<const DataSample> samples) {
  const auto rho = ensemble_density(theta, samples, 0);
  const auto sigma = ensemble_density(theta, samples, 1);
  return qcore::fidelity(rho, sigma);
}

double true_angle(const EmbeddingParams& theta, std::span<const DataSample> samples) {
  return qcore::bures_angle(true_fidelity(theta, samples));
}

}  // namespace qmv::embedding
