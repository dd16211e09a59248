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

#include "qmv/provers.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qmv/errors.hpp"

namespace qmv::provers {

using qcore::Complex;
using qcore::PureQubit;
using qcore::QubitDensity;

namespace {

class HonestProver final : public Prover {
 public:
  explicit HonestProver(embedding::EmbeddingParams theta) : theta_(std::move(theta)) {}

  QubitDensity respond(const Request& req) override {
    return QubitDensity::pure(embedding::embed(req.x1, req.x2, theta_));
  }

 private:
  embedding::EmbeddingParams theta_;
};

class SyntheticAngleProver final : public Prover {
 public:
  SyntheticAngleProver(const SyntheticProverConfig& cfg, Labeler labeler)
      : sigma_(cfg.perturbSigma),
        refs_(synthetic_reference_states(cfg)),
        labeler_(std::move(labeler)),
        jitter_(RandomStream(cfg.seed).child(1)) {}

  QubitDensity respond(const Request& req) override {
    const int cls = labeler_(req.x1, req.x2);
    const PureQubit& ref = cls == 0 ? refs_.first : refs_.second;
    if (sigma_ == 0.0) return QubitDensity::pure(ref);
    const double angle = std::abs(jitter_.normal(0.0, sigma_));
    const auto axis = qcore::random_unit_axis(jitter_);
    return QubitDensity::pure(qcore::rotate(ref, axis, angle));
  }

 private:
  double sigma_;
  std::pair<PureQubit, PureQubit> refs_;
  Labeler labeler_;
  RandomStream jitter_;
};

class RandomAssignProver final : public Prover {
 public:
  explicit RandomAssignProver(std::uint64_t seed) : rng_(seed) {}

  QubitDensity respond(const Request&) override {
    return QubitDensity::pure(rng_.coin() ? PureQubit::one() : PureQubit::zero());
  }

 private:
  RandomStream rng_;
};

class ConstantStateProver final : public Prover {
 public:
  explicit ConstantStateProver(std::uint64_t seed) : state_(make_state(seed)) {}

  QubitDensity respond(const Request&) override { return state_; }

 private:
  static QubitDensity make_state(std::uint64_t seed) {
    RandomStream rng(seed);
    return QubitDensity::pure(qcore::haar_random_pure(rng));
  }

  QubitDensity state_;
};

class ClusterGuessProver final : public Prover {
 public:
  bool needs_batch() const override { return true; }

  void prepare(std::span<const Request> all) override {
    cluster_of_.clear();
    if (all.empty()) return;
    const auto assignment = two_means(all);
    for (std::size_t i = 0; i < all.size(); ++i) cluster_of_[all[i].index] = assignment[i];
  }

  QubitDensity respond(const Request& req) override {
    const auto it = cluster_of_.find(req.index);
    if (it == cluster_of_.end()) {
      throw ProtocolError("ClusterGuess adversary invoked in streaming mode (request " +
                          std::to_string(req.index) + " was not buffered)");
    }
    return QubitDensity::pure(it->second == 0 ? PureQubit::zero() : PureQubit::one());
  }

 private:
  std::unordered_map<std::uint64_t, int> cluster_of_;
};

class DepolarizedProver final : public Prover {
 public:
  DepolarizedProver(ProverPtr inner, double p) : inner_(std::move(inner)), p_(p) {}

  QubitDensity respond(const Request& req) override {
    return QubitDensity::mix(QubitDensity::maximally_mixed(), inner_->respond(req), p_);
  }

  bool needs_batch() const override { return inner_->needs_batch(); }
  void prepare(std::span<const Request> all) override { inner_->prepare(all); }

 private:
  ProverPtr inner_;
  double p_;
};

double sq_dist(double ax, double ay, double bx, double by) {
  return (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
}

}  // namespace

ProverPtr honest_prover(embedding::EmbeddingParams theta) {
  return std::make_shared<HonestProver>(std::move(theta));
}

void SyntheticProverConfig::validate() const {
  if (!(targetAngle >= 0.0 && targetAngle <= std::numbers::pi / 2)) {
    throw ValidationError("synthetic prover: targetAngle must lie in [0, pi/2]");
  }
  if (!std::isfinite(perturbSigma) || perturbSigma < 0.0) {
    throw ValidationError("synthetic prover: perturbSigma must be finite and >= 0");
  }
}

std::pair<PureQubit, PureQubit> synthetic_reference_states(const SyntheticProverConfig& cfg) {
  cfg.validate();
  RandomStream rng = RandomStream(cfg.seed).child(0);
  const bool haar = cfg.frame == ReferenceFrame::Haar;
  const PureQubit a = haar ? qcore::haar_random_pure(rng) : PureQubit::zero();
  const double phase = haar ? rng.uniform(0.0, 2.0 * std::numbers::pi) : 0.0;
  // The orthogonal complement of a qubit state is one-dimensional; the
  // relative phase picks the great circle through |a>.
  const Complex perp_a = -std::conj(a.beta());
  const Complex perp_b = std::conj(a.alpha());
  const Complex rot = std::polar(1.0, phase);
  const double c = std::cos(cfg.targetAngle);
  const double s = std::sin(cfg.targetAngle);
  const PureQubit b = PureQubit::normalized(c * a.alpha() + s * rot * perp_a,
                                            c * a.beta() + s * rot * perp_b);
  return {a, b};
}

ProverPtr synthetic_angle_prover(const SyntheticProverConfig& cfg, Labeler labeler) {
  cfg.validate();
  if (!labeler) throw ValidationError("synthetic prover: a labeling function is required");
  return std::make_shared<SyntheticAngleProver>(cfg, std::move(labeler));
}

std::string_view to_string(AdversaryStrategy s) noexcept {
  switch (s) {
    case AdversaryStrategy::RandomAssign:
      return "random-assign";
    case AdversaryStrategy::ConstantState:
      return "constant-state";
    case AdversaryStrategy::ClusterGuess:
      return "cluster-guess";
  }
  return "?";
}

AdversaryStrategy parse_adversary(std::string_view name) {
  for (auto s : {AdversaryStrategy::RandomAssign, AdversaryStrategy::ConstantState,
                 AdversaryStrategy::ClusterGuess}) {
    if (name == to_string(s)) return s;
  }
  throw ValidationError("unknown adversary strategy '" + std::string(name) + "'");
}

ProverPtr adversarial_prover(AdversaryStrategy strategy, std::uint64_t seed) {
  switch (strategy) {
    case AdversaryStrategy::RandomAssign:
      return std::make_shared<RandomAssignProver>(seed);
    case AdversaryStrategy::ConstantState:
      return std::make_shared<ConstantStateProver>(seed);
    case AdversaryStrategy::ClusterGuess:
      return std::make_shared<ClusterGuessProver>();
  }
  throw ValidationError("unknown adversary strategy");
}

ProverPtr depolarize_wrap(ProverPtr inner, double p) {
  if (!inner) throw ValidationError("depolarize_wrap: inner prover is null");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("depolarize_wrap: p must lie in [0, 1]");
  return std::make_shared<DepolarizedProver>(std::move(inner), p);
}

std::vector<int> two_means(std::span<const Request> points, int max_iter) {
  std::vector<int> assign(points.size(), 0);
  if (points.size() < 2) return assign;

  double c0x = points[0].x1, c0y = points[0].x2;
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = sq_dist(points[i].x1, points[i].x2, c0x, c0y);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  double c1x = points[far].x1, c1y = points[far].x2;

  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    double s0x = 0, s0y = 0, s1x = 0, s1y = 0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      const int k = sq_dist(p.x1, p.x2, c1x, c1y) < sq_dist(p.x1, p.x2, c0x, c0y) ? 1 : 0;
      if (k != assign[i]) changed = true;
      assign[i] = k;
      if (k == 0) {
        s0x += p.x1;
        s0y += p.x2;
        ++n0;
      } else {
        s1x += p.x1;
        s1y += p.x2;
        ++n1;
      }
    }
    if (n0 > 0) {
      c0x = s0x / static_cast<double>(n0);
      c0y = s0y / static_cast<double>(n0);
    }
    if (n1 > 0) {
      c1x = s1x / static_cast<double>(n1);
      c1y = s1y / static_cast<double>(n1);
    }
    if (!changed && it > 0) break;
  }
  return assign;
}

}  // namespace qmv::provers
