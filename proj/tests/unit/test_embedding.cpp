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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "qmv/embedding.hpp"
#include "qmv/errors.hpp"
#include "support/oracles.hpp"

using namespace qmv;
using namespace qmv::embedding;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<DataSample> at(std::initializer_list<std::pair<double, double>> xs, int label) {
  std::vector<DataSample> out;
  for (auto [a, b] : xs) out.push_back({a, b, label});
  return out;
}

// Average ranks (ties share the mean rank).
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * double(i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / double(ra.size());
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / double(rb.size());
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Outer-product ensemble built without embedding::ensemble_density.
testing::Mat2 brute_ensemble(const EmbeddingParams& theta, const std::vector<DataSample>& s,
                             int label) {
  testing::Mat2 m = testing::Mat2::Zero();
  int n = 0;
  for (const auto& d : s) {
    if (d.label != label) continue;
    const auto psi = embed(d, theta);
    Eigen::Vector2cd v(psi.alpha(), psi.beta());
    m += v * v.adjoint();
    ++n;
  }
  return m / double(n);
}

}  // namespace

TEST_CASE("EmbeddingParams validation") {
  CHECK_THROWS_AS(EmbeddingParams({}), ValidationError);
  CHECK_THROWS_AS(EmbeddingParams({0.1, 0.2, 0.3}), ValidationError);
  CHECK_THROWS_AS(EmbeddingParams({0.1, NAN}), ValidationError);
  CHECK(EmbeddingParams::zeros(3).size() == 6);
  CHECK(EmbeddingParams::zeros(3).layers() == 3);
}

TEST_CASE("oracle_draw") {
  SUBCASE("zero-variance limit") {
    RandomStream rng(1);
    const auto s = oracle_draw({Distribution::SeparableBlobs, 1e-12, 0}, 3, 0, rng);
    REQUIRE(s.size() == 3);
    for (const auto& d : s) {
      CHECK(d.x1 == Approx(-1.0));
      CHECK(d.x2 == Approx(-1.0));
      CHECK(d.label == 0);
    }
  }
  SUBCASE("blob mean") {
    RandomStream rng(2);
    const auto s = oracle_draw({Distribution::SeparableBlobs, 0.3, 0}, 10000, 1, rng);
    double m1 = 0, m2 = 0;
    for (const auto& d : s) {
      m1 += d.x1;
      m2 += d.x2;
    }
    CHECK(std::abs(m1 / 1e4 - 1.0) <= 0.02);
    CHECK(std::abs(m2 / 1e4 - 1.0) <= 0.02);
  }
  SUBCASE("hidden labels carry no feature information") {
    const double spread = 1.0;
    RandomStream rng(3);
    const OracleConfig cfg{Distribution::HiddenLabels, spread, 0};
    const auto a = oracle_draw(cfg, 10000, 0, rng);
    const auto b = oracle_draw(cfg, 10000, 1, rng);
    double d1 = 0, d2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      d1 += a[i].x1 - b[i].x1;
      d2 += a[i].x2 - b[i].x2;
    }
    CHECK(std::abs(d1 / 1e4) <= 4 * spread / 100);
    CHECK(std::abs(d2 / 1e4) <= 4 * spread / 100);
  }
  SUBCASE("invalid config") {
    RandomStream rng(4);
    CHECK_THROWS_AS(oracle_draw({Distribution::SeparableBlobs, 0.0, 0}, 3, 0, rng),
                    ValidationError);
    CHECK_THROWS_AS(oracle_draw({Distribution::SeparableBlobs, 0.3, 0}, 3, 2, rng),
                    ValidationError);
  }
}

TEST_CASE("embed examples") {
  for (int layers = 1; layers <= 4; ++layers) {
    const auto psi = embed(0, 0, EmbeddingParams::zeros(layers));
    CHECK(qcore::overlap(psi, qcore::PureQubit::zero()) == Approx(1.0).epsilon(1e-12));
  }
  CHECK(qcore::overlap(embed(kPi, 0, EmbeddingParams::zeros(1)), qcore::PureQubit::one()) ==
        Approx(1.0).epsilon(1e-12));
  CHECK(qcore::overlap(embed(kPi / 2, 0, EmbeddingParams::zeros(1)), qcore::PureQubit::zero()) ==
        Approx(0.5).epsilon(1e-12));
  // Amplitudes from an independent matrix-exponential evaluation.
  const qcore::PureQubit ref({0.8979306625337672, 0.39022788208230286},
                             {0.18302569366719282, 0.08913091935390696});
  const auto got = embed(0.3, -0.7, EmbeddingParams({0.1, 0.2, -0.3, 0.4}));
  CHECK(qcore::overlap(got, ref) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embed is deterministic bit for bit") {
  const EmbeddingParams theta({0.3, -1.1, 0.7, 2.0});
  const auto a = embed(0.123, -0.456, theta), b = embed(0.123, -0.456, theta);
  CHECK(a.alpha() == b.alpha());
  CHECK(a.beta() == b.beta());
}

TEST_CASE("cost examples") {
  const auto theta = EmbeddingParams::zeros(1);
  const auto zeros = at({{0, 0}, {0, 0}}, 0);
  const auto ones = at({{kPi, 0}, {kPi, 0}}, 1);
  const auto pluses = at({{kPi / 2, 0}, {kPi / 2, 0}}, 1);
  CHECK(cost(theta, zeros, at({{0, 0}}, 1)) == Approx(1.0));
  CHECK(cost(theta, zeros, ones) == Approx(0.0).epsilon(1e-12));
  CHECK(cost(theta, zeros, pluses) == Approx(0.5));
  CHECK_THROWS_AS(cost(theta, {}, ones), ValidationError);
}

TEST_CASE("cost and gradient against an independent evaluation") {
  const EmbeddingParams theta({0.1, -0.2, 0.3, 0.05});
  const auto a = at({{0.2, 0.1}, {-0.4, 0.3}, {0.5, -0.2}}, 0);
  const auto b = at({{1.1, 0.9}, {0.8, 1.3}}, 1);
  CHECK(cost(theta, a, b) == Approx(0.6800625154465605).epsilon(1e-12));
  const auto g = cost_gradient(theta, a, b);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == Approx(0.1659636900055439).epsilon(1e-9));
  CHECK(std::abs(g[1]) <= 1e-12);  // first RZ acts on |0> as a global phase
  CHECK(g[2] == Approx(-0.17639726754203888).epsilon(1e-9));
  CHECK(g[3] == Approx(0.16519313532675772).epsilon(1e-9));
}

TEST_CASE("cost bounds") {
  RandomStream rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> t(4);
    for (auto& v : t) v = rng.uniform(-kPi, kPi);
    const EmbeddingParams theta(t);
    std::vector<DataSample> a, b;
    for (int k = 0; k < 4; ++k) {
      a.push_back({rng.normal(), rng.normal(), 0});
      b.push_back({rng.normal(), rng.normal(), 1});
    }
    const auto terms = overlap_terms(theta, a, b);
    const double c = cost_from_terms(terms);
    CHECK(c >= -1e-12);
    CHECK(c <= 1.5 + 1e-12);
    CHECK(c == Approx(cost(theta, a, b)));
  }
}

TEST_CASE("gradient properties") {
  SUBCASE("constant region gives zero") {
    // x = (0, 0) and a single layer: only theta[0] acts non-trivially, and
    // with both classes at the same point the cost stays 1.
    const auto a = at({{0, 0}}, 0), b = at({{0, 0}}, 1);
    for (double g : cost_gradient(EmbeddingParams({0.4, 0.9}), a, b)) CHECK(std::abs(g) <= 1e-12);
  }
  SUBCASE("directional derivative at a finer step") {
    RandomStream rng(6);
    const auto a = at({{-1.0, -0.8}, {-1.2, -1.1}, {-0.7, -1.3}}, 0);
    const auto b = at({{0.9, 1.2}, {1.1, 0.8}}, 1);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> t(6), d(6);
      for (auto& v : t) v = rng.uniform(-1, 1);
      for (auto& v : d) v = rng.normal();
      const auto g = cost_gradient(EmbeddingParams(t), a, b);
      double dd = 0;
      for (int k = 0; k < 6; ++k) dd += g[k] * d[k];
      const double eps = 1e-5;
      std::vector<double> tp(t), tm(t);
      for (int k = 0; k < 6; ++k) {
        tp[k] += eps * d[k];
        tm[k] -= eps * d[k];
      }
      const double fd =
          (cost(EmbeddingParams(tp), a, b) - cost(EmbeddingParams(tm), a, b)) / (2 * eps);
      CHECK(std::abs(dd - fd) <= 1e-3 * std::max(std::abs(fd), 1e-6));
    }
  }
  SUBCASE("sign matches a coarse secant") {
    const auto a = at({{-1.0, -0.8}, {-1.2, -1.1}}, 0);
    const auto b = at({{0.9, 1.2}, {1.1, 0.8}}, 1);
    RandomStream rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> t = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const double g = cost_gradient(EmbeddingParams(t), a, b)[0];
      auto tp = t, tm = t;
      tp[0] += 0.1;
      tm[0] -= 0.1;
      const double secant = cost(EmbeddingParams(tp), a, b) - cost(EmbeddingParams(tm), a, b);
      if (std::abs(secant) > 1e-6) CHECK((g > 0) == (secant > 0));
    }
  }
}

TEST_CASE("rmsprop_step") {
  SUBCASE("zero gradient") {
    const std::vector<double> t = {0.5, -0.2}, g = {0, 0}, acc = {0.4, 0.1};
    const auto u = rmsprop_step(t, g, acc, 0.01);
    CHECK(u.theta == t);
    CHECK(u.accum[0] == Approx(0.36));
    CHECK(u.accum[1] == Approx(0.09));
  }
  SUBCASE("first step magnitude is step / sqrt(0.1)") {
    const std::vector<double> t = {0, 0, 0}, g = {2.0, -0.3, 7.0}, acc = {0, 0, 0};
    const auto u = rmsprop_step(t, g, acc, 0.01);
    CHECK(std::abs(u.theta[0]) == Approx(0.03162277660168379).epsilon(1e-6));
    CHECK(u.theta[1] == Approx(0.03162277660168379).epsilon(1e-6));
    CHECK(u.theta[2] == Approx(-0.03162277660168379).epsilon(1e-6));
  }
  SUBCASE("repeated gradients converge to step size") {
    std::vector<double> t = {0}, acc = {0};
    const std::vector<double> g = {0.7};
    double last = 0;
    for (int i = 0; i < 200; ++i) {
      const auto u = rmsprop_step(t, g, acc, 0.01);
      last = std::abs(u.theta[0] - t[0]);
      t = u.theta;
      acc = u.accum;
    }
    CHECK(last == Approx(0.01).epsilon(1e-6));
  }
  SUBCASE("shape mismatch") {
    const std::vector<double> t = {0, 0}, g = {1}, acc = {0, 0};
    CHECK_THROWS_AS(rmsprop_step(t, g, acc, 0.01), ValidationError);
  }
}

TEST_CASE("train") {
  const OracleConfig blobs{Distribution::SeparableBlobs, 0.3, 21};
  SUBCASE("zero iterations returns the initialization") {
    TrainConfig cfg;
    cfg.iterations = 0;
    cfg.seed = 9;
    const auto r = train(cfg, blobs);
    CHECK(r.history.empty());
    REQUIRE(r.theta.size() == 6);
    for (double v : r.theta.values()) {
      CHECK(v >= -0.1);
      CHECK(v <= 0.1);
    }
  }
  SUBCASE("reproducible and decreasing on separable data") {
    TrainConfig cfg;
    cfg.seed = 10;
    const auto r1 = train(cfg, blobs), r2 = train(cfg, blobs);
    CHECK(r1.history == r2.history);
    CHECK(r1.theta == r2.theta);
    REQUIRE(r1.history.size() == 500);
    CHECK(r1.history.back() < r1.history.front());
  }
  SUBCASE("hidden labels stay near the identical-ensemble cost") {
    const OracleConfig hidden{Distribution::HiddenLabels, 1.0, 22};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      TrainConfig cfg;
      cfg.seed = seed;
      const auto r = train(cfg, {hidden.distribution, hidden.spread, hidden.seed + seed});
      CHECK(r.history.back() >= 0.45);
    }
  }
  SUBCASE("shot-sampled overlaps still train") {
    TrainConfig cfg;
    cfg.seed = 11;
    cfg.shots = 200;
    const auto r = train(cfg, blobs);
    CHECK(r.history.back() < r.history.front());
  }
  SUBCASE("invalid config") {
    TrainConfig cfg;
    cfg.layers = 0;
    CHECK_THROWS_AS(train(cfg, blobs), ValidationError);
    cfg = TrainConfig{};
    cfg.batchA = 1;
    CHECK_THROWS_AS(train(cfg, blobs), ValidationError);
    cfg = TrainConfig{};
    cfg.stepSize = 0;
    CHECK_THROWS_AS(train(cfg, blobs), ValidationError);
  }
}

TEST_CASE("falling cost tracks rising held-out angle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const OracleConfig oracle{Distribution::SeparableBlobs, 0.3, 100 + seed};
    RandomStream held_rng(200 + seed);
    auto held = oracle_draw(oracle, 500, 0, held_rng);
    const auto h1 = oracle_draw(oracle, 500, 1, held_rng);
    held.insert(held.end(), h1.begin(), h1.end());

    TrainConfig cfg;
    cfg.seed = seed;
    std::vector<double> window_cost, angle;
    double acc = 0;
    int count = 0;
    train(cfg, oracle, [&](int it, const EmbeddingParams& theta, double c) {
      acc += c;
      ++count;
      if ((it + 1) % 25 == 0) {
        window_cost.push_back(acc / count);
        angle.push_back(true_angle(theta, held));
        acc = 0;
        count = 0;
      }
    });
    CHECK(spearman(window_cost, angle) <= -0.5);
  }
}

TEST_CASE("true_angle") {
  const auto theta = EmbeddingParams::zeros(1);
  SUBCASE("identical embeddings give zero") {
    auto s = at({{0.3, 0.1}, {0.3, 0.1}}, 0);
    const auto t = at({{0.3, 0.1}}, 1);
    s.insert(s.end(), t.begin(), t.end());
    CHECK(true_angle(theta, s) == Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("orthogonal classes give pi/2") {
    auto s = at({{0, 0}, {0, 0}}, 0);
    const auto t = at({{kPi, 0}}, 1);
    s.insert(s.end(), t.begin(), t.end());
    CHECK(true_angle(theta, s) == Approx(kPi / 2));
  }
  SUBCASE("mixed case against summed outer products") {
    RandomStream rng(8);
    const OracleConfig cfg{Distribution::SeparableBlobs, 0.6, 0};
    auto s = oracle_draw(cfg, 40, 0, rng);
    const auto t = oracle_draw(cfg, 30, 1, rng);
    s.insert(s.end(), t.begin(), t.end());
    const EmbeddingParams th({0.4, -0.3, 1.2, 0.8});
    const auto r0 = brute_ensemble(th, s, 0), r1 = brute_ensemble(th, s, 1);
    const auto d0 = qcore::QubitDensity::from_entries(r0(0, 0), r0(0, 1), r0(1, 0), r0(1, 1));
    const auto d1 = qcore::QubitDensity::from_entries(r1(0, 0), r1(0, 1), r1(1, 0), r1(1, 1));
    const double expect = std::acos(std::sqrt(testing::brute_fidelity(d0, d1)));
    const double got = true_angle(th, s);
    CHECK(std::abs(got - expect) <= 1e-10);
    CHECK(got >= 0.0);
    CHECK(got <= kPi / 2);
  }
  SUBCASE("single class is rejected") {
    CHECK_THROWS_AS(true_angle(theta, at({{0, 0}}, 0)), ValidationError);
  }
}
