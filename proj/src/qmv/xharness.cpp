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

#include "qmv/xharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "qmv/errors.hpp"
#include "qmv/io.hpp"
#include "qmv/plot.hpp"

namespace qmv::xharness {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

struct KindName {
  ExperimentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::AngleGrid, "angle-grid"},
    {ExperimentKind::NSweepAngle, "n-sweep-angle"},
    {ExperimentKind::NSweepFidelity, "n-sweep-fidelity"},
    {ExperimentKind::SoundnessSweep, "soundness"},
    {ExperimentKind::CompletenessSweep, "completeness"},
    {ExperimentKind::TrainAndVerify, "train-verify"},
    {ExperimentKind::MultiGroup, "multi-group"},
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Typed view over a ParamMap. Every getter validates its value.
class Params {
 public:
  explicit Params(const ParamMap& m) : m_(m) {}

  bool has(const std::string& key) const { return m_.contains(key); }

  std::uint64_t u64(const std::string& key, std::uint64_t def) const {
    const auto* v = find(key);
    if (!v) return def;
    std::uint64_t out = 0;
    if (!io::parse_u64(io::trim(*v), out)) bad(key, *v, "a non-negative integer");
    return out;
  }

  int integer(const std::string& key, int def) const {
    const auto* v = find(key);
    if (!v) return def;
    int out = 0;
    if (!io::parse_int(io::trim(*v), out)) bad(key, *v, "an integer");
    return out;
  }

  double real(const std::string& key, double def) const {
    const auto* v = find(key);
    if (!v) return def;
    double out = 0;
    if (!io::parse_double(io::trim(*v), out) || !std::isfinite(out)) bad(key, *v, "a number");
    return out;
  }

  double angle(const std::string& key, double def) const {
    const auto* v = find(key);
    if (!v) return def;
    try {
      return parse_angle(*v);
    } catch (const ValidationError&) {
      bad(key, *v, "an angle in radians (or a multiple of pi such as 0.3pi)");
    }
  }

  bool boolean(const std::string& key, bool def) const {
    const auto* v = find(key);
    if (!v) return def;
    const auto t = io::trim(*v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    bad(key, *v, "true or false");
  }

  std::string text(const std::string& key, const std::string& def) const {
    const auto* v = find(key);
    return v ? std::string(io::trim(*v)) : def;
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    const auto* v = find(key);
    if (!v) return out;
    std::string_view rest = *v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = io::trim(rest.substr(0, comma));
      if (item.empty()) bad(key, *v, "a comma-separated list");
      out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      if (rest.empty()) bad(key, *v, "a comma-separated list");
    }
    return out;
  }

  // "n-list" if present, otherwise {n} if present, otherwise the default.
  std::vector<std::uint64_t> n_list(const std::vector<std::uint64_t>& def) const {
    std::vector<std::uint64_t> out;
    if (has("n-list")) {
      for (const auto& item : list("n-list")) {
        std::uint64_t n = 0;
        if (!io::parse_u64(item, n)) bad("n-list", m_.at("n-list"), "a list of integers");
        out.push_back(n);
      }
    } else if (has("n")) {
      out.push_back(u64("n", 0));
    } else {
      out = def;
    }
    if (out.empty()) throw ValidationError("n-list must not be empty");
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] < 3) throw ValidationError("every N must be >= 3");
      if (i > 0 && out[i] <= out[i - 1]) throw ValidationError("n-list must be ascending");
    }
    return out;
  }

 private:
  const std::string* find(const std::string& key) const {
    const auto it = m_.find(key);
    return it == m_.end() ? nullptr : &it->second;
  }

  [[noreturn]] static void bad(const std::string& key, const std::string& value,
                               const std::string& expected) {
    throw ValidationError("parameter '" + key + "' = '" + value + "': expected " + expected);
  }

  const ParamMap& m_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

void check_gamma(double g) { require(g > 0.0 && g < kHalfPi, "gamma must lie in (0, pi/2)"); }
void check_claim(double c) { require(c >= 0.0 && c <= kHalfPi, "claim must lie in [0, pi/2]"); }

Orientation read_orientation(const Params& p, Orientation def) {
  const auto s = p.text("orientation", def == Orientation::Haar ? "haar" : "computational");
  if (s == "haar") return Orientation::Haar;
  if (s == "computational") return Orientation::Computational;
  throw ValidationError("orientation must be 'haar' or 'computational'");
}

TrainSettings read_train(const Params& p) {
  TrainSettings t;
  t.train.layers = p.integer("layers", t.train.layers);
  t.train.iterations = p.integer("iterations", t.train.iterations);
  t.train.batchA = p.integer("batch-a", t.train.batchA);
  t.train.batchB = p.integer("batch-b", t.train.batchB);
  t.train.stepSize = p.real("step-size", t.train.stepSize);
  t.train.shots = p.integer("shots", t.train.shots);
  t.spread = p.real("spread", t.spread);
  t.heldOut = p.u64("held-out", t.heldOut);
  t.train.validate();
  require(t.spread > 0.0, "spread must be positive");
  require(t.heldOut >= 1, "held-out must be >= 1");
  return t;
}

AngleGridSettings read_angle_grid(const Params& p) {
  AngleGridSettings s;
  s.seed = p.u64("seed", s.seed);
  s.trials = p.integer("trials", s.trials);
  s.n = p.u64("n", s.n);
  s.gamma = p.real("gamma", s.gamma);
  s.gridPoints = p.integer("grid-points", s.gridPoints);
  s.sigma = p.real("sigma", s.sigma);
  s.spread = p.real("spread", s.spread);
  s.orientation = read_orientation(p, s.orientation);
  require(s.trials >= 1, "trials must be >= 1");
  require(s.n >= 3, "n must be >= 3");
  require(s.gridPoints >= 2, "grid-points must be >= 2");
  require(s.sigma >= 0.0, "sigma must be >= 0");
  require(s.spread > 0.0, "spread must be positive");
  check_gamma(s.gamma);
  return s;
}

NSweepSettings read_n_sweep(const Params& p) {
  NSweepSettings s;
  s.seed = p.u64("seed", s.seed);
  s.trials = p.integer("trials", s.trials);
  s.nList = p.n_list(s.nList);
  s.gamma = p.real("gamma", s.gamma);
  s.claim = p.angle("claim", s.claim);
  s.model = read_train(p);
  require(s.trials >= 1, "trials must be >= 1");
  check_gamma(s.gamma);
  check_claim(s.claim);
  return s;
}

SoundnessSettings read_soundness(const Params& p) {
  SoundnessSettings s;
  s.seed = p.u64("seed", s.seed);
  s.trials = p.integer("trials", s.trials);
  s.nList = p.n_list(s.nList);
  s.gamma = p.real("gamma", s.gamma);
  s.spread = p.real("spread", s.spread);
  if (p.has("strategies")) {
    s.strategies.clear();
    for (const auto& name : p.list("strategies")) {
      s.strategies.push_back(provers::parse_adversary(name));
    }
  }
  require(s.trials >= 100, "soundness sweeps need trials >= 100");
  require(s.spread > 0.0, "spread must be positive");
  check_gamma(s.gamma);
  return s;
}

CompletenessSettings read_completeness(const Params& p) {
  CompletenessSettings s;
  s.seed = p.u64("seed", s.seed);
  s.trials = p.integer("trials", s.trials);
  s.nList = p.n_list(s.nList);
  s.gamma = p.real("gamma", s.gamma);
  s.sigma = p.real("sigma", s.sigma);
  s.orientation = read_orientation(p, s.orientation);
  require(s.trials >= 100, "completeness sweeps need trials >= 100");
  require(s.sigma >= 0.0, "sigma must be >= 0");
  check_gamma(s.gamma);
  return s;
}

TrainVerifySettings read_train_verify(const Params& p) {
  TrainVerifySettings s;
  s.seed = p.u64("seed", s.seed);
  s.n = p.u64("n", s.n);
  s.gamma = p.real("gamma", s.gamma);
  s.claim = p.angle("claim", s.claim);
  s.model = read_train(p);
  require(s.n >= 3, "n must be >= 3");
  check_gamma(s.gamma);
  check_claim(s.claim);
  return s;
}

MultiGroupSettings read_multi_group(const Params& p) {
  MultiGroupSettings s;
  s.seed = p.u64("seed", s.seed);
  s.n = p.u64("n", s.n);
  s.gamma = p.real("gamma", s.gamma);
  s.sigma = p.real("sigma", s.sigma);
  s.groups = p.integer("groups", s.groups);
  s.exact = p.boolean("exact", s.exact);
  require(s.n >= 3, "n must be >= 3");
  require(s.groups >= 2, "groups must be >= 2");
  require(s.sigma >= 0.0, "sigma must be >= 0");
  check_gamma(s.gamma);
  return s;
}

verifier::ProtocolConfig protocol_config(std::uint64_t n, double gamma, double claim,
                                         std::uint64_t seed) {
  verifier::ProtocolConfig c;
  c.nPerGroup = n;
  c.gamma = gamma;
  c.claimedAngle = claim;
  c.seed = seed;
  return c;
}

std::string u64s(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::string_view to_string(ExperimentKind k) noexcept {
  for (const auto& kn : kKindNames) {
    if (kn.kind == k) return kn.name;
  }
  return "?";
}

ExperimentKind parse_kind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  throw ValidationError("unknown experiment kind '" + std::string(name) + "'");
}

SeedSet trial_seeds(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  const std::uint64_t base = mix_seed(mix_seed(master, point), trial);
  return {mix_seed(base, 1), mix_seed(base, 2), mix_seed(base, 3)};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(n, hw);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

provers::ProverPtr make_synthetic_prover(double angle, double sigma, std::uint64_t seed,
                                         Orientation orientation) {
  provers::SyntheticProverConfig cfg;
  cfg.targetAngle = angle;
  cfg.perturbSigma = sigma;
  cfg.seed = seed;
  cfg.frame = orientation;
  return provers::synthetic_angle_prover(cfg, embedding::blob_label);
}

std::vector<AngleGridRow> run_angle_grid(const AngleGridSettings& s) {
  std::vector<AngleGridRow> rows;
  for (int g = 0; g < s.gridPoints; ++g) {
    const double angle =
        g == s.gridPoints - 1 ? kHalfPi : kHalfPi * g / static_cast<double>(s.gridPoints - 1);
    std::vector<double> theta(static_cast<std::size_t>(s.trials));
    parallel_for(theta.size(), [&](std::size_t t) {
      const auto seeds = trial_seeds(s.seed, static_cast<std::uint64_t>(g), t);
      embedding::OracleConfig oracle{embedding::Distribution::SeparableBlobs, s.spread,
                                     seeds.oracle};
      auto prover = make_synthetic_prover(angle, s.sigma, seeds.prover, s.orientation);
      theta[t] = verifier::run_protocol(oracle, *prover,
                                        protocol_config(s.n, s.gamma, kHalfPi, seeds.protocol))
                     .verdict.thetaHat;
    });
    double abs_err = 0.0;
    for (double v : theta) abs_err += std::abs(v - angle);
    rows.push_back({angle, mean_of(theta), sample_std(theta), s.trials,
                    abs_err / static_cast<double>(theta.size())});
  }
  return rows;
}

TrainedModel train_model(const TrainSettings& s, std::uint64_t master) {
  embedding::TrainConfig cfg = s.train;
  cfg.seed = mix_seed(master, 11);
  const embedding::OracleConfig oracle{embedding::Distribution::SeparableBlobs, s.spread,
                                       mix_seed(master, 12)};
  auto trained = embedding::train(cfg, oracle);

  RandomStream held_rng(mix_seed(master, 13));
  auto held = embedding::oracle_draw(oracle, s.heldOut, 0, held_rng);
  const auto held1 = embedding::oracle_draw(oracle, s.heldOut, 1, held_rng);
  held.insert(held.end(), held1.begin(), held1.end());

  TrainedModel m{trained.theta, std::move(trained.history), oracle, 0.0, 1.0};
  m.trueFidelity = embedding::true_fidelity(m.theta, held);
  m.trueAngle = qcore::bures_angle(m.trueFidelity);
  return m;
}

std::vector<NSweepRow> run_n_sweep(const NSweepSettings& s, SweepQuantity q) {
  const TrainedModel model = train_model(s.model, s.seed);
  const double truth = q == SweepQuantity::Angle ? model.trueAngle : model.trueFidelity;
  std::vector<NSweepRow> rows;
  for (std::size_t k = 0; k < s.nList.size(); ++k) {
    std::vector<double> est(static_cast<std::size_t>(s.trials));
    parallel_for(est.size(), [&](std::size_t t) {
      const auto seeds = trial_seeds(s.seed, 100 + k, t);
      embedding::OracleConfig oracle = model.oracle;
      oracle.seed = seeds.oracle;
      auto prover = provers::honest_prover(model.theta);
      const auto v = verifier::run_protocol(
                         oracle, *prover, protocol_config(s.nList[k], s.gamma, s.claim, seeds.protocol))
                         .verdict;
      est[t] = q == SweepQuantity::Angle ? v.thetaHat : v.fidelityHat;
    });
    double abs_err = 0.0;
    for (double v : est) abs_err += std::abs(v - truth);
    rows.push_back({s.nList[k], mean_of(est), truth, abs_err / static_cast<double>(est.size())});
  }
  return rows;
}

std::vector<SoundnessRow> run_soundness_sweep(const SoundnessSettings& s) {
  std::vector<SoundnessRow> rows;
  for (std::size_t si = 0; si < s.strategies.size(); ++si) {
    const auto strategy = s.strategies[si];
    for (std::size_t k = 0; k < s.nList.size(); ++k) {
      std::vector<double> theta(static_cast<std::size_t>(s.trials));
      std::vector<int> accepted(theta.size(), 0);
      parallel_for(theta.size(), [&](std::size_t t) {
        const auto seeds = trial_seeds(s.seed, 1000 * (si + 1) + k, t);
        embedding::OracleConfig oracle{embedding::Distribution::HiddenLabels, s.spread,
                                       seeds.oracle};
        auto prover = provers::adversarial_prover(strategy, seeds.prover);
        auto cfg = protocol_config(s.nList[k], s.gamma, kHalfPi, seeds.protocol);
        if (prover->needs_batch()) cfg.mode = verifier::ProverMode::BatchedReplay;
        const auto v = verifier::run_protocol(oracle, *prover, cfg).verdict;
        theta[t] = v.thetaHat;
        accepted[t] = v.flag == verifier::Flag::Accept ? 1 : 0;
      });
      double acc = 0.0;
      for (int a : accepted) acc += a;
      rows.push_back({strategy, s.nList[k], acc / static_cast<double>(theta.size()),
                      mean_of(theta)});
    }
  }
  return rows;
}

std::vector<CompletenessRow> run_completeness_sweep(const CompletenessSettings& s) {
  std::vector<CompletenessRow> rows;
  for (std::size_t k = 0; k < s.nList.size(); ++k) {
    std::vector<int> accepted(static_cast<std::size_t>(s.trials), 0);
    parallel_for(accepted.size(), [&](std::size_t t) {
      const auto seeds = trial_seeds(s.seed, k, t);
      embedding::OracleConfig oracle{embedding::Distribution::SeparableBlobs, 0.3, seeds.oracle};
      auto prover = make_synthetic_prover(kHalfPi, s.sigma, seeds.prover, s.orientation);
      const auto v = verifier::run_protocol(
                         oracle, *prover, protocol_config(s.nList[k], s.gamma, kHalfPi, seeds.protocol))
                         .verdict;
      accepted[t] = v.flag == verifier::Flag::Accept ? 1 : 0;
    });
    double acc = 0.0;
    for (int a : accepted) acc += a;
    rows.push_back({s.nList[k], acc / static_cast<double>(accepted.size())});
  }
  return rows;
}

TrainVerifyReport run_train_and_verify(const TrainVerifySettings& s) {
  TrainedModel model = train_model(s.model, s.seed);
  embedding::OracleConfig oracle = model.oracle;
  oracle.seed = mix_seed(s.seed, 21);
  auto prover = provers::honest_prover(model.theta);
  auto result =
      verifier::run_protocol(oracle, *prover, protocol_config(s.n, s.gamma, s.claim, mix_seed(s.seed, 22)));
  return {std::move(model), std::move(result)};
}

MultiGroupReport run_multi_group(const MultiGroupSettings& s) {
  const std::size_t k = static_cast<std::size_t>(s.groups);
  std::vector<qcore::PureQubit> refs;
  for (std::size_t g = 0; g < k; ++g) {
    // Bloch polar angle phi in the x-z plane: cos(phi/2)|0> + sin(phi/2)|1>.
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(k);
    refs.push_back(qcore::PureQubit::normalized(std::cos(phi / 2), std::sin(phi / 2)));
  }

  MultiGroupReport rep;
  rep.reconstructions.resize(k, qcore::QubitDensity::maximally_mixed());
  parallel_for(k, [&](std::size_t g) {
    const auto ref = qcore::QubitDensity::pure(refs[g]);
    if (s.exact) {
      rep.reconstructions[g] = qcore::reconstruct_density(qcore::exact_probabilities(ref));
      return;
    }
    const RandomStream master(trial_seeds(s.seed, g, 0).protocol);
    RandomStream bases_rng = master.child(1);
    RandomStream jitter = master.child(2);
    RandomStream measure = master.child(3);
    const auto bases = verifier::allocate_bases(static_cast<std::size_t>(s.n), bases_rng);
    std::vector<verifier::MeasurementRecord> records;
    records.reserve(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
      qcore::QubitDensity rho = ref;
      if (s.sigma > 0.0) {
        const double w = std::abs(jitter.normal(0.0, s.sigma));
        rho = qcore::QubitDensity::pure(qcore::rotate(refs[g], qcore::random_unit_axis(jitter), w));
      }
      records.push_back({i, 0, bases[i], qcore::sample_outcome(rho, bases[i], measure)});
    }
    rep.reconstructions[g] = qcore::reconstruct_density(verifier::estimate_probs(records));
  });

  rep.estimated = verifier::multi_group_verify(rep.reconstructions, s.gamma);
  rep.trueAngles.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) rep.trueAngles[i * k + j] = std::acos(std::sqrt(qcore::overlap(refs[i], refs[j])));
    }
  }
  return rep;
}

std::vector<std::string> allowed_params(ExperimentKind kind) {
  const std::vector<std::string> train = {"layers", "iterations", "batch-a",  "batch-b",
                                          "step-size", "spread",  "held-out", "shots"};
  std::vector<std::string> out;
  switch (kind) {
    case ExperimentKind::AngleGrid:
      out = {"seed", "trials", "n", "gamma", "grid-points", "sigma", "spread", "orientation"};
      break;
    case ExperimentKind::NSweepAngle:
    case ExperimentKind::NSweepFidelity:
      out = {"seed", "trials", "n", "n-list", "gamma", "claim"};
      out.insert(out.end(), train.begin(), train.end());
      break;
    case ExperimentKind::SoundnessSweep:
      out = {"seed", "trials", "n", "n-list", "gamma", "strategies", "spread"};
      break;
    case ExperimentKind::CompletenessSweep:
      out = {"seed", "trials", "n", "n-list", "gamma", "sigma", "orientation"};
      break;
    case ExperimentKind::TrainAndVerify:
      out = {"seed", "n", "gamma", "claim"};
      out.insert(out.end(), train.begin(), train.end());
      break;
    case ExperimentKind::MultiGroup:
      out = {"seed", "n", "gamma", "sigma", "groups", "exact"};
      break;
  }
  return out;
}

ParamMap parse_config_text(std::string_view text) {
  ParamMap out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = io::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = io::trim(line.substr(0, eq));
    const auto value = io::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    out[std::string(key)] = std::string(value);
  }
  return out;
}

ParamMap load_config_file(const std::filesystem::path& path) {
  return parse_config_text(io::read_file(path));
}

double parse_angle(std::string_view text) {
  auto t = io::trim(text);
  double scale = 1.0;
  if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
    scale = std::numbers::pi;
    t = io::trim(t.substr(0, t.size() - 2));
    if (!t.empty() && t.back() == '*') t = io::trim(t.substr(0, t.size() - 1));
    if (t.empty()) return scale;
  }
  double v = 0.0;
  if (!io::parse_double(t, v) || !std::isfinite(v)) {
    throw ValidationError("cannot parse angle '" + std::string(text) + "'");
  }
  return v * scale;
}

std::string cell(double v) { return io::format_g(v, 12); }

void validate_spec(const ExperimentSpec& spec) {
  const auto allowed = allowed_params(spec.kind);
  for (const auto& [key, value] : spec.params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("parameter '" + key + "' is not used by " +
                            std::string(to_string(spec.kind)));
    }
  }
  const Params p(spec.params);
  switch (spec.kind) {
    case ExperimentKind::AngleGrid:
      read_angle_grid(p);
      break;
    case ExperimentKind::NSweepAngle:
    case ExperimentKind::NSweepFidelity:
      read_n_sweep(p);
      break;
    case ExperimentKind::SoundnessSweep:
      read_soundness(p);
      break;
    case ExperimentKind::CompletenessSweep:
      read_completeness(p);
      break;
    case ExperimentKind::TrainAndVerify:
      read_train_verify(p);
      break;
    case ExperimentKind::MultiGroup:
      read_multi_group(p);
      break;
  }
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const Params p(spec.params);
  ExperimentOutput out;
  out.name = std::string(to_string(spec.kind));
  plot::AxesSpec axes;
  std::string transcript;

  switch (spec.kind) {
    case ExperimentKind::AngleGrid: {
      const auto s = read_angle_grid(p);
      const auto rows = run_angle_grid(s);
      out.table.header = {"trueAngle", "meanThetaHat", "stdThetaHat", "trials"};
      for (const auto& r : rows) {
        out.table.rows.push_back(
            {cell(r.trueAngle), cell(r.meanThetaHat), cell(r.stdThetaHat), std::to_string(r.trials)});
        out.report += "angle " + cell(r.trueAngle) + ": mean estimate " + cell(r.meanThetaHat) +
                      ", mean |error| " + cell(r.meanAbsError) + "\n";
      }
      axes = {"Estimated vs true separation angle", "trueAngle", {"meanThetaHat"}, "",
              "true angle (rad)", "estimated angle (rad)", false, true};
      break;
    }
    case ExperimentKind::NSweepAngle:
    case ExperimentKind::NSweepFidelity: {
      const auto s = read_n_sweep(p);
      const bool angle = spec.kind == ExperimentKind::NSweepAngle;
      const auto rows = run_n_sweep(s, angle ? SweepQuantity::Angle : SweepQuantity::Fidelity);
      out.table.header = {"N", "estimate", "trueValue"};
      for (const auto& r : rows) {
        out.table.rows.push_back({u64s(r.n), cell(r.estimate), cell(r.trueValue)});
        out.report += "N " + u64s(r.n) + ": estimate " + cell(r.estimate) + " (true " +
                      cell(r.trueValue) + ", |error| " + cell(r.meanAbsError) + ")\n";
      }
      axes = {angle ? "Angle estimate vs number of samples" : "Fidelity estimate vs number of samples",
              "N", {"estimate", "trueValue"}, "", "samples per group N",
              angle ? "angle (rad)" : "fidelity", true, false};
      break;
    }
    case ExperimentKind::SoundnessSweep: {
      const auto s = read_soundness(p);
      const auto rows = run_soundness_sweep(s);
      out.table.header = {"strategy", "N", "acceptRate", "meanThetaHat"};
      for (const auto& r : rows) {
        const std::string name(provers::to_string(r.strategy));
        out.table.rows.push_back({name, u64s(r.n), cell(r.acceptRate), cell(r.meanThetaHat)});
        out.report += name + " N " + u64s(r.n) + ": accept rate " + cell(r.acceptRate) +
                      ", mean angle " + cell(r.meanThetaHat) + "\n";
      }
      axes = {"Adversary acceptance rate", "N", {"acceptRate"}, "strategy", "samples per group N",
              "acceptance rate", true, false};
      break;
    }
    case ExperimentKind::CompletenessSweep: {
      const auto s = read_completeness(p);
      const auto rows = run_completeness_sweep(s);
      out.table.header = {"N", "acceptRate"};
      for (const auto& r : rows) {
        out.table.rows.push_back({u64s(r.n), cell(r.acceptRate)});
        out.report += "N " + u64s(r.n) + ": accept rate " + cell(r.acceptRate) + "\n";
      }
      axes = {"Honest prover acceptance rate", "N", {"acceptRate"}, "", "samples per group N",
              "acceptance rate", true, false};
      break;
    }
    case ExperimentKind::TrainAndVerify: {
      const auto s = read_train_verify(p);
      const auto rep = run_train_and_verify(s);
      out.table.header = {"iteration", "cost"};
      for (std::size_t i = 0; i < rep.model.history.size(); ++i) {
        out.table.rows.push_back({std::to_string(i), cell(rep.model.history[i])});
      }
      const auto& v = rep.protocol.verdict;
      const bool consistent = verifier::decide(v.thetaHat, rep.protocol.transcript.config) == v.flag;
      out.report += "true_angle = " + cell(rep.model.trueAngle) + "\n";
      out.report += "true_fidelity = " + cell(rep.model.trueFidelity) + "\n";
      out.report += "theta_hat = " + cell(v.thetaHat) + "\n";
      out.report += "fidelity_hat = " + cell(v.fidelityHat) + "\n";
      out.report += "claim = " + cell(s.claim) + "\n";
      out.report += "gamma = " + cell(s.gamma) + "\n";
      out.report += "n_per_group = " + u64s(s.n) + "\n";
      out.report += "verdict = " + std::string(verifier::to_string(v.flag)) + "\n";
      out.report += std::string("decide_consistent = ") + (consistent ? "yes" : "no") + "\n";
      if (!rep.model.history.empty()) {
        out.report += "initial_cost = " + cell(rep.model.history.front()) + "\n";
        out.report += "final_cost = " + cell(rep.model.history.back()) + "\n";
      }
      transcript = verifier::transcript_serialize(rep.protocol.transcript);
      axes = {"Training cost", "iteration", {"cost"}, "", "iteration", "cost", false, false};
      break;
    }
    case ExperimentKind::MultiGroup: {
      const auto s = read_multi_group(p);
      const auto rep = run_multi_group(s);
      out.table.header = {"pair", "i", "j", "thetaHat", "trueAngle"};
      const std::size_t k = rep.estimated.groups;
      std::size_t pair = 0;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          out.table.rows.push_back({std::to_string(pair++), std::to_string(i), std::to_string(j),
                                    cell(rep.estimated.angle(i, j)), cell(rep.trueAngles[i * k + j])});
        }
      }
      out.report += "groups = " + std::to_string(k) + "\n";
      out.report += "pairs = " + std::to_string(pair) + "\n";
      out.report += "n_per_group = " + u64s(s.n) + "\n";
      out.report += "gamma = " + cell(s.gamma) + "\n";
      out.report += "min_angle = " + cell(rep.estimated.minAngle) + "\n";
      out.report += "mean_angle = " + cell(rep.estimated.meanAngle) + "\n";
      out.report += std::string("all_pass = ") + (rep.estimated.allPass ? "yes" : "no") + "\n";
      axes = {"Pairwise group angles", "pair", {"thetaHat", "trueAngle"}, "", "group pair",
              "angle (rad)", false, false};
      break;
    }
  }

  const auto base = spec.outDir / out.name;
  auto with_ext = [&base](const char* ext) {
    auto path = base;
    path += ext;
    return path;
  };
  io::write_file_atomic(with_ext(".csv"), out.table.to_csv());
  out.files.push_back(with_ext(".csv"));
  if (!out.table.rows.empty()) {
    plot::emit_plot(out.table, axes, with_ext(".svg"));
    out.files.push_back(with_ext(".svg"));
  }
  io::write_file_atomic(with_ext(".txt"), out.report);
  out.files.push_back(with_ext(".txt"));
  if (!transcript.empty()) {
    io::write_file_atomic(with_ext(".transcript"), transcript);
    out.files.push_back(with_ext(".transcript"));
  }
  return out;
}

}  // namespace qmv::xharness
