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

#include "qmv/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "qmv/errors.hpp"

namespace qmv::verifier {

using embedding::DataSample;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Stream ids under the protocol seed.
constexpr std::uint64_t kBasesPsiStream = 1;
constexpr std::uint64_t kBasesPhiStream = 2;
constexpr std::uint64_t kInterleaveStream = 3;
constexpr std::uint64_t kMeasureStream = 4;

template <typename T>
void fisher_yates(std::vector<T>& v, RandomStream& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

bool is_half_pi(double claim) { return std::abs(claim - kHalfPi) <= 1e-12; }

}  // namespace

std::string_view to_string(Flag f) noexcept { return f == Flag::Accept ? "ACCEPT" : "REJECT"; }

void ProtocolConfig::validate() const {
  if (nPerGroup < 3) throw ValidationError("protocol: nPerGroup must be >= 3");
  if (!(gamma > 0.0 && gamma < kHalfPi)) {
    throw ValidationError("protocol: gamma must lie in (0, pi/2)");
  }
  if (!(claimedAngle >= 0.0 && claimedAngle <= kHalfPi + 1e-12)) {
    throw ValidationError("protocol: claimed angle must lie in [0, pi/2]");
  }
}

double suggested_gamma(std::uint64_t nPerGroup) {
  if (nPerGroup == 0) throw ValidationError("suggested_gamma: N must be positive");
  return std::max(0.05, 3.0 * std::sqrt(3.0 / static_cast<double>(nPerGroup)));
}

std::vector<MeasBasis> allocate_bases(std::size_t n, RandomStream& rng) {
  if (n < 3) throw ValidationError("allocate_bases: n must be >= 3");
  std::vector<MeasBasis> out;
  out.reserve(n);
  const std::size_t per = n / 3;
  for (auto b : qcore::kAllBases) out.insert(out.end(), per, b);
  for (std::size_t r = 0; r < n % 3; ++r) out.push_back(qcore::kAllBases[r]);
  fisher_yates(out, rng);
  return out;
}

SendSchedule interleave_sends(std::span<const DataSample> psi, std::span<const DataSample> phi,
                              RandomStream& rng) {
  if (psi.empty() || phi.empty()) {
    throw ValidationError("interleave_sends: both groups must be non-empty");
  }
  struct Pooled {
    double x1, x2;
    SendOrigin origin;
  };
  std::vector<Pooled> pool;
  pool.reserve(psi.size() + phi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) pool.push_back({psi[i].x1, psi[i].x2, {0, i}});
  for (std::size_t i = 0; i < phi.size(); ++i) pool.push_back({phi[i].x1, phi[i].x2, {1, i}});
  std::stable_sort(pool.begin(), pool.end(), [](const Pooled& a, const Pooled& b) {
    return a.x1 < b.x1 || (a.x1 == b.x1 && a.x2 < b.x2);
  });
  fisher_yates(pool, rng);

  SendSchedule s;
  s.sends.reserve(pool.size());
  s.origins.reserve(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    s.sends.push_back({k, pool[k].x1, pool[k].x2});
    s.origins.push_back(pool[k].origin);
  }
  return s;
}

ProbTriple estimate_probs(std::span<const MeasurementRecord> records) {
  std::array<std::uint64_t, 3> count{};
  std::array<std::uint64_t, 3> plus{};
  for (const auto& r : records) {
    const auto b = static_cast<std::size_t>(r.basis);
    ++count[b];
    if (r.outcome == 0) ++plus[b];
  }
  for (auto b : qcore::kAllBases) {
    if (count[static_cast<std::size_t>(b)] == 0) {
      throw ValidationError("estimate_probs: no records in the " +
                            std::string(qcore::to_string(b)) + " basis");
    }
  }
  auto freq = [&](std::size_t b) {
    return static_cast<double>(plus[b]) / static_cast<double>(count[b]);
  };
  return {freq(0), freq(1), freq(2)};
}

Flag decide(double thetaHat, const ProtocolConfig& cfg) {
  if (is_half_pi(cfg.claimedAngle)) {
    return thetaHat >= kHalfPi - cfg.gamma ? Flag::Accept : Flag::Reject;
  }
  return std::abs(thetaHat - cfg.claimedAngle) <= cfg.gamma ? Flag::Accept : Flag::Reject;
}

Verdict verdict_from_records(const ProtocolConfig& cfg,
                             std::span<const MeasurementRecord> records,
                             std::array<ProbTriple, 2>* probs_out) {
  std::array<std::vector<MeasurementRecord>, 2> by_group;
  for (const auto& r : records) {
    if (r.group != 0 && r.group != 1) throw ValidationError("measurement record: bad group");
    by_group[static_cast<std::size_t>(r.group)].push_back(r);
  }
  const ProbTriple p_psi = estimate_probs(by_group[0]);
  const ProbTriple p_phi = estimate_probs(by_group[1]);
  if (probs_out) *probs_out = {p_psi, p_phi};

  Verdict v;
  v.rhoPsiHat = qcore::reconstruct_density(p_psi);
  v.rhoPhiHat = qcore::reconstruct_density(p_phi);
  v.fidelityHat = qcore::fidelity(v.rhoPsiHat, v.rhoPhiHat);
  v.thetaHat = qcore::bures_angle(v.fidelityHat);
  v.flag = decide(v.thetaHat, cfg);
  return v;
}

ProtocolResult run_protocol(const embedding::OracleConfig& oracle, provers::Prover& prover,
                            const ProtocolConfig& cfg) {
  cfg.validate();
  oracle.validate();
  const std::size_t n = static_cast<std::size_t>(cfg.nPerGroup);

  // Step 1: data.
  RandomStream data_rng(oracle.seed);
  const auto psi = embedding::oracle_draw(oracle, n, 0, data_rng);
  const auto phi = embedding::oracle_draw(oracle, n, 1, data_rng);

  // Step 2: bases fixed before any communication.
  const RandomStream master(cfg.seed);
  RandomStream bases_psi_rng = master.child(kBasesPsiStream);
  RandomStream bases_phi_rng = master.child(kBasesPhiStream);
  const std::array<std::vector<MeasBasis>, 2> bases = {allocate_bases(n, bases_psi_rng),
                                                       allocate_bases(n, bases_phi_rng)};

  // Step 3: label-blind schedule.
  RandomStream order_rng = master.child(kInterleaveStream);
  SendSchedule schedule = interleave_sends(psi, phi, order_rng);

  std::vector<provers::Request> requests;
  requests.reserve(schedule.sends.size());
  for (const auto& s : schedule.sends) requests.push_back({s.index, s.x1, s.x2});

  if (cfg.mode == ProverMode::BatchedReplay) {
    try {
      prover.prepare(requests);
    } catch (const std::exception& e) {
      throw ProtocolError(std::string("prover failed while buffering requests: ") + e.what());
    }
  }

  // Step 4: one response per request, measured once.
  RandomStream measure_rng = master.child(kMeasureStream);
  std::vector<MeasurementRecord> records;
  records.reserve(requests.size());
  for (std::size_t k = 0; k < requests.size(); ++k) {
    qcore::QubitDensity rho = qcore::QubitDensity::maximally_mixed();
    try {
      rho = prover.respond(requests[k]);
    } catch (const std::exception& e) {
      throw ProtocolError("prover failed to respond to request " + std::to_string(k) + ": " +
                          e.what());
    }
    const SendOrigin& o = schedule.origins[k];
    const MeasBasis basis = bases[static_cast<std::size_t>(o.group)][o.slot];
    const int outcome = qcore::sample_outcome(rho, basis, measure_rng);
    records.push_back({requests[k].index, o.group, basis, outcome});
  }

  // Steps 5-6.
  ProtocolResult out;
  out.verdict = verdict_from_records(cfg, records, &out.transcript.probs);
  out.transcript.config = cfg;
  out.transcript.sends = std::move(schedule.sends);
  out.transcript.records = std::move(records);
  out.transcript.verdict = out.verdict;
  return out;
}

MultiGroupResult multi_group_verify(std::span<const QubitDensity> groups, double gamma) {
  if (groups.size() < 2) throw ValidationError("multi_group_verify: need at least two groups");
  if (!(gamma > 0.0 && gamma < kHalfPi)) {
    throw ValidationError("multi_group_verify: gamma must lie in (0, pi/2)");
  }
  const std::size_t k = groups.size();
  MultiGroupResult r;
  r.groups = k;
  r.angles.assign(k * k, 0.0);
  r.minAngle = kHalfPi;
  r.allPass = true;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double a = qcore::bures_angle(qcore::fidelity(groups[i], groups[j]));
      r.angles[i * k + j] = a;
      r.angles[j * k + i] = a;
      r.minAngle = std::min(r.minAngle, a);
      sum += a;
      ++pairs;
      if (!(a > kHalfPi - gamma)) r.allPass = false;
    }
  }
  r.meanAngle = sum / static_cast<double>(pairs);
  return r;
}

}  // namespace qmv::verifier
