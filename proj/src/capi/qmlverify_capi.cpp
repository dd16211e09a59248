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

#include "qmlverify/qmlverify.h"

#include <algorithm>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "qmv/embedding.hpp"
#include "qmv/errors.hpp"
#include "qmv/io.hpp"
#include "qmv/provers.hpp"
#include "qmv/qcore.hpp"
#include "qmv/verifier.hpp"
#include "qmv/xharness.hpp"

struct qmv_prover {
  qmv::provers::ProverPtr impl;
};

struct qmv_experiment {
  qmv::xharness::ExperimentSpec spec;
  std::string report;
  std::string csv;
};

namespace {

using namespace qmv;

thread_local std::string g_last_error;

qmv_status fail(qmv_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

template <typename Fn>
qmv_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QMV_OK;
  } catch (const ValidationError& e) {
    return fail(QMV_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ParseError& e) {
    return fail(QMV_ERR_PARSE, e.what());
  } catch (const IoError& e) {
    return fail(QMV_ERR_IO, e.what());
  } catch (const ProtocolError& e) {
    return fail(QMV_ERR_PROTOCOL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QMV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QMV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QMV_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* name) {
  if (!p) throw ValidationError(std::string(name) + " must not be NULL");
}

qcore::QubitDensity to_core(const qmv_density* d) {
  need(d, "density");
  return qcore::QubitDensity::from_entries({d->re[0], d->im[0]}, {d->re[1], d->im[1]},
                                           {d->re[2], d->im[2]}, {d->re[3], d->im[3]});
}

void from_core(const qcore::QubitDensity& rho, qmv_density* out) {
  const auto e = rho.entries();
  for (int k = 0; k < 4; ++k) {
    out->re[k] = e[static_cast<std::size_t>(k)].real();
    out->im[k] = e[static_cast<std::size_t>(k)].imag();
  }
}

embedding::OracleConfig to_core(const qmv_oracle_config* c) {
  need(c, "oracle config");
  embedding::OracleConfig o;
  switch (c->distribution) {
    case QMV_DIST_SEPARABLE_BLOBS:
      o.distribution = embedding::Distribution::SeparableBlobs;
      break;
    case QMV_DIST_HIDDEN_LABELS:
      o.distribution = embedding::Distribution::HiddenLabels;
      break;
    default:
      throw ValidationError("unknown distribution");
  }
  o.spread = c->spread;
  o.seed = c->seed;
  o.validate();
  return o;
}

verifier::ProtocolConfig to_core(const qmv_protocol_config* c) {
  need(c, "protocol config");
  verifier::ProtocolConfig p;
  p.nPerGroup = c->n_per_group;
  p.gamma = c->gamma;
  p.claimedAngle = c->claimed_angle;
  p.seed = c->seed;
  switch (c->mode) {
    case QMV_MODE_STREAMING:
      p.mode = verifier::ProverMode::Streaming;
      break;
    case QMV_MODE_BATCHED:
      p.mode = verifier::ProverMode::BatchedReplay;
      break;
    default:
      throw ValidationError("unknown prover mode");
  }
  p.validate();
  return p;
}

void from_core(const verifier::Verdict& v, qmv_verdict* out) {
  out->accept = v.flag == verifier::Flag::Accept ? 1 : 0;
  out->theta_hat = v.thetaHat;
  out->fidelity_hat = v.fidelityHat;
  from_core(v.rhoPsiHat, &out->rho_psi);
  from_core(v.rhoPhiHat, &out->rho_phi);
}

}  // namespace

extern "C" {

const char* qmv_version(void) { return "1.0.0"; }

const char* qmv_last_error(void) { return g_last_error.c_str(); }

qmv_status qmv_density_from_bloch(double rx, double ry, double rz, qmv_density* out) {
  return guarded([&] {
    need(out, "out");
    from_core(qcore::bloch_to_density({rx, ry, rz}), out);
  });
}

qmv_status qmv_density_to_bloch(const qmv_density* rho, double out_r[3]) {
  return guarded([&] {
    need(out_r, "out_r");
    const auto r = qcore::density_to_bloch(to_core(rho));
    out_r[0] = r.rx;
    out_r[1] = r.ry;
    out_r[2] = r.rz;
  });
}

qmv_status qmv_density_pure(double alpha_re, double alpha_im, double beta_re, double beta_im,
                            qmv_density* out) {
  return guarded([&] {
    need(out, "out");
    const qcore::PureQubit psi({alpha_re, alpha_im}, {beta_re, beta_im});
    from_core(qcore::QubitDensity::pure(psi), out);
  });
}

qmv_status qmv_fidelity(const qmv_density* a, const qmv_density* b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qcore::fidelity(to_core(a), to_core(b));
  });
}

qmv_status qmv_bures_angle(const qmv_density* a, const qmv_density* b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qcore::bures_angle(qcore::fidelity(to_core(a), to_core(b)));
  });
}

qmv_status qmv_trace_distance(const qmv_density* a, const qmv_density* b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qcore::trace_distance(to_core(a), to_core(b));
  });
}

qmv_status qmv_hs_distance(const qmv_density* a, const qmv_density* b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = qcore::hs_distance(to_core(a), to_core(b));
  });
}

qmv_status qmv_exact_probabilities(const qmv_density* rho, qmv_probs* out) {
  return guarded([&] {
    need(out, "out");
    const auto p = qcore::exact_probabilities(to_core(rho));
    *out = {p.p0, p.pPlus, p.pPlusI};
  });
}

qmv_status qmv_reconstruct(const qmv_probs* p, qmv_density* out) {
  return guarded([&] {
    need(p, "probs");
    need(out, "out");
    from_core(qcore::reconstruct_density({p->p0, p->p_plus, p->p_plus_i}), out);
  });
}

qmv_status qmv_prover_create_honest(const double* theta, size_t len, qmv_prover** out) {
  return guarded([&] {
    need(theta, "theta");
    need(out, "out");
    embedding::EmbeddingParams params(std::vector<double>(theta, theta + len));
    *out = new qmv_prover{provers::honest_prover(std::move(params))};
  });
}

qmv_status qmv_prover_create_synthetic(double target_angle, double sigma, uint64_t seed,
                                       qmv_frame frame, qmv_prover** out) {
  return guarded([&] {
    need(out, "out");
    if (frame != QMV_FRAME_HAAR && frame != QMV_FRAME_COMPUTATIONAL) {
      throw ValidationError("unknown reference frame");
    }
    const auto f = frame == QMV_FRAME_HAAR ? provers::ReferenceFrame::Haar
                                           : provers::ReferenceFrame::Computational;
    *out = new qmv_prover{xharness::make_synthetic_prover(target_angle, sigma, seed, f)};
  });
}

qmv_status qmv_prover_create_adversarial(qmv_adversary strategy, uint64_t seed,
                                         qmv_prover** out) {
  return guarded([&] {
    need(out, "out");
    provers::AdversaryStrategy s;
    switch (strategy) {
      case QMV_ADV_RANDOM_ASSIGN:
        s = provers::AdversaryStrategy::RandomAssign;
        break;
      case QMV_ADV_CONSTANT_STATE:
        s = provers::AdversaryStrategy::ConstantState;
        break;
      case QMV_ADV_CLUSTER_GUESS:
        s = provers::AdversaryStrategy::ClusterGuess;
        break;
      default:
        throw ValidationError("unknown adversary strategy");
    }
    *out = new qmv_prover{provers::adversarial_prover(s, seed)};
  });
}

qmv_status qmv_prover_create_depolarized(const qmv_prover* inner, double p, qmv_prover** out) {
  return guarded([&] {
    need(inner, "inner");
    need(out, "out");
    *out = new qmv_prover{provers::depolarize_wrap(inner->impl, p)};
  });
}

void qmv_prover_destroy(qmv_prover* prover) { delete prover; }

void qmv_oracle_config_default(qmv_oracle_config* cfg) {
  if (!cfg) return;
  const embedding::OracleConfig d;
  cfg->distribution = QMV_DIST_SEPARABLE_BLOBS;
  cfg->spread = d.spread;
  cfg->seed = d.seed;
}

void qmv_train_config_default(qmv_train_config* cfg) {
  if (!cfg) return;
  const embedding::TrainConfig d;
  cfg->layers = d.layers;
  cfg->step_size = d.stepSize;
  cfg->iterations = d.iterations;
  cfg->batch_a = d.batchA;
  cfg->batch_b = d.batchB;
  cfg->seed = d.seed;
  cfg->shots = d.shots;
}

qmv_status qmv_train_embedding(const qmv_train_config* cfg, const qmv_oracle_config* oracle,
                               double* theta_out, size_t theta_cap, double* cost_out,
                               size_t cost_cap, size_t* cost_len) {
  return guarded([&] {
    need(cfg, "train config");
    need(theta_out, "theta_out");
    embedding::TrainConfig t;
    t.layers = cfg->layers;
    t.stepSize = cfg->step_size;
    t.iterations = cfg->iterations;
    t.batchA = cfg->batch_a;
    t.batchB = cfg->batch_b;
    t.seed = cfg->seed;
    t.shots = cfg->shots;
    t.validate();
    if (theta_cap < 2 * static_cast<std::size_t>(t.layers)) {
      throw ValidationError("theta_out holds fewer than 2 * layers values");
    }
    const auto result = embedding::train(t, to_core(oracle));
    std::copy(result.theta.values().begin(), result.theta.values().end(), theta_out);
    if (cost_out) {
      const std::size_t n = std::min(cost_cap, result.history.size());
      std::copy_n(result.history.begin(), n, cost_out);
    }
    if (cost_len) *cost_len = result.history.size();
  });
}

void qmv_protocol_config_default(qmv_protocol_config* cfg) {
  if (!cfg) return;
  const verifier::ProtocolConfig d;
  cfg->n_per_group = d.nPerGroup;
  cfg->gamma = d.gamma;
  cfg->claimed_angle = d.claimedAngle;
  cfg->seed = d.seed;
  cfg->mode = QMV_MODE_STREAMING;
}

qmv_status qmv_run_protocol(const qmv_oracle_config* oracle, qmv_prover* prover,
                            const qmv_protocol_config* cfg, const char* transcript_path,
                            qmv_verdict* out) {
  return guarded([&] {
    need(prover, "prover");
    need(out, "out");
    const auto o = to_core(oracle);
    const auto c = to_core(cfg);
    const auto result = verifier::run_protocol(o, *prover->impl, c);
    if (transcript_path) verifier::transcript_write(result.transcript, transcript_path);
    from_core(result.verdict, out);
  });
}

qmv_status qmv_transcript_replay(const char* path, qmv_verdict* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    from_core(verifier::transcript_replay(path), out);
  });
}

qmv_status qmv_multi_group(const qmv_density* states, size_t k, double gamma, double* angles_out,
                           int* all_pass) {
  return guarded([&] {
    need(states, "states");
    need(angles_out, "angles_out");
    std::vector<qcore::QubitDensity> groups;
    groups.reserve(k);
    for (std::size_t i = 0; i < k; ++i) groups.push_back(to_core(&states[i]));
    const auto r = verifier::multi_group_verify(groups, gamma);
    std::copy(r.angles.begin(), r.angles.end(), angles_out);
    if (all_pass) *all_pass = r.allPass ? 1 : 0;
  });
}

qmv_status qmv_experiment_create(const char* kind, qmv_experiment** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    auto* e = new qmv_experiment;
    try {
      e->spec.kind = xharness::parse_kind(kind);
    } catch (...) {
      delete e;
      throw;
    }
    *out = e;
  });
}

qmv_status qmv_experiment_set(qmv_experiment* e, const char* key, const char* value) {
  return guarded([&] {
    need(e, "experiment");
    need(key, "key");
    need(value, "value");
    const auto allowed = xharness::allowed_params(e->spec.kind);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError("parameter '" + std::string(key) + "' is not used by " +
                            std::string(xharness::to_string(e->spec.kind)));
    }
    e->spec.params[key] = value;
  });
}

qmv_status qmv_experiment_load_config(qmv_experiment* e, const char* path) {
  return guarded([&] {
    need(e, "experiment");
    need(path, "path");
    for (auto& [k, v] : xharness::load_config_file(path)) e->spec.params[k] = v;
  });
}

qmv_status qmv_experiment_validate(const qmv_experiment* e) {
  return guarded([&] {
    need(e, "experiment");
    xharness::validate_spec(e->spec);
  });
}

qmv_status qmv_experiment_run(qmv_experiment* e, const char* out_dir) {
  return guarded([&] {
    need(e, "experiment");
    need(out_dir, "out_dir");
    e->spec.outDir = out_dir;
    const auto result = xharness::run_experiment(e->spec);
    e->report = result.report;
    e->csv = result.table.to_csv();
  });
}

const char* qmv_experiment_report(const qmv_experiment* e) { return e ? e->report.c_str() : ""; }

const char* qmv_experiment_csv(const qmv_experiment* e) { return e ? e->csv.c_str() : ""; }

void qmv_experiment_destroy(qmv_experiment* e) { delete e; }

}  // extern "C"
