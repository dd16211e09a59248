/* Copyright 2026 The qmlverify Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qmlverify library: qubit numerics, provers, the
 * verification protocol, transcripts and experiment presets.
 *
 * Every function returning qmv_status sets a thread-local message readable
 * through qmv_last_error() when it fails. Handles are opaque and owned by
 * the caller; destroy functions accept NULL.
 */

#ifndef QMLVERIFY_QMLVERIFY_H_
#define QMLVERIFY_QMLVERIFY_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QMV_BUILDING_LIBRARY)
#define QMV_API __declspec(dllexport)
#else
#define QMV_API __declspec(dllimport)
#endif
#else
#define QMV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmv_status {
  QMV_OK = 0,
  QMV_ERR_INVALID_ARGUMENT = 1,
  QMV_ERR_PARSE = 2,
  QMV_ERR_IO = 3,
  QMV_ERR_PROTOCOL = 4,
  QMV_ERR_INTERNAL = 5
} qmv_status;

QMV_API const char* qmv_version(void);

/* Message for the last failing call on this thread; "" if none. */
QMV_API const char* qmv_last_error(void);

/* ---- qubit numerics ---------------------------------------------------- */

/* Row-major 2x2 complex matrix: index 0 = m00, 1 = m01, 2 = m10, 3 = m11. */
typedef struct qmv_density {
  double re[4];
  double im[4];
} qmv_density;

typedef enum qmv_basis { QMV_BASIS_STANDARD = 0, QMV_BASIS_HADAMARD = 1, QMV_BASIS_CIRCULAR = 2 } qmv_basis;

/* Probability of outcome 0 in each basis. */
typedef struct qmv_probs {
  double p0;
  double p_plus;
  double p_plus_i;
} qmv_probs;

QMV_API qmv_status qmv_density_from_bloch(double rx, double ry, double rz, qmv_density* out);
QMV_API qmv_status qmv_density_to_bloch(const qmv_density* rho, double out_r[3]);
QMV_API qmv_status qmv_density_pure(double alpha_re, double alpha_im, double beta_re,
                                    double beta_im, qmv_density* out);
QMV_API qmv_status qmv_fidelity(const qmv_density* a, const qmv_density* b, double* out);
QMV_API qmv_status qmv_bures_angle(const qmv_density* a, const qmv_density* b, double* out);
QMV_API qmv_status qmv_trace_distance(const qmv_density* a, const qmv_density* b, double* out);
QMV_API qmv_status qmv_hs_distance(const qmv_density* a, const qmv_density* b, double* out);
QMV_API qmv_status qmv_exact_probabilities(const qmv_density* rho, qmv_probs* out);
QMV_API qmv_status qmv_reconstruct(const qmv_probs* p, qmv_density* out);

/* ---- provers ----------------------------------------------------------- */

typedef struct qmv_prover qmv_prover;

typedef enum qmv_adversary {
  QMV_ADV_RANDOM_ASSIGN = 0,
  QMV_ADV_CONSTANT_STATE = 1,
  QMV_ADV_CLUSTER_GUESS = 2
} qmv_adversary;

typedef enum qmv_frame { QMV_FRAME_HAAR = 0, QMV_FRAME_COMPUTATIONAL = 1 } qmv_frame;

/* theta holds 2L embedding parameters. */
QMV_API qmv_status qmv_prover_create_honest(const double* theta, size_t len, qmv_prover** out);
/* Labels requests with the blob decision rule (class 1 iff x1 + x2 >= 0). */
QMV_API qmv_status qmv_prover_create_synthetic(double target_angle, double sigma, uint64_t seed,
                                               qmv_frame frame, qmv_prover** out);
QMV_API qmv_status qmv_prover_create_adversarial(qmv_adversary strategy, uint64_t seed,
                                                 qmv_prover** out);
/* Wraps `inner` (which stays owned by the caller) in a depolarizing channel. */
QMV_API qmv_status qmv_prover_create_depolarized(const qmv_prover* inner, double p,
                                                 qmv_prover** out);
QMV_API void qmv_prover_destroy(qmv_prover* prover);

/* ---- embedding training ------------------------------------------------ */

typedef enum qmv_distribution { QMV_DIST_SEPARABLE_BLOBS = 0, QMV_DIST_HIDDEN_LABELS = 1 } qmv_distribution;

typedef struct qmv_oracle_config {
  qmv_distribution distribution;
  double spread;
  uint64_t seed;
} qmv_oracle_config;

typedef struct qmv_train_config {
  int layers;
  double step_size;
  int iterations;
  int batch_a;
  int batch_b;
  uint64_t seed;
  int shots; /* 0 = exact overlaps */
} qmv_train_config;

QMV_API void qmv_oracle_config_default(qmv_oracle_config* cfg);
QMV_API void qmv_train_config_default(qmv_train_config* cfg);

/* Writes 2 * layers parameters to theta_out (capacity theta_cap) and, if
 * cost_out is non-NULL, up to cost_cap entries of the cost history.
 * *cost_len receives the full history length. */
QMV_API qmv_status qmv_train_embedding(const qmv_train_config* cfg, const qmv_oracle_config* oracle,
                                       double* theta_out, size_t theta_cap, double* cost_out,
                                       size_t cost_cap, size_t* cost_len);

/* ---- protocol ---------------------------------------------------------- */

typedef enum qmv_mode { QMV_MODE_STREAMING = 0, QMV_MODE_BATCHED = 1 } qmv_mode;

typedef struct qmv_protocol_config {
  uint64_t n_per_group;
  double gamma;
  double claimed_angle;
  uint64_t seed;
  qmv_mode mode;
} qmv_protocol_config;

typedef struct qmv_verdict {
  int accept; /* 1 = ACCEPT, 0 = REJECT */
  double theta_hat;
  double fidelity_hat;
  qmv_density rho_psi;
  qmv_density rho_phi;
} qmv_verdict;

QMV_API void qmv_protocol_config_default(qmv_protocol_config* cfg);

/* Runs one session. If transcript_path is non-NULL the transcript is
 * written there atomically. */
QMV_API qmv_status qmv_run_protocol(const qmv_oracle_config* oracle, qmv_prover* prover,
                                    const qmv_protocol_config* cfg, const char* transcript_path,
                                    qmv_verdict* out);

/* Recomputes the verdict of a stored transcript; QMV_ERR_PROTOCOL if it
 * disagrees with the stored one. */
QMV_API qmv_status qmv_transcript_replay(const char* path, qmv_verdict* out);

/* Pairwise Bures angles between k >= 2 states. angles_out holds k*k values. */
QMV_API qmv_status qmv_multi_group(const qmv_density* states, size_t k, double gamma,
                                   double* angles_out, int* all_pass);

/* ---- experiments ------------------------------------------------------- */

typedef struct qmv_experiment qmv_experiment;

/* kind: angle-grid, n-sweep-angle, n-sweep-fidelity, soundness,
 * completeness, train-verify, multi-group. */
QMV_API qmv_status qmv_experiment_create(const char* kind, qmv_experiment** out);
QMV_API qmv_status qmv_experiment_set(qmv_experiment* e, const char* key, const char* value);
/* Merges a key = value file; keys already set are overwritten. */
QMV_API qmv_status qmv_experiment_load_config(qmv_experiment* e, const char* path);
QMV_API qmv_status qmv_experiment_validate(const qmv_experiment* e);
/* Writes <kind>.csv, <kind>.svg, <kind>.txt into out_dir. */
QMV_API qmv_status qmv_experiment_run(qmv_experiment* e, const char* out_dir);
/* Summary of the last run, owned by the handle; "" before the first run. */
QMV_API const char* qmv_experiment_report(const qmv_experiment* e);
/* CSV text of the last run, owned by the handle. */
QMV_API const char* qmv_experiment_csv(const qmv_experiment* e);
QMV_API void qmv_experiment_destroy(qmv_experiment* e);

#ifdef __cplusplus
}
#endif

#endif /* QMLVERIFY_QMLVERIFY_H_ */
