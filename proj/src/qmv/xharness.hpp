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

// Experiment presets: angle-grid reproduction, N sweeps on a trained
// embedding, completeness and soundness sweeps, train-and-verify and
// multi-group checks.
//
// Every experiment takes a master seed. Trial t of parameter point g uses
// seeds derived from mix_seed(mix_seed(master, g), t), so results do not
// depend on thread scheduling.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "qmv/embedding.hpp"
#include "qmv/provers.hpp"
#include "qmv/table.hpp"
#include "qmv/verifier.hpp"

namespace qmv::xharness {

enum class ExperimentKind {
  AngleGrid,
  NSweepAngle,
  NSweepFidelity,
  SoundnessSweep,
  CompletenessSweep,
  TrainAndVerify,
  MultiGroup,
};

std::string_view to_string(ExperimentKind k) noexcept;
ExperimentKind parse_kind(std::string_view name);

using Orientation = provers::ReferenceFrame;

struct SeedSet {
  std::uint64_t oracle = 0;
  std::uint64_t prover = 0;
  std::uint64_t protocol = 0;
};

/// Seeds for trial `trial` of parameter point `point`.
SeedSet trial_seeds(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

/// Runs fn(0..n-1) on a small thread pool. Rethrows the first failure.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Synthetic prover honoring `orientation`.
provers::ProverPtr make_synthetic_prover(double angle, double sigma, std::uint64_t seed,
                                         Orientation orientation);

// ---------------------------------------------------------------------------
// Typed experiments.

struct AngleGridSettings {
  int gridPoints = 9;
  double sigma = 0.05;
  std::uint64_t n = 3000;
  int trials = 20;
  double gamma = 0.1;
  double spread = 0.3;
  Orientation orientation = Orientation::Haar;
  std::uint64_t seed = 1;
};

struct AngleGridRow {
  double trueAngle = 0.0;
  double meanThetaHat = 0.0;
  double stdThetaHat = 0.0;
  int trials = 0;
  double meanAbsError = 0.0;  // mean over trials of |thetaHat - trueAngle|
};

std::vector<AngleGridRow> run_angle_grid(const AngleGridSettings& s);

struct TrainSettings {
  embedding::TrainConfig train;
  double spread = 0.3;
  std::uint64_t heldOut = 5000;  // per class
};

struct NSweepSettings {
  TrainSettings model;
  std::vector<std::uint64_t> nList = {30, 90, 300, 900, 3000, 9000};
  int trials = 1;
  double gamma = 0.1;
  double claim = std::numbers::pi / 2;
  std::uint64_t seed = 1;
};

enum class SweepQuantity { Angle, Fidelity };

struct NSweepRow {
  std::uint64_t n = 0;
  double estimate = 0.0;  // mean over trials
  double trueValue = 0.0;
  double meanAbsError = 0.0;
};

struct TrainedModel {
  embedding::EmbeddingParams theta;
  std::vector<double> history;
  embedding::OracleConfig oracle;  // distribution the model was trained on
  double trueAngle = 0.0;
  double trueFidelity = 1.0;
};

/// Trains on SeparableBlobs and evaluates the exact ensemble angle on a
/// held-out set. All seeds derive from `master`.
TrainedModel train_model(const TrainSettings& s, std::uint64_t master);

std::vector<NSweepRow> run_n_sweep(const NSweepSettings& s, SweepQuantity q);

struct SoundnessSettings {
  std::vector<provers::AdversaryStrategy> strategies = {
      provers::AdversaryStrategy::RandomAssign, provers::AdversaryStrategy::ConstantState,
      provers::AdversaryStrategy::ClusterGuess};
  std::vector<std::uint64_t> nList = {3000};
  int trials = 200;
  double gamma = 0.1;
  double spread = 1.0;
  std::uint64_t seed = 1;
};

struct SoundnessRow {
  provers::AdversaryStrategy strategy = provers::AdversaryStrategy::RandomAssign;
  std::uint64_t n = 0;
  double acceptRate = 0.0;
  double meanThetaHat = 0.0;
};

std::vector<SoundnessRow> run_soundness_sweep(const SoundnessSettings& s);

struct CompletenessSettings {
  std::vector<std::uint64_t> nList = {300, 900, 3000};
  int trials = 200;
  double gamma = 0.1;
  double sigma = 0.0;
  Orientation orientation = Orientation::Computational;
  std::uint64_t seed = 1;
};

struct CompletenessRow {
  std::uint64_t n = 0;
  double acceptRate = 0.0;
};

std::vector<CompletenessRow> run_completeness_sweep(const CompletenessSettings& s);

struct TrainVerifySettings {
  TrainSettings model;
  std::uint64_t n = 9000;
  double gamma = 0.1;
  double claim = 0.3 * std::numbers::pi;
  std::uint64_t seed = 1;
};

struct TrainVerifyReport {
  TrainedModel model;
  verifier::ProtocolResult protocol;
};

TrainVerifyReport run_train_and_verify(const TrainVerifySettings& s);

struct MultiGroupSettings {
  int groups = 3;
  std::uint64_t n = 3000;
  double gamma = 0.1;
  double sigma = 0.0;
  bool exact = false;  // reconstruct from exact probabilities instead of samples
  std::uint64_t seed = 1;
};

struct MultiGroupReport {
  verifier::MultiGroupResult estimated;
  std::vector<double> trueAngles;  // K x K
  std::vector<qcore::QubitDensity> reconstructions;
};

/// K pure reference states equally spaced on the x-z great circle of the
/// Bloch sphere (120 degrees apart for K = 3), measured and reconstructed
/// group by group.
MultiGroupReport run_multi_group(const MultiGroupSettings& s);

// ---------------------------------------------------------------------------
// Untyped front end used by the CLI and the C API.

using ParamMap = std::map<std::string, std::string>;

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::AngleGrid;
  ParamMap params;
  std::filesystem::path outDir = ".";
};

/// Parameter names accepted by `kind`.
std::vector<std::string> allowed_params(ExperimentKind kind);

/// Flat "key = value" text; '#' starts a comment.
ParamMap parse_config_text(std::string_view text);
ParamMap load_config_file(const std::filesystem::path& path);

/// Radians, optionally written as a multiple of pi ("0.3pi").
double parse_angle(std::string_view text);

struct ExperimentOutput {
  std::string name;
  CsvTable table;
  std::string report;  // human-readable summary
  std::vector<std::filesystem::path> files;
};

/// Validates every parameter before doing any work (ValidationError), runs
/// the experiment, and atomically writes <name>.csv, <name>.svg and
/// <name>.txt (plus a transcript for train-verify) into spec.outDir.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

/// Only the validation half of run_experiment.
void validate_spec(const ExperimentSpec& spec);

/// CSV cell formats: 12 significant digits for reals.
std::string cell(double v);

}  // namespace qmv::xharness
