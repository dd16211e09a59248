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

// qmlverify command-line front end. Talks to the library only through the
// C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qmlverify/qmlverify.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

int exit_code(qmv_status s) {
  switch (s) {
    case QMV_OK:
      return kExitOk;
    case QMV_ERR_INVALID_ARGUMENT:
    case QMV_ERR_PARSE:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

int report_failure(qmv_status s) {
  std::cerr << "error: " << qmv_last_error() << "\n";
  return exit_code(s);
}

struct CommonFlags {
  std::optional<std::string> seed, trials, n, gamma, claim;
  std::string outDir = ".";
  std::string config;
  std::vector<std::string> params;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--seed", f.seed, "Master seed");
  sub->add_option("--out-dir", f.outDir, "Output directory")->capture_default_str();
  sub->add_option("--trials", f.trials, "Trials per parameter point");
  sub->add_option("--n", f.n, "Samples per group");
  sub->add_option("--gamma", f.gamma, "Acceptance margin (radians)");
  sub->add_option("--claim", f.claim, "Claimed angle (radians, or e.g. 0.3pi)");
  sub->add_option("--config", f.config, "key = value parameter file");
  sub->add_option("--param", f.params, "Extra parameter as key=value (repeatable)");
}

class Experiment {
 public:
  ~Experiment() { qmv_experiment_destroy(e_); }
  qmv_status create(const std::string& kind) { return qmv_experiment_create(kind.c_str(), &e_); }
  qmv_experiment* get() { return e_; }

 private:
  qmv_experiment* e_ = nullptr;
};

int run_experiment(const std::string& kind, const CommonFlags& f) {
  Experiment exp;
  if (auto s = exp.create(kind); s != QMV_OK) return report_failure(s);
  if (!f.config.empty()) {
    if (auto s = qmv_experiment_load_config(exp.get(), f.config.c_str()); s != QMV_OK) {
      return report_failure(s);
    }
  }
  auto set = [&](const char* key, const std::string& value) {
    return qmv_experiment_set(exp.get(), key, value.c_str());
  };
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --param expects key=value, got '" << kv << "'\n";
      return kExitValidation;
    }
    if (auto s = set(kv.substr(0, eq).c_str(), kv.substr(eq + 1)); s != QMV_OK) {
      return report_failure(s);
    }
  }
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"seed", &f.seed}, {"trials", &f.trials}, {"n", &f.n}, {"gamma", &f.gamma}, {"claim", &f.claim}};
  for (const auto& [key, value] : flags) {
    if (!value->has_value()) continue;
    if (auto s = set(key, **value); s != QMV_OK) return report_failure(s);
  }
  if (auto s = qmv_experiment_validate(exp.get()); s != QMV_OK) return report_failure(s);
  if (auto s = qmv_experiment_run(exp.get(), f.outDir.c_str()); s != QMV_OK) {
    return report_failure(s);
  }
  std::cout << qmv_experiment_report(exp.get());
  return kExitOk;
}

int run_replay(const std::string& path) {
  qmv_verdict v{};
  if (auto s = qmv_transcript_replay(path.c_str(), &v); s != QMV_OK) return report_failure(s);
  char line[128];
  std::snprintf(line, sizeof line, "%s theta=%.12g fidelity=%.12g\n", v.accept ? "ACCEPT" : "REJECT",
                v.theta_hat, v.fidelity_hat);
  std::cout << "replay consistent: " << line;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification of quantum metric learning embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qmv_version()));

  CommonFlags common;
  std::string quantity = "angle";
  std::string transcript;

  struct Verb {
    const char* name;
    const char* kind;
    const char* help;
  };
  const Verb verbs[] = {
      {"angle-grid", "angle-grid", "Estimated vs true angle over a grid of synthetic provers"},
      {"n-sweep", nullptr, "Angle or fidelity estimate vs N on a trained embedding"},
      {"soundness", "soundness", "Adversary acceptance rates on hidden-label data"},
      {"completeness", "completeness", "Honest orthogonal prover acceptance rates"},
      {"train-verify", "train-verify", "Train an embedding, then verify it"},
      {"multi-group", "multi-group", "Pairwise angles between K reference states"},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    add_common(sub, common);
    if (v.kind == nullptr) {
      sub->add_option("--quantity", quantity, "angle or fidelity")
          ->check(CLI::IsMember({"angle", "fidelity"}))
          ->capture_default_str();
    }
    subs.emplace_back(sub, &v);
  }
  auto* replay = app.add_subcommand("replay", "Recompute and check a stored transcript");
  replay->add_option("transcript", transcript, "Transcript file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (replay->parsed()) return run_replay(transcript);
  for (const auto& [sub, verb] : subs) {
    if (!sub->parsed()) continue;
    const std::string kind = verb->kind ? verb->kind : "n-sweep-" + quantity;
    return run_experiment(kind, common);
  }
  return kExitValidation;
}
