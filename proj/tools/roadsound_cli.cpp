// Copyright 2026 The roadsound Authors.
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

// roadsound command-line front end: synth, augment, extract, train,
// predict and serve.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "http_service.hpp"
#include "roadsound/roadsound.h"

namespace {

// Exit codes, one per failure class.
enum Exit : int {
  kExitOk = 0,
  kExitAugment = 1,
  kExitExtract = 2,
  kExitTrainDiverged = 3,
  kExitPredict = 4,
  kExitServeBind = 5,
  kExitOther = 6,
};

const std::map<std::string, roadsound_feature_kind> kFeatureKinds = {
    {"melspec", ROADSOUND_FEATURES_MELSPEC},
    {"mfcc", ROADSOUND_FEATURES_MFCC},
    {"gfcc", ROADSOUND_FEATURES_GFCC},
};

int Report(roadsound_status s, const char* what, int code) {
  std::fprintf(stderr, "roadsound: %s failed (%s): %s\n", what, roadsound_status_name(s),
               roadsound_last_error());
  return code;
}

std::atomic<roadsound::service::PredictionServer*> g_server{nullptr};

extern "C" void OnSignal(int) {
  if (auto* s = g_server.load()) s->Stop();
}

struct SynthArgs {
  std::string out_dir;
  std::size_t per_class = 100;
  std::uint64_t seed = 0;
};

struct AugmentArgs {
  std::string manifest, out_dir, out_manifest;
  bool keep_going = false;
};

struct ExtractArgs {
  std::string manifest, features = "gfcc", cache_dir;
};

struct TrainArgs {
  std::string manifest, features = "gfcc", out = "model.ckpt", cache_dir;
  bool quiet = false;
};

struct PredictArgs {
  std::string model, wav;
};

struct ServeArgs {
  std::string model, bind = "127.0.0.1:8080";
};

int RunSynth(const SynthArgs& a, int jobs) {
  std::size_t written = 0;
  const auto s = roadsound_synth_generate(a.out_dir.c_str(), a.per_class, a.seed, jobs, &written);
  if (s != ROADSOUND_OK) return Report(s, "synth", kExitOther);
  std::printf("wrote %zu clips and %s/manifest.csv\n", written, a.out_dir.c_str());
  return kExitOk;
}

int RunAugment(const AugmentArgs& a, roadsound_augment_params p) {
  roadsound_augment_summary summary{};
  auto on_failure = [](const char* id, const char* message, void*) {
    std::fprintf(stderr, "roadsound: augment: skipped '%s': %s\n", id, message);
  };
  const auto s = roadsound_augment(a.manifest.c_str(), a.out_dir.c_str(),
                                   a.out_manifest.empty() ? nullptr : a.out_manifest.c_str(), &p,
                                   on_failure, nullptr, &summary);
  if (s != ROADSOUND_OK) return Report(s, "augment", kExitAugment);
  std::printf("%zu → %zu entries", summary.input_entries, summary.output_entries);
  if (summary.failed_entries > 0) std::printf(" (%zu failed)", summary.failed_entries);
  std::printf("\n");
  return summary.failed_entries > 0 && !a.keep_going ? kExitAugment : kExitOk;
}

int RunExtract(const ExtractArgs& a, int jobs) {
  roadsound_extract_summary summary{};
  const auto s = roadsound_extract(a.manifest.c_str(), kFeatureKinds.at(a.features),
                                   a.cache_dir.empty() ? nullptr : a.cache_dir.c_str(), jobs,
                                   &summary);
  if (s != ROADSOUND_OK) return Report(s, "extract", kExitExtract);
  std::printf("%s: %zu entries, %zux%zu + %zu\n", a.features.c_str(), summary.entries,
              summary.rows, summary.cols, summary.global_dim);
  return kExitOk;
}

int RunTrain(const TrainArgs& a, roadsound_train_options o) {
  o.features = kFeatureKinds.at(a.features);
  o.cache_dir = a.cache_dir.empty() ? nullptr : a.cache_dir.c_str();
  auto on_epoch = [](const roadsound_epoch_info* e, void*) {
    std::fprintf(stderr,
                 "fold %d epoch %3zu  loss %.4f acc %.4f  val_loss %.4f val_acc %.4f  lr %.2e\n",
                 e->fold, e->epoch, e->train_loss, e->train_accuracy, e->val_loss,
                 e->val_accuracy, e->learning_rate);
  };
  char* report = nullptr;
  const auto s = roadsound_cross_validate(a.manifest.c_str(), a.out.c_str(), &o,
                                          a.quiet ? nullptr : +on_epoch, nullptr, &report,
                                          nullptr);
  if (s != ROADSOUND_OK) {
    return Report(s, "train",
                  s == ROADSOUND_ERR_TRAINING_DIVERGED ? kExitTrainDiverged : kExitOther);
  }
  std::fputs(report, stdout);
  roadsound_string_free(report);
  return kExitOk;
}

int RunPredict(const PredictArgs& a) {
  roadsound_model* model = nullptr;
  auto s = roadsound_model_load(a.model.c_str(), &model);
  if (s != ROADSOUND_OK) return Report(s, "loading model", kExitPredict);
  roadsound_prediction p{};
  s = roadsound_model_predict_file(model, a.wav.c_str(), &p);
  roadsound_model_free(model);
  if (s != ROADSOUND_OK) return Report(s, "predict", kExitPredict);
  std::printf("%s %.4f\n", roadsound_class_name(p.label), p.confidence);
  return kExitOk;
}

int RunServe(const ServeArgs& a) {
  const auto colon = a.bind.rfind(':');
  int port = -1;
  try {
    if (colon != std::string::npos) port = std::stoi(a.bind.substr(colon + 1));
  } catch (const std::exception&) {
  }
  if (colon == std::string::npos || port < 0 || port > 65535) {
    std::fprintf(stderr, "roadsound: serve: --bind must be host:port\n");
    return kExitServeBind;
  }
  const std::string host = a.bind.substr(0, colon);

  roadsound_model* model = nullptr;
  const auto s = roadsound_model_load(a.model.c_str(), &model);
  if (s != ROADSOUND_OK) return Report(s, "loading model", kExitPredict);

  int rc = kExitOk;
  {
    roadsound::service::PredictionServer server(model);
    const int bound = server.Bind(host, port);
    if (bound < 0) {
      std::fprintf(stderr, "roadsound: serve: cannot bind %s\n", a.bind.c_str());
      rc = kExitServeBind;
    } else {
      std::printf("listening on %s:%d\n", host.c_str(), bound);
      std::fflush(stdout);
      g_server = &server;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      server.Listen();
      g_server = nullptr;
    }
  }
  roadsound_model_free(model);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic road-vehicle classification toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with defaults; explicit flags take precedence");
  app.set_version_flag("--version", roadsound_version());
  int jobs = 0;
  app.add_option("--jobs,-j", jobs, "Worker threads (0 = all logical cores)")
      ->check(CLI::NonNegativeNumber);
  const auto features_check = CLI::IsMember({"melspec", "mfcc", "gfcc"});

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate the synthetic 4-class corpus");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--per-class", synth.per_class, "Clips per class")
      ->check(CLI::Range(10, 1000000));
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  AugmentArgs aug;
  roadsound_augment_params aug_params;
  roadsound_augment_params_default(&aug_params);
  auto* aug_cmd = app.add_subcommand("augment", "Add gain, noise and stretch variants");
  aug_cmd->add_option("--manifest", aug.manifest, "Input manifest CSV")
      ->required()
      ->check(CLI::ExistingFile);
  aug_cmd->add_option("--out-dir", aug.out_dir, "Directory for augmented clips")->required();
  aug_cmd->add_option("--out-manifest", aug.out_manifest,
                      "Expanded manifest path (default <out-dir>/manifest.csv)");
  aug_cmd->add_option("--seed", aug_params.seed, "Augmentation seed");
  aug_cmd->add_option("--gain-min", aug_params.gain_min, "Lower gain bound");
  aug_cmd->add_option("--gain-max", aug_params.gain_max, "Upper gain bound");
  aug_cmd->add_option("--noise-min", aug_params.noise_rate_min, "Lower noise rate");
  aug_cmd->add_option("--noise-max", aug_params.noise_rate_max, "Upper noise rate");
  aug_cmd->add_option("--stretch-min", aug_params.stretch_min, "Lower stretch factor");
  aug_cmd->add_option("--stretch-max", aug_params.stretch_max, "Upper stretch factor");
  aug_cmd->add_flag("--keep-going", aug.keep_going, "Exit 0 even if some entries failed");

  ExtractArgs ext;
  auto* ext_cmd = app.add_subcommand("extract", "Extract features into the cache");
  ext_cmd->add_option("--manifest", ext.manifest, "Manifest CSV")->required();
  ext_cmd->add_option("--features", ext.features, "Feature kind")->check(features_check);
  ext_cmd->add_option("--cache-dir", ext.cache_dir, "Feature cache directory");

  TrainArgs train;
  roadsound_train_options train_opts;
  roadsound_train_options_default(&train_opts);
  auto* train_cmd = app.add_subcommand("train", "Cross-validated training");
  train_cmd->add_option("--manifest", train.manifest, "Manifest CSV")->required();
  train_cmd->add_option("--folds", train_opts.folds, "Number of folds")->check(CLI::Range(2, 100));
  train_cmd->add_option("--features", train.features, "Feature kind")->check(features_check);
  train_cmd->add_option("--out", train.out, "Checkpoint path (best fold model)");
  train_cmd->add_option("--cache-dir", train.cache_dir, "Feature cache directory");
  train_cmd->add_option("--epochs", train_opts.epochs, "Maximum epochs per fold");
  train_cmd->add_option("--batch-size", train_opts.batch_size, "Mini-batch size");
  train_cmd->add_option("--lr", train_opts.lr_initial, "Initial learning rate");
  train_cmd->add_option("--lr-min", train_opts.lr_min, "Learning-rate floor");
  train_cmd->add_option("--lr-factor", train_opts.lr_reduce_factor, "Plateau reduction factor");
  train_cmd->add_option("--lr-patience", train_opts.lr_reduce_patience,
                        "Epochs without improvement before reducing the rate");
  train_cmd->add_option("--patience", train_opts.early_stop_patience,
                        "Epochs without improvement before stopping");
  train_cmd->add_option("--dropout", train_opts.dropout, "Dropout rate")
      ->check(CLI::Range(0.0, 0.95));
  train_cmd->add_option("--seed", train_opts.seed, "Seed for folds, init and shuffling");
  train_cmd->add_flag("--quiet,-q", train.quiet, "Do not print per-epoch progress");

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Classify one WAV file");
  pred_cmd->add_option("--model", pred.model, "Checkpoint")->required();
  pred_cmd->add_option("--wav", pred.wav, "WAV file")->required();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve predictions over HTTP");
  serve_cmd->add_option("--model", serve.model, "Checkpoint")->required();
  serve_cmd->add_option("--bind", serve.bind, "host:port to listen on");

  CLI11_PARSE(app, argc, argv);

  if (*synth_cmd) return RunSynth(synth, jobs);
  if (*aug_cmd) {
    aug_params.jobs = jobs;
    return RunAugment(aug, aug_params);
  }
  if (*ext_cmd) return RunExtract(ext, jobs);
  if (*train_cmd) {
    train_opts.jobs = jobs;
    return RunTrain(train, train_opts);
  }
  if (*pred_cmd) return RunPredict(pred);
  if (*serve_cmd) return RunServe(serve);
  return kExitOther;
}
