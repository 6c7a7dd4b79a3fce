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

#include <doctest.h>

#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "roadsound/roadsound.h"

namespace {

void CountFailure(const char*, const char*, void* user) { ++*static_cast<int*>(user); }
void CountEpoch(const roadsound_epoch_info*, void* user) { ++*static_cast<int*>(user); }

}  // namespace

TEST_CASE("status and class names") {
  CHECK(std::string(roadsound_status_name(ROADSOUND_OK)) == "Ok");
  CHECK(std::string(roadsound_status_name(ROADSOUND_ERR_MALFORMED_WAV)) == "MalformedWav");
  CHECK(std::string(roadsound_class_name(0)) == "car");
  CHECK(std::string(roadsound_class_name(3)) == "no_vehicle");
  CHECK(roadsound_class_name(4) == nullptr);
  CHECK(std::strlen(roadsound_version()) > 0);
}

TEST_CASE("null and missing inputs report errors") {
  roadsound_model* model = nullptr;
  CHECK(roadsound_model_load(nullptr, &model) == ROADSOUND_ERR_INVALID_ARGUMENT);
  CHECK(roadsound_model_load("/nonexistent/model.ckpt", &model) == ROADSOUND_ERR_IO);
  CHECK(model == nullptr);
  CHECK(std::strlen(roadsound_last_error()) > 0);

  oracle::TempDir dir("capi-bad");
  {
    std::ofstream f(dir / "junk.ckpt", std::ios::binary);
    f << "not a checkpoint at all";
  }
  CHECK(roadsound_model_load((dir / "junk.ckpt").c_str(), &model) != ROADSOUND_OK);
  roadsound_model_free(nullptr);
}

TEST_CASE("synth, augment, extract, train and predict through the C interface") {
  oracle::TempDir dir("capi");
  size_t written = 0;
  REQUIRE(roadsound_synth_generate((dir / "corpus").c_str(), 10, 5, 1, &written) == ROADSOUND_OK);
  CHECK(written == 40);
  const std::string manifest = (dir / "corpus" / "manifest.csv").string();

  roadsound_augment_params ap;
  roadsound_augment_params_default(&ap);
  ap.jobs = 1;
  roadsound_augment_summary as{};
  int failures = 0;
  REQUIRE(roadsound_augment(manifest.c_str(), (dir / "aug").c_str(), nullptr, &ap, CountFailure,
                            &failures, &as) == ROADSOUND_OK);
  CHECK(as.input_entries == 40);
  CHECK(as.output_entries == 160);
  CHECK(failures == 0);

  roadsound_extract_summary es{};
  REQUIRE(roadsound_extract(manifest.c_str(), ROADSOUND_FEATURES_MFCC, nullptr, 1, &es) ==
          ROADSOUND_OK);
  CHECK(es.entries == 40);
  CHECK(es.rows == 130);
  CHECK(es.cols == 40);
  CHECK(es.global_dim == 13);

  roadsound_train_options opts;
  roadsound_train_options_default(&opts);
  CHECK(opts.folds == 5);
  opts.folds = 2;
  opts.epochs = 2;
  opts.jobs = 1;
  int epochs = 0;
  char* report = nullptr;
  double mean = -1;
  const std::string ckpt = (dir / "m.ckpt").string();
  REQUIRE(roadsound_cross_validate(manifest.c_str(), ckpt.c_str(), &opts, CountEpoch, &epochs,
                                   &report, &mean) == ROADSOUND_OK);
  CHECK(epochs >= 2);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("fold") != std::string::npos);
  roadsound_string_free(report);
  CHECK(mean >= 0.0);
  CHECK(mean <= 1.0);

  roadsound_model* model = nullptr;
  REQUIRE(roadsound_model_load(ckpt.c_str(), &model) == ROADSOUND_OK);
  CHECK(roadsound_model_feature_kind(model) == ROADSOUND_FEATURES_GFCC);
  roadsound_prediction p{};
  const std::string wav = (dir / "corpus" / "truck" / "truck_0000.wav").string();
  REQUIRE(roadsound_model_predict_file(model, wav.c_str(), &p) == ROADSOUND_OK);
  CHECK(p.label >= 0);
  CHECK(p.label < 4);
  CHECK(std::accumulate(p.probabilities, p.probabilities + 4, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.confidence == p.probabilities[p.label]);

  const auto bytes = oracle::ReadBytes(wav);
  roadsound_prediction q{};
  REQUIRE(roadsound_model_predict_wav(model, reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size(), &q) == ROADSOUND_OK);
  CHECK(q.label == p.label);
  CHECK(q.confidence == p.confidence);

  const std::uint8_t garbage[] = {'R', 'I', 'F', 'F', 0, 1, 2, 3, 4};
  CHECK(roadsound_model_predict_wav(model, garbage, sizeof garbage, &q) ==
        ROADSOUND_ERR_MALFORMED_WAV);
  CHECK(roadsound_model_predict_file(model, "/nonexistent.wav", &q) == ROADSOUND_ERR_IO);
  roadsound_model_free(model);
}

TEST_CASE("empty manifest cannot be extracted") {
  oracle::TempDir dir("capi-empty");
  {
    std::ofstream f(dir / "m.csv");
    f << "id,path,label,parent_id,aug_type,fold\n";
  }
  roadsound_extract_summary es{};
  CHECK(roadsound_extract((dir / "m.csv").c_str(), ROADSOUND_FEATURES_GFCC, nullptr, 1, &es) !=
        ROADSOUND_OK);
}
