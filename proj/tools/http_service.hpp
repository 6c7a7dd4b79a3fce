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

#ifndef ROADSOUND_TOOLS_HTTP_SERVICE_HPP_
#define ROADSOUND_TOOLS_HTTP_SERVICE_HPP_

#include <cstddef>
#include <memory>
#include <string>

#include "roadsound/roadsound.h"

namespace roadsound::service {

inline constexpr std::size_t kMaxBodyBytes = 10u << 20;

// HTTP front end over a loaded model:
//   POST /predict  (body: WAV bytes) -> {"label", "confidence", "probabilities"}
//   GET  /health   -> "ok"
// Malformed audio yields 400, oversized bodies 413, anything else 500.
// The model is borrowed and must outlive the server; requests run
// concurrently against it.
class PredictionServer {
 public:
  explicit PredictionServer(const roadsound_model* model,
                            std::size_t max_body = kMaxBodyBytes);
  ~PredictionServer();

  PredictionServer(const PredictionServer&) = delete;
  PredictionServer& operator=(const PredictionServer&) = delete;

  // Returns the bound port (useful with port 0), or -1 on failure.
  int Bind(const std::string& host, int port);
  // Blocks until Stop() is called.
  bool Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Builds the JSON body for one prediction.
std::string PredictionJson(const roadsound_prediction& p);

}  // namespace roadsound::service

#endif  // ROADSOUND_TOOLS_HTTP_SERVICE_HPP_
