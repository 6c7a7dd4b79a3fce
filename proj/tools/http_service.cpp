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

#include "http_service.hpp"

#include <httplib.h>

#include <json.hpp>

namespace roadsound::service {
namespace {

bool IsClientError(roadsound_status s) {
  switch (s) {
    case ROADSOUND_ERR_INVALID_ARGUMENT:
    case ROADSOUND_ERR_MALFORMED_WAV:
    case ROADSOUND_ERR_UNSUPPORTED_ENCODING:
    case ROADSOUND_ERR_EMPTY_CLIP:
    case ROADSOUND_ERR_CLIP_TOO_SHORT:
      return true;
    default:
      return false;
  }
}

std::string ErrorJson(roadsound_status s, const char* message) {
  nlohmann::ordered_json j;
  j["error"] = roadsound_status_name(s);
  j["message"] = message;
  return j.dump();
}

}  // namespace

std::string PredictionJson(const roadsound_prediction& p) {
  nlohmann::ordered_json j;
  j["label"] = roadsound_class_name(p.label);
  j["confidence"] = p.confidence;
  auto& probs = j["probabilities"] = nlohmann::ordered_json::object();
  for (int c = 0; c < ROADSOUND_CLASS_COUNT; ++c) probs[roadsound_class_name(c)] = p.probabilities[c];
  return j.dump();
}

struct PredictionServer::Impl {
  httplib::Server server;
  const roadsound_model* model;
};

PredictionServer::PredictionServer(const roadsound_model* model, std::size_t max_body)
    : impl_(std::make_unique<Impl>()) {
  impl_->model = model;
  auto& svr = impl_->server;
  svr.set_payload_max_length(max_body);

  svr.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  svr.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
    roadsound_prediction p{};
    const auto status = roadsound_model_predict_wav(
        impl_->model, reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size(), &p);
    if (status == ROADSOUND_OK) {
      res.set_content(PredictionJson(p), "application/json");
      return;
    }
    res.status = IsClientError(status) ? 400 : 500;
    res.set_content(ErrorJson(status, roadsound_last_error()), "application/json");
  });

  svr.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                               std::exception_ptr) {
    res.status = 500;
    res.set_content(ErrorJson(ROADSOUND_ERR_INTERNAL, "internal error"), "application/json");
  });
}

PredictionServer::~PredictionServer() = default;

int PredictionServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool PredictionServer::Listen() { return impl_->server.listen_after_bind(); }

void PredictionServer::Stop() { impl_->server.stop(); }

}  // namespace roadsound::service
