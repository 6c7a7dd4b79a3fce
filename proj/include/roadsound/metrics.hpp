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

#ifndef ROADSOUND_METRICS_HPP_
#define ROADSOUND_METRICS_HPP_

#include <array>
#include <cstdint>
#include <string>

#include "roadsound/manifest.hpp"

namespace roadsound {

// rows: true class, columns: predicted class.
using ConfusionMatrix = std::array<std::array<std::uint64_t, kClassCount>, kClassCount>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct EvalReport {
  int fold = -1;  // -1 for pooled reports
  ConfusionMatrix confusion{};
  std::array<ClassMetrics, kClassCount> per_class{};
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double accuracy = 0.0;
};

// precision = TP / (TP + FP), recall = TP / (TP + FN), F1 their harmonic
// mean; any 0/0 is reported as 0.
EvalReport ReportFromConfusion(const ConfusionMatrix& confusion, int fold = -1);

ConfusionMatrix AddConfusion(const ConfusionMatrix& a, const ConfusionMatrix& b);

std::string FormatReportText(const EvalReport& report);

}  // namespace roadsound

#endif  // ROADSOUND_METRICS_HPP_
