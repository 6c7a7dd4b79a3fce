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

#include "roadsound/metrics.hpp"

#include <cstdio>

namespace roadsound {
namespace {

double Ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

EvalReport ReportFromConfusion(const ConfusionMatrix& confusion, int fold) {
  EvalReport r;
  r.fold = fold;
  r.confusion = confusion;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    std::uint64_t row = 0, col = 0;
    for (std::size_t j = 0; j < kClassCount; ++j) {
      row += confusion[c][j];
      col += confusion[j][c];
    }
    const std::uint64_t tp = confusion[c][c];
    auto& m = r.per_class[c];
    m.support = row;
    m.precision = Ratio(tp, col);
    m.recall = Ratio(tp, row);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    r.correct += tp;
    r.total += row;
  }
  r.accuracy = Ratio(r.correct, r.total);
  return r;
}

ConfusionMatrix AddConfusion(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  ConfusionMatrix out{};
  for (std::size_t i = 0; i < kClassCount; ++i) {
    for (std::size_t j = 0; j < kClassCount; ++j) out[i][j] = a[i][j] + b[i][j];
  }
  return out;
}

std::string FormatReportText(const EvalReport& r) {
  std::string out;
  char line[160];
  if (r.fold >= 0) {
    std::snprintf(line, sizeof(line), "== fold %d ==\n", r.fold);
  } else {
    std::snprintf(line, sizeof(line), "== pooled ==\n");
  }
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %9s %9s %9s %8s\n", "class", "precision",
                "recall", "f1", "support");
  out += line;
  for (auto c : kAllClasses) {
    const auto& m = r.per_class[static_cast<std::size_t>(c)];
    std::snprintf(line, sizeof(line), "%-12s %9.4f %9.4f %9.4f %8llu\n",
                  std::string(ClassName(c)).c_str(), m.precision, m.recall, m.f1,
                  static_cast<unsigned long long>(m.support));
    out += line;
  }
  std::snprintf(line, sizeof(line), "accuracy %.4f (%llu/%llu)\n", r.accuracy,
                static_cast<unsigned long long>(r.correct),
                static_cast<unsigned long long>(r.total));
  out += line;
  out += "confusion (rows = true, columns = predicted)\n";
  for (std::size_t i = 0; i < kClassCount; ++i) {
    std::snprintf(line, sizeof(line), "%-12s", std::string(ClassName(kAllClasses[i])).c_str());
    out += line;
    for (std::size_t j = 0; j < kClassCount; ++j) {
      std::snprintf(line, sizeof(line), " %6llu",
                    static_cast<unsigned long long>(r.confusion[i][j]));
      out += line;
    }
    out += '\n';
  }
  return out;
}

}  // namespace roadsound
