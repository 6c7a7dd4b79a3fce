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

#include "roadsound/manifest.hpp"

#include <charconv>
#include <cstdio>
#include <set>

#include "byte_io.hpp"
#include "roadsound/error.hpp"

namespace roadsound {
namespace {

constexpr std::string_view kHeader = "id,path,label,parent_id,aug_type,fold";

std::vector<std::string> SplitCsvLine(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) {
    Fail(ErrorCode::kInvalidArgument,
         "manifest line " + std::to_string(line_no) + ": unterminated quote");
  }
  return fields;
}

std::string QuoteCsv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string_view ClassName(VehicleClass c) {
  switch (c) {
    case VehicleClass::kCar: return "car";
    case VehicleClass::kTruck: return "truck";
    case VehicleClass::kMotorcycle: return "motorcycle";
    case VehicleClass::kNoVehicle: return "no_vehicle";
  }
  return "unknown";
}

VehicleClass ParseClass(std::string_view name) {
  for (auto c : kAllClasses) {
    if (ClassName(c) == name) return c;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown class label '" + std::string(name) + "'");
}

std::string_view AugTypeName(AugType t) {
  switch (t) {
    case AugType::kNone: return "none";
    case AugType::kGain: return "gain";
    case AugType::kNoise: return "noise";
    case AugType::kStretch: return "stretch";
  }
  return "unknown";
}

AugType ParseAugType(std::string_view name) {
  for (auto t : {AugType::kNone, AugType::kGain, AugType::kNoise, AugType::kStretch}) {
    if (AugTypeName(t) == name) return t;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown aug_type '" + std::string(name) + "'");
}

void Manifest::Validate(int folds) const {
  std::set<std::string_view> ids;
  for (const auto& e : entries) {
    Require(!e.id.empty(), "manifest entry with empty id");
    Require(ids.insert(e.id).second, "duplicate manifest id '" + e.id + "'");
    if (e.fold && folds > 0) {
      Require(*e.fold >= 0 && *e.fold < folds,
              "fold index out of range for entry '" + e.id + "'");
    }
  }
}

Manifest ParseManifestCsv(std::string_view text, const std::filesystem::path& base_dir) {
  Manifest m;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool has_param = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line == kHeader) {
        has_param = false;
      } else if (line == std::string(kHeader) + ",aug_param") {
        has_param = true;
      } else {
        Fail(ErrorCode::kInvalidArgument,
             "manifest header must be '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = SplitCsvLine(line, line_no);
    if (f.size() != (has_param ? 7u : 6u)) {
      Fail(ErrorCode::kInvalidArgument,
           "manifest line " + std::to_string(line_no) + ": wrong column count");
    }
    ManifestEntry e;
    e.id = f[0];
    std::filesystem::path p(f[1]);
    e.path = (p.is_absolute() ? p : base_dir / p).lexically_normal();
    e.label = ParseClass(f[2]);
    e.parent_id = f[3];
    e.aug_type = f[4].empty() ? AugType::kNone : ParseAugType(f[4]);
    if (!f[5].empty()) {
      int fold = 0;
      auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), fold);
      if (ec != std::errc{} || ptr != f[5].data() + f[5].size() || fold < 0) {
        Fail(ErrorCode::kInvalidArgument,
             "manifest line " + std::to_string(line_no) + ": bad fold '" + f[5] + "'");
      }
      e.fold = fold;
    }
    if (has_param && !f[6].empty()) {
      try {
        e.aug_param = std::stod(f[6]);
      } catch (const std::exception&) {
        Fail(ErrorCode::kInvalidArgument,
             "manifest line " + std::to_string(line_no) + ": bad aug_param");
      }
    }
    m.entries.push_back(std::move(e));
  }
  if (!header_seen) Fail(ErrorCode::kInvalidArgument, "manifest is missing its header");
  m.Validate();
  return m;
}

std::string FormatManifestCsv(const Manifest& manifest,
                              const std::filesystem::path& base_dir) {
  std::string out(kHeader);
  out += ",aug_param\n";
  const auto base = base_dir.lexically_normal();
  for (const auto& e : manifest.entries) {
    auto rel = e.path.lexically_normal().lexically_relative(base);
    const bool inside = !rel.empty() && *rel.begin() != "..";
    out += QuoteCsv(e.id) + ',';
    out += QuoteCsv(inside ? rel.generic_string() : e.path.generic_string()) + ',';
    out += std::string(ClassName(e.label)) + ',';
    out += QuoteCsv(e.parent_id) + ',';
    out += std::string(AugTypeName(e.aug_type)) + ',';
    out += (e.fold ? std::to_string(*e.fold) : std::string()) + ',';
    out += e.aug_param ? FormatDouble(*e.aug_param) : std::string();
    out += '\n';
  }
  return out;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  const auto bytes = detail::ReadFileBytes(path.string());
  const auto base = std::filesystem::absolute(path).parent_path();
  return ParseManifestCsv(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), base);
}

void SaveManifest(const Manifest& manifest, const std::filesystem::path& path) {
  const auto base = std::filesystem::absolute(path).parent_path();
  const auto text = FormatManifestCsv(manifest, base);
  detail::WriteFileBytes(path.string(),
                         std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                   text.size()));
}

}  // namespace roadsound
