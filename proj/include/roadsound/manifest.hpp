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

#ifndef ROADSOUND_MANIFEST_HPP_
#define ROADSOUND_MANIFEST_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roadsound {

// Index order matches the confusion-matrix layout used in reports.
enum class VehicleClass { kCar = 0, kTruck = 1, kMotorcycle = 2, kNoVehicle = 3 };
inline constexpr std::size_t kClassCount = 4;
inline constexpr std::array<VehicleClass, kClassCount> kAllClasses = {
    VehicleClass::kCar, VehicleClass::kTruck, VehicleClass::kMotorcycle,
    VehicleClass::kNoVehicle};

std::string_view ClassName(VehicleClass c);
VehicleClass ParseClass(std::string_view name);

enum class AugType { kNone = 0, kGain = 1, kNoise = 2, kStretch = 3 };
inline constexpr std::array<AugType, 3> kAugmentations = {
    AugType::kGain, AugType::kNoise, AugType::kStretch};

std::string_view AugTypeName(AugType t);
AugType ParseAugType(std::string_view name);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // absolute once loaded
  VehicleClass label = VehicleClass::kCar;
  std::string parent_id;  // empty for originals
  AugType aug_type = AugType::kNone;
  std::optional<int> fold;
  std::optional<double> aug_param;

  // Originals group with themselves, augmented entries with their parent.
  const std::string& group() const { return parent_id.empty() ? id : parent_id; }
  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  std::size_t size() const { return entries.size(); }
  // Unique ids; fold indices, when present, in [0, folds).
  void Validate(int folds = 0) const;
  bool operator==(const Manifest&) const = default;
};

// CSV with header id,path,label,parent_id,aug_type,fold[,aug_param].
// Relative paths resolve against `base_dir`.
Manifest ParseManifestCsv(std::string_view text, const std::filesystem::path& base_dir);
std::string FormatManifestCsv(const Manifest& manifest,
                              const std::filesystem::path& base_dir);

Manifest LoadManifest(const std::filesystem::path& path);
void SaveManifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace roadsound

#endif  // ROADSOUND_MANIFEST_HPP_
