#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "gazenet/augment.hpp"
#include "gazenet/dataset.hpp"
#include "gazenet/preprocess.hpp"

namespace gazenet {

enum class SplitMode { Image, Subject };

// Every tunable of a run. Loaded from an INI file with sections [data],
// [train], [augment] and [map3]; unknown sections or keys are rejected.
struct RunConfig {
  // [data]
  std::filesystem::path manifest;
  std::filesystem::path image_root;  // empty: directory of the manifest
  PathMode mode = PathMode::Ert;
  std::size_t classes = 7;
  std::size_t roi_patch_h = 42;
  std::size_t roi_patch_w = 50;
  std::size_t ert_patch_h = 15;
  std::size_t ert_patch_w = 25;
  SplitMode split = SplitMode::Image;
  RoiFractions roi;
  LandmarkMargins margins;

  // [train]
  double lr = 0.01;
  std::size_t batch_size = 32;
  std::size_t epochs = 200;
  std::uint64_t seed = 1;
  std::filesystem::path model_left = "model_left.gdn";
  std::filesystem::path model_right = "model_right.gdn";
  std::filesystem::path train_log = "train_log.csv";
  std::filesystem::path report_dir = "report";

  AugmentPolicy augment;
  ThreeClassMap map3 = ThreeClassMap::defaults();

  PatchGeometry geometry() const;
  std::filesystem::path resolved_image_root() const;
  void validate() const;
};

// Applies one key. Throws ValidationError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value);

// Parses INI text on top of base.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Canonical INI text of the effective config. parse_config(format_config(c))
// reproduces c.
std::string format_config(const RunConfig& cfg);

// FNV-1a 64 of format_config, hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace gazenet
