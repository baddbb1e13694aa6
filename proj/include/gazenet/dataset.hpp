#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gazenet/augment.hpp"
#include "gazenet/preprocess.hpp"
#include "gazenet/train.hpp"

namespace gazenet {

// Index order is fixed: VD VR VC AR AC ID K.
enum class EacClass : std::uint8_t { VD = 0, VR = 1, VC = 2, AR = 3, AC = 4, ID = 5, K = 6 };
inline constexpr std::size_t kEacCount = 7;

enum class ThreeClass : std::uint8_t { Left = 0, Center = 1, Right = 2 };
inline constexpr std::size_t kThreeCount = 3;

const char* eac_name(EacClass c);
std::optional<EacClass> parse_eac(std::string_view token);
const char* three_class_name(ThreeClass c);

// Class names for a C-class label space (7 -> EAC abbreviations, 3 -> Left/Center/Right).
std::vector<std::string> class_names(std::size_t n_classes);

struct Sample {
  std::string image_path;
  Box face;
  std::optional<EyeLandmarks> landmarks;
  EacClass eac = EacClass::VD;
  std::string subject_id;

  bool operator==(const Sample&) const = default;
};

inline constexpr std::string_view kManifestHeader =
    "image_path,eac,face_x,face_y,face_w,face_h,lo_x,lo_y,li_x,li_y,ri_x,ri_y,ro_x,ro_y,subject_id";

std::vector<Sample> parse_manifest(std::string_view text);
std::vector<Sample> load_manifest(const std::filesystem::path& path);
std::string format_manifest(const std::vector<Sample>& samples);
void save_manifest(const std::vector<Sample>& samples, const std::filesystem::path& path);

struct SplitPair {
  std::vector<Sample> train;
  std::vector<Sample> test;
};

// Seeded shuffle, then the first ceil(n/2) go to train.
SplitPair split_50_50(const std::vector<Sample>& samples, std::uint64_t seed);

// Keeps every subject on one side. Sizes are balanced greedily, not exactly.
SplitPair split_by_subject(const std::vector<Sample>& samples, std::uint64_t seed);

enum class ThreeTarget : std::uint8_t { Left, Center, Right, Excluded };

// One entry per EAC class; unset entries make the mapping invalid.
struct ThreeClassMap {
  std::array<std::optional<ThreeTarget>, kEacCount> targets{};

  static ThreeClassMap defaults();
  void validate() const;
};

std::optional<ThreeClass> to_three_class(const Sample& s, const ThreeClassMap& mapping);

// Label in the active label space, or nullopt if the sample is excluded.
std::optional<std::size_t> label_for(const Sample& s, std::size_t n_classes,
                                     const ThreeClassMap& mapping);

// Loads images by path relative to an image root. Swappable in tests.
using ImageLoader = std::function<Image(const std::string& image_path)>;
ImageLoader pnm_loader(const std::filesystem::path& image_root);

struct EyePatches {
  std::vector<LabeledPatch> left;
  std::vector<LabeledPatch> right;
};

// Both eye patches for every sample that is kept by the label space.
// Output order follows input order. ERT mode requires landmarks everywhere.
EyePatches make_eye_patches(const std::vector<Sample>& samples, const PatchGeometry& geometry,
                            std::size_t n_classes, const ThreeClassMap& mapping,
                            const ImageLoader& loader);

// One eye, normalized to tensors [1, patch_h, patch_w].
std::vector<Example<float>> make_eye_samples(const std::vector<Sample>& samples, EyeSide side,
                                             const PatchGeometry& geometry, std::size_t n_classes,
                                             const ThreeClassMap& mapping,
                                             const ImageLoader& loader);

std::vector<Example<float>> to_examples(const std::vector<LabeledPatch>& patches);

}  // namespace gazenet
