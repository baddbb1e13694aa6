#pragma once

#include <cstdint>
#include <vector>

#include "gazenet/image.hpp"

namespace gazenet {

struct AugmentPolicy {
  std::vector<double> rotation_degrees{-10.0, -5.0, 5.0, 10.0};
  std::vector<double> blur_sigmas{0.5, 1.0};
  std::vector<double> scale_factors{0.9, 1.1};

  static AugmentPolicy none() { return {{}, {}, {}}; }
  std::size_t variants_per_sample() const {
    return rotation_degrees.size() + blur_sigmas.size() + scale_factors.size();
  }
  void validate() const;
};

// Rotation about the image centre (counter-clockwise on screen for positive
// angles), bilinear inverse mapping, edge replication. Single channel.
Image rotate(const Image& img, double degrees);

// Separable, radius ceil(3 sigma), edge replication. sigma < 1e-6 is a no-op.
Image gaussian_blur(const Image& img, double sigma);

// Zoom about the centre that keeps the native size: factor < 1 crops the
// central factor-sized region and resizes it up; factor > 1 resizes up by
// factor and crops the centre.
Image rescale(const Image& img, double factor);

struct LabeledPatch {
  Image patch;
  std::size_t label = 0;
};

enum class SplitRole { Train, Test };

// Patches tagged with the split they came from.
struct PatchSet {
  SplitRole role = SplitRole::Train;
  std::vector<LabeledPatch> items;
};

// Originals followed by one variant per (sample, listed parameter), in
// policy order. Refuses test-split input. Every listed transform is
// deterministic, so the output does not currently vary with seed.
PatchSet expand(const PatchSet& samples, const AugmentPolicy& policy, std::uint64_t seed);

}  // namespace gazenet
