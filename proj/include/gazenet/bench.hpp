#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gazenet/model.hpp"
#include "gazenet/preprocess.hpp"

namespace gazenet {

struct Frame {
  Image image;
  Box face;
  std::optional<EyeLandmarks> landmarks;
};

struct StageStats {
  std::string name;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
};

struct LatencyReport {
  std::vector<StageStats> stages;  // crop_resize, normalize, forward_left, forward_right, fuse
  StageStats end_to_end;
  double fps = 0.0;  // 1000 / end_to_end.mean_ms
  std::size_t timed_frames = 0;
  std::size_t warmup_frames = 0;
};

struct BenchOptions {
  std::size_t warmup = 10;
  // Added to the crop_resize stage of every frame; used to test the harness.
  std::chrono::microseconds injected_delay{0};
};

// Single-threaded wall-clock timing. Warmup iterations cycle through frames
// untimed, then every frame is timed once.
LatencyReport bench_latency(const Model& left, const Model& right, std::span<const Frame> frames,
                            const PatchGeometry& geometry, const BenchOptions& options = {});

std::string latency_json(const LatencyReport& report);
std::string latency_table(const LatencyReport& report);

}  // namespace gazenet
