#include "gazenet/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gazenet/error.hpp"
#include "gazenet/fusion.hpp"
#include "gazenet/report.hpp"

namespace gazenet {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

// Nearest-rank percentile.
double percentile(std::vector<double> sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

StageStats stats(std::string name, const std::vector<double>& samples) {
  StageStats s;
  s.name = std::move(name);
  s.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  s.p50_ms = percentile(samples, 0.50);
  s.p95_ms = percentile(samples, 0.95);
  s.max_ms = *std::max_element(samples.begin(), samples.end());
  return s;
}

nlohmann::json stage_json(const StageStats& s) {
  auto r = [](double v) { return std::stod(format_real(v)); };
  return {{"name", s.name}, {"mean_ms", r(s.mean_ms)}, {"p50_ms", r(s.p50_ms)},
          {"p95_ms", r(s.p95_ms)}, {"max_ms", r(s.max_ms)}};
}

}  // namespace

LatencyReport bench_latency(const Model& left, const Model& right, std::span<const Frame> frames,
                            const PatchGeometry& geometry, const BenchOptions& options) {
  require(!frames.empty(), "bench_latency: no frames to time");
  require(left.n_classes() == right.n_classes(), "bench_latency: class-count mismatch");

  constexpr std::size_t kStages = 5;
  const char* names[kStages] = {"crop_resize", "normalize", "forward_left", "forward_right", "fuse"};
  std::vector<std::vector<double>> timings(kStages);
  std::vector<double> total;
  volatile std::size_t sink = 0;

  const auto run = [&](const Frame& f, bool record) {
    const auto t0 = Clock::now();
    const Image pl = extract_eye_patch(f.image, f.face, f.landmarks, EyeSide::Left, geometry);
    const Image pr = extract_eye_patch(f.image, f.face, f.landmarks, EyeSide::Right, geometry);
    if (options.injected_delay.count() > 0) std::this_thread::sleep_for(options.injected_delay);
    const auto t1 = Clock::now();
    const Tensor<float> xl = normalize(pl);
    const Tensor<float> xr = normalize(pr);
    const auto t2 = Clock::now();
    const ScoreVector sl = left.forward(xl);
    const auto t3 = Clock::now();
    const ScoreVector sr = right.forward(xr);
    const auto t4 = Clock::now();
    sink = sink + predict_class(fuse_scores(sl, sr));
    const auto t5 = Clock::now();
    if (!record) return;
    const Clock::time_point marks[kStages + 1] = {t0, t1, t2, t3, t4, t5};
    for (std::size_t s = 0; s < kStages; ++s) timings[s].push_back(ms_since(marks[s], marks[s + 1]));
    total.push_back(ms_since(t0, t5));
  };

  for (std::size_t i = 0; i < options.warmup; ++i) run(frames[i % frames.size()], false);
  for (const auto& f : frames) run(f, true);

  LatencyReport report;
  for (std::size_t s = 0; s < kStages; ++s) report.stages.push_back(stats(names[s], timings[s]));
  report.end_to_end = stats("end_to_end", total);
  report.fps = 1000.0 / report.end_to_end.mean_ms;
  report.timed_frames = total.size();
  report.warmup_frames = options.warmup;
  return report;
}

std::string latency_json(const LatencyReport& report) {
  nlohmann::json j;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : report.stages) stages.push_back(stage_json(s));
  j["stages"] = stages;
  j["end_to_end"] = stage_json(report.end_to_end);
  j["fps"] = std::stod(format_real(report.fps));
  j["timed_frames"] = report.timed_frames;
  j["warmup_frames"] = report.warmup_frames;
  return j.dump(2) + "\n";
}

std::string latency_table(const LatencyReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s %10s\n", "stage", "mean_ms", "p50_ms",
                "p95_ms", "max_ms");
  os << line;
  auto row = [&](const StageStats& s) {
    std::snprintf(line, sizeof line, "%-14s %10.3f %10.3f %10.3f %10.3f\n", s.name.c_str(),
                  s.mean_ms, s.p50_ms, s.p95_ms, s.max_ms);
    os << line;
  };
  for (const auto& s : report.stages) row(s);
  row(report.end_to_end);
  std::snprintf(line, sizeof line, "frames %zu (after %zu warmup), %.1f fps\n",
                report.timed_frames, report.warmup_frames, report.fps);
  os << line;
  return os.str();
}

}  // namespace gazenet
