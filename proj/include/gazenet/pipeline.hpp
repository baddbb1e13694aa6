#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gazenet/bench.hpp"
#include "gazenet/config.hpp"
#include "gazenet/eval.hpp"
#include "gazenet/report.hpp"

namespace gazenet {

struct EpochLoss {
  std::size_t epoch = 0;
  double left = 0.0;
  double right = 0.0;
};

struct TrainSummary {
  std::size_t train_rows = 0;      // split rows kept by the label space
  std::size_t train_examples = 0;  // per eye, after augmentation
  std::vector<EpochLoss> losses;
  double initial_loss_left = 0.0;
  double initial_loss_right = 0.0;
  double train_accuracy_left = 0.0;
  double train_accuracy_right = 0.0;
};

// Split, label mapping, patch extraction, augmentation of the training half,
// then independent training of both eye networks. Writes both model files
// and the per-epoch loss log.
TrainSummary cmd_train(const RunConfig& cfg);

struct EvalSummary {
  MetricsReport report;
  ReportFiles files;
};

// Evaluates on the held-out half of the same seeded split and writes the
// confusion CSV and metrics JSON.
EvalSummary cmd_eval(const RunConfig& cfg, EyeMode eye);

// Prints-ready JSON: {"class": name, "scores": [...]}.
std::string cmd_predict(const RunConfig& cfg, const std::filesystem::path& image, const Box& face,
                        const std::optional<EyeLandmarks>& landmarks);

// Benchmarks the configured models (fresh ones if the files do not exist)
// on synthetic frames.
LatencyReport cmd_bench(const RunConfig& cfg, std::size_t frames, std::size_t warmup);

// Test-split examples for both eyes, in split order.
std::vector<EyePairExample> test_examples(const RunConfig& cfg);

}  // namespace gazenet
