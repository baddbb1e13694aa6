#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gazenet/eval.hpp"

namespace gazenet {

struct MetricsReport {
  std::string path_mode;  // roi | ert
  std::size_t n_classes = 0;
  std::uint64_t seed = 0;
  std::string config_text;  // effective config, echoed verbatim
  std::string config_hash;
  EvalResult primary;
  // Per-eye results reported next to the fused one.
  std::vector<EvalResult> single_eye;
};

// %.6g
std::string format_real(double v);

// Header row and column carry the class names.
std::string confusion_csv(const ConfusionMatrix& m, const std::vector<std::string>& names);
std::string metrics_json(const MetricsReport& report);

struct ReportFiles {
  std::filesystem::path confusion_csv;
  std::filesystem::path metrics_json;
};

// Writes <dir>/<stem>_confusion.csv and <dir>/<stem>_metrics.json.
ReportFiles emit_report(const MetricsReport& report, const std::filesystem::path& dir,
                        const std::string& stem = "eval");

// Writes text to path, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gazenet
