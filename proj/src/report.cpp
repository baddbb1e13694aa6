#include "gazenet/report.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "gazenet/dataset.hpp"
#include "gazenet/error.hpp"

namespace gazenet {

namespace {

// Number rounded to 6 significant digits so the JSON text carries exactly
// those digits.
nlohmann::json real6(double v) { return std::stod(format_real(v)); }

nlohmann::json result_json(const EvalResult& r, const std::vector<std::string>& names) {
  nlohmann::json j;
  j["eye"] = eye_mode_name(r.mode);
  j["accuracy"] = real6(r.accuracy);
  j["test_count"] = r.confusion.total();
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t i = 0; i < r.per_class.size(); ++i)
    per_class[names[i]] = r.per_class[i] ? real6(*r.per_class[i]) : nlohmann::json(nullptr);
  j["per_class"] = per_class;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t t = 0; t < r.confusion.n_classes(); ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < r.confusion.n_classes(); ++p) row.push_back(r.confusion.at(t, p));
    rows.push_back(row);
  }
  j["confusion"] = rows;
  return j;
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string confusion_csv(const ConfusionMatrix& m, const std::vector<std::string>& names) {
  require(names.size() == m.n_classes(), "confusion_csv: class name count mismatch");
  std::ostringstream os;
  os << "true\\pred";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  for (std::size_t t = 0; t < m.n_classes(); ++t) {
    os << names[t];
    for (std::size_t p = 0; p < m.n_classes(); ++p) os << ',' << m.at(t, p);
    os << '\n';
  }
  return os.str();
}

std::string metrics_json(const MetricsReport& report) {
  const auto names = class_names(report.n_classes);
  nlohmann::json j;
  j["path_mode"] = report.path_mode;
  j["classes"] = report.n_classes;
  j["class_names"] = names;
  j["seed"] = report.seed;
  j["config"] = report.config_text;
  j["config_hash"] = report.config_hash;
  j["result"] = result_json(report.primary, names);
  nlohmann::json singles = nlohmann::json::object();
  for (const auto& r : report.single_eye) singles[eye_mode_name(r.mode)] = result_json(r, names);
  j["single_eye"] = singles;
  return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("failed writing: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

ReportFiles emit_report(const MetricsReport& report, const std::filesystem::path& dir,
                        const std::string& stem) {
  ReportFiles files{dir / (stem + "_confusion.csv"), dir / (stem + "_metrics.json")};
  write_text_file(files.confusion_csv,
                  confusion_csv(report.primary.confusion, class_names(report.n_classes)));
  write_text_file(files.metrics_json, metrics_json(report));
  return files;
}

}  // namespace gazenet
