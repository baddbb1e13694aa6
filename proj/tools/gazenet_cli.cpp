// gazenet command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gazenet/gazenet.h"

namespace {

struct CliError {
  gz_status status;
};

void check(gz_status s) {
  if (s != GZ_OK) throw CliError{s};
}

struct StringHolder {
  char* p = nullptr;
  ~StringHolder() { gz_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ConfigPtr = std::unique_ptr<gz_config, decltype(&gz_config_destroy)>;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::optional<unsigned> classes;
  std::optional<unsigned> epochs;
  std::optional<double> lr;
  std::optional<unsigned> batch_size;
  std::string manifest;
  std::string image_root;
  std::string model_left;
  std::string model_right;
  std::string log;
  std::string report_dir;
  std::vector<std::string> overrides;  // section.key=value
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "INI config file");
  cmd->add_option("--seed", o.seed, "Run seed");
  cmd->add_option("--mode", o.mode, "Eye patch path")->check(CLI::IsMember({"roi", "ert"}));
  cmd->add_option("--classes", o.classes, "Label space")->check(CLI::IsMember({3, 7}));
  cmd->add_option("--epochs", o.epochs, "Training epochs");
  cmd->add_option("--lr", o.lr, "SGD learning rate");
  cmd->add_option("--batch-size", o.batch_size, "Minibatch size");
  cmd->add_option("--manifest", o.manifest, "Annotation manifest CSV");
  cmd->add_option("--image-root", o.image_root, "Directory image paths are relative to");
  cmd->add_option("--model-left", o.model_left, "Left-eye model file");
  cmd->add_option("--model-right", o.model_right, "Right-eye model file");
  cmd->add_option("--log", o.log, "Training loss log CSV");
  cmd->add_option("--report-dir", o.report_dir, "Directory for evaluation reports");
  cmd->add_option("--set", o.overrides, "Extra override as section.key=value (repeatable)");
}

ConfigPtr build_config(const CommonOptions& o) {
  gz_config* raw = nullptr;
  check(gz_config_create(&raw));
  ConfigPtr cfg(raw, &gz_config_destroy);
  if (!o.config_path.empty()) check(gz_config_load(cfg.get(), o.config_path.c_str()));
  const auto set = [&](const char* section, const char* key, const std::string& value) {
    check(gz_config_set(cfg.get(), section, key, value.c_str()));
  };
  for (const auto& kv : o.overrides) {
    const auto dot = kv.find('.');
    const auto eq = kv.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
      std::cerr << "error: --set expects section.key=value, got '" << kv << "'\n";
      throw CliError{GZ_ERR_INVALID};
    }
    set(kv.substr(0, dot).c_str(), kv.substr(dot + 1, eq - dot - 1).c_str(), kv.substr(eq + 1));
  }
  if (o.seed) set("train", "seed", std::to_string(*o.seed));
  if (!o.mode.empty()) set("data", "mode", o.mode);
  if (o.classes) set("data", "classes", std::to_string(*o.classes));
  if (o.epochs) set("train", "epochs", std::to_string(*o.epochs));
  if (o.lr) {
    std::ostringstream os;
    os.precision(17);
    os << *o.lr;
    set("train", "lr", os.str());
  }
  if (o.batch_size) set("train", "batch_size", std::to_string(*o.batch_size));
  if (!o.manifest.empty()) set("data", "manifest", o.manifest);
  if (!o.image_root.empty()) set("data", "image_root", o.image_root);
  if (!o.model_left.empty()) set("train", "model_left", o.model_left);
  if (!o.model_right.empty()) set("train", "model_right", o.model_right);
  if (!o.log.empty()) set("train", "log", o.log);
  if (!o.report_dir.empty()) set("train", "report_dir", o.report_dir);
  return cfg;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

int exit_code(gz_status s) {
  switch (s) {
    case GZ_OK: return 0;
    case GZ_ERR_IO: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eye gaze direction classification: synth | train | eval | predict | bench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gz_version()));

  std::string synth_out;
  unsigned synth_n = 3;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic annotated eye corpus");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--n-per-class", synth_n, "Images per EAC class")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");

  CommonOptions train_opts;
  auto* train = app.add_subcommand("train", "Train the left- and right-eye networks");
  add_common(train, train_opts);

  CommonOptions eval_opts;
  std::string eval_eye = "both";
  auto* eval = app.add_subcommand("eval", "Evaluate on the held-out half of the split");
  add_common(eval, eval_opts);
  eval->add_option("--eye", eval_eye, "Which network(s) to score with")
      ->check(CLI::IsMember({"left", "right", "both"}));

  CommonOptions predict_opts;
  std::string predict_image, predict_face, predict_landmarks;
  auto* predict = app.add_subcommand("predict", "Classify one annotated image");
  add_common(predict, predict_opts);
  predict->add_option("--image", predict_image, "PGM/PPM image")->required();
  predict->add_option("--face", predict_face, "Face box x,y,w,h")->required();
  predict->add_option("--landmarks", predict_landmarks,
                      "Eye corners lo_x,lo_y,li_x,li_y,ri_x,ri_y,ro_x,ro_y (ert mode)");

  CommonOptions bench_opts;
  unsigned bench_frames = 100, bench_warmup = 10;
  std::string bench_json;
  auto* bench = app.add_subcommand("bench", "Per-stage inference latency on synthetic frames");
  add_common(bench, bench_opts);
  bench->add_option("--frames", bench_frames, "Timed frames")->check(CLI::PositiveNumber);
  bench->add_option("--warmup", bench_warmup, "Untimed warmup frames");
  bench->add_option("--json-out", bench_json, "Also write the report JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      StringHolder manifest;
      check(gz_synth(synth_out.c_str(), synth_n, synth_seed, &manifest.p));
      std::cout << "wrote " << synth_n * 7 << " images and " << manifest.str() << "\n";
    } else if (train->parsed()) {
      auto cfg = build_config(train_opts);
      StringHolder summary;
      check(gz_train(cfg.get(), &summary.p));
      std::cout << summary.str() << "\n";
    } else if (eval->parsed()) {
      auto cfg = build_config(eval_opts);
      const gz_eye eye = eval_eye == "left" ? GZ_EYE_LEFT : eval_eye == "right" ? GZ_EYE_RIGHT : GZ_EYE_BOTH;
      StringHolder metrics;
      check(gz_eval(cfg.get(), eye, &metrics.p));
      std::cout << metrics.str();
    } else if (predict->parsed()) {
      auto cfg = build_config(predict_opts);
      gz_frame_annotation ann{};
      std::vector<int> face;
      std::vector<double> lm;
      try {
        face = parse_ints(predict_face);
        if (!predict_landmarks.empty()) lm = parse_reals(predict_landmarks);
      } catch (const std::exception&) {
        std::cerr << "error: --face and --landmarks take comma-separated numbers\n";
        return 1;
      }
      if (face.size() != 4) {
        std::cerr << "error: --face expects x,y,w,h\n";
        return 1;
      }
      if (!lm.empty() && lm.size() != 8) {
        std::cerr << "error: --landmarks expects 8 values lo_x,lo_y,li_x,li_y,ri_x,ri_y,ro_x,ro_y\n";
        return 1;
      }
      ann.face_x = face[0];
      ann.face_y = face[1];
      ann.face_w = face[2];
      ann.face_h = face[3];
      ann.has_landmarks = lm.empty() ? 0 : 1;
      for (std::size_t i = 0; i < lm.size(); ++i) ann.landmarks[i] = lm[i];
      StringHolder out;
      check(gz_predict(cfg.get(), predict_image.c_str(), &ann, &out.p));
      std::cout << out.str() << "\n";
    } else if (bench->parsed()) {
      auto cfg = build_config(bench_opts);
      StringHolder json, table;
      check(gz_bench(cfg.get(), bench_frames, bench_warmup, &json.p, &table.p));
      std::cout << table.str() << json.str();
      if (!bench_json.empty()) {
        std::ofstream f(bench_json, std::ios::binary | std::ios::trunc);
        f << json.str();
        if (!f) {
          std::cerr << "error: cannot write " << bench_json << "\n";
          return 2;
        }
      }
    }
  } catch (const CliError& e) {
    const char* msg = gz_last_error();
    if (msg && *msg) std::cerr << "error: " << msg << "\n";
    return exit_code(e.status);
  }
  return 0;
}
