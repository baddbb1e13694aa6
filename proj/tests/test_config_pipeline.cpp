#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "gazenet/config.hpp"
#include "gazenet/error.hpp"
#include "gazenet/model.hpp"
#include "gazenet/pipeline.hpp"
#include "gazenet/rng.hpp"
#include "gazenet/synth.hpp"

using namespace gazenet;
namespace fs = std::filesystem;

TEST_CASE("config parsing") {
  const RunConfig defaults;
  CHECK(defaults.mode == PathMode::Ert);
  CHECK(defaults.classes == 7);
  CHECK(defaults.lr == 0.01);
  CHECK(defaults.batch_size == 32);
  CHECK(defaults.epochs == 200);

  const auto cfg = parse_config(
      "# comment\n[data]\nmode = roi\nclasses=3\n\n[train]\nlr = 0.05\nepochs = 7\nseed = 99\n"
      "[augment]\nrotations = -3, 3\nblur_sigmas =\n[map3]\nK = Left\n");
  CHECK(cfg.mode == PathMode::Roi);
  CHECK(cfg.classes == 3);
  CHECK(cfg.lr == 0.05);
  CHECK(cfg.epochs == 7);
  CHECK(cfg.seed == 99);
  CHECK(cfg.augment.rotation_degrees == std::vector<double>{-3.0, 3.0});
  CHECK(cfg.augment.blur_sigmas.empty());
  CHECK(cfg.augment.scale_factors == std::vector<double>{0.9, 1.1});
  CHECK(cfg.map3.targets[static_cast<std::size_t>(EacClass::K)] == ThreeTarget::Left);
  CHECK(cfg.geometry().patch_h == 42);

  CHECK_THROWS_AS(parse_config("[train]\nlearning_rate = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[model]\nx = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("lr = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[train]\nlr\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[train]\nepochs = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[train]\nlr = abc\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[data]\nclasses = 5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[data]\nmode = fancy\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[data]\nroi_patch_h = 4\n").validate(), ValidationError);
  CHECK_THROWS_AS(parse_config("[map3]\nK = Up\n"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), IoError);
}

TEST_CASE("config round trip") {
  RunConfig cfg;
  apply_setting(cfg, "data", "mode", "roi");
  apply_setting(cfg, "data", "roi_left_x", "0.125");
  apply_setting(cfg, "train", "lr", "0.003");
  apply_setting(cfg, "train", "seed", "18446744073709551615");
  apply_setting(cfg, "augment", "scales", "0.8,1.25");
  apply_setting(cfg, "map3", "VR", "Right");
  const auto text = format_config(cfg);
  const auto back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(back.seed == 18446744073709551615ull);
  CHECK(back.roi.left_x == 0.125);
  CHECK(config_hash(cfg) != config_hash(RunConfig{}));
  CHECK(config_hash(cfg).size() == 16);
}

namespace {

struct Workspace {
  fs::path dir;
  RunConfig cfg;
  explicit Workspace(const char* name) : dir(fs::temp_directory_path() / name) {
    fs::remove_all(dir);
    cfg.manifest = write_synthetic(dir / "data", 3, 11);
    cfg.model_left = dir / "left.gdn";
    cfg.model_right = dir / "right.gdn";
    cfg.train_log = dir / "log.csv";
    cfg.report_dir = dir / "report";
    cfg.augment = AugmentPolicy::none();
  }
  ~Workspace() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("train with zero epochs saves the initial weights") {
  Workspace ws("gazenet_test_train0");
  ws.cfg.epochs = 0;
  const auto s = cmd_train(ws.cfg);
  CHECK(s.losses.empty());
  CHECK(s.train_rows == 11);
  const Model left = load_model(ws.cfg.model_left);
  CHECK(left.n_classes() == 7);
  CHECK(left.input_shape() == InputShape{1, 15, 25});
  CHECK(left == build_gaze_net(15, 25, 7, derive_seed(ws.cfg.seed, 1)));
  CHECK(read_text_file(ws.cfg.train_log) == "epoch,mean_loss_L,mean_loss_R\n");
}

TEST_CASE("three-class training keeps only mapped rows") {
  Workspace ws("gazenet_test_train3");
  ws.cfg.epochs = 1;
  ws.cfg.classes = 3;
  ws.cfg.augment = AugmentPolicy{};
  const auto samples = load_manifest(ws.cfg.manifest);
  const auto split = split_50_50(samples, derive_seed(ws.cfg.seed, 0));
  std::size_t expected = 0;
  for (const auto& s : split.train)
    expected += s.eac == EacClass::AR || s.eac == EacClass::VD || s.eac == EacClass::AC;
  const auto summary = cmd_train(ws.cfg);
  CHECK(summary.train_rows == expected);
  CHECK(summary.train_examples == expected * 9);
  CHECK(load_model(ws.cfg.model_left).n_classes() == 3);

  // The same models under a 7-class config are rejected.
  auto seven = ws.cfg;
  seven.classes = 7;
  CHECK_THROWS_AS(cmd_eval(seven, EyeMode::Both), ValidationError);

  const auto eval = cmd_eval(ws.cfg, EyeMode::Both);
  CHECK(eval.report.primary.confusion.n_classes() == 3);
  const auto j = nlohmann::json::parse(read_text_file(eval.files.metrics_json));
  CHECK(j["classes"] == 3);
  CHECK(j["single_eye"].contains("left"));
  CHECK(j["single_eye"].contains("right"));
  CHECK(parse_config(j["config"].get<std::string>()).classes == 3);

  // Nothing left to train on.
  auto empty = ws.cfg;
  empty.map3.targets.fill(ThreeTarget::Excluded);
  CHECK_THROWS_AS(cmd_train(empty), ValidationError);
}

TEST_CASE("train, eval and predict are deterministic") {
  Workspace ws("gazenet_test_det");
  ws.cfg.epochs = 2;
  const auto a = cmd_train(ws.cfg);
  const auto bytes_l = read_text_file(ws.cfg.model_left);
  const auto bytes_r = read_text_file(ws.cfg.model_right);
  const auto log = read_text_file(ws.cfg.train_log);
  const auto b = cmd_train(ws.cfg);
  CHECK(read_text_file(ws.cfg.model_left) == bytes_l);
  CHECK(read_text_file(ws.cfg.model_right) == bytes_r);
  CHECK(read_text_file(ws.cfg.train_log) == log);
  REQUIRE(a.losses.size() == 2);
  CHECK(a.losses[1].left == b.losses[1].left);

  const auto e1 = cmd_eval(ws.cfg, EyeMode::Both);
  const auto csv = read_text_file(e1.files.confusion_csv);
  const auto json = read_text_file(e1.files.metrics_json);
  const auto e2 = cmd_eval(ws.cfg, EyeMode::Both);
  CHECK(read_text_file(e2.files.confusion_csv) == csv);
  CHECK(read_text_file(e2.files.metrics_json) == json);
  CHECK(e1.report.primary.confusion.total() == 10);

  const auto left_only = cmd_eval(ws.cfg, EyeMode::Left);
  CHECK(left_only.files.metrics_json.filename() == "eval_left_metrics.json");
  CHECK(left_only.report.single_eye.empty());
  CHECK(left_only.report.primary.accuracy == e1.report.single_eye[0].accuracy);

  const auto samples = load_manifest(ws.cfg.manifest);
  const auto img = ws.cfg.manifest.parent_path() / samples[0].image_path;
  const auto p1 = cmd_predict(ws.cfg, img, samples[0].face, samples[0].landmarks);
  CHECK(cmd_predict(ws.cfg, img, samples[0].face, samples[0].landmarks) == p1);
  const auto j = nlohmann::json::parse(p1);
  REQUIRE(j["scores"].size() == 7);
  double sum = 0.0;
  for (const auto& v : j["scores"]) sum += v.get<double>();
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-4));
  try {
    cmd_predict(ws.cfg, img, samples[0].face, std::nullopt);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("lo_x") != std::string::npos);
  }
  CHECK_THROWS_AS(cmd_predict(ws.cfg, ws.dir / "none.pgm", samples[0].face, samples[0].landmarks),
                  IoError);

  auto missing = ws.cfg;
  missing.model_left = ws.dir / "absent.gdn";
  CHECK_THROWS_AS(cmd_eval(missing, EyeMode::Both), IoError);
}

TEST_CASE("bench counts exactly the requested frames") {
  RunConfig cfg;
  cfg.mode = PathMode::Roi;
  cfg.model_left = "/nonexistent/l.gdn";
  cfg.model_right = "/nonexistent/r.gdn";
  const auto r = cmd_bench(cfg, 9, 3);
  CHECK(r.timed_frames == 9);
  CHECK(r.warmup_frames == 3);
  CHECK(r.fps > 0.0);
  CHECK_THROWS_AS(cmd_bench(cfg, 0, 3), ValidationError);
}
