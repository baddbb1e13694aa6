#include "gazenet/pipeline.hpp"

#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gazenet/error.hpp"
#include "gazenet/fusion.hpp"
#include "gazenet/pnm.hpp"
#include "gazenet/rng.hpp"
#include "gazenet/synth.hpp"

namespace gazenet {

namespace {

// Seed streams derived from the run seed.
enum SeedStream : std::uint64_t {
  kSplitStream = 0,
  kInitLeft = 1,
  kInitRight = 2,
  kAugment = 3,
  kShuffleLeft = 1000,
  kShuffleRight = 2000000,
};

SplitPair split_for(const RunConfig& cfg, const std::vector<Sample>& samples) {
  const auto seed = derive_seed(cfg.seed, kSplitStream);
  return cfg.split == SplitMode::Image ? split_50_50(samples, seed)
                                       : split_by_subject(samples, seed);
}

void check_model(const Model& m, const RunConfig& cfg, const char* which) {
  const auto g = cfg.geometry();
  require(m.n_classes() == cfg.classes,
          std::string(which) + " model has " + std::to_string(m.n_classes()) +
              " classes but the config asks for " + std::to_string(cfg.classes));
  require(m.input_shape() == InputShape{1, g.patch_h, g.patch_w},
          std::string(which) + " model expects " + std::to_string(m.input_shape().height) + "x" +
              std::to_string(m.input_shape().width) + " input but " + path_mode_name(g.mode) +
              " patches are " + std::to_string(g.patch_h) + "x" + std::to_string(g.patch_w));
}

std::pair<Model, Model> load_models(const RunConfig& cfg) {
  Model left = load_model(cfg.model_left);
  Model right = load_model(cfg.model_right);
  check_model(left, cfg, "left");
  check_model(right, cfg, "right");
  return {std::move(left), std::move(right)};
}

std::vector<Example<float>> augmented_examples(const std::vector<LabeledPatch>& patches,
                                               const RunConfig& cfg) {
  const PatchSet expanded =
      expand(PatchSet{SplitRole::Train, patches}, cfg.augment, derive_seed(cfg.seed, kAugment));
  return to_examples(expanded.items);
}

}  // namespace

TrainSummary cmd_train(const RunConfig& cfg) {
  cfg.validate();
  const auto samples = load_manifest(cfg.manifest);
  require(samples.size() >= 2, "manifest " + cfg.manifest.string() + " has fewer than 2 rows");
  const auto split = split_for(cfg, samples);
  const auto geometry = cfg.geometry();
  const auto patches = make_eye_patches(split.train, geometry, cfg.classes, cfg.map3,
                                        pnm_loader(cfg.resolved_image_root()));
  require(!patches.left.empty(), "training set is empty after applying the " +
                                     std::to_string(cfg.classes) + "-class label mapping");

  TrainSummary summary;
  summary.train_rows = patches.left.size();
  const auto train_left = augmented_examples(patches.left, cfg);
  const auto train_right = augmented_examples(patches.right, cfg);
  summary.train_examples = train_left.size();

  Model left = build_gaze_net(geometry.patch_h, geometry.patch_w, cfg.classes,
                              derive_seed(cfg.seed, kInitLeft));
  Model right = build_gaze_net(geometry.patch_h, geometry.patch_w, cfg.classes,
                               derive_seed(cfg.seed, kInitRight));
  summary.initial_loss_left = mean_loss(left, train_left);
  summary.initial_loss_right = mean_loss(right, train_right);

  // The two networks are independent; each gets its own thread.
  const auto run = [&](Model& model, const std::vector<Example<float>>& data, std::uint64_t stream) {
    std::vector<double> losses;
    for (std::size_t e = 1; e <= cfg.epochs; ++e)
      losses.push_back(train_epoch(model, data, cfg.lr, cfg.batch_size,
                                   derive_seed(cfg.seed, stream + e)));
    return losses;
  };
  std::vector<double> loss_left, loss_right;
  if (std::thread::hardware_concurrency() > 1) {
    auto fut = std::async(std::launch::async, [&] { return run(right, train_right, kShuffleRight); });
    loss_left = run(left, train_left, kShuffleLeft);
    loss_right = fut.get();
  } else {
    loss_left = run(left, train_left, kShuffleLeft);
    loss_right = run(right, train_right, kShuffleRight);
  }

  std::ostringstream log;
  log << "epoch,mean_loss_L,mean_loss_R\n";
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    summary.losses.push_back({e + 1, loss_left[e], loss_right[e]});
    log << e + 1 << ',' << format_real(loss_left[e]) << ',' << format_real(loss_right[e]) << '\n';
  }
  save_model(left, cfg.model_left);
  save_model(right, cfg.model_right);
  write_text_file(cfg.train_log, log.str());

  summary.train_accuracy_left = training_accuracy(left, to_examples(patches.left));
  summary.train_accuracy_right = training_accuracy(right, to_examples(patches.right));
  return summary;
}

std::vector<EyePairExample> test_examples(const RunConfig& cfg) {
  cfg.validate();
  const auto samples = load_manifest(cfg.manifest);
  require(samples.size() >= 2, "manifest " + cfg.manifest.string() + " has fewer than 2 rows");
  const auto split = split_for(cfg, samples);
  const auto patches = make_eye_patches(split.test, cfg.geometry(), cfg.classes, cfg.map3,
                                        pnm_loader(cfg.resolved_image_root()));
  std::vector<EyePairExample> out;
  out.reserve(patches.left.size());
  for (std::size_t i = 0; i < patches.left.size(); ++i)
    out.push_back({normalize(patches.left[i].patch), normalize(patches.right[i].patch),
                   patches.left[i].label});
  return out;
}

EvalSummary cmd_eval(const RunConfig& cfg, EyeMode eye) {
  cfg.validate();
  const auto [left, right] = load_models(cfg);
  const auto test = test_examples(cfg);
  require(!test.empty(), "test split is empty after applying the label mapping");

  EvalSummary out;
  auto& r = out.report;
  r.path_mode = path_mode_name(cfg.mode);
  r.n_classes = cfg.classes;
  r.seed = cfg.seed;
  r.config_text = format_config(cfg);
  r.config_hash = config_hash(cfg);
  r.primary = evaluate(left, right, test, eye);
  if (eye == EyeMode::Both) {
    r.single_eye.push_back(evaluate(left, right, test, EyeMode::Left));
    r.single_eye.push_back(evaluate(left, right, test, EyeMode::Right));
  }
  out.files = emit_report(r, cfg.report_dir, std::string("eval_") + eye_mode_name(eye));
  return out;
}

std::string cmd_predict(const RunConfig& cfg, const std::filesystem::path& image, const Box& face,
                        const std::optional<EyeLandmarks>& landmarks) {
  cfg.validate();
  const auto geometry = cfg.geometry();
  require(face.w > 0 && face.h > 0, "face box must have positive extents");
  if (geometry.mode == PathMode::Ert)
    require(landmarks.has_value(),
            "ert mode requires landmark columns lo_x,lo_y,li_x,li_y,ri_x,ri_y,ro_x,ro_y");
  const auto [left, right] = load_models(cfg);
  const Image img = read_pnm(image);
  const auto sl = left.forward(
      normalize(extract_eye_patch(img, face, landmarks, EyeSide::Left, geometry)));
  const auto sr = right.forward(
      normalize(extract_eye_patch(img, face, landmarks, EyeSide::Right, geometry)));
  const ScoreVector fused = fuse_scores(sl, sr);

  nlohmann::json j;
  j["class"] = class_names(cfg.classes)[predict_class(fused)];
  nlohmann::json scores = nlohmann::json::array();
  for (double v : fused) scores.push_back(std::stod(format_real(v)));
  j["scores"] = scores;
  return j.dump();
}

LatencyReport cmd_bench(const RunConfig& cfg, std::size_t frames, std::size_t warmup) {
  cfg.validate();
  require(frames >= 1, "bench: need at least one timed frame");
  const auto geometry = cfg.geometry();
  Model left, right;
  if (std::filesystem::exists(cfg.model_left) && std::filesystem::exists(cfg.model_right)) {
    std::tie(left, right) = load_models(cfg);
  } else {
    left = build_gaze_net(geometry.patch_h, geometry.patch_w, cfg.classes,
                          derive_seed(cfg.seed, kInitLeft));
    right = build_gaze_net(geometry.patch_h, geometry.patch_w, cfg.classes,
                           derive_seed(cfg.seed, kInitRight));
  }
  const auto items = generate_synthetic((frames + kEacCount - 1) / kEacCount, cfg.seed);
  std::vector<Frame> input;
  input.reserve(frames);
  for (std::size_t i = 0; i < frames; ++i)
    input.push_back({items[i].image, items[i].sample.face, items[i].sample.landmarks});
  BenchOptions opts;
  opts.warmup = warmup;
  return bench_latency(left, right, input, geometry, opts);
}

}  // namespace gazenet
