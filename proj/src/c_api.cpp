#include "gazenet/gazenet.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "gazenet/config.hpp"
#include "gazenet/error.hpp"
#include "gazenet/fusion.hpp"
#include "gazenet/model.hpp"
#include "gazenet/pipeline.hpp"
#include "gazenet/synth.hpp"

struct gz_config {
  gazenet::RunConfig cfg;
};

struct gz_model {
  gazenet::Model model;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
gz_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return GZ_OK;
  } catch (const gazenet::ValidationError& e) {
    g_last_error = e.what();
    return GZ_ERR_INVALID;
  } catch (const gazenet::IoError& e) {
    g_last_error = e.what();
    return GZ_ERR_IO;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return GZ_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GZ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GZ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GZ_ERR_INTERNAL;
  }
}

template <typename T>
T& deref(T* p, const char* what) {
  if (!p) throw gazenet::ValidationError(std::string(what) + " is null");
  return *p;
}

const char* cstr(const char* p, const char* what) {
  if (!p) throw gazenet::ValidationError(std::string(what) + " is null");
  return p;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_string(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

}  // namespace

extern "C" {

const char* gz_last_error(void) { return g_last_error.c_str(); }

const char* gz_version(void) { return "1.0.0"; }

void gz_string_free(char* s) { delete[] s; }

gz_status gz_config_create(gz_config** out) {
  return guarded([&] { deref(out, "out") = new gz_config{}; });
}

gz_status gz_config_load(gz_config* cfg, const char* path) {
  return guarded([&] {
    auto& c = deref(cfg, "config");
    c.cfg = gazenet::load_config(cstr(path, "path"), c.cfg);
  });
}

gz_status gz_config_set(gz_config* cfg, const char* section, const char* key, const char* value) {
  return guarded([&] {
    auto& c = deref(cfg, "config");
    gazenet::RunConfig next = c.cfg;
    gazenet::apply_setting(next, cstr(section, "section"), cstr(key, "key"),
                           value ? value : "");
    c.cfg = std::move(next);
  });
}

gz_status gz_config_dump(const gz_config* cfg, char** out_text) {
  return guarded([&] {
    const auto& c = deref(cfg, "config");
    deref(out_text, "out_text");
    put_string(out_text, gazenet::format_config(c.cfg));
  });
}

void gz_config_destroy(gz_config* cfg) { delete cfg; }

gz_status gz_model_create(uint32_t input_h, uint32_t input_w, uint32_t n_classes, uint64_t seed,
                          gz_model** out) {
  return guarded([&] {
    auto& slot = deref(out, "out");
    slot = new gz_model{gazenet::build_gaze_net(input_h, input_w, n_classes, seed)};
  });
}

gz_status gz_model_load(const char* path, gz_model** out) {
  return guarded([&] {
    auto& slot = deref(out, "out");
    slot = new gz_model{gazenet::load_model(cstr(path, "path"))};
  });
}

gz_status gz_model_save(const gz_model* model, const char* path) {
  return guarded([&] { gazenet::save_model(deref(model, "model").model, cstr(path, "path")); });
}

gz_status gz_model_info(const gz_model* model, uint32_t* input_h, uint32_t* input_w,
                        uint32_t* n_classes) {
  return guarded([&] {
    const auto& m = deref(model, "model").model;
    if (input_h) *input_h = static_cast<uint32_t>(m.input_shape().height);
    if (input_w) *input_w = static_cast<uint32_t>(m.input_shape().width);
    if (n_classes) *n_classes = static_cast<uint32_t>(m.n_classes());
  });
}

gz_status gz_model_forward(const gz_model* model, const float* pixels, size_t n_pixels,
                           double* scores, size_t n_scores) {
  return guarded([&] {
    const auto& m = deref(model, "model").model;
    const auto& in = m.input_shape();
    gazenet::require(pixels != nullptr && n_pixels == in.height * in.width,
                     "forward: expected " + std::to_string(in.height * in.width) + " pixels");
    gazenet::require(scores != nullptr && n_scores == m.n_classes(),
                     "forward: expected a score buffer of " + std::to_string(m.n_classes()));
    gazenet::Tensor<float> x(in.shape(), std::vector<float>(pixels, pixels + n_pixels));
    const auto s = m.forward(x);
    std::copy(s.begin(), s.end(), scores);
  });
}

void gz_model_destroy(gz_model* model) { delete model; }

gz_status gz_fuse_scores(const double* left, const double* right, size_t n, double* out) {
  return guarded([&] {
    gazenet::require(left && right && out, "fuse: null buffer");
    const auto fused = gazenet::fuse_scores(gazenet::ScoreVector(left, left + n),
                                            gazenet::ScoreVector(right, right + n));
    std::copy(fused.begin(), fused.end(), out);
  });
}

gz_status gz_predict_class(const double* scores, size_t n, uint32_t* out_class) {
  return guarded([&] {
    gazenet::require(scores != nullptr, "predict: null scores");
    deref(out_class, "out_class") =
        static_cast<uint32_t>(gazenet::predict_class(gazenet::ScoreVector(scores, scores + n)));
  });
}

gz_status gz_synth(const char* out_dir, uint32_t n_per_class, uint64_t seed,
                   char** out_manifest_path) {
  return guarded([&] {
    const auto manifest = gazenet::write_synthetic(cstr(out_dir, "out_dir"),
                                                   n_per_class, seed);
    put_string(out_manifest_path, manifest.string());
  });
}

gz_status gz_train(const gz_config* cfg, char** out_summary_json) {
  return guarded([&] {
    const auto& c = deref(cfg, "config").cfg;
    const auto s = gazenet::cmd_train(c);
    nlohmann::json j;
    j["train_rows"] = s.train_rows;
    j["train_examples_per_eye"] = s.train_examples;
    j["epochs"] = s.losses.size();
    j["initial_loss"] = {{"left", s.initial_loss_left}, {"right", s.initial_loss_right}};
    if (!s.losses.empty())
      j["final_loss"] = {{"left", s.losses.back().left}, {"right", s.losses.back().right}};
    j["train_accuracy"] = {{"left", s.train_accuracy_left}, {"right", s.train_accuracy_right}};
    j["model_left"] = c.model_left.string();
    j["model_right"] = c.model_right.string();
    j["log"] = c.train_log.string();
    put_string(out_summary_json, j.dump(2));
  });
}

gz_status gz_eval(const gz_config* cfg, gz_eye eye, char** out_metrics_json) {
  return guarded([&] {
    const auto& c = deref(cfg, "config").cfg;
    gazenet::EyeMode mode{};
    switch (eye) {
      case GZ_EYE_LEFT: mode = gazenet::EyeMode::Left; break;
      case GZ_EYE_RIGHT: mode = gazenet::EyeMode::Right; break;
      case GZ_EYE_BOTH: mode = gazenet::EyeMode::Both; break;
      default: throw gazenet::ValidationError("eval: unknown eye selector");
    }
    const auto r = gazenet::cmd_eval(c, mode);
    put_string(out_metrics_json, gazenet::metrics_json(r.report));
  });
}

gz_status gz_predict(const gz_config* cfg, const char* image_path,
                     const gz_frame_annotation* annotation, char** out_json) {
  return guarded([&] {
    const auto& c = deref(cfg, "config").cfg;
    const auto& a = deref(annotation, "annotation");
    std::optional<gazenet::EyeLandmarks> lm;
    if (a.has_landmarks) {
      const double* p = a.landmarks;
      lm = gazenet::EyeLandmarks{{p[0], p[1]}, {p[2], p[3]}, {p[4], p[5]}, {p[6], p[7]}};
    }
    const std::string json = gazenet::cmd_predict(c, cstr(image_path, "image_path"),
                                                  gazenet::Box{a.face_x, a.face_y, a.face_w, a.face_h}, lm);
    put_string(out_json, json);
  });
}

gz_status gz_bench(const gz_config* cfg, uint32_t frames, uint32_t warmup,
                   char** out_report_json, char** out_table) {
  return guarded([&] {
    const auto& c = deref(cfg, "config").cfg;
    const auto r = gazenet::cmd_bench(c, frames, warmup);
    put_string(out_report_json, gazenet::latency_json(r));
    put_string(out_table, gazenet::latency_table(r));
  });
}

}  // extern "C"
