/* Eye-gaze direction classifier: C interface.
 *
 * All functions return a gz_status. On failure a human-readable message is
 * available from gz_last_error() on the calling thread until the next call.
 * Strings handed out by the library are released with gz_string_free().
 */
#ifndef GAZENET_GAZENET_H
#define GAZENET_GAZENET_H

#include <stddef.h>
#include <stdint.h>

#if defined(GAZENET_BUILDING)
#define GZ_API __attribute__((visibility("default")))
#else
#define GZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gz_status {
  GZ_OK = 0,
  GZ_ERR_INVALID = 1, /* validation: bad argument, config or data */
  GZ_ERR_IO = 2,      /* file missing, unreadable or unwritable */
  GZ_ERR_INTERNAL = 3
} gz_status;

typedef enum gz_eye { GZ_EYE_LEFT = 0, GZ_EYE_RIGHT = 1, GZ_EYE_BOTH = 2 } gz_eye;

typedef struct gz_config gz_config;
typedef struct gz_model gz_model;

GZ_API const char* gz_last_error(void);
GZ_API const char* gz_version(void);
GZ_API void gz_string_free(char* s);

/* Run configuration. */
GZ_API gz_status gz_config_create(gz_config** out);
GZ_API gz_status gz_config_load(gz_config* cfg, const char* path);
/* Single override, e.g. ("train", "epochs", "20"). */
GZ_API gz_status gz_config_set(gz_config* cfg, const char* section, const char* key,
                               const char* value);
/* Effective configuration as INI text. */
GZ_API gz_status gz_config_dump(const gz_config* cfg, char** out_text);
GZ_API void gz_config_destroy(gz_config* cfg);

/* Models. */
GZ_API gz_status gz_model_create(uint32_t input_h, uint32_t input_w, uint32_t n_classes,
                                 uint64_t seed, gz_model** out);
GZ_API gz_status gz_model_load(const char* path, gz_model** out);
GZ_API gz_status gz_model_save(const gz_model* model, const char* path);
GZ_API gz_status gz_model_info(const gz_model* model, uint32_t* input_h, uint32_t* input_w,
                               uint32_t* n_classes);
/* pixels: input_h*input_w normalized values, row-major. scores: n_classes. */
GZ_API gz_status gz_model_forward(const gz_model* model, const float* pixels, size_t n_pixels,
                                  double* scores, size_t n_scores);
GZ_API void gz_model_destroy(gz_model* model);

/* Score fusion and decision. */
GZ_API gz_status gz_fuse_scores(const double* left, const double* right, size_t n, double* out);
GZ_API gz_status gz_predict_class(const double* scores, size_t n, uint32_t* out_class);

/* Pipeline commands. JSON outputs are heap strings owned by the caller. */
GZ_API gz_status gz_synth(const char* out_dir, uint32_t n_per_class, uint64_t seed,
                          char** out_manifest_path);
GZ_API gz_status gz_train(const gz_config* cfg, char** out_summary_json);
GZ_API gz_status gz_eval(const gz_config* cfg, gz_eye eye, char** out_metrics_json);

typedef struct gz_frame_annotation {
  int32_t face_x, face_y, face_w, face_h;
  int32_t has_landmarks;
  /* left_outer, left_inner, right_inner, right_outer as x,y pairs */
  double landmarks[8];
} gz_frame_annotation;

GZ_API gz_status gz_predict(const gz_config* cfg, const char* image_path,
                            const gz_frame_annotation* annotation, char** out_json);
GZ_API gz_status gz_bench(const gz_config* cfg, uint32_t frames, uint32_t warmup,
                          char** out_report_json, char** out_table);

#ifdef __cplusplus
}
#endif

#endif /* GAZENET_GAZENET_H */
