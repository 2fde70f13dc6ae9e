#ifndef KREINFRAMES_H
#define KREINFRAMES_H

#include <stdint.h>

#if defined(_WIN32)
#define KF_API __declspec(dllexport)
#else
#define KF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kf_status {
  KF_OK = 0,
  KF_E_ARGUMENT = 1,   /* invalid argument or input that fails validation */
  KF_E_PARSE = 2,      /* malformed JSON or missing field */
  KF_E_IO = 3,         /* file could not be read or written */
  KF_E_NOT_JFRAME = 4, /* the family is not a J-frame */
  KF_E_SPECTRAL = 5,   /* spectrum not in the open right half-plane */
  KF_E_GENERATION = 6, /* random generation exhausted its retries */
  KF_E_NUMERIC = 7,    /* an internal consistency check failed */
  KF_E_INTERNAL = 8
} kf_status;

typedef struct kf_frame kf_frame;
typedef struct kf_analysis kf_analysis;

typedef struct kf_gen_config {
  int p, q;
  int n_plus, n_minus;
  double angular_norm_cap;
  double conditioning_cap;
  uint64_t seed;
} kf_gen_config;

typedef struct kf_synthesis_info {
  double operator_residual; /* ||T T^+ - S|| / ||S|| */
  int sign_mismatch;
  int realized_plus, realized_minus;
  int is_jframe;
} kf_synthesis_info;

typedef struct kf_verify_config {
  int seeds;
  const char* sizes;               /* "1+1,2+1"; NULL for the default list */
  double angular_norm_cap;         /* <= 0 for the default */
  double conditioning_cap;         /* < 1 for the default */
  int threads;                     /* 0 for hardware concurrency */
  const char* tolerance_overrides; /* "property=value,..."; may be NULL */
} kf_verify_config;

/* Message of the last failure on the calling thread. */
KF_API const char* kf_last_error(void);
KF_API const char* kf_status_name(kf_status status);

/* Strings returned through char** out-parameters are owned by the caller. */
KF_API void kf_string_free(char* s);

KF_API kf_status kf_frame_parse(const char* json, kf_frame** out);
KF_API kf_status kf_frame_load(const char* path, kf_frame** out);
KF_API kf_status kf_frame_save(const kf_frame* frame, const char* path);
KF_API kf_status kf_frame_to_json(const kf_frame* frame, char** out);
KF_API int kf_frame_size(const kf_frame* frame);
KF_API void kf_frame_free(kf_frame* frame);

KF_API void kf_gen_config_default(kf_gen_config* cfg);
KF_API kf_status kf_generate(const kf_gen_config* cfg, kf_frame** out);

/* Tolerance overrides are parallel arrays of names and values; n may be 0. */
KF_API kf_status kf_analyze(const kf_frame* frame, const char* const* tol_names,
                            const double* tol_values, int n, kf_analysis** out);
/* 0 all checks pass, 2 not a J-frame, 3 a consistency check failed. */
KF_API int kf_analysis_exit_code(const kf_analysis* analysis);
KF_API kf_status kf_analysis_report(const kf_analysis* analysis, char** json);
KF_API kf_status kf_analysis_summary(const kf_analysis* analysis, char** text);
KF_API void kf_analysis_free(kf_analysis* analysis);

/* Either output may be NULL. Fails with KF_E_NOT_JFRAME on other families. */
KF_API kf_status kf_enclosure(const kf_frame* frame, char** svg, char** regions_json);

/* The frame is produced even on a sign mismatch; it carries diagnostics. */
KF_API kf_status kf_synthesize(const char* operator_json, int n_plus, int n_minus, uint64_t seed,
                               kf_frame** out, kf_synthesis_info* info);

KF_API void kf_verify_config_default(kf_verify_config* cfg);
KF_API kf_status kf_verify(const kf_verify_config* cfg, char** table, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
