#ifndef LIFTRISK_LIFTRISK_H
#define LIFTRISK_LIFTRISK_H

/*
 * C interface to the lifting-risk engine: NIOSH lifting-equation scoring,
 * synthetic lift generation, mixture-of-experts motion model training and
 * evaluation, and a streaming risk engine fed one frame line at a time.
 *
 * Every function returns lr_status; on failure lr_last_error() describes
 * the most recent error in the calling thread.
 */

#include <stddef.h>

#if defined(_WIN32)
#define LR_API __declspec(dllexport)
#else
#define LR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lr_status {
  LR_OK = 0,
  LR_ERR_USAGE = 1,   /* null pointers, bad options, out-of-range values */
  LR_ERR_DATA = 2,    /* malformed frames, configs, datasets, or models */
  LR_ERR_NUMERIC = 3, /* computation failed on valid-looking input */
  LR_ERR_IO = 4,      /* file could not be read or written */
  LR_ERR_VERSION = 5  /* file format newer than this library */
} lr_status;

/* Library version, e.g. "1.0.0". */
LR_API const char* lr_version(void);

/* Message for the last failing call in this thread; never NULL. */
LR_API const char* lr_last_error(void);

/* ------------------------------------------------------------------ */
/* Lifting-equation scoring                                            */

typedef enum lr_duration {
  LR_DURATION_1H = 0,
  LR_DURATION_2H = 1,
  LR_DURATION_8H = 2
} lr_duration;

typedef enum lr_coupling {
  LR_COUPLING_GOOD = 0,
  LR_COUPLING_FAIR = 1,
  LR_COUPLING_POOR = 2
} lr_coupling;

typedef struct lr_rnle_input {
  double h_cm;        /* horizontal hand distance */
  double v_cm;        /* vertical hand height */
  double d_cm;        /* vertical travel distance */
  double a_deg;       /* asymmetry angle */
  double f_per_min;   /* lift frequency */
  int duration;       /* lr_duration */
  int coupling;       /* lr_coupling */
  double payload_kg;
  int table_parity;      /* 1: round each multiplier to 2 decimals first */
  int standard_coupling; /* 1: fair coupling rates 1.0 at or above 75 cm */
} lr_rnle_input;

typedef struct lr_rnle_result {
  double hm, vm, dm, am, fm, cm;
  double rwl_kg;
  double li;
  int frequency_clamped; /* 1: frequency fell outside the lookup table */
} lr_rnle_result;

LR_API lr_status lr_rnle_compute(const lr_rnle_input* input,
                                 lr_rnle_result* result);

/* Writes the multiplier lookup tables as JSON into buffer. */
LR_API lr_status lr_rnle_tables_json(char* buffer, size_t capacity);

/* ------------------------------------------------------------------ */
/* Synthetic data                                                      */

/*
 * Generates a dataset of independent lifts under out_dir (manifest plus
 * one frame file per lift, split 70/20/10). config_path NULL uses built-in
 * defaults; lifts <= 0 and seed < 0 defer to the config.
 */
LR_API lr_status lr_generate_dataset(const char* config_path,
                                     const char* out_dir, int lifts,
                                     long long seed);

/*
 * Generates one lift as a plain frame-per-line file, for feeding replay
 * or assess. NaN overrides defer to the config.
 */
LR_API lr_status lr_generate_single(const char* config_path,
                                    const char* out_file,
                                    double lift_height_cm, double payload_kg,
                                    double squat_depth_rad, long long seed);

/* ------------------------------------------------------------------ */
/* Model training and evaluation                                       */

typedef struct lr_train_options {
  int max_epochs;       /* <= 0: config value */
  int hidden;           /* <= 0: config value */
  int batch_size;       /* <= 0: config value */
  int anchor_stride;    /* <= 0: config value */
  double learning_rate; /* <= 0: config value */
  long long seed;       /* <  0: config value */
} lr_train_options;

/* Called after each epoch with a one-line JSON summary. */
typedef void (*lr_progress_fn)(const char* epoch_json, void* user);

LR_API lr_status lr_train(const char* config_path, const char* data_dir,
                          const char* model_out, const char* report_out,
                          const lr_train_options* options,
                          lr_progress_fn progress, void* user);

typedef struct lr_eval_summary {
  double accuracy;  /* step-0 action accuracy */
  double macro_f1;
  double f1[3];          /* standing, squatting, rising; NaN if undefined */
  long long windows;
  double knee_rmse_deg_step0; /* left knee, first predicted step */
  double rmse_norm_step0;     /* all motion features, normalized units */
  double rmse_norm_step19;
  double rmse_norm_step49;
} lr_eval_summary;

/*
 * Evaluates a saved model on one split of a dataset directory ("train",
 * "val", "test", or "all"; NULL means "test"). report_out and summary
 * may each be NULL.
 */
LR_API lr_status lr_evaluate(const char* config_path, const char* model_path,
                             const char* data_dir, const char* split,
                             const char* report_out, lr_eval_summary* summary);

/* ------------------------------------------------------------------ */
/* Streaming risk engine                                               */

#define LR_MAX_HORIZON 64

typedef struct lr_engine lr_engine;

typedef struct lr_engine_output {
  int has_record; /* 0 while warming up or when the frame was skipped */
  int is_warning; /* 1: frame skipped, see warning */
  double t;
  int action; /* 0 standing, 1 squatting, 2 rising */
  double probs[3];
  int li_count;
  double li[LR_MAX_HORIZON]; /* predicted lifting index per future step */
  double max_li;
  int haptic_level; /* 0 off, 1 slight, 2 medium, 3 strong */
  double haptic_intensity;
  int transitioned; /* 1 when the action changed on this frame */
  char warning[160];
} lr_engine_output;

/*
 * Opens a streaming engine around a saved model. payload_kg NaN defers
 * to the config. The engine emits a record per frame once 28 valid,
 * time-ordered frames have arrived.
 */
LR_API lr_status lr_engine_open(const char* config_path,
                                const char* model_path, double payload_kg,
                                lr_engine** engine);

/*
 * Feeds one frame line. Malformed or out-of-order frames are skipped:
 * the call still succeeds, with output->is_warning set and the engine
 * ready for the next frame.
 */
LR_API lr_status lr_engine_push_line(lr_engine* engine, const char* frame_json,
                                     lr_engine_output* output);

/* JSON line for the most recent output (record or warning). */
LR_API lr_status lr_engine_record_json(lr_engine* engine, char* buffer,
                                       size_t capacity);

/* Drops buffered frames and action history; keeps model and settings. */
LR_API lr_status lr_engine_reset(lr_engine* engine);

LR_API void lr_engine_close(lr_engine* engine);

/* Timestamp of a frame line, for replay pacing. */
LR_API lr_status lr_frame_time(const char* frame_json, double* t);

#ifdef __cplusplus
}
#endif

#endif /* LIFTRISK_LIFTRISK_H */
