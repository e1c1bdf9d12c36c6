#include "liftrisk/liftrisk.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "engine/engine.hpp"
#include "gmoe/data.hpp"
#include "gmoe/model.hpp"
#include "gmoe/train.hpp"
#include "io/config.hpp"
#include "io/dataset_io.hpp"
#include "io/model_io.hpp"
#include "io/ndjson.hpp"
#include "metrics/metrics.hpp"
#include "rnle/rnle.hpp"
#include "synth/dataset.hpp"
#include "synth/generate.hpp"

using namespace liftrisk;

namespace {

thread_local std::string g_error;

lr_status fail(lr_status status, const std::string& message) {
  g_error = message;
  return status;
}

// Filesystem and format problems arrive as runtime_errors; tell them
// apart by the messages our io layer uses.
lr_status classify_runtime(const std::runtime_error& e) {
  const std::string_view what = e.what();
  if (what.find("cannot open") != std::string_view::npos ||
      what.find("write failed") != std::string_view::npos)
    return LR_ERR_IO;
  if (what.find("format_version") != std::string_view::npos ||
      what.find("unsupported version") != std::string_view::npos)
    return LR_ERR_VERSION;
  return LR_ERR_DATA;
}

lr_status translate(lr_status fallback) {
  try {
    throw;
  } catch (const std::invalid_argument& e) {
    return fail(LR_ERR_USAGE, e.what());
  } catch (const std::domain_error& e) {
    return fail(LR_ERR_USAGE, e.what());
  } catch (const std::runtime_error& e) {
    return fail(classify_runtime(e), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LR_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(fallback, e.what());
  } catch (...) {
    return fail(fallback, "unknown error");
  }
}

AppConfig config_or_default(const char* config_path) {
  if (!config_path || !*config_path) return default_app_config();
  return load_app_config(config_path);
}

lr_status copy_out(const std::string& text, char* buffer, size_t capacity) {
  if (text.size() + 1 > capacity)
    return fail(LR_ERR_USAGE, "buffer too small: need " +
                                  std::to_string(text.size() + 1) + " bytes");
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return LR_OK;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

struct lr_engine {
  RiskEngine impl;
  std::string last_json;
};

extern "C" {

const char* lr_version(void) { return "1.0.0"; }

const char* lr_last_error(void) { return g_error.c_str(); }

lr_status lr_rnle_compute(const lr_rnle_input* input, lr_rnle_result* result) {
  if (!input || !result) return fail(LR_ERR_USAGE, "null argument");
  if (input->duration < 0 || input->duration > 2)
    return fail(LR_ERR_USAGE, "duration must be 0, 1, or 2");
  if (input->coupling < 0 || input->coupling > 2)
    return fail(LR_ERR_USAGE, "coupling must be 0, 1, or 2");
  try {
    NioshInput in;
    in.h_cm = input->h_cm;
    in.v_cm = input->v_cm;
    in.d_cm = input->d_cm;
    in.a_deg = input->a_deg;
    in.f_per_min = input->f_per_min;
    in.duration = static_cast<DurationCategory>(input->duration);
    in.coupling = static_cast<Coupling>(input->coupling);
    in.payload_kg = input->payload_kg;
    NioshResult r = assess_lift(
        in,
        input->table_parity ? RoundingMode::TableParity : RoundingMode::Exact,
        input->standard_coupling ? CouplingMode::NioshStandard
                                 : CouplingMode::PaperFlat);
    result->hm = r.hm;
    result->vm = r.vm;
    result->dm = r.dm;
    result->am = r.am;
    result->fm = r.fm;
    result->cm = r.cm;
    result->rwl_kg = r.rwl_kg;
    result->li = r.li;
    result->frequency_clamped = r.frequency_clamped ? 1 : 0;
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_NUMERIC);
  }
}

lr_status lr_rnle_tables_json(char* buffer, size_t capacity) {
  if (!buffer) return fail(LR_ERR_USAGE, "null buffer");
  try {
    return copy_out(rnle_tables_json(), buffer, capacity);
  } catch (...) {
    return translate(LR_ERR_NUMERIC);
  }
}

lr_status lr_generate_dataset(const char* config_path, const char* out_dir,
                              int lifts, long long seed) {
  if (!out_dir) return fail(LR_ERR_USAGE, "null output directory");
  try {
    AppConfig config = config_or_default(config_path);
    int n = lifts > 0 ? lifts : config.lifts;
    std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : config.seed;
    DatasetSplits splits =
        generate_dataset(config.script, config.ranges, n, s,
                         config.engine.skeleton);
    write_dataset(splits, out_dir);
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_DATA);
  }
}

lr_status lr_generate_single(const char* config_path, const char* out_file,
                             double lift_height_cm, double payload_kg,
                             double squat_depth_rad, long long seed) {
  if (!out_file) return fail(LR_ERR_USAGE, "null output file");
  try {
    AppConfig config = config_or_default(config_path);
    LiftScript script = config.script;
    if (!std::isnan(lift_height_cm)) script.lift_height_cm = lift_height_cm;
    if (!std::isnan(payload_kg)) script.payload_kg = payload_kg;
    if (!std::isnan(squat_depth_rad)) script.squat_depth_rad = squat_depth_rad;
    if (seed >= 0) script.seed = static_cast<std::uint64_t>(seed);
    LabeledSequence lift = generate_lift(script, config.engine.skeleton);
    write_sequence(lift, out_file);
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_DATA);
  }
}

lr_status lr_train(const char* config_path, const char* data_dir,
                   const char* model_out, const char* report_out,
                   const lr_train_options* options, lr_progress_fn progress,
                   void* user) {
  if (!data_dir || !model_out) return fail(LR_ERR_USAGE, "null argument");
  try {
    AppConfig config = config_or_default(config_path);
    if (options) {
      if (options->max_epochs > 0) config.training.max_epochs = options->max_epochs;
      if (options->hidden > 0) config.dims.hidden = options->hidden;
      if (options->batch_size > 0) config.training.batch_size = options->batch_size;
      if (options->anchor_stride > 0)
        config.training.anchor_stride = options->anchor_stride;
      if (options->learning_rate > 0)
        config.training.learning_rate = options->learning_rate;
      if (options->seed >= 0)
        config.training.seed = static_cast<std::uint64_t>(options->seed);
    }
    DatasetSplits splits = load_dataset(data_dir);
    std::vector<SeqData> train_data = make_seq_data(splits.train);
    std::vector<SeqData> val_data = make_seq_data(splits.val);
    GmoeModel model = init_gmoe(config.dims, config.training.seed);
    TrainReport report =
        train(model, train_data, val_data, config.training,
              [&](const EpochStats& stats) {
                if (progress) progress(epoch_to_json(stats).c_str(), user);
              });
    save_model(model, model_out);
    if (report_out) write_text_file(report_out, train_report_to_json(report));
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_DATA);
  }
}

lr_status lr_evaluate(const char* config_path, const char* model_path,
                      const char* data_dir, const char* split,
                      const char* report_out, lr_eval_summary* summary) {
  if (!model_path || !data_dir) return fail(LR_ERR_USAGE, "null argument");
  try {
    (void)config_or_default(config_path);  // validates the file early
    GmoeModel model = load_model(model_path);
    DatasetSplits splits = load_dataset(data_dir);
    std::string which = split ? split : "test";
    std::vector<LabeledSequence>* picked = nullptr;
    std::vector<LabeledSequence> all;
    if (which == "train")
      picked = &splits.train;
    else if (which == "val")
      picked = &splits.val;
    else if (which == "test")
      picked = &splits.test;
    else if (which == "all") {
      all.reserve(splits.train.size() + splits.val.size() + splits.test.size());
      for (auto* src : {&splits.train, &splits.val, &splits.test})
        for (LabeledSequence& seq : *src) all.push_back(std::move(seq));
      picked = &all;
    } else {
      return fail(LR_ERR_USAGE, "split must be train, val, test, or all");
    }
    std::vector<SeqData> data = make_seq_data(*picked);

    ConfusionMatrix confusion = classify_dataset(model, data, 1);
    ClassificationReport report = classification_report(confusion);
    MotionErrorReport motion =
        motion_error(model, data, default_error_steps(), 1);

    if (report_out) write_text_file(report_out, eval_report_to_json(report, motion));
    if (summary) {
      summary->accuracy = report.accuracy;
      summary->macro_f1 = report.macro_f1;
      for (int a = 0; a < kActionCount; ++a)
        summary->f1[a] = report.per_class[a].f1_defined
                             ? report.per_class[a].f1
                             : std::nan("");
      summary->windows = motion.windows;
      summary->knee_rmse_deg_step0 =
          motion.left_knee_rmse_rad[0] * 180.0 / M_PI;
      summary->rmse_norm_step0 = motion.overall_rmse_norm[0];
      summary->rmse_norm_step19 = motion.overall_rmse_norm[1];
      summary->rmse_norm_step49 = motion.overall_rmse_norm[2];
    }
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_DATA);
  }
}

lr_status lr_engine_open(const char* config_path, const char* model_path,
                         double payload_kg, lr_engine** engine) {
  if (!model_path || !engine) return fail(LR_ERR_USAGE, "null argument");
  *engine = nullptr;
  try {
    AppConfig config = config_or_default(config_path);
    if (!std::isnan(payload_kg))
      config.engine.rnle_context.payload_kg = payload_kg;
    if (config.engine.horizon_steps > LR_MAX_HORIZON)
      return fail(LR_ERR_USAGE, "horizon_steps above the C interface limit");
    GmoeModel model = load_model(model_path);
    *engine = new lr_engine{RiskEngine(std::move(model), config.engine), {}};
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_DATA);
  }
}

lr_status lr_engine_push_line(lr_engine* engine, const char* frame_json,
                              lr_engine_output* output) {
  if (!engine || !frame_json || !output)
    return fail(LR_ERR_USAGE, "null argument");
  *output = lr_engine_output{};
  output->t = std::nan("");

  auto warn = [&](const std::string& reason) {
    output->is_warning = 1;
    std::snprintf(output->warning, sizeof(output->warning), "%s",
                  reason.c_str());
    engine->last_json = warning_to_json(output->t, reason);
    return LR_OK;
  };

  StateFrame frame;
  try {
    frame = frame_from_json(frame_json);
    output->t = frame.t;
  } catch (const std::exception& e) {
    try {
      output->t = frame_time_from_json(frame_json);
    } catch (...) {
      // no usable timestamp on this line
    }
    return warn(e.what());
  }

  try {
    std::optional<EngineRecord> record = engine->impl.push(frame);
    if (!record) {
      engine->last_json.clear();
      return LR_OK;
    }
    output->has_record = 1;
    output->t = record->t;
    output->action = static_cast<int>(record->action);
    for (int a = 0; a < kActionCount; ++a) output->probs[a] = record->probs[a];
    int n = static_cast<int>(record->risk.steps.size());
    if (n > LR_MAX_HORIZON) n = LR_MAX_HORIZON;
    output->li_count = n;
    for (int i = 0; i < n; ++i) output->li[i] = record->risk.steps[i].li;
    output->max_li = record->risk.max_li;
    output->haptic_level = static_cast<int>(record->haptic.level);
    output->haptic_intensity = record->haptic.intensity;
    output->transitioned = record->transition.has_value() ? 1 : 0;
    engine->last_json = record_to_json(*record);
    return LR_OK;
  } catch (const std::invalid_argument& e) {
    return warn(e.what());
  } catch (...) {
    return translate(LR_ERR_NUMERIC);
  }
}

lr_status lr_engine_record_json(lr_engine* engine, char* buffer,
                                size_t capacity) {
  if (!engine || !buffer) return fail(LR_ERR_USAGE, "null argument");
  if (engine->last_json.empty())
    return fail(LR_ERR_USAGE, "no record available");
  return copy_out(engine->last_json, buffer, capacity);
}

lr_status lr_engine_reset(lr_engine* engine) {
  if (!engine) return fail(LR_ERR_USAGE, "null engine");
  engine->impl.reset();
  engine->last_json.clear();
  return LR_OK;
}

void lr_engine_close(lr_engine* engine) { delete engine; }

lr_status lr_frame_time(const char* frame_json, double* t) {
  if (!frame_json || !t) return fail(LR_ERR_USAGE, "null argument");
  try {
    *t = frame_time_from_json(frame_json);
    return LR_OK;
  } catch (...) {
    return translate(LR_ERR_DATA);
  }
}

}  // extern "C"
