#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "io/config.hpp"
#include "io/dataset_io.hpp"
#include "io/model_io.hpp"
#include "io/ndjson.hpp"

using namespace liftrisk;
using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

StateFrame sample_frame() {
  StateFrame frame;
  frame.t = 1.23;
  for (int k = 0; k < kJointDof; ++k) {
    frame.q[k] = std::sin(0.1 * k) * 1.7;
    frame.dq[k] = std::cos(0.2 * k) / 3.0;
  }
  for (int k = 0; k < kWrenchDim; ++k) frame.w[k] = 100.0 / (k + 1);
  frame.label = ActionLabel::Rising;
  return frame;
}

bool throws_containing(const std::function<void()>& fn,
                       const std::string& needle) {
  try {
    fn();
  } catch (const std::exception& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("frames survive a trip through their line format") {
  const StateFrame frame = sample_frame();
  const std::string line = frame_to_json(frame);
  const StateFrame back = frame_from_json(line);

  CHECK(back.t == frame.t);
  CHECK(back.q == frame.q);
  CHECK(back.dq == frame.dq);
  CHECK(back.w == frame.w);
  REQUIRE(back.label.has_value());
  CHECK(*back.label == ActionLabel::Rising);
  CHECK(frame_time_from_json(line) == frame.t);

  StateFrame plain = frame;
  plain.label.reset();
  const std::string bare = frame_to_json(plain);
  CHECK(bare.find("label") == std::string::npos);
  CHECK_FALSE(frame_from_json(bare).label.has_value());
}

TEST_CASE("frame parsing names what went wrong") {
  CHECK(throws_containing([] { frame_from_json("not json at all"); },
                          "malformed frame line"));
  CHECK(throws_containing(
      [] { frame_from_json(R"({"q":[],"dq":[],"w":[]})"); },
      "malformed frame line: missing t"));
  CHECK(throws_containing([] { frame_time_from_json(R"({"x":1})"); },
                          "malformed frame line: missing t"));

  const std::string line = frame_to_json(sample_frame());
  json j = json::parse(line);
  j["label"] = 7;
  CHECK(throws_containing([&] { frame_from_json(j.dump()); },
                          "label must be a string"));

  j = json::parse(line);
  j["q"].erase(30);
  CHECK(throws_containing([&] { frame_from_json(j.dump()); },
                          "feature count"));

  j = json::parse(line);
  j["dq"][4] = "fast";
  CHECK(throws_containing([&] { frame_from_json(j.dump()); },
                          "feature count"));

  // A structurally fine line still has to pass frame validation.
  j = json::parse(line);
  j["t"] = 1e300 * 1e300;  // infinity does not survive json, becomes null
  CHECK_THROWS_AS(frame_from_json(j.dump()), std::runtime_error);
}

TEST_CASE("engine records and warnings print their whole story") {
  EngineRecord record;
  record.t = 4.56;
  record.action = ActionLabel::Rising;
  record.probs = {0.1, 0.2, 0.7};
  record.risk.steps.resize(3);
  record.risk.steps[1].li = 1.4;
  record.risk.steps[1].action = ActionLabel::Rising;
  record.risk.max_li = 1.4;
  record.risk.max_step = 1;
  record.haptic = haptic_command(1.4, HapticBands{});

  const json j = json::parse(record_to_json(record));
  CHECK(j.at("t").get<double>() == 4.56);
  CHECK(j.at("action").get<std::string>() == "rising");
  CHECK(j.at("probs").size() == 3);
  CHECK(j.at("probs")[2].get<double>() == 0.7);
  REQUIRE(j.at("li").size() == 3);
  CHECK(j.at("li")[0].get<double>() == 0.0);
  CHECK(j.at("li")[1].get<double>() == 1.4);
  CHECK(j.at("max_li").get<double>() == 1.4);
  CHECK(j.at("haptic_level").get<std::string>() == "strong");
  CHECK(j.at("haptic_intensity").get<double>() == Approx(0.7));

  const json w = json::parse(warning_to_json(2.5, "bad frame"));
  CHECK(w.at("t").get<double>() == 2.5);
  CHECK(w.at("warning").get<std::string>() == "bad frame");
  const json wt = json::parse(
      warning_to_json(std::numeric_limits<double>::quiet_NaN(), "no time"));
  CHECK_FALSE(wt.contains("t"));
}

TEST_CASE("training and evaluation reports serialize their metrics") {
  EpochStats stats;
  stats.epoch = 4;
  stats.train = {1.5, 1.0, 0.5};
  stats.val = {2.5, 2.0, 0.5};
  stats.learning_rate = 5e-4;
  stats.seconds = 2.25;
  const json e = json::parse(epoch_to_json(stats));
  CHECK(e.at("epoch") == 4);
  CHECK(e.at("train_loss").get<double>() == 1.5);
  CHECK(e.at("train_classification").get<double>() == 1.0);
  CHECK(e.at("train_regression").get<double>() == 0.5);
  CHECK(e.at("val_loss").get<double>() == 2.5);
  CHECK(e.at("learning_rate").get<double>() == 5e-4);

  TrainReport report;
  report.epochs = {stats, stats};
  report.best_epoch = 1;
  report.best_val_loss = 2.5;
  report.stopped_early = true;
  report.val_accuracy = 0.9;
  report.val_f1 = {0.8, 0.7, 0.6};
  report.total_seconds = 12.0;
  const json r = json::parse(train_report_to_json(report));
  CHECK(r.at("epochs").size() == 2);
  CHECK(r.at("best_epoch") == 1);
  CHECK(r.at("stopped_early") == true);
  CHECK(r.at("val_accuracy").get<double>() == 0.9);
  CHECK(r.at("val_f1")[2].get<double>() == 0.6);

  ConfusionMatrix confusion;
  confusion.count = {{{8, 1, 0}, {1, 9, 0}, {0, 0, 0}}};
  MotionErrorReport motion;
  motion.steps = {0, 19};
  motion.left_knee_rmse_rad = {0.05, 0.10};
  motion.right_elbow_rmse_rad = {0.04, 0.09};
  motion.overall_rmse_norm = {0.3, 0.6};
  motion.windows = 19;
  const json v = json::parse(
      eval_report_to_json(classification_report(confusion), motion));
  CHECK(v.at("accuracy").get<double>() == Approx(17.0 / 19.0));
  CHECK(v.at("confusion")[0][0] == 8);
  CHECK(v.at("per_class")[0].at("action") == "standing");
  // The class that never occurs serializes as null, not as a fake zero.
  CHECK(v.at("per_class")[2].at("f1").is_null());
  CHECK(v.at("per_class")[0].at("f1").is_number());
  CHECK(v.at("motion_error")[1].at("step") == 19);
  CHECK(v.at("motion_error")[1].at("overall_rmse_norm").get<double>() == 0.6);
  CHECK(v.at("windows") == 19);
}

TEST_CASE("datasets round-trip through their directory layout") {
  const fs::path dir = fresh_dir("liftrisk_test_dataset");
  const Skeleton skeleton;
  const LiftScript base;
  const ScriptRanges ranges;
  const DatasetSplits splits = generate_dataset(base, ranges, 10, 3, skeleton);
  write_dataset(splits, dir.string());

  CHECK(fs::exists(dir / "manifest.ndjson"));
  CHECK(fs::exists(dir / "lifts" / "lift_0000.ndjson"));

  const DatasetSplits loaded = load_dataset(dir.string(), &skeleton);
  REQUIRE(loaded.train.size() == 7);
  REQUIRE(loaded.val.size() == 2);
  REQUIRE(loaded.test.size() == 1);

  const LabeledSequence& a = splits.train[0];
  const LabeledSequence& b = loaded.train[0];
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    CHECK(a.frames[i].t == b.frames[i].t);
    CHECK(a.frames[i].q == b.frames[i].q);
    CHECK(a.frames[i].dq == b.frames[i].dq);
    CHECK(a.frames[i].w == b.frames[i].w);
    CHECK(a.frames[i].label == b.frames[i].label);
  }
  REQUIRE(b.geometry.size() == a.geometry.size());
  CHECK(b.geometry[300].v_cm == a.geometry[300].v_cm);
  CHECK(b.geometry[300].h_cm == a.geometry[300].h_cm);
  CHECK(b.script.payload_kg == a.script.payload_kg);
  CHECK(b.script.lift_height_cm == a.script.lift_height_cm);
  CHECK(b.script.squat_depth_rad == a.script.squat_depth_rad);
  CHECK(b.script.seed == a.script.seed);
  CHECK(b.squat_start_s == a.squat_start_s);
  CHECK(b.rise_start_s == a.rise_start_s);
  CHECK(b.rise_end_s == a.rise_end_s);

  const DatasetSplits bare = load_dataset(dir.string());
  CHECK(bare.train[0].geometry.empty());
  CHECK(bare.train[0].frames.size() == a.frames.size());

  SUBCASE("a single sequence file works on its own") {
    const fs::path file = dir / "one.ndjson";
    write_sequence(splits.test[0], file.string());
    const std::vector<StateFrame> frames = load_frames(file.string());
    REQUIRE(frames.size() == splits.test[0].frames.size());
    CHECK(frames[40].q == splits.test[0].frames[40].q);
    CHECK(frames[40].label == splits.test[0].frames[40].label);
  }

  SUBCASE("io failures carry the path and line") {
    CHECK(throws_containing(
        [] { load_dataset("/nonexistent/place"); }, "cannot open"));
    CHECK(throws_containing(
        [] { load_frames("/nonexistent/frames.ndjson"); }, "cannot open"));

    const fs::path broken = dir / "broken.ndjson";
    {
      std::ofstream out(broken);
      out << frame_to_json(sample_frame()) << "\n";
      out << frame_to_json(sample_frame()) << "\n";
      out << "oops\n";
    }
    CHECK(throws_containing([&] { load_frames(broken.string()); }, ":3:"));
    CHECK(throws_containing([&] { load_frames(broken.string()); },
                            "malformed frame line"));

    const fs::path bad_dir = fresh_dir("liftrisk_test_badmanifest");
    { std::ofstream out(bad_dir / "manifest.ndjson"); out << "{}\n"; }
    CHECK(throws_containing([&] { load_dataset(bad_dir.string()); },
                            "bad dataset manifest"));
  }
}

TEST_CASE("models round-trip bit for bit behind a checksum") {
  const fs::path dir = fresh_dir("liftrisk_test_model");
  const fs::path path = dir / "model.json";

  GmoeDims dims;
  dims.hidden = 4;
  GmoeModel model = init_gmoe(dims, 21);
  for (int f = 0; f < dims.input; ++f) {
    model.feat_mean[f] = 0.01 * f;
    model.feat_scale[f] = 1.0 + 0.1 * f;
  }
  save_model(model, path.string());

  const GmoeModel back = load_model(path.string());
  CHECK(back.dims.hidden == 4);
  CHECK(back.dims.input == dims.input);
  CHECK((back.gate.wx.array() == model.gate.wx.array()).all());
  CHECK((back.gate.b.array() == model.gate.b.array()).all());
  CHECK((back.experts[2].wout.array() == model.experts[2].wout.array()).all());
  CHECK((back.feat_mean.array() == model.feat_mean.array()).all());
  CHECK((back.feat_scale.array() == model.feat_scale.array()).all());
  CHECK(back.motion_map == model.motion_map);

  SUBCASE("silent edits trip the checksum") {
    json j;
    { std::ifstream in(path); in >> j; }
    j["gate"]["b"][0] = j["gate"]["b"][0].get<double>() + 1.0;
    { std::ofstream out(path); out << j.dump(); }
    CHECK(throws_containing([&] { load_model(path.string()); },
                            "model checksum mismatch"));
  }

  SUBCASE("shape damage names the offending array") {
    json j;
    { std::ifstream in(path); in >> j; }
    j["experts"][1]["wout"].erase(0);
    { std::ofstream out(path); out << j.dump(); }
    CHECK(throws_containing([&] { load_model(path.string()); },
                            "model array size mismatch: experts[1].wout"));
  }

  SUBCASE("alien and future files are refused") {
    json j;
    { std::ifstream in(path); in >> j; }
    j["format_version"] = 2;
    { std::ofstream out(path); out << j.dump(); }
    CHECK(throws_containing([&] { load_model(path.string()); },
                            "unsupported model format_version"));

    { std::ofstream out(path); out << R"({"format_version":1,"kind":"recipe"})"; }
    CHECK(throws_containing([&] { load_model(path.string()); },
                            "not a model file"));

    { std::ofstream out(path); out << "][42"; }
    CHECK(throws_containing([&] { load_model(path.string()); },
                            "unparseable model file"));

    CHECK(throws_containing([&] { load_model("/nonexistent/m.json"); },
                            "cannot open"));
  }
}

TEST_CASE("the configuration file template round-trips and stays strict") {
  const AppConfig base = default_app_config();
  CHECK(base.lifts == 60);
  CHECK(base.engine.rnle_context.f_per_min == 7.0);
  CHECK(base.engine.rnle_context.payload_kg == base.script.payload_kg);

  const std::string text = app_config_to_json(base);
  const AppConfig round = app_config_from_json(text);
  CHECK(round.seed == base.seed);
  CHECK(round.lifts == base.lifts);
  CHECK(round.script.lift_height_cm == base.script.lift_height_cm);
  CHECK(round.ranges.payload_max_kg == base.ranges.payload_max_kg);
  CHECK(round.dims.hidden == base.dims.hidden);
  CHECK(round.training.learning_rate == base.training.learning_rate);
  CHECK(round.engine.horizon_steps == base.engine.horizon_steps);
  CHECK(round.engine.bands.strong == base.engine.bands.strong);
  CHECK(round.engine.skeleton.lengths.thigh ==
        base.engine.skeleton.lengths.thigh);

  SUBCASE("partial files override only what they mention") {
    const AppConfig partial = app_config_from_json(R"({
      "seed": 9,
      "training": {"max_epochs": 3},
      "rnle": {"coupling": "good", "rounding": "table_parity"},
      "engine": {"horizon_steps": 12, "haptic_strong": 1.5}
    })");
    CHECK(partial.seed == 9);
    CHECK(partial.training.max_epochs == 3);
    CHECK(partial.training.learning_rate == base.training.learning_rate);
    CHECK(partial.engine.rnle_context.coupling == Coupling::Good);
    CHECK(partial.engine.rounding == RoundingMode::TableParity);
    CHECK(partial.engine.horizon_steps == 12);
    CHECK(partial.engine.bands.strong == 1.5);
    CHECK(partial.engine.bands.medium == base.engine.bands.medium);
    CHECK(partial.lifts == base.lifts);
  }

  SUBCASE("unknown keys and bad spellings are called out") {
    CHECK(throws_containing(
        [] { app_config_from_json(R"({"sede": 1})"); },
        "bad config: unknown key config.sede"));
    CHECK(throws_containing(
        [] { app_config_from_json(R"({"training": {"foo": 1}})"); },
        "bad config: unknown key training.foo"));
    CHECK(throws_containing(
        [] { app_config_from_json(R"({"rnle": {"coupling": "slippery"}})"); },
        "coupling"));
    CHECK(throws_containing(
        [] { app_config_from_json("[]"); }, "not a JSON object"));
    CHECK(throws_containing(
        [] { app_config_from_json("{nope"); }, "bad config"));
    CHECK(throws_containing(
        [] { load_app_config("/nonexistent/config.json"); }, "cannot open"));
  }
}
