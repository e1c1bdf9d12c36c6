#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <liftrisk/liftrisk.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "io/dataset_io.hpp"
#include "io/model_io.hpp"
#include "rnle/rnle.hpp"

using doctest::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Everything the C-level tests share: a small dataset, a one-epoch model,
// and a single replayable lift. Built once, on first use.
struct SharedAssets {
  fs::path dir;
  std::string data_dir;
  std::string model_path;
  std::string report_path;
  std::string stream_path;
  int progress_calls = 0;
  std::string first_epoch_json;
};

void expect_ok(lr_status status, const char* stage) {
  if (status != LR_OK)
    throw std::runtime_error(std::string(stage) + ": " + lr_last_error());
}

const SharedAssets& assets() {
  static SharedAssets a = [] {
    SharedAssets x;
    x.dir = fs::temp_directory_path() / "liftrisk_test_capi";
    fs::remove_all(x.dir);
    fs::create_directories(x.dir);
    x.data_dir = (x.dir / "data").string();
    x.model_path = (x.dir / "model.json").string();
    x.report_path = (x.dir / "report.json").string();
    x.stream_path = (x.dir / "stream.ndjson").string();

    expect_ok(lr_generate_dataset(nullptr, x.data_dir.c_str(), 10, 5),
              "generate");
    expect_ok(lr_generate_single(nullptr, x.stream_path.c_str(), 80.0, 7.0,
                                 std::nan(""), 2),
              "single");

    lr_train_options opts{};
    opts.max_epochs = 1;
    opts.hidden = 4;
    opts.batch_size = 16;
    opts.anchor_stride = 25;
    opts.learning_rate = 1e-3;
    opts.seed = 3;
    auto on_epoch = [](const char* epoch_json, void* user) {
      auto* self = static_cast<SharedAssets*>(user);
      if (self->progress_calls == 0) self->first_epoch_json = epoch_json;
      ++self->progress_calls;
    };
    expect_ok(lr_train(nullptr, x.data_dir.c_str(), x.model_path.c_str(),
                       x.report_path.c_str(), &opts, on_epoch, &x),
              "train");
    return x;
  }();
  return a;
}

std::vector<std::string> stream_lines() {
  std::ifstream in(assets().stream_path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("version and thread error text are always present") {
  REQUIRE(lr_version() != nullptr);
  CHECK(std::string(lr_version()) == "1.0.0");
  REQUIRE(lr_last_error() != nullptr);

  CHECK(lr_rnle_compute(nullptr, nullptr) == LR_ERR_USAGE);
  CHECK(std::string(lr_last_error()) == "null argument");
}

TEST_CASE("lifting scores match the native implementation exactly") {
  const double hs[] = {10.0, 25.0, 47.0, 63.9, 70.0};
  const double vs[] = {0.0, 8.0, 75.0, 135.0, 180.0};
  const double ds[] = {10.0, 25.0, 60.0, 176.0};
  const double as[] = {0.0, 45.0, 136.0};
  const double fsq[] = {0.1, 0.2, 7.0, 15.0, 20.0};
  const double loads[] = {0.0, 7.0, 23.0};

  int compared = 0;
  for (int dur = 0; dur < 3; ++dur)
    for (int coup = 0; coup < 3; ++coup)
      for (int parity = 0; parity < 2; ++parity)
        for (int standard = 0; standard < 2; ++standard)
          for (int k = 0; k < 24; ++k) {
            lr_rnle_input in{};
            in.h_cm = hs[k % 5];
            in.v_cm = vs[(k + 1) % 5];
            in.d_cm = ds[(k + 2) % 4];
            in.a_deg = as[(k + 3) % 3];
            in.f_per_min = fsq[(k + 4) % 5];
            in.duration = dur;
            in.coupling = coup;
            in.payload_kg = loads[k % 3];
            in.table_parity = parity;
            in.standard_coupling = standard;

            lr_rnle_result out{};
            REQUIRE(lr_rnle_compute(&in, &out) == LR_OK);

            liftrisk::NioshInput ref;
            ref.h_cm = in.h_cm;
            ref.v_cm = in.v_cm;
            ref.d_cm = in.d_cm;
            ref.a_deg = in.a_deg;
            ref.f_per_min = in.f_per_min;
            ref.duration = static_cast<liftrisk::DurationCategory>(dur);
            ref.coupling = static_cast<liftrisk::Coupling>(coup);
            ref.payload_kg = in.payload_kg;
            const liftrisk::NioshResult want = liftrisk::assess_lift(
                ref,
                parity ? liftrisk::RoundingMode::TableParity
                       : liftrisk::RoundingMode::Exact,
                standard ? liftrisk::CouplingMode::NioshStandard
                         : liftrisk::CouplingMode::PaperFlat);

            CHECK(out.hm == want.hm);
            CHECK(out.vm == want.vm);
            CHECK(out.dm == want.dm);
            CHECK(out.am == want.am);
            CHECK(out.fm == want.fm);
            CHECK(out.cm == want.cm);
            CHECK(out.rwl_kg == want.rwl_kg);
            CHECK(out.li == want.li);
            CHECK(out.frequency_clamped == (want.frequency_clamped ? 1 : 0));
            ++compared;
          }
  CHECK(compared == 3 * 3 * 2 * 2 * 24);

  SUBCASE("a zeroed input struct means exact rounding and flat coupling") {
    lr_rnle_input in{};
    in.h_cm = 47.0;
    in.v_cm = 8.0;
    in.d_cm = 60.0;
    in.f_per_min = 7.0;
    in.coupling = LR_COUPLING_FAIR;
    in.payload_kg = 3.0;
    lr_rnle_result out{};
    REQUIRE(lr_rnle_compute(&in, &out) == LR_OK);
    CHECK(out.cm == 0.95);
    CHECK(out.rwl_kg == Approx(5.8178).epsilon(1e-3));
    CHECK(out.frequency_clamped == 0);

    in.v_cm = 80.0;
    in.standard_coupling = 1;
    REQUIRE(lr_rnle_compute(&in, &out) == LR_OK);
    CHECK(out.cm == 1.0);
  }

  SUBCASE("bad enum values are rejected with a message") {
    lr_rnle_input in{};
    lr_rnle_result out{};
    in.duration = 5;
    CHECK(lr_rnle_compute(&in, &out) == LR_ERR_USAGE);
    CHECK(std::string(lr_last_error()).find("duration") != std::string::npos);
    in.duration = 0;
    in.coupling = -1;
    CHECK(lr_rnle_compute(&in, &out) == LR_ERR_USAGE);
    CHECK(std::string(lr_last_error()).find("coupling") != std::string::npos);
  }

  SUBCASE("the lookup tables export as JSON") {
    std::vector<char> buffer(65536);
    REQUIRE(lr_rnle_tables_json(buffer.data(), buffer.size()) == LR_OK);
    const json j = json::parse(buffer.data());
    CHECK(j.at("load_constant_kg").get<double>() == 23.0);
    CHECK(j.at("frequency_multiplier").size() == 17);
    CHECK(j.at("coupling_multiplier").at("paper_flat").at("fair") == 0.95);

    char tiny[8];
    CHECK(lr_rnle_tables_json(tiny, sizeof(tiny)) == LR_ERR_USAGE);
    CHECK(std::string(lr_last_error()).find("buffer too small: need") !=
          std::string::npos);
    CHECK(lr_rnle_tables_json(nullptr, 0) == LR_ERR_USAGE);
  }
}

TEST_CASE("generation writes datasets and single lifts to disk") {
  const SharedAssets& a = assets();

  REQUIRE(fs::exists(fs::path(a.data_dir) / "manifest.ndjson"));
  const liftrisk::DatasetSplits splits = liftrisk::load_dataset(a.data_dir);
  CHECK(splits.train.size() == 7);
  CHECK(splits.val.size() == 2);
  CHECK(splits.test.size() == 1);

  const std::vector<liftrisk::StateFrame> frames =
      liftrisk::load_frames(a.stream_path);
  CHECK(frames.size() > 600);
  CHECK(frames[0].t == 0.0);
  REQUIRE(frames[0].label.has_value());

  SUBCASE("the same request reproduces the same file") {
    const std::string again = (a.dir / "stream2.ndjson").string();
    REQUIRE(lr_generate_single(nullptr, again.c_str(), 80.0, 7.0,
                               std::nan(""), 2) == LR_OK);
    CHECK(slurp(again) == slurp(a.stream_path));

    const std::string other = (a.dir / "stream3.ndjson").string();
    REQUIRE(lr_generate_single(nullptr, other.c_str(), 90.0, 7.0,
                               std::nan(""), 2) == LR_OK);
    CHECK(slurp(other) != slurp(a.stream_path));
  }

  SUBCASE("script errors surface as usage failures") {
    const std::string out = (a.dir / "bad.ndjson").string();
    CHECK(lr_generate_single(nullptr, out.c_str(), 150.0, 7.0, std::nan(""),
                             2) == LR_ERR_USAGE);
    CHECK(std::string(lr_last_error()).find("lift height outside") !=
          std::string::npos);
    CHECK(lr_generate_dataset(nullptr, nullptr, 10, 5) == LR_ERR_USAGE);
    CHECK(lr_generate_dataset(nullptr, (a.dir / "d2").string().c_str(), 4,
                              5) == LR_ERR_USAGE);
  }
}

TEST_CASE("training emits progress, a loadable model, and a report") {
  const SharedAssets& a = assets();

  CHECK(a.progress_calls == 1);
  const json e = json::parse(a.first_epoch_json);
  CHECK(e.at("epoch") == 0);
  CHECK(e.at("train_loss").is_number());

  const liftrisk::GmoeModel model = liftrisk::load_model(a.model_path);
  CHECK(model.dims.hidden == 4);
  CHECK(model.dims.input == liftrisk::kFeatureDim);

  const json report = json::parse(slurp(a.report_path));
  CHECK(report.at("epochs").size() == 1);
  CHECK(report.at("best_epoch") == 0);
  CHECK(report.at("val_accuracy").is_number());

  SUBCASE("null and missing inputs are refused") {
    CHECK(lr_train(nullptr, nullptr, a.model_path.c_str(), nullptr, nullptr,
                   nullptr, nullptr) == LR_ERR_USAGE);
    CHECK(lr_train(nullptr, "/nonexistent/data", "/tmp/x.json", nullptr,
                   nullptr, nullptr, nullptr) == LR_ERR_IO);
  }
}

TEST_CASE("evaluation summarizes a split through the C boundary") {
  const SharedAssets& a = assets();

  lr_eval_summary summary{};
  REQUIRE(lr_evaluate(nullptr, a.model_path.c_str(), a.data_dir.c_str(), "val",
                      (a.dir / "eval.json").string().c_str(),
                      &summary) == LR_OK);
  CHECK(summary.accuracy >= 0.0);
  CHECK(summary.accuracy <= 1.0);
  CHECK(summary.windows > 0);
  CHECK(summary.knee_rmse_deg_step0 > 0.0);
  CHECK(summary.rmse_norm_step0 > 0.0);
  CHECK(summary.rmse_norm_step49 > 0.0);
  for (double f1 : summary.f1) CHECK((std::isnan(f1) || (f1 >= 0 && f1 <= 1)));

  const json written = json::parse(slurp((a.dir / "eval.json").string()));
  CHECK(written.at("accuracy").get<double>() == Approx(summary.accuracy));
  CHECK(written.at("windows").get<long long>() == summary.windows);

  lr_eval_summary test_summary{};
  REQUIRE(lr_evaluate(nullptr, a.model_path.c_str(), a.data_dir.c_str(),
                      nullptr, nullptr, &test_summary) == LR_OK);
  CHECK(test_summary.windows > 0);
  CHECK(test_summary.windows < summary.windows);

  lr_eval_summary all_summary{};
  REQUIRE(lr_evaluate(nullptr, a.model_path.c_str(), a.data_dir.c_str(), "all",
                      nullptr, &all_summary) == LR_OK);
  CHECK(all_summary.windows > summary.windows);

  CHECK(lr_evaluate(nullptr, a.model_path.c_str(), a.data_dir.c_str(),
                    "validation", nullptr, &summary) == LR_ERR_USAGE);
  CHECK(std::string(lr_last_error()).find("split must be") !=
        std::string::npos);
  CHECK(lr_evaluate(nullptr, nullptr, a.data_dir.c_str(), nullptr, nullptr,
                    &summary) == LR_ERR_USAGE);
}

TEST_CASE("the streaming engine yields records and tolerant warnings") {
  const SharedAssets& a = assets();
  const std::vector<std::string> lines = stream_lines();
  REQUIRE(lines.size() > 600);

  lr_engine* engine = nullptr;
  REQUIRE(lr_engine_open(nullptr, a.model_path.c_str(), 7.0, &engine) ==
          LR_OK);
  REQUIRE(engine != nullptr);

  char buffer[8192];
  CHECK(lr_engine_record_json(engine, buffer, sizeof(buffer)) ==
        LR_ERR_USAGE);
  CHECK(std::string(lr_last_error()) == "no record available");

  int records = 0;
  lr_engine_output out{};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    REQUIRE(lr_engine_push_line(engine, lines[i].c_str(), &out) == LR_OK);
    CHECK(out.is_warning == 0);
    if (i < 27) {
      CHECK(out.has_record == 0);
      continue;
    }
    REQUIRE(out.has_record == 1);
    ++records;
    CHECK(out.t == Approx(static_cast<double>(i) / 100.0));
    CHECK(out.action >= 0);
    CHECK(out.action <= 2);
    CHECK(out.probs[0] + out.probs[1] + out.probs[2] == Approx(1.0));
    REQUIRE(out.li_count == 30);
    const double top = *std::max_element(out.li, out.li + out.li_count);
    CHECK(out.max_li == top);
    CHECK(out.haptic_level >= 0);
    CHECK(out.haptic_level <= 3);
    CHECK(out.haptic_intensity >= 0.0);
    CHECK(out.haptic_intensity <= 1.0);
  }
  CHECK(records == static_cast<int>(lines.size()) - 27);

  SUBCASE("the latest record serializes consistently") {
    REQUIRE(lr_engine_record_json(engine, buffer, sizeof(buffer)) == LR_OK);
    const json j = json::parse(buffer);
    CHECK(j.at("t").get<double>() == out.t);
    // Non-finite doubles have no JSON spelling and come out as null.
    if (std::isfinite(out.max_li))
      CHECK(j.at("max_li").get<double>() == out.max_li);
    else
      CHECK(j.at("max_li").is_null());
    const char* actions[] = {"standing", "squatting", "rising"};
    const char* levels[] = {"off", "slight", "medium", "strong"};
    CHECK(j.at("action").get<std::string>() == actions[out.action]);
    CHECK(j.at("haptic_level").get<std::string>() == levels[out.haptic_level]);
    REQUIRE(j.at("li").size() == 30);
    if (std::isfinite(out.li[5]))
      CHECK(j.at("li")[5].get<double>() == out.li[5]);
    else
      CHECK(j.at("li")[5].is_null());

    char tiny[4];
    CHECK(lr_engine_record_json(engine, tiny, sizeof(tiny)) == LR_ERR_USAGE);
    CHECK(std::string(lr_last_error()).find("buffer too small: need") !=
          std::string::npos);
  }

  SUBCASE("bad lines become warnings without stalling the stream") {
    lr_engine_output w{};
    REQUIRE(lr_engine_push_line(engine, "garbage", &w) == LR_OK);
    CHECK(w.has_record == 0);
    CHECK(w.is_warning == 1);
    CHECK(std::isnan(w.t));
    CHECK(std::string(w.warning).find("malformed frame line") !=
          std::string::npos);
    REQUIRE(lr_engine_record_json(engine, buffer, sizeof(buffer)) == LR_OK);
    const json j = json::parse(buffer);
    CHECK_FALSE(j.contains("t"));
    CHECK(j.at("warning").get<std::string>().find("malformed") !=
          std::string::npos);

    REQUIRE(lr_engine_push_line(engine, lines[100].c_str(), &w) == LR_OK);
    CHECK(w.is_warning == 1);
    CHECK(std::string(w.warning).find("non-monotone timestamp") !=
          std::string::npos);
    CHECK(w.t == Approx(1.0));

    json stale = json::parse(lines[200]);
    stale["q"][0] = "spin";
    REQUIRE(lr_engine_push_line(engine, stale.dump().c_str(), &w) == LR_OK);
    CHECK(w.is_warning == 1);
    CHECK(std::string(w.warning).find("feature count") != std::string::npos);

    json next = json::parse(lines.back());
    next["t"] = next["t"].get<double>() + 0.01;
    REQUIRE(lr_engine_push_line(engine, next.dump().c_str(), &w) == LR_OK);
    CHECK(w.is_warning == 0);
    CHECK(w.has_record == 1);
  }

  SUBCASE("reset forgets frames but keeps the model") {
    REQUIRE(lr_engine_reset(engine) == LR_OK);
    CHECK(lr_engine_record_json(engine, buffer, sizeof(buffer)) ==
          LR_ERR_USAGE);
    lr_engine_output r{};
    for (int i = 0; i < 27; ++i) {
      REQUIRE(lr_engine_push_line(engine, lines[i].c_str(), &r) == LR_OK);
      CHECK(r.has_record == 0);
    }
    REQUIRE(lr_engine_push_line(engine, lines[27].c_str(), &r) == LR_OK);
    CHECK(r.has_record == 1);
  }

  lr_engine_close(engine);
  lr_engine_close(nullptr);

  SUBCASE("frame timestamps parse standalone") {
    double t = 0.0;
    REQUIRE(lr_frame_time(lines[42].c_str(), &t) == LR_OK);
    CHECK(t == Approx(0.42));
    CHECK(lr_frame_time("nope", &t) == LR_ERR_DATA);
    CHECK(lr_frame_time(nullptr, &t) == LR_ERR_USAGE);
  }
}

TEST_CASE("status codes separate usage, io, data, and version failures") {
  const SharedAssets& a = assets();
  lr_engine* engine = nullptr;

  CHECK(lr_engine_open(nullptr, nullptr, 7.0, &engine) == LR_ERR_USAGE);

  CHECK(lr_engine_open(nullptr, "/nonexistent/model.json", 7.0, &engine) ==
        LR_ERR_IO);
  CHECK(std::string(lr_last_error()).find("cannot open") != std::string::npos);

  const std::string corrupt = (a.dir / "corrupt.json").string();
  { std::ofstream f(corrupt); f << "][42"; }
  CHECK(lr_engine_open(nullptr, corrupt.c_str(), 7.0, &engine) ==
        LR_ERR_DATA);
  CHECK(std::string(lr_last_error()).find("unparseable model file") !=
        std::string::npos);

  json future = json::parse(slurp(a.model_path));
  future["format_version"] = 2;
  const std::string future_path = (a.dir / "future.json").string();
  { std::ofstream f(future_path); f << future.dump(); }
  CHECK(lr_engine_open(nullptr, future_path.c_str(), 7.0, &engine) ==
        LR_ERR_VERSION);
  CHECK(std::string(lr_last_error()).find("format_version") !=
        std::string::npos);

  const std::string wide = (a.dir / "wide.json").string();
  { std::ofstream f(wide); f << R"({"engine": {"horizon_steps": 65}})"; }
  CHECK(lr_engine_open(wide.c_str(), a.model_path.c_str(), 7.0, &engine) ==
        LR_ERR_USAGE);
  CHECK(std::string(lr_last_error()) ==
        "horizon_steps above the C interface limit");

  const std::string bad_cfg = (a.dir / "bad_cfg.json").string();
  { std::ofstream f(bad_cfg); f << "{nope"; }
  CHECK(lr_engine_open(bad_cfg.c_str(), a.model_path.c_str(), 7.0, &engine) ==
        LR_ERR_DATA);
  CHECK(std::string(lr_last_error()).find("bad config") != std::string::npos);

  CHECK(lr_engine_open("/nonexistent/config.json", a.model_path.c_str(), 7.0,
                       &engine) == LR_ERR_IO);

  CHECK(engine == nullptr);
}
