#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <liftrisk/liftrisk.h>

namespace {

int report_failure(lr_status status) {
  if (status != LR_OK) std::cerr << "error: " << lr_last_error() << '\n';
  return static_cast<int>(status);
}

std::istream* open_input(const std::string& path, std::ifstream& file) {
  if (path == "-") return &std::cin;
  file.open(path);
  if (!file) {
    std::cerr << "error: cannot open: " << path << '\n';
    return nullptr;
  }
  return &file;
}

std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path == "-") return &std::cout;
  file.open(path);
  if (!file) {
    std::cerr << "error: cannot open for writing: " << path << '\n';
    return nullptr;
  }
  return &file;
}

double percentile_ms(std::vector<double>& sorted_ms, double q) {
  if (sorted_ms.empty()) return 0.0;
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(sorted_ms.size())));
  if (rank == 0) rank = 1;
  return sorted_ms[std::min(rank - 1, sorted_ms.size() - 1)];
}

const char* config_arg(const std::string& path) {
  return path.empty() ? nullptr : path.c_str();
}

int run_generate(const std::string& config, const std::string& out_dir,
                 const std::string& single, int lifts, long long seed,
                 double height, double payload, double depth) {
  if (!single.empty())
    return report_failure(lr_generate_single(config_arg(config), single.c_str(),
                                             height, payload, depth, seed));
  if (out_dir.empty()) {
    std::cerr << "error: --out is required unless --single is given\n";
    return static_cast<int>(LR_ERR_USAGE);
  }
  lr_status status =
      lr_generate_dataset(config_arg(config), out_dir.c_str(), lifts, seed);
  if (status == LR_OK) std::cout << "dataset written to " << out_dir << '\n';
  return report_failure(status);
}

void print_epoch(const char* epoch_json, void*) {
  std::cerr << epoch_json << '\n';
}

int run_train(const std::string& config, const std::string& data,
              const std::string& model_out, const std::string& report,
              const lr_train_options& options, bool quiet) {
  lr_status status = lr_train(config_arg(config), data.c_str(),
                              model_out.c_str(),
                              report.empty() ? nullptr : report.c_str(),
                              &options, quiet ? nullptr : print_epoch, nullptr);
  if (status == LR_OK) std::cout << "model written to " << model_out << '\n';
  return report_failure(status);
}

int run_eval(const std::string& config, const std::string& model,
             const std::string& data, const std::string& split,
             const std::string& report) {
  lr_eval_summary summary{};
  lr_status status =
      lr_evaluate(config_arg(config), model.c_str(), data.c_str(),
                  split.c_str(), report.empty() ? nullptr : report.c_str(),
                  &summary);
  if (status != LR_OK) return report_failure(status);
  std::printf("windows              %lld\n", summary.windows);
  std::printf("step-0 accuracy      %.4f\n", summary.accuracy);
  std::printf("macro F1             %.4f\n", summary.macro_f1);
  std::printf("F1 standing          %.4f\n", summary.f1[0]);
  std::printf("F1 squatting         %.4f\n", summary.f1[1]);
  std::printf("F1 rising            %.4f\n", summary.f1[2]);
  std::printf("knee RMSE step 0     %.2f deg\n", summary.knee_rmse_deg_step0);
  std::printf("overall RMSE step 0  %.4f\n", summary.rmse_norm_step0);
  std::printf("overall RMSE step 19 %.4f\n", summary.rmse_norm_step19);
  std::printf("overall RMSE step 49 %.4f\n", summary.rmse_norm_step49);
  return 0;
}

int run_assess(const std::string& config, const std::string& model,
               const std::string& input, const std::string& output,
               double payload, const std::string& stats_path) {
  std::ifstream in_file;
  std::istream* in = open_input(input, in_file);
  if (!in) return static_cast<int>(LR_ERR_IO);
  std::ofstream out_file;
  std::ostream* out = open_output(output, out_file);
  if (!out) return static_cast<int>(LR_ERR_IO);

  lr_engine* engine = nullptr;
  lr_status status =
      lr_engine_open(config_arg(config), model.c_str(), payload, &engine);
  if (status != LR_OK) return report_failure(status);

  using clock = std::chrono::steady_clock;
  std::vector<double> latencies_ms;
  latencies_ms.reserve(1 << 16);
  long long frames = 0, records = 0, warnings = 0;
  char record_buf[16384];

  const auto wall_start = clock::now();
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    lr_engine_output result;
    const auto push_start = clock::now();
    status = lr_engine_push_line(engine, line.c_str(), &result);
    const auto push_end = clock::now();
    if (status != LR_OK) {
      lr_engine_close(engine);
      return report_failure(status);
    }
    ++frames;
    latencies_ms.push_back(
        std::chrono::duration<double, std::milli>(push_end - push_start)
            .count());
    if (result.has_record || result.is_warning) {
      if (result.is_warning)
        ++warnings;
      else
        ++records;
      if (lr_engine_record_json(engine, record_buf, sizeof(record_buf)) == LR_OK)
        *out << record_buf << '\n';
    }
  }
  const double wall_s =
      std::chrono::duration<double>(clock::now() - wall_start).count();
  lr_engine_close(engine);

  if (!stats_path.empty()) {
    std::sort(latencies_ms.begin(), latencies_ms.end());
    double p50 = percentile_ms(latencies_ms, 0.50);
    double p99 = percentile_ms(latencies_ms, 0.99);
    double max = latencies_ms.empty() ? 0.0 : latencies_ms.back();
    double throughput = wall_s > 0 ? static_cast<double>(frames) / wall_s : 0.0;
    char stats[512];
    std::snprintf(stats, sizeof(stats),
                  "{\"frames\":%lld,\"records\":%lld,\"warnings\":%lld,"
                  "\"p50_ms\":%.6f,\"p99_ms\":%.6f,\"max_ms\":%.6f,"
                  "\"throughput_fps\":%.3f,\"wall_s\":%.6f}",
                  frames, records, warnings, p50, p99, max, throughput, wall_s);
    if (stats_path == "-") {
      std::cerr << stats << '\n';
    } else {
      std::ofstream stats_file(stats_path);
      if (!stats_file) {
        std::cerr << "error: cannot open for writing: " << stats_path << '\n';
        return static_cast<int>(LR_ERR_IO);
      }
      stats_file << stats << '\n';
    }
  }
  return 0;
}

int run_replay(const std::string& input, const std::string& output,
               double rate) {
  std::ifstream in_file;
  std::istream* in = open_input(input, in_file);
  if (!in) return static_cast<int>(LR_ERR_IO);
  std::ofstream out_file;
  std::ostream* out = open_output(output, out_file);
  if (!out) return static_cast<int>(LR_ERR_IO);

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  bool have_t0 = false;
  double t0 = 0.0;
  std::string line;
  while (std::getline(*in, line)) {
    if (line.empty()) continue;
    if (rate > 0) {
      double t = 0.0;
      if (lr_frame_time(line.c_str(), &t) == LR_OK) {
        if (!have_t0) {
          t0 = t;
          have_t0 = true;
        }
        const auto due =
            start + std::chrono::duration_cast<clock::duration>(
                        std::chrono::duration<double>((t - t0) / rate));
        std::this_thread::sleep_until(due);
      }
    }
    *out << line << '\n';
    out->flush();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming lifting-risk toolkit"};
  app.require_subcommand(0, 1);
  bool dump_tables = false;
  bool show_version = false;
  app.add_flag("--dump-rnle-tables", dump_tables,
               "print the multiplier lookup tables as JSON and exit");
  app.add_flag("--version", show_version, "print the library version and exit");

  std::string config, out_dir, single, data, model, report, input = "-",
                      output = "-", split = "test", stats;
  int lifts = 0;
  long long seed = -1;
  double height = std::nan(""), payload = std::nan(""), depth = std::nan("");
  double rate = 1.0;
  lr_train_options train_options{};
  train_options.seed = -1;
  bool quiet = false;

  CLI::App* generate =
      app.add_subcommand("generate", "synthesize lifting motion data");
  generate->add_option("--config", config, "config JSON file");
  generate->add_option("--out", out_dir, "dataset output directory");
  generate->add_option("--single", single,
                       "write one lift as a frame-per-line file instead");
  generate->add_option("--lifts", lifts, "number of lifts (default: config)");
  generate->add_option("--seed", seed, "master seed (default: config)");
  generate->add_option("--height", height,
                       "single lift: placement height in cm");
  generate->add_option("--payload", payload, "single lift: payload mass in kg");
  generate->add_option("--depth", depth, "single lift: squat depth in rad");

  CLI::App* train = app.add_subcommand("train", "train the motion model");
  train->add_option("--config", config, "config JSON file");
  train->add_option("--data", data, "dataset directory")->required();
  train->add_option("--model-out", model, "model output file")->required();
  train->add_option("--report", report, "training report JSON file");
  train->add_option("--epochs", train_options.max_epochs, "epoch cap");
  train->add_option("--hidden", train_options.hidden, "hidden state size");
  train->add_option("--batch", train_options.batch_size, "minibatch size");
  train->add_option("--stride", train_options.anchor_stride,
                    "training anchor stride");
  train->add_option("--lr", train_options.learning_rate, "learning rate");
  train->add_option("--seed", train_options.seed, "training seed");
  train->add_flag("--quiet", quiet, "suppress per-epoch progress lines");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a trained model");
  eval->add_option("--config", config, "config JSON file");
  eval->add_option("--model", model, "model file")->required();
  eval->add_option("--data", data, "dataset directory")->required();
  eval->add_option("--split", split, "train, val, test, or all");
  eval->add_option("--report", report, "evaluation report JSON file");

  CLI::App* assess = app.add_subcommand(
      "assess", "stream frames through the risk engine");
  assess->add_option("--config", config, "config JSON file");
  assess->add_option("--model", model, "model file")->required();
  assess->add_option("--input", input, "frame file, or - for stdin");
  assess->add_option("--out", output, "record file, or - for stdout");
  assess->add_option("--payload", payload,
                     "payload mass in kg (default: config)");
  assess->add_option("--stats", stats,
                     "write latency statistics JSON here (- for stderr)");

  CLI::App* replay =
      app.add_subcommand("replay", "emit a frame file at recorded pace");
  replay->add_option("--input", input, "frame file, or - for stdin")
      ->required();
  replay->add_option("--out", output, "destination, or - for stdout");
  replay->add_option("--rate", rate,
                     "playback speed multiplier; 0 streams without pacing");

  CLI11_PARSE(app, argc, argv);

  if (show_version) {
    std::cout << lr_version() << '\n';
    return 0;
  }
  if (dump_tables) {
    char buffer[32768];
    lr_status status = lr_rnle_tables_json(buffer, sizeof(buffer));
    if (status != LR_OK) return report_failure(status);
    std::cout << buffer << '\n';
    return 0;
  }

  if (generate->parsed())
    return run_generate(config, out_dir, single, lifts, seed, height, payload,
                        depth);
  if (train->parsed())
    return run_train(config, data, model, report, train_options, quiet);
  if (eval->parsed()) return run_eval(config, model, data, split, report);
  if (assess->parsed())
    return run_assess(config, model, input, output, payload, stats);
  if (replay->parsed()) return run_replay(input, output, rate);

  std::cout << app.help();
  return 0;
}
