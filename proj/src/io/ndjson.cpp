#include "io/ndjson.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace liftrisk {
namespace {

using nlohmann::json;

json parse_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw std::runtime_error("malformed frame line");
  return j;
}

void read_numbers(const json& j, const char* key, double* out, int count) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array() || static_cast<int>(it->size()) != count)
    throw std::runtime_error("feature count");
  for (int i = 0; i < count; ++i) {
    const json& v = (*it)[i];
    if (!v.is_number()) throw std::runtime_error("feature count");
    out[i] = v.get<double>();
  }
}

}  // namespace

std::string frame_to_json(const StateFrame& frame) {
  json j;
  j["t"] = frame.t;
  j["q"] = frame.q;
  j["dq"] = frame.dq;
  j["w"] = frame.w;
  if (frame.label) j["label"] = to_string(*frame.label);
  return j.dump();
}

StateFrame frame_from_json(const std::string& line) {
  json j = parse_line(line);
  StateFrame frame;
  auto t_it = j.find("t");
  if (t_it == j.end() || !t_it->is_number())
    throw std::runtime_error("malformed frame line: missing t");
  frame.t = t_it->get<double>();
  read_numbers(j, "q", frame.q.data(), kJointDof);
  read_numbers(j, "dq", frame.dq.data(), kJointDof);
  read_numbers(j, "w", frame.w.data(), kWrenchDim);
  auto label_it = j.find("label");
  if (label_it != j.end() && !label_it->is_null()) {
    if (!label_it->is_string())
      throw std::runtime_error("malformed frame line: label must be a string");
    frame.label = action_from_string(label_it->get<std::string>());
  }
  FrameValidity v = validate_frame(frame);
  if (!v.ok) throw std::runtime_error(v.reason);
  return frame;
}

double frame_time_from_json(const std::string& line) {
  json j = parse_line(line);
  auto t_it = j.find("t");
  if (t_it == j.end() || !t_it->is_number())
    throw std::runtime_error("malformed frame line: missing t");
  return t_it->get<double>();
}

std::string record_to_json(const EngineRecord& record) {
  json j;
  j["t"] = record.t;
  j["action"] = to_string(record.action);
  j["probs"] = record.probs;
  json li = json::array();
  for (const RiskStep& step : record.risk.steps) li.push_back(step.li);
  j["li"] = std::move(li);
  j["max_li"] = record.risk.max_li;
  j["haptic_level"] = to_string(record.haptic.level);
  j["haptic_intensity"] = record.haptic.intensity;
  return j.dump();
}

std::string warning_to_json(double t, const std::string& reason) {
  json j;
  if (std::isfinite(t)) j["t"] = t;
  j["warning"] = reason;
  return j.dump();
}

namespace {

json epoch_object(const EpochStats& stats) {
  json j;
  j["epoch"] = stats.epoch;
  j["train_loss"] = stats.train.total;
  j["train_classification"] = stats.train.classification;
  j["train_regression"] = stats.train.regression;
  j["val_loss"] = stats.val.total;
  j["learning_rate"] = stats.learning_rate;
  j["seconds"] = stats.seconds;
  return j;
}

}  // namespace

std::string epoch_to_json(const EpochStats& stats) {
  return epoch_object(stats).dump();
}

std::string train_report_to_json(const TrainReport& report) {
  json j;
  json epochs = json::array();
  for (const EpochStats& e : report.epochs) epochs.push_back(epoch_object(e));
  j["epochs"] = std::move(epochs);
  j["best_epoch"] = report.best_epoch;
  j["best_val_loss"] = report.best_val_loss;
  j["stopped_early"] = report.stopped_early;
  j["val_accuracy"] = report.val_accuracy;
  j["val_f1"] = report.val_f1;
  j["total_seconds"] = report.total_seconds;
  return j.dump();
}

std::string eval_report_to_json(const ClassificationReport& classification,
                                const MotionErrorReport& motion) {
  json j;
  json rows = json::array();
  for (int truth = 0; truth < kActionCount; ++truth) {
    json row = json::array();
    for (int pred = 0; pred < kActionCount; ++pred)
      row.push_back(classification.confusion.count[truth][pred]);
    rows.push_back(std::move(row));
  }
  j["confusion"] = std::move(rows);
  j["accuracy"] = classification.accuracy;
  json per_class = json::array();
  for (int a = 0; a < kActionCount; ++a) {
    const ClassScores& s = classification.per_class[a];
    json c;
    c["action"] = to_string(static_cast<ActionLabel>(a));
    c["precision"] = s.precision_defined ? json(s.precision) : json();
    c["recall"] = s.recall_defined ? json(s.recall) : json();
    c["f1"] = s.f1_defined ? json(s.f1) : json();
    per_class.push_back(std::move(c));
  }
  j["per_class"] = std::move(per_class);
  j["macro_f1"] = classification.macro_f1;
  json steps = json::array();
  for (std::size_t i = 0; i < motion.steps.size(); ++i) {
    json s;
    s["step"] = motion.steps[i];
    s["left_knee_rmse_rad"] = motion.left_knee_rmse_rad[i];
    s["right_elbow_rmse_rad"] = motion.right_elbow_rmse_rad[i];
    s["overall_rmse_norm"] = motion.overall_rmse_norm[i];
    steps.push_back(std::move(s));
  }
  j["motion_error"] = std::move(steps);
  j["windows"] = motion.windows;
  return j.dump();
}

}  // namespace liftrisk
