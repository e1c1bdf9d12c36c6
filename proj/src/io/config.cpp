#include "io/config.hpp"

#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

namespace liftrisk {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("bad config: " + what);
}

void check_keys(const json& j, const char* block,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) bad(std::string(block) + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) bad("unknown key " + std::string(block) + "." + item.key());
  }
}

double num(const json& j, const char* block, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) bad(std::string(block) + "." + key + " must be a number");
  return it->get<double>();
}

int integer(const json& j, const char* block, const char* key, int fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer())
    bad(std::string(block) + "." + key + " must be an integer");
  return it->get<int>();
}

bool boolean(const json& j, const char* block, const char* key, bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) bad(std::string(block) + "." + key + " must be a bool");
  return it->get<bool>();
}

std::string text(const json& j, const char* block, const char* key,
                 const std::string& fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) bad(std::string(block) + "." + key + " must be a string");
  return it->get<std::string>();
}

void range_pair(const json& j, const char* block, const char* key, double& lo,
                double& hi) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
      !(*it)[1].is_number())
    bad(std::string(block) + "." + key + " must be [min, max]");
  lo = (*it)[0].get<double>();
  hi = (*it)[1].get<double>();
}

Coupling coupling_from(const std::string& s) {
  if (s == "good") return Coupling::Good;
  if (s == "fair") return Coupling::Fair;
  if (s == "poor") return Coupling::Poor;
  bad("rnle.coupling must be good, fair, or poor");
}

const char* to_text(Coupling c) {
  switch (c) {
    case Coupling::Good: return "good";
    case Coupling::Fair: return "fair";
    default: return "poor";
  }
}

DurationCategory duration_from(const std::string& s) {
  if (s == "1h") return DurationCategory::UpTo1h;
  if (s == "2h") return DurationCategory::UpTo2h;
  if (s == "8h") return DurationCategory::UpTo8h;
  bad("rnle.duration must be 1h, 2h, or 8h");
}

const char* to_text(DurationCategory d) {
  switch (d) {
    case DurationCategory::UpTo1h: return "1h";
    case DurationCategory::UpTo2h: return "2h";
    default: return "8h";
  }
}

RoundingMode rounding_from(const std::string& s) {
  if (s == "exact") return RoundingMode::Exact;
  if (s == "table_parity") return RoundingMode::TableParity;
  bad("rnle.rounding must be exact or table_parity");
}

CouplingMode coupling_mode_from(const std::string& s) {
  if (s == "paper_flat") return CouplingMode::PaperFlat;
  if (s == "niosh_standard") return CouplingMode::NioshStandard;
  bad("rnle.coupling_mode must be paper_flat or niosh_standard");
}

void parse_skeleton(const json& j, SkeletonLengths& s) {
  check_keys(j, "skeleton",
             {"ankle_height", "shank", "thigh", "pelvis_to_l5s1",
              "l5s1_to_t9t8", "t9t8_to_shoulder", "neck_to_head", "upper_arm",
              "forearm_hand", "shoulder_lateral", "stance_half_width"});
  s.ankle_height = num(j, "skeleton", "ankle_height", s.ankle_height);
  s.shank = num(j, "skeleton", "shank", s.shank);
  s.thigh = num(j, "skeleton", "thigh", s.thigh);
  s.pelvis_to_l5s1 = num(j, "skeleton", "pelvis_to_l5s1", s.pelvis_to_l5s1);
  s.l5s1_to_t9t8 = num(j, "skeleton", "l5s1_to_t9t8", s.l5s1_to_t9t8);
  s.t9t8_to_shoulder = num(j, "skeleton", "t9t8_to_shoulder", s.t9t8_to_shoulder);
  s.neck_to_head = num(j, "skeleton", "neck_to_head", s.neck_to_head);
  s.upper_arm = num(j, "skeleton", "upper_arm", s.upper_arm);
  s.forearm_hand = num(j, "skeleton", "forearm_hand", s.forearm_hand);
  s.shoulder_lateral = num(j, "skeleton", "shoulder_lateral", s.shoulder_lateral);
  s.stance_half_width =
      num(j, "skeleton", "stance_half_width", s.stance_half_width);
}

void parse_generator(const json& j, LiftScript& g, ScriptRanges& r) {
  check_keys(j, "generator",
             {"lead_in_s", "squat_s", "rise_s", "stand_s", "squat_depth_rad",
              "lift_height_cm", "hand_forward_origin_cm",
              "hand_height_origin_cm", "hand_forward_end_cm", "payload_kg",
              "body_mass_kg", "angle_jitter_rad", "timing_jitter_frac",
              "target_jitter_cm", "arm_sway_rad",
              "allow_height_outside_range", "lift_height_range_cm",
              "squat_depth_range_rad", "payload_range_kg"});
  g.lead_in_s = num(j, "generator", "lead_in_s", g.lead_in_s);
  g.squat_s = num(j, "generator", "squat_s", g.squat_s);
  g.rise_s = num(j, "generator", "rise_s", g.rise_s);
  g.stand_s = num(j, "generator", "stand_s", g.stand_s);
  g.squat_depth_rad = num(j, "generator", "squat_depth_rad", g.squat_depth_rad);
  g.lift_height_cm = num(j, "generator", "lift_height_cm", g.lift_height_cm);
  g.hand_forward_origin_cm =
      num(j, "generator", "hand_forward_origin_cm", g.hand_forward_origin_cm);
  g.hand_height_origin_cm =
      num(j, "generator", "hand_height_origin_cm", g.hand_height_origin_cm);
  g.hand_forward_end_cm =
      num(j, "generator", "hand_forward_end_cm", g.hand_forward_end_cm);
  g.payload_kg = num(j, "generator", "payload_kg", g.payload_kg);
  g.body_mass_kg = num(j, "generator", "body_mass_kg", g.body_mass_kg);
  g.angle_jitter_rad = num(j, "generator", "angle_jitter_rad", g.angle_jitter_rad);
  g.timing_jitter_frac =
      num(j, "generator", "timing_jitter_frac", g.timing_jitter_frac);
  g.target_jitter_cm = num(j, "generator", "target_jitter_cm", g.target_jitter_cm);
  g.arm_sway_rad = num(j, "generator", "arm_sway_rad", g.arm_sway_rad);
  g.allow_height_outside_range = boolean(j, "generator",
                                         "allow_height_outside_range",
                                         g.allow_height_outside_range);
  range_pair(j, "generator", "lift_height_range_cm", r.lift_height_min_cm,
             r.lift_height_max_cm);
  range_pair(j, "generator", "squat_depth_range_rad", r.squat_depth_min_rad,
             r.squat_depth_max_rad);
  range_pair(j, "generator", "payload_range_kg", r.payload_min_kg,
             r.payload_max_kg);
}

void parse_training(const json& j, TrainConfig& t) {
  check_keys(j, "training",
             {"b1", "b2", "squared_error", "learning_rate", "adam_beta1",
              "adam_beta2", "adam_epsilon", "grad_clip_norm", "batch_size",
              "max_epochs", "anchor_stride", "lr_decay_factor", "lr_patience",
              "early_stop_patience", "min_improvement", "seed"});
  t.b1 = num(j, "training", "b1", t.b1);
  t.b2 = num(j, "training", "b2", t.b2);
  t.squared_error = boolean(j, "training", "squared_error", t.squared_error);
  t.learning_rate = num(j, "training", "learning_rate", t.learning_rate);
  t.adam_beta1 = num(j, "training", "adam_beta1", t.adam_beta1);
  t.adam_beta2 = num(j, "training", "adam_beta2", t.adam_beta2);
  t.adam_epsilon = num(j, "training", "adam_epsilon", t.adam_epsilon);
  t.grad_clip_norm = num(j, "training", "grad_clip_norm", t.grad_clip_norm);
  t.batch_size = integer(j, "training", "batch_size", t.batch_size);
  t.max_epochs = integer(j, "training", "max_epochs", t.max_epochs);
  t.anchor_stride = integer(j, "training", "anchor_stride", t.anchor_stride);
  t.lr_decay_factor = num(j, "training", "lr_decay_factor", t.lr_decay_factor);
  t.lr_patience = integer(j, "training", "lr_patience", t.lr_patience);
  t.early_stop_patience =
      integer(j, "training", "early_stop_patience", t.early_stop_patience);
  t.min_improvement = num(j, "training", "min_improvement", t.min_improvement);
  auto seed_it = j.find("seed");
  if (seed_it != j.end()) {
    if (!seed_it->is_number_integer()) bad("training.seed must be an integer");
    t.seed = seed_it->get<std::uint64_t>();
  }
}

void parse_rnle(const json& j, EngineSettings& e) {
  check_keys(j, "rnle",
             {"asymmetry_deg", "frequency_per_min", "duration", "coupling",
              "payload_kg", "rounding", "coupling_mode"});
  NioshInput& c = e.rnle_context;
  c.a_deg = num(j, "rnle", "asymmetry_deg", c.a_deg);
  c.f_per_min = num(j, "rnle", "frequency_per_min", c.f_per_min);
  c.payload_kg = num(j, "rnle", "payload_kg", c.payload_kg);
  c.duration = duration_from(text(j, "rnle", "duration", to_text(c.duration)));
  c.coupling = coupling_from(text(j, "rnle", "coupling", to_text(c.coupling)));
  e.rounding = rounding_from(text(
      j, "rnle", "rounding",
      e.rounding == RoundingMode::Exact ? "exact" : "table_parity"));
  e.coupling_mode = coupling_mode_from(
      text(j, "rnle", "coupling_mode",
           e.coupling_mode == CouplingMode::PaperFlat ? "paper_flat"
                                                      : "niosh_standard"));
}

void parse_engine(const json& j, EngineSettings& e) {
  check_keys(j, "engine",
             {"horizon_steps", "drop_threshold", "rise_threshold",
              "history_cycles", "origin_from_measured", "haptic_slight",
              "haptic_medium", "haptic_strong"});
  e.horizon_steps = integer(j, "engine", "horizon_steps", e.horizon_steps);
  e.drop_threshold = num(j, "engine", "drop_threshold", e.drop_threshold);
  e.rise_threshold = num(j, "engine", "rise_threshold", e.rise_threshold);
  e.history_cycles = integer(j, "engine", "history_cycles", e.history_cycles);
  e.origin_from_measured =
      boolean(j, "engine", "origin_from_measured", e.origin_from_measured);
  e.bands.slight = num(j, "engine", "haptic_slight", e.bands.slight);
  e.bands.medium = num(j, "engine", "haptic_medium", e.bands.medium);
  e.bands.strong = num(j, "engine", "haptic_strong", e.bands.strong);
}

}  // namespace

AppConfig default_app_config() {
  AppConfig config;
  // Context of the reference task family: 7 lifts/min for under an hour
  // with fair hand-to-container coupling, no twist.
  config.engine.rnle_context.f_per_min = 7.0;
  config.engine.rnle_context.duration = DurationCategory::UpTo1h;
  config.engine.rnle_context.coupling = Coupling::Fair;
  config.engine.rnle_context.a_deg = 0.0;
  config.engine.rnle_context.payload_kg = config.script.payload_kg;
  return config;
}

AppConfig app_config_from_json(const std::string& text_in) {
  json j = json::parse(text_in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) bad("not a JSON object");
  check_keys(j, "config", {"seed", "lifts", "skeleton", "generator", "model",
                           "training", "rnle", "engine"});

  AppConfig config = default_app_config();
  auto seed_it = j.find("seed");
  if (seed_it != j.end()) {
    if (!seed_it->is_number_integer()) bad("seed must be an integer");
    config.seed = seed_it->get<std::uint64_t>();
  }
  config.lifts = integer(j, "config", "lifts", config.lifts);
  if (auto it = j.find("skeleton"); it != j.end())
    parse_skeleton(*it, config.engine.skeleton.lengths);
  if (auto it = j.find("generator"); it != j.end())
    parse_generator(*it, config.script, config.ranges);
  if (auto it = j.find("model"); it != j.end()) {
    check_keys(*it, "model", {"hidden"});
    config.dims.hidden = integer(*it, "model", "hidden", config.dims.hidden);
  }
  if (auto it = j.find("training"); it != j.end())
    parse_training(*it, config.training);
  if (auto it = j.find("rnle"); it != j.end()) parse_rnle(*it, config.engine);
  if (auto it = j.find("engine"); it != j.end()) parse_engine(*it, config.engine);
  return config;
}

AppConfig load_app_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return app_config_from_json(text);
}

std::string app_config_to_json(const AppConfig& config) {
  const SkeletonLengths& s = config.engine.skeleton.lengths;
  const LiftScript& g = config.script;
  const ScriptRanges& r = config.ranges;
  const TrainConfig& t = config.training;
  const NioshInput& c = config.engine.rnle_context;
  const EngineSettings& e = config.engine;
  json j;
  j["seed"] = config.seed;
  j["lifts"] = config.lifts;
  j["skeleton"] = {{"ankle_height", s.ankle_height},
                   {"shank", s.shank},
                   {"thigh", s.thigh},
                   {"pelvis_to_l5s1", s.pelvis_to_l5s1},
                   {"l5s1_to_t9t8", s.l5s1_to_t9t8},
                   {"t9t8_to_shoulder", s.t9t8_to_shoulder},
                   {"neck_to_head", s.neck_to_head},
                   {"upper_arm", s.upper_arm},
                   {"forearm_hand", s.forearm_hand},
                   {"shoulder_lateral", s.shoulder_lateral},
                   {"stance_half_width", s.stance_half_width}};
  j["generator"] = {{"lead_in_s", g.lead_in_s},
                    {"squat_s", g.squat_s},
                    {"rise_s", g.rise_s},
                    {"stand_s", g.stand_s},
                    {"squat_depth_rad", g.squat_depth_rad},
                    {"lift_height_cm", g.lift_height_cm},
                    {"hand_forward_origin_cm", g.hand_forward_origin_cm},
                    {"hand_height_origin_cm", g.hand_height_origin_cm},
                    {"hand_forward_end_cm", g.hand_forward_end_cm},
                    {"payload_kg", g.payload_kg},
                    {"body_mass_kg", g.body_mass_kg},
                    {"angle_jitter_rad", g.angle_jitter_rad},
                    {"timing_jitter_frac", g.timing_jitter_frac},
                    {"target_jitter_cm", g.target_jitter_cm},
                    {"arm_sway_rad", g.arm_sway_rad},
                    {"allow_height_outside_range", g.allow_height_outside_range},
                    {"lift_height_range_cm",
                     {r.lift_height_min_cm, r.lift_height_max_cm}},
                    {"squat_depth_range_rad",
                     {r.squat_depth_min_rad, r.squat_depth_max_rad}},
                    {"payload_range_kg", {r.payload_min_kg, r.payload_max_kg}}};
  j["model"] = {{"hidden", config.dims.hidden}};
  j["training"] = {{"b1", t.b1},
                   {"b2", t.b2},
                   {"squared_error", t.squared_error},
                   {"learning_rate", t.learning_rate},
                   {"adam_beta1", t.adam_beta1},
                   {"adam_beta2", t.adam_beta2},
                   {"adam_epsilon", t.adam_epsilon},
                   {"grad_clip_norm", t.grad_clip_norm},
                   {"batch_size", t.batch_size},
                   {"max_epochs", t.max_epochs},
                   {"anchor_stride", t.anchor_stride},
                   {"lr_decay_factor", t.lr_decay_factor},
                   {"lr_patience", t.lr_patience},
                   {"early_stop_patience", t.early_stop_patience},
                   {"min_improvement", t.min_improvement},
                   {"seed", t.seed}};
  j["rnle"] = {{"asymmetry_deg", c.a_deg},
               {"frequency_per_min", c.f_per_min},
               {"duration", to_text(c.duration)},
               {"coupling", to_text(c.coupling)},
               {"payload_kg", c.payload_kg},
               {"rounding",
                e.rounding == RoundingMode::Exact ? "exact" : "table_parity"},
               {"coupling_mode", e.coupling_mode == CouplingMode::PaperFlat
                                     ? "paper_flat"
                                     : "niosh_standard"}};
  j["engine"] = {{"horizon_steps", e.horizon_steps},
                 {"drop_threshold", e.drop_threshold},
                 {"rise_threshold", e.rise_threshold},
                 {"history_cycles", e.history_cycles},
                 {"origin_from_measured", e.origin_from_measured},
                 {"haptic_slight", e.bands.slight},
                 {"haptic_medium", e.bands.medium},
                 {"haptic_strong", e.bands.strong}};
  return j.dump(2);
}

}  // namespace liftrisk
