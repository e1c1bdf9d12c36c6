#include "io/dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "io/ndjson.hpp"

namespace liftrisk {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string lift_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "lift_%04d.ndjson", index);
  return std::string("lifts/") + buf;
}

json lift_entry(const LabeledSequence& seq, int index, const char* split) {
  json j;
  j["kind"] = "lift";
  j["index"] = index;
  j["file"] = lift_file_name(index);
  j["split"] = split;
  j["frames"] = seq.frames.size();
  j["payload_kg"] = seq.script.payload_kg;
  j["lift_height_cm"] = seq.script.lift_height_cm;
  j["squat_depth_rad"] = seq.script.squat_depth_rad;
  j["seed"] = seq.script.seed;
  j["squat_start_s"] = seq.squat_start_s;
  j["rise_start_s"] = seq.rise_start_s;
  j["rise_end_s"] = seq.rise_end_s;
  return j;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error("bad dataset manifest: " + what);
}

}  // namespace

void write_sequence(const LabeledSequence& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const StateFrame& frame : seq.frames) out << frame_to_json(frame) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<StateFrame> load_frames(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<StateFrame> frames;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      frames.push_back(frame_from_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return frames;
}

void write_dataset(const DatasetSplits& splits, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "lifts");
  std::ofstream manifest(fs::path(dir) / "manifest.ndjson");
  if (!manifest)
    throw std::runtime_error("cannot open for writing: " + dir +
                             "/manifest.ndjson");

  json header;
  header["kind"] = "dataset_manifest";
  header["version"] = 1;
  header["frame_rate_hz"] = kSampleHz;
  header["lifts"] = splits.train.size() + splits.val.size() + splits.test.size();
  header["splits"] = {{"train", splits.train.size()},
                      {"val", splits.val.size()},
                      {"test", splits.test.size()}};
  manifest << header.dump() << '\n';

  int index = 0;
  auto emit = [&](const std::vector<LabeledSequence>& seqs, const char* split) {
    for (const LabeledSequence& seq : seqs) {
      manifest << lift_entry(seq, index, split).dump() << '\n';
      write_sequence(seq, (fs::path(dir) / lift_file_name(index)).string());
      ++index;
    }
  };
  emit(splits.train, "train");
  emit(splits.val, "val");
  emit(splits.test, "test");
  if (!manifest) throw std::runtime_error("write failed: " + dir);
}

DatasetSplits load_dataset(const std::string& dir, const Skeleton* skeleton) {
  std::ifstream manifest(fs::path(dir) / "manifest.ndjson");
  if (!manifest)
    throw std::runtime_error("cannot open: " + dir + "/manifest.ndjson");

  std::string line;
  require(static_cast<bool>(std::getline(manifest, line)), "empty file");
  json header = json::parse(line, nullptr, false);
  require(!header.is_discarded() && header.is_object(), "unparseable header");
  require(header.value("kind", "") == "dataset_manifest", "wrong kind");
  require(header.value("version", 0) == 1, "unsupported version");

  DatasetSplits splits;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    require(!j.is_discarded() && j.is_object(), "unparseable lift entry");
    require(j.value("kind", "") == "lift", "unexpected entry kind");

    LabeledSequence seq;
    seq.frames = load_frames((fs::path(dir) / j.at("file").get<std::string>()).string());
    require(seq.frames.size() == j.at("frames").get<std::size_t>(),
            "frame count mismatch in " + j.at("file").get<std::string>());
    seq.script.payload_kg = j.at("payload_kg").get<double>();
    seq.script.lift_height_cm = j.at("lift_height_cm").get<double>();
    seq.script.squat_depth_rad = j.at("squat_depth_rad").get<double>();
    seq.script.seed = j.at("seed").get<std::uint64_t>();
    seq.squat_start_s = j.at("squat_start_s").get<double>();
    seq.rise_start_s = j.at("rise_start_s").get<double>();
    seq.rise_end_s = j.at("rise_end_s").get<double>();
    if (skeleton) {
      seq.geometry.reserve(seq.frames.size());
      for (const StateFrame& frame : seq.frames)
        seq.geometry.push_back(hand_geometry(*skeleton, frame.q));
    }

    const std::string split = j.at("split").get<std::string>();
    if (split == "train")
      splits.train.push_back(std::move(seq));
    else if (split == "val")
      splits.val.push_back(std::move(seq));
    else if (split == "test")
      splits.test.push_back(std::move(seq));
    else
      require(false, "unknown split '" + split + "'");
  }
  require(!splits.train.empty() || !splits.val.empty() || !splits.test.empty(),
          "no lifts listed");
  return splits;
}

}  // namespace liftrisk
