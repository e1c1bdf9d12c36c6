#include "io/model_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace liftrisk {
namespace {

using nlohmann::json;

std::uint64_t fnv1a64_bytes(std::uint64_t hash, const unsigned char* bytes,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// Checksum input is independent of host endianness.
std::uint64_t hash_doubles(std::uint64_t hash, const double* values,
                           std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, &values[i], sizeof(bits));
    unsigned char le[8];
    for (int b = 0; b < 8; ++b) le[b] = static_cast<unsigned char>(bits >> (8 * b));
    hash = fnv1a64_bytes(hash, le, 8);
  }
  return hash;
}

std::uint64_t model_checksum(const GmoeModel& model) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto net = [&](const LstmParams& p) {
    hash = hash_doubles(hash, p.wx.data(), static_cast<std::size_t>(p.wx.size()));
    hash = hash_doubles(hash, p.wh.data(), static_cast<std::size_t>(p.wh.size()));
    hash = hash_doubles(hash, p.b.data(), static_cast<std::size_t>(p.b.size()));
    hash = hash_doubles(hash, p.wout.data(), static_cast<std::size_t>(p.wout.size()));
    hash = hash_doubles(hash, p.bout.data(), static_cast<std::size_t>(p.bout.size()));
  };
  net(model.gate);
  for (const LstmParams& e : model.experts) net(e);
  hash = hash_doubles(hash, model.feat_mean.data(),
                      static_cast<std::size_t>(model.feat_mean.size()));
  hash = hash_doubles(hash, model.feat_scale.data(),
                      static_cast<std::size_t>(model.feat_scale.size()));
  return hash;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat(m.data(), m.data() + m.size());
  return json(flat);
}

json vector_to_json(const Eigen::VectorXd& v) {
  std::vector<double> flat(v.data(), v.data() + v.size());
  return json(flat);
}

void fill_matrix(const json& j, const std::string& name, Eigen::MatrixXd& m) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != m.size())
    throw std::runtime_error("model array size mismatch: " + name);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const json& v = j[static_cast<std::size_t>(i)];
    if (!v.is_number())
      throw std::runtime_error("model array size mismatch: " + name);
    m.data()[i] = v.get<double>();
  }
}

void fill_vector(const json& j, const std::string& name, Eigen::VectorXd& v) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != v.size())
    throw std::runtime_error("model array size mismatch: " + name);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const json& x = j[static_cast<std::size_t>(i)];
    if (!x.is_number())
      throw std::runtime_error("model array size mismatch: " + name);
    v[i] = x.get<double>();
  }
}

json net_to_json(const LstmParams& p) {
  json j;
  j["wx"] = matrix_to_json(p.wx);
  j["wh"] = matrix_to_json(p.wh);
  j["b"] = vector_to_json(p.b);
  j["wout"] = matrix_to_json(p.wout);
  j["bout"] = vector_to_json(p.bout);
  return j;
}

void net_from_json(const json& j, const std::string& name, LstmParams& p) {
  if (!j.is_object()) throw std::runtime_error("model array size mismatch: " + name);
  fill_matrix(j.at("wx"), name + ".wx", p.wx);
  fill_matrix(j.at("wh"), name + ".wh", p.wh);
  fill_vector(j.at("b"), name + ".b", p.b);
  fill_matrix(j.at("wout"), name + ".wout", p.wout);
  fill_vector(j.at("bout"), name + ".bout", p.bout);
}

}  // namespace

std::uint64_t fnv1a64(const double* values, std::size_t count) {
  return hash_doubles(0xcbf29ce484222325ULL, values, count);
}

void save_model(const GmoeModel& model, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["kind"] = "gmoe_model";
  j["dims"] = {{"input", model.dims.input},     {"hidden", model.dims.hidden},
               {"window", model.dims.window},   {"horizon", model.dims.horizon},
               {"actions", model.dims.actions}, {"motion", model.dims.motion}};
  j["motion_map"] = model.motion_map;
  j["feature_mean"] = vector_to_json(model.feat_mean);
  j["feature_scale"] = vector_to_json(model.feat_scale);
  j["gate"] = net_to_json(model.gate);
  json experts = json::array();
  for (const LstmParams& e : model.experts) experts.push_back(net_to_json(e));
  j["experts"] = std::move(experts);
  char checksum[32];
  std::snprintf(checksum, sizeof(checksum), "fnv1a64:%016llx",
                static_cast<unsigned long long>(model_checksum(model)));
  j["checksum"] = checksum;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

GmoeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw std::runtime_error("unparseable model file: " + path);

  if (j.value("format_version", -1) != 1)
    throw std::runtime_error("unsupported model format_version");
  if (j.value("kind", "") != "gmoe_model")
    throw std::runtime_error("not a model file: " + path);

  const json& d = j.at("dims");
  GmoeDims dims;
  dims.input = d.at("input").get<int>();
  dims.hidden = d.at("hidden").get<int>();
  dims.window = d.at("window").get<int>();
  dims.horizon = d.at("horizon").get<int>();
  dims.actions = d.at("actions").get<int>();
  dims.motion = d.at("motion").get<int>();

  // init_gmoe sizes every tensor; the file contents then overwrite them.
  GmoeModel model = init_gmoe(dims, 0);

  const json& map = j.at("motion_map");
  if (!map.is_array() || static_cast<int>(map.size()) != dims.motion)
    throw std::runtime_error("model array size mismatch: motion_map");
  for (int i = 0; i < dims.motion; ++i) {
    int idx = map[static_cast<std::size_t>(i)].get<int>();
    if (idx < 0 || idx >= dims.input)
      throw std::runtime_error("motion_map index out of range");
    model.motion_map[static_cast<std::size_t>(i)] = idx;
  }

  fill_vector(j.at("feature_mean"), "feature_mean", model.feat_mean);
  fill_vector(j.at("feature_scale"), "feature_scale", model.feat_scale);
  net_from_json(j.at("gate"), "gate", model.gate);
  const json& experts = j.at("experts");
  if (!experts.is_array() || static_cast<int>(experts.size()) != dims.actions)
    throw std::runtime_error("model array size mismatch: experts");
  for (int e = 0; e < dims.actions; ++e)
    net_from_json(experts[static_cast<std::size_t>(e)],
                  "experts[" + std::to_string(e) + "]",
                  model.experts[static_cast<std::size_t>(e)]);

  char expected[32];
  std::snprintf(expected, sizeof(expected), "fnv1a64:%016llx",
                static_cast<unsigned long long>(model_checksum(model)));
  if (j.value("checksum", "") != expected)
    throw std::runtime_error("model checksum mismatch");

  validate_model(model);
  return model;
}

}  // namespace liftrisk
