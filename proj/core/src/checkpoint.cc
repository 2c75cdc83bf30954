#include "netalign/checkpoint.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "netalign/config.h"
#include "netalign/errors.h"

namespace netalign {
namespace {

using nlohmann::json;

json MatrixToJson(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

json VectorToJson(const Vector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v(i));
  return data;
}

Matrix MatrixFromJson(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw DataError("checkpoint matrix has inconsistent shape");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = data[k++].get<double>();
  return m;
}

Vector VectorFromJson(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json MapperToJson(const MapperParams& p) {
  return {{"variant", p.variant == MapperVariant::kLinear ? "linear" : "nonlinear"},
          {"slope", p.slope},
          {"weight", MatrixToJson(p.weight)},
          {"bias", VectorToJson(p.bias)}};
}

MapperParams MapperFromJson(const json& j) {
  MapperParams p;
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "linear") {
    p.variant = MapperVariant::kLinear;
  } else if (variant == "nonlinear") {
    p.variant = MapperVariant::kNonlinear;
  } else {
    throw DataError("checkpoint: unknown mapper variant '" + variant + "'");
  }
  p.slope = j.at("slope").get<double>();
  p.weight = MatrixFromJson(j.at("weight"));
  p.bias = VectorFromJson(j.at("bias"));
  return p;
}

json CriticToJson(const CriticParams& p) {
  return {{"slope", p.slope},
          {"w1", MatrixToJson(p.w1)},
          {"b1", VectorToJson(p.b1)},
          {"w2", VectorToJson(p.w2)},
          {"b2", p.b2}};
}

CriticParams CriticFromJson(const json& j) {
  CriticParams p;
  p.slope = j.at("slope").get<double>();
  p.w1 = MatrixFromJson(j.at("w1"));
  p.b1 = VectorFromJson(j.at("b1"));
  p.w2 = VectorFromJson(j.at("w2"));
  p.b2 = j.at("b2").get<double>();
  return p;
}

}  // namespace

void SaveCheckpoint(const Checkpoint& ckpt, std::ostream& out) {
  json config = json::object();
  for (const auto& [key, value] : TrainConfigToMap(ckpt.config)) config[key] = value;
  json j = {{"format", "netalign-checkpoint"},
            {"version", 1},
            {"config", config},
            {"g12", MapperToJson(ckpt.params.g12)},
            {"g21", MapperToJson(ckpt.params.g21)},
            {"d1", CriticToJson(ckpt.params.d1)},
            {"d2", CriticToJson(ckpt.params.d2)}};
  out << j.dump(1) << '\n';
}

void SaveCheckpointFile(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  SaveCheckpoint(ckpt, out);
  if (!out) throw DataError("write error on '" + path + "'");
}

Checkpoint LoadCheckpoint(std::istream& in) {
  Checkpoint ckpt;
  try {
    const json j = json::parse(in);
    if (j.value("format", "") != "netalign-checkpoint")
      throw DataError("not a netalign checkpoint");
    ConfigMap config;
    for (const auto& [key, value] : j.at("config").items())
      config[key] = value.get<std::string>();
    ApplyTrainConfig(config, ckpt.config);
    ckpt.params.g12 = MapperFromJson(j.at("g12"));
    ckpt.params.g21 = MapperFromJson(j.at("g21"));
    ckpt.params.d1 = CriticFromJson(j.at("d1"));
    ckpt.params.d2 = CriticFromJson(j.at("d2"));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed checkpoint config: ") + e.what());
  }
  try {
    ckpt.params.g12.Validate();
    ckpt.params.g21.Validate();
    ckpt.params.d1.Validate();
    ckpt.params.d2.Validate();
  } catch (const std::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  const int d = ckpt.params.g12.dim();
  if (ckpt.params.g21.dim() != d || ckpt.params.d1.dim() != d || ckpt.params.d2.dim() != d)
    throw DataError("checkpoint networks disagree on dimension");
  return ckpt;
}

Checkpoint LoadCheckpointFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return LoadCheckpoint(in);
}

}  // namespace netalign
