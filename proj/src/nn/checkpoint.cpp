#include "saturn/nn/checkpoint.hpp"

#include <fstream>

namespace saturn::nn {

using nlohmann::json;

json tensor_to_json(const Matrix& m) {
  json data = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"shape", {m.rows(), m.cols()}}, {"data", std::move(data)}};
}

Matrix tensor_from_json(const json& j) {
  const auto& shape = j.at("shape");
  if (!shape.is_array() || shape.size() != 2) throw CheckpointError("tensor shape must be [rows, cols]");
  const auto rows = shape[0].get<Index>();
  const auto cols = shape[1].get<Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw CheckpointError("tensor data length does not match shape");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  return m;
}

json params_to_json(const ParamStore& params) {
  json out = json::object();
  for (const auto& [name, p] : params.entries()) out[name] = tensor_to_json(p.value);
  return out;
}

void params_from_json(const json& j, ParamStore& params) {
  for (const auto& [name, tj] : j.items()) {
    Matrix m = tensor_from_json(tj);
    if (params.contains(name)) {
      Parameter& p = params.at(name);
      if (p.value.rows() != m.rows() || p.value.cols() != m.cols())
        throw CheckpointError("shape mismatch for parameter " + name + ": " + shape_string(p.value) +
                              " vs " + shape_string(m));
      p.value = std::move(m);
      p.zero_grad();
    } else {
      params.add(name, std::move(m));
    }
  }
}

json adam_to_json(const Adam& adam) {
  json moments = json::object();
  for (const auto& [name, mo] : adam.moments())
    moments[name] = {{"m", tensor_to_json(mo.m)}, {"v", tensor_to_json(mo.v)}};
  const AdamConfig& c = adam.config();
  return {{"lr", c.lr},         {"beta1", c.beta1}, {"beta2", c.beta2},
          {"eps", c.eps},       {"steps", adam.steps()}, {"moments", std::move(moments)}};
}

Adam adam_from_json(const json& j) {
  AdamConfig c;
  c.lr = j.at("lr").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.eps = j.at("eps").get<double>();
  Adam adam(c);
  std::map<std::string, Moments> moments;
  for (const auto& [name, mj] : j.at("moments").items())
    moments[name] = Moments{tensor_from_json(mj.at("m")), tensor_from_json(mj.at("v"))};
  adam.restore(j.at("steps").get<std::uint64_t>(), std::move(moments));
  return adam;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  json j = {{"format", "saturn-checkpoint"},
            {"version", kCheckpointVersion},
            {"params", params_to_json(ck.params)},
            {"meta", ck.meta}};
  if (ck.optimizer) j["optimizer"] = adam_to_json(*ck.optimizer);
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw CheckpointError("cannot write " + tmp.string());
    out << j.dump();
    if (!out) throw CheckpointError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CheckpointError("malformed checkpoint " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "saturn-checkpoint") throw CheckpointError("not a checkpoint file");
  if (j.value("version", 0) != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + j.value("version", json()).dump());
  Checkpoint ck;
  params_from_json(j.at("params"), ck.params);
  if (j.contains("optimizer")) ck.optimizer = adam_from_json(j.at("optimizer"));
  ck.meta = j.value("meta", json::object());
  return ck;
}

}  // namespace saturn::nn
