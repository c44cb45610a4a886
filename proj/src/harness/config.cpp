#include "saturn/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

namespace saturn::harness {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

bool non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

struct Field {
  const char* key;
  std::function<json(const RunConfig&)> get;
  // Returns an error message, empty on success.
  std::function<std::string(RunConfig&, const json&)> set;
};

template <typename T>
Field uint_field(const char* key, T RunConfig::*part, std::size_t T::*member) {
  return {key, [=](const RunConfig& c) { return json((c.*part).*member); },
          [=](RunConfig& c, const json& v) -> std::string {
            if (!non_negative_integer(v)) return "expected a non-negative integer";
            (c.*part).*member = v.get<std::size_t>();
            return {};
          }};
}

template <typename T>
Field double_field(const char* key, T RunConfig::*part, double T::*member) {
  return {key, [=](const RunConfig& c) { return json((c.*part).*member); },
          [=](RunConfig& c, const json& v) -> std::string {
            if (!v.is_number()) return "expected a number";
            (c.*part).*member = v.get<double>();
            return {};
          }};
}

template <typename T>
Field bool_field(const char* key, T RunConfig::*part, bool T::*member) {
  return {key, [=](const RunConfig& c) { return json((c.*part).*member); },
          [=](RunConfig& c, const json& v) -> std::string {
            if (!v.is_boolean()) return "expected true or false";
            (c.*part).*member = v.get<bool>();
            return {};
          }};
}

template <typename E>
Field enum_field(const char* key, std::function<E&(RunConfig&)> ref, std::function<std::string_view(E)> name,
                 std::function<E(std::string_view)> parse) {
  return {key, [=](const RunConfig& c) { return json(std::string(name(ref(const_cast<RunConfig&>(c))))); },
          [=](RunConfig& c, const json& v) -> std::string {
            if (!v.is_string()) return "expected a string";
            try {
              ref(c) = parse(v.get<std::string>());
            } catch (const std::invalid_argument& e) {
              return e.what();
            }
            return {};
          }};
}

const std::vector<Field>& fields() {
  using rl::TrainConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"seed", [](const RunConfig& c) { return json(c.train.seed); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!non_negative_integer(v)) return "expected a non-negative integer";
                   c.train.seed = v.get<std::uint64_t>();
                   return {};
                 }});
    f.push_back(uint_field("jobs", &RunConfig::train, &TrainConfig::jobs));
    f.push_back(uint_field("iterations", &RunConfig::train, &TrainConfig::iterations));
    f.push_back(uint_field("epochs", &RunConfig::train, &TrainConfig::epochs));
    f.push_back(uint_field("batch_size", &RunConfig::train, &TrainConfig::batch_size));
    f.push_back(double_field("lr", &RunConfig::train, &TrainConfig::lr));
    f.push_back(double_field("lambda", &RunConfig::train, &TrainConfig::lambda));
    f.push_back(double_field("tau", &RunConfig::train, &TrainConfig::tau));
    f.push_back(double_field("tau_decay", &RunConfig::train, &TrainConfig::tau_decay));
    f.push_back({"tau0", [](const RunConfig& c) { return json(c.train.tau0); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!non_negative_integer(v) || v.get<std::uint64_t>() > 0xffffffffULL)
                     return "expected a non-negative 32-bit integer";
                   c.train.tau0 = v.get<std::uint32_t>();
                   return {};
                 }});
    f.push_back(uint_field("buffer_window", &RunConfig::train, &TrainConfig::buffer_window));
    f.push_back(uint_field("zero_samples", &RunConfig::train, &TrainConfig::zero_samples));
    f.push_back({"max_steps", [](const RunConfig& c) { return json(c.train.limits.max_steps); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!non_negative_integer(v)) return "expected a non-negative integer";
                   c.train.limits.max_steps = v.get<std::size_t>();
                   return {};
                 }});
    f.push_back({"max_seconds", [](const RunConfig& c) { return json(c.train.limits.max_seconds); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!v.is_number()) return "expected a number";
                   c.train.limits.max_seconds = v.get<double>();
                   return {};
                 }});
    f.push_back({"subsumption", [](const RunConfig& c) { return json(c.train.engine.subsumption); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!v.is_boolean()) return "expected true or false";
                   c.train.engine.subsumption = v.get<bool>();
                   return {};
                 }});
    f.push_back({"max_derived_per_step", [](const RunConfig& c) { return json(c.train.engine.max_derived_per_step); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!non_negative_integer(v)) return "expected a non-negative integer";
                   c.train.engine.max_derived_per_step = v.get<std::size_t>();
                   return {};
                 }});
    f.push_back(enum_field<rl::RewardSource>(
        "reward.source", [](RunConfig& c) -> rl::RewardSource& { return c.train.reward.source; }, rl::source_name,
        rl::parse_source));
    f.push_back(enum_field<rl::Normalization>(
        "reward.normalization", [](RunConfig& c) -> rl::Normalization& { return c.train.reward.normalization; },
        rl::normalization_name, rl::parse_normalization));
    f.push_back({"reward.bounded", [](const RunConfig& c) { return json(c.train.reward.bounded); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!v.is_boolean()) return "expected true or false";
                   c.train.reward.bounded = v.get<bool>();
                   return {};
                 }});
    f.push_back({"reward.min", [](const RunConfig& c) { return json(c.train.reward.r_min); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!v.is_number()) return "expected a number";
                   c.train.reward.r_min = v.get<double>();
                   return {};
                 }});
    f.push_back({"reward.max", [](const RunConfig& c) { return json(c.train.reward.r_max); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!v.is_number()) return "expected a number";
                   c.train.reward.r_max = v.get<double>();
                   return {};
                 }});
    using vec::VectorizerConfig;
    f.push_back(bool_field("vec.simple", &RunConfig::vec, &VectorizerConfig::simple));
    f.push_back(bool_field("vec.chain", &RunConfig::vec, &VectorizerConfig::chain));
    f.push_back({"vec.walk_lengths", [](const RunConfig& c) { return json(c.vec.walk_lengths); },
                 [](RunConfig& c, const json& v) -> std::string {
                   if (!v.is_array()) return "expected an array of integers";
                   std::vector<int> out;
                   for (const auto& x : v) {
                     if (!x.is_number_integer()) return "expected an array of integers";
                     out.push_back(x.get<int>());
                   }
                   c.vec.walk_lengths = std::move(out);
                   return {};
                 }});
    f.push_back(uint_field("vec.n_age", &RunConfig::vec, &VectorizerConfig::n_age));
    f.push_back(uint_field("vec.d_chain", &RunConfig::vec, &VectorizerConfig::d_chain));
    f.push_back(uint_field("vec.d_walk", &RunConfig::vec, &VectorizerConfig::d_walk));
    f.push_back(enum_field<vec::GnnKind>(
        "vec.gnn", [](RunConfig& c) -> vec::GnnKind& { return c.vec.gnn; }, vec::gnn_name, vec::parse_gnn));
    f.push_back(uint_field("vec.d", &RunConfig::vec, &VectorizerConfig::d));
    f.push_back(uint_field("vec.rounds", &RunConfig::vec, &VectorizerConfig::rounds));
    f.push_back(uint_field("vec.vocab", &RunConfig::vec, &VectorizerConfig::vocab));
    f.push_back(bool_field("vec.root_readout", &RunConfig::vec, &VectorizerConfig::root_readout));
    using policy::PolicyConfig;
    f.push_back(uint_field("policy.d", &RunConfig::policy, &PolicyConfig::d));
    f.push_back(uint_field("policy.layers", &RunConfig::policy, &PolicyConfig::layers));
    f.push_back(double_field("policy.dropout", &RunConfig::policy, &PolicyConfig::dropout));
    return f;
  }();
  return table;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error("invalid configuration: " + join(errors)), errors_(std::move(errors)) {}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError({"configuration must be a JSON object"});
  RunConfig c;
  std::vector<std::string> errors;
  for (const auto& [key, value] : j.items()) {
    const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) { return key == f.key; });
    if (it == fields().end()) {
      errors.push_back("unknown key '" + key + "'");
      continue;
    }
    if (auto e = it->set(c, value); !e.empty()) errors.push_back(key + ": " + e);
  }
  for (auto& e : validate(c)) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open configuration " + path.string()});
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError({"cannot parse " + path.string() + ": " + e.what()});
  }
  return parse_config(j);
}

json config_to_json(const RunConfig& c) {
  json j = json::object();
  for (const auto& f : fields()) j[f.key] = f.get(c);
  return j;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errors = c.train.validate();
  for (auto& e : c.vec.validate()) errors.push_back("vec: " + e);
  for (auto& e : c.policy.validate()) errors.push_back("policy: " + e);
  return errors;
}

}  // namespace saturn::harness
