#ifndef TNB_NN_PERSISTENCE_HPP_
#define TNB_NN_PERSISTENCE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "tnb/io.hpp"
#include "tnb/nn/mlp.hpp"

namespace tnb::nn {

inline constexpr int kMlpFormatVersion = 1;

inline Json spec_to_json(const MlpSpec& spec) {
  return {{"input_dim", spec.input_dim},
          {"hidden", spec.hidden},
          {"output_dim", spec.output_dim},
          {"hidden_activation", std::string(to_string(spec.hidden_activation))},
          {"output_activation", std::string(to_string(spec.output_activation))}};
}

inline MlpSpec spec_from_json(const Json& j) {
  try {
    MlpSpec spec;
    spec.input_dim = j.at("input_dim").get<std::size_t>();
    spec.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    spec.output_dim = j.at("output_dim").get<std::size_t>();
    spec.hidden_activation = activation_from_string(j.at("hidden_activation").get<std::string>());
    spec.output_activation = activation_from_string(j.at("output_activation").get<std::string>());
    spec.validate();
    return spec;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed mlp spec: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid mlp spec: ") + e.what());
  }
}

// {"format": "tnb-mlp", "version": 1, "spec": {...}, "params": [...]}.
// JSON numbers are written in shortest round-trip form, so real64 values
// survive a save/load cycle bit for bit.
inline Json mlp_to_json(const MlpSpec& spec, std::span<const double> params) {
  detail::check_params(spec, params);
  return {{"format", "tnb-mlp"},
          {"version", kMlpFormatVersion},
          {"spec", spec_to_json(spec)},
          {"params", std::vector<double>(params.begin(), params.end())}};
}

inline std::pair<MlpSpec, ParamVector> mlp_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "tnb-mlp") throw FormatError("not a tnb-mlp document");
  if (j.value("version", -1) != kMlpFormatVersion) {
    throw FormatError("unsupported tnb-mlp version " + j.value("version", Json(nullptr)).dump());
  }
  MlpSpec spec = spec_from_json(j.at("spec"));
  std::vector<double> values;
  try {
    values = j.at("params").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed params: ") + e.what());
  }
  if (values.size() != spec.param_count()) {
    throw DimensionError("mlp file holds " + std::to_string(values.size()) + " params, spec requires " +
                         std::to_string(spec.param_count()));
  }
  return {spec, ParamVector{std::move(values), spec.layout()}};
}

inline void save_mlp(const std::filesystem::path& path, const MlpSpec& spec, std::span<const double> params) {
  write_json_file(path, mlp_to_json(spec, params), -1);
}

inline std::pair<MlpSpec, ParamVector> load_mlp(const std::filesystem::path& path) {
  return mlp_from_json(read_json_file(path));
}

}  // namespace tnb::nn

#endif  // TNB_NN_PERSISTENCE_HPP_
