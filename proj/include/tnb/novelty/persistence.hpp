#ifndef TNB_NOVELTY_PERSISTENCE_HPP_
#define TNB_NOVELTY_PERSISTENCE_HPP_

#include <filesystem>
#include <optional>

#include "tnb/nn/persistence.hpp"
#include "tnb/novelty/autoencoder.hpp"

namespace tnb::novelty {

inline constexpr int kAutoencoderSetVersion = 1;

// {"format": "tnb-autoencoder-set", "version": 1, "segment_dim": d,
//  "autoencoders": [{"spec": ..., "params": [...],
//                    "normalization": {"mean": [...], "stddev": [...]}}, ...]}
inline Json autoencoder_set_to_json(const AutoencoderSet& set) {
  Json list = Json::array();
  for (const auto& ae : set.autoencoders()) {
    list.push_back({{"spec", nn::spec_to_json(ae.spec)},
                    {"params", ae.params},
                    {"normalization", {{"mean", ae.normalization.mean}, {"stddev", ae.normalization.stddev}}}});
  }
  return {{"format", "tnb-autoencoder-set"},
          {"version", kAutoencoderSetVersion},
          {"segment_dim", set.segment_dim()},
          {"autoencoders", list}};
}

inline AutoencoderSet autoencoder_set_from_json(const Json& j,
                                                std::optional<std::size_t> expected_segment_dim = std::nullopt) {
  if (!j.is_object() || j.value("format", "") != "tnb-autoencoder-set") {
    throw FormatError("not a tnb-autoencoder-set document");
  }
  if (j.value("version", -1) != kAutoencoderSetVersion) {
    throw FormatError("unsupported tnb-autoencoder-set version " + j.value("version", Json(nullptr)).dump());
  }
  AutoencoderSet set;
  try {
    const auto declared = j.at("segment_dim").get<std::size_t>();
    for (const auto& item : j.at("autoencoders")) {
      Autoencoder ae;
      ae.spec = nn::spec_from_json(item.at("spec"));
      ae.params = item.at("params").get<std::vector<double>>();
      ae.normalization.mean = item.at("normalization").at("mean").get<std::vector<double>>();
      ae.normalization.stddev = item.at("normalization").at("stddev").get<std::vector<double>>();
      if (ae.params.size() != ae.spec.param_count()) throw FormatError("autoencoder params do not match spec");
      if (ae.spec.input_dim != declared || ae.spec.output_dim != declared) {
        throw DimensionError("autoencoder set: entry takes " + std::to_string(ae.spec.input_dim) +
                             "-dim segments, file declares " + std::to_string(declared));
      }
      set.add(std::move(ae));
    }
    if (set.empty() && declared != 0) throw FormatError("empty autoencoder set with non-zero segment_dim");
  } catch (const Json::exception& e) {
    throw FormatError(std::string("corrupt autoencoder set: ") + e.what());
  }
  if (expected_segment_dim && !set.empty() && set.segment_dim() != *expected_segment_dim) {
    throw DimensionError("autoencoder set takes " + std::to_string(set.segment_dim()) +
                         "-dim segments, expected " + std::to_string(*expected_segment_dim));
  }
  return set;
}

inline void save_autoencoder_set(const std::filesystem::path& path, const AutoencoderSet& set) {
  write_json_file(path, autoencoder_set_to_json(set), -1);
}

inline AutoencoderSet load_autoencoder_set(const std::filesystem::path& path,
                                           std::optional<std::size_t> expected_segment_dim = std::nullopt) {
  return autoencoder_set_from_json(read_json_file(path), expected_segment_dim);
}

}  // namespace tnb::novelty

#endif  // TNB_NOVELTY_PERSISTENCE_HPP_
