#include "nepdf/net.hpp"

#include <sstream>

namespace nepdf {

void TrainConfig::validate() const {
  if (learning_rate <= 0) throw ConfigError("learning_rate must be positive");
  if (momentum < 0 || momentum >= 1)
    throw ConfigError("momentum must lie in [0, 1)");
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (validation_fraction <= 0 || validation_fraction >= 1)
    throw ConfigError("validation_fraction must lie in (0, 1)");
  if (early_stop_patience < 0)
    throw ConfigError("early_stop_patience must be nonnegative");
}

std::vector<LayerSpec> default_arch() {
  return {
      {LayerKind::kConv3x3, 16, Activation::kRelu},
      {LayerKind::kConv3x3, 16, Activation::kRelu},
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kConv3x3, 32, Activation::kRelu},
      {LayerKind::kConv3x3, 32, Activation::kRelu},
      {LayerKind::kMaxPool2x2, 0, Activation::kNone},
      {LayerKind::kFlatten, 0, Activation::kNone},
      {LayerKind::kDense, 64, Activation::kRelu},
      {LayerKind::kOutput, 0, Activation::kNone},
  };
}

std::vector<LayerSpec> parse_arch(const std::string& text) {
  if (text.empty() || text == "default") return default_arch();
  std::vector<LayerSpec> arch;
  std::stringstream ss(text);
  std::string token;
  bool has_flatten = false;
  while (std::getline(ss, token, ',')) {
    // trim spaces
    const auto b = token.find_first_not_of(" \t");
    const auto e = token.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    token = token.substr(b, e - b + 1);
    const auto colon = token.find(':');
    const std::string head = token.substr(0, colon);
    int units = 0;
    if (colon != std::string::npos) {
      try {
        units = std::stoi(token.substr(colon + 1));
      } catch (...) {
        throw ConfigError("arch: bad unit count in '" + token + "'");
      }
    }
    if (head == "conv") {
      if (units < 1) throw ConfigError("arch: conv needs channels, e.g. conv:16");
      arch.push_back({LayerKind::kConv3x3, units, Activation::kRelu});
    } else if (head == "pool") {
      arch.push_back({LayerKind::kMaxPool2x2, 0, Activation::kNone});
    } else if (head == "flatten") {
      arch.push_back({LayerKind::kFlatten, 0, Activation::kNone});
      has_flatten = true;
    } else if (head == "dense") {
      if (units < 1) throw ConfigError("arch: dense needs units, e.g. dense:64");
      if (!has_flatten) {
        arch.push_back({LayerKind::kFlatten, 0, Activation::kNone});
        has_flatten = true;
      }
      arch.push_back({LayerKind::kDense, units, Activation::kRelu});
    } else {
      throw ConfigError("arch: unknown layer '" + token + "'");
    }
  }
  if (arch.empty()) throw ConfigError("arch: no layers given");
  if (!has_flatten)
    arch.push_back({LayerKind::kFlatten, 0, Activation::kNone});
  arch.push_back({LayerKind::kOutput, 0, Activation::kNone});
  return arch;
}

std::string format_arch(const std::vector<LayerSpec>& arch) {
  std::string out;
  for (const auto& spec : arch) {
    std::string token;
    switch (spec.kind) {
      case LayerKind::kConv3x3:
        token = "conv:" + std::to_string(spec.units);
        break;
      case LayerKind::kMaxPool2x2:
        token = "pool";
        break;
      case LayerKind::kFlatten:
        token = "flatten";
        break;
      case LayerKind::kDense:
        token = "dense:" + std::to_string(spec.units);
        break;
      case LayerKind::kOutput:
        continue;  // implicit
    }
    if (!out.empty()) out += ',';
    out += token;
  }
  return out;
}

}  // namespace nepdf
