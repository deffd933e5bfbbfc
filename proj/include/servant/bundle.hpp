#pragma once

#include <optional>
#include <string>

#include "servant/action_net.hpp"
#include "servant/fusion.hpp"
#include "servant/scene_model.hpp"

namespace servant::persist {

inline constexpr int kFormatVersion = 1;

/// Feature extraction settings that prediction must reproduce exactly.
struct ExtractionConfig {
  double audio_window_s = 5.0;
  int palette_colors = 3;
  std::uint64_t palette_seed = 0;
};

struct ModelBundle {
  int format_version = kFormatVersion;
  std::optional<scene::SceneClassifier> acoustic;
  std::optional<scene::SceneClassifier> visual;
  std::optional<action::ActionNet> action;
  fusion::FusionConfig fusion_config;
  ExtractionConfig extraction;
};

/// JSON text. Doubles are written with round-trip precision.
std::string serialize_bundle(const ModelBundle& bundle);
/// Throws BadVersion or SchemaError.
ModelBundle deserialize_bundle(const std::string& text);

/// Throws IoError.
void save_bundle(const ModelBundle& bundle, const std::string& path);
/// Throws IoError, BadVersion or SchemaError.
ModelBundle load_bundle(const std::string& path);

}  // namespace servant::persist
