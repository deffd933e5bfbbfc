#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "servant/audio.hpp"
#include "servant/vision.hpp"

namespace servant::presets {

/// Built-in synthetic stand-ins for the two demo environments. The audio
/// presets occupy disjoint frequency bands and the image presets disjoint
/// colour palettes.
std::vector<std::string> scene_names();

/// Throws BadSpec for an unknown scene.
std::vector<audio::SpectralBand> ambient_profile(const std::string& scene);

/// Base palette jittered by the seed: each channel moves by at most
/// kColorJitter and each fraction by at most kFractionJitter.
std::vector<vision::ColorShare> scene_palette(const std::string& scene, std::uint64_t seed);

inline constexpr int kColorJitter = 6;
inline constexpr double kFractionJitter = 0.03;

inline constexpr double kDefaultSeconds = 5.0;
inline constexpr int kDefaultRate = 8000;
inline constexpr int kDefaultImageWidth = 64;
inline constexpr int kDefaultImageHeight = 48;

audio::AudioClip scene_audio(const std::string& scene, std::uint64_t seed,
                             double seconds = kDefaultSeconds, int rate_hz = kDefaultRate);
vision::Image scene_image(const std::string& scene, std::uint64_t seed,
                          int width = kDefaultImageWidth, int height = kDefaultImageHeight);

}  // namespace servant::presets
