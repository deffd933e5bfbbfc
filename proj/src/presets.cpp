#include "servant/presets.hpp"

#include <algorithm>
#include <cmath>

#include "servant/error.hpp"
#include "servant/random.hpp"

namespace servant::presets {

namespace {

struct ScenePreset {
  const char* name;
  std::vector<audio::SpectralBand> bands;
  std::vector<vision::ColorShare> palette;
};

const std::vector<ScenePreset>& table() {
  // Coffee shop: low murmur and clatter. Gym: squeaks, whistles, bouncing.
  static const std::vector<ScenePreset> presets = {
      {"coffee",
       {{80.0, 500.0, 1.0}, {500.0, 900.0, 0.45}},
       {{{111, 78, 55}, 0.5}, {{196, 164, 132}, 0.3}, {{45, 32, 28}, 0.2}}},
      {"gym",
       {{1400.0, 2400.0, 1.0}, {2400.0, 3300.0, 0.6}},
       {{{214, 150, 70}, 0.5}, {{232, 232, 238}, 0.3}, {{190, 30, 40}, 0.2}}},
  };
  return presets;
}

const ScenePreset& find(const std::string& scene) {
  for (const auto& p : table())
    if (scene == p.name) return p;
  throw Error(ErrorCode::BadSpec, "unknown scene preset '" + scene + "'");
}

}  // namespace

std::vector<std::string> scene_names() {
  std::vector<std::string> out;
  for (const auto& p : table()) out.emplace_back(p.name);
  return out;
}

std::vector<audio::SpectralBand> ambient_profile(const std::string& scene) { return find(scene).bands; }

std::vector<vision::ColorShare> scene_palette(const std::string& scene, std::uint64_t seed) {
  auto palette = find(scene).palette;
  Rng rng(seed ^ 0x5EED'C0105ULL);
  double total = 0.0;
  for (auto& share : palette) {
    auto jitter = [&](std::uint8_t c) {
      const auto delta = static_cast<int>(rng.below(2 * kColorJitter + 1)) - kColorJitter;
      return static_cast<std::uint8_t>(std::clamp(int(c) + delta, 0, 255));
    };
    share.color = {jitter(share.color.r), jitter(share.color.g), jitter(share.color.b)};
    share.fraction += rng.uniform(-kFractionJitter, kFractionJitter);
    total += share.fraction;
  }
  for (auto& share : palette) share.fraction /= total;
  // Absorb the normalisation residue so the fractions sum to 1 closely.
  double rest = 1.0;
  for (std::size_t i = 1; i < palette.size(); ++i) rest -= palette[i].fraction;
  palette.front().fraction = rest;
  return palette;
}

audio::AudioClip scene_audio(const std::string& scene, std::uint64_t seed, double seconds,
                             int rate_hz) {
  const auto bands = ambient_profile(scene);
  auto clip = audio::synth_ambient(bands, seconds, rate_hz, seed);
  clip.source_id = scene + ":" + std::to_string(seed);
  return clip;
}

vision::Image scene_image(const std::string& scene, std::uint64_t seed, int width, int height) {
  const auto palette = scene_palette(scene, seed);
  return vision::synth_scene_image(palette, width, height, seed);
}

}  // namespace servant::presets
