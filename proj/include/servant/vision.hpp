#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "servant/feature_vector.hpp"
#include "servant/kmeans.hpp"

namespace servant::vision {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major RGB raster.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  const Rgb& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(x)];
  }
};

struct PaletteEntry {
  std::array<double, 3> color{};
  double weight = 0.0;
};

/// Dominant colours, heaviest first; equal weights in ascending (r, g, b).
struct ColorPalette {
  std::vector<PaletteEntry> entries;
};

/// Binary PPM (P6) with maxval 255. The pixel payload must match the
/// header's dimensions exactly.
///
/// Throws BadMagic, BadHeader, TruncatedPixelData or UnsupportedMaxval.
Image decode_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ppm(const Image& image);

Image read_ppm_file(const std::string& path);
void write_ppm_file(const std::string& path, const Image& image);

/// Upper bound on pixels fed to the colour clustering.
inline constexpr std::size_t kMaxClusteredPixels = 10000;

/// K-Means (k = colors) over a strided subsample of the pixels.
/// Throws DegenerateImage if the subsample has fewer distinct colours than
/// requested.
ColorPalette dominant_colors(const Image& image, int colors,
                             const clustering::KMeansParams& params);

/// [r1, g1, b1, r2, g2, b2, ...] in palette order; weights are not included.
FeatureVector palette_features(const ColorPalette& palette);

struct ColorShare {
  Rgb color;
  double fraction = 0.0;
};

/// Contiguous row-major blocks, one per colour, with pixel counts within one
/// of fraction * width * height. The seed only permutes block order.
/// Throws BadSpec when fractions do not sum to 1 or dimensions are invalid.
Image synth_scene_image(std::span<const ColorShare> spec, int width, int height,
                        std::uint64_t seed);

}  // namespace servant::vision
