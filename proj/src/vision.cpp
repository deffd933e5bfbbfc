#include "servant/vision.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <set>

#include "servant/error.hpp"
#include "servant/random.hpp"

namespace servant::vision {

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Whitespace and '#' comments, at least one byte of separation required.
  void skip_separator() {
    const std::size_t start = pos_;
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) throw Error(ErrorCode::BadHeader, "expected whitespace in PPM header");
  }

  unsigned long number(const char* field) {
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 0xFFFFFFUL) throw Error(ErrorCode::BadHeader, std::string(field) + " too large");
      ++pos_;
    }
    if (pos_ == start) throw Error(ErrorCode::BadHeader, std::string("missing ") + field);
    return value;
  }

  void single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
      throw Error(ErrorCode::BadHeader, "maxval must be followed by one whitespace byte");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

Image decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw Error(ErrorCode::BadMagic, "not a binary PPM (P6)");

  HeaderReader hdr(bytes);
  hdr.skip_separator();
  const unsigned long width = hdr.number("width");
  hdr.skip_separator();
  const unsigned long height = hdr.number("height");
  hdr.skip_separator();
  const unsigned long maxval = hdr.number("maxval");
  hdr.single_space();

  if (width == 0 || height == 0) throw Error(ErrorCode::BadHeader, "zero image dimension");
  if (maxval == 0 || maxval > 65535) throw Error(ErrorCode::BadHeader, "maxval out of range");
  if (maxval != 255)
    throw Error(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(maxval) + ", need 255");

  const std::size_t count = static_cast<std::size_t>(width) * height;
  const std::size_t needed = count * 3;
  const std::size_t available = bytes.size() - hdr.pos();
  if (available < needed)
    throw Error(ErrorCode::TruncatedPixelData, std::to_string(available) + " pixel bytes, header needs " +
                                                   std::to_string(needed));
  if (available > needed)
    throw Error(ErrorCode::BadHeader, "pixel payload longer than header dimensions");

  Image img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);
  img.pixels.resize(count);
  const std::uint8_t* p = bytes.data() + hdr.pos();
  for (auto& px : img.pixels) {
    px = {p[0], p[1], p[2]};
    p += 3;
  }
  return img;
}

std::vector<std::uint8_t> encode_ppm(const Image& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const auto& px : image.pixels) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

Image read_ppm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  return decode_ppm(bytes);
}

void write_ppm_file(const std::string& path, const Image& image) {
  const auto bytes = encode_ppm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

ColorPalette dominant_colors(const Image& image, int colors,
                             const clustering::KMeansParams& params) {
  if (colors < 1) throw Error(ErrorCode::ZeroK, "need at least one dominant colour");
  if (image.pixels.empty()) throw Error(ErrorCode::DegenerateImage, "image has no pixels");

  const std::size_t n = image.pixels.size();
  const std::size_t stride = (n + kMaxClusteredPixels - 1) / kMaxClusteredPixels;
  std::vector<clustering::Point> points;
  points.reserve(n / stride + 1);
  std::set<std::uint32_t> distinct;
  for (std::size_t i = 0; i < n; i += stride) {
    const Rgb& px = image.pixels[i];
    points.push_back({double(px.r), double(px.g), double(px.b)});
    distinct.insert(std::uint32_t(px.r) << 16 | std::uint32_t(px.g) << 8 | px.b);
  }
  if (distinct.size() < static_cast<std::size_t>(colors))
    throw Error(ErrorCode::DegenerateImage, std::to_string(distinct.size()) +
                                                " distinct colours, " + std::to_string(colors) +
                                                " requested");

  clustering::KMeansParams p = params;
  p.k = colors;
  const auto model = clustering::fit(points, p);

  std::vector<std::size_t> counts(static_cast<std::size_t>(colors), 0);
  for (const auto& pt : points) ++counts[static_cast<std::size_t>(clustering::predict(model, pt).label)];

  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return model.centroids[a] < model.centroids[b];
  });

  ColorPalette palette;
  for (std::size_t c : order) {
    const auto& centre = model.centroids[c];
    palette.entries.push_back({{centre[0], centre[1], centre[2]},
                               static_cast<double>(counts[c]) / static_cast<double>(points.size())});
  }
  return palette;
}

FeatureVector palette_features(const ColorPalette& palette) {
  FeatureVector fv;
  fv.modality = Modality::Visual;
  fv.values.reserve(palette.entries.size() * 3);
  for (const auto& e : palette.entries) fv.values.insert(fv.values.end(), e.color.begin(), e.color.end());
  return fv;
}

Image synth_scene_image(std::span<const ColorShare> spec, int width, int height,
                        std::uint64_t seed) {
  if (spec.empty()) throw Error(ErrorCode::BadSpec, "palette spec is empty");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::BadSpec, "image dimensions must be positive");
  double total_fraction = 0.0;
  for (const auto& s : spec) {
    if (!(s.fraction >= 0.0)) throw Error(ErrorCode::BadSpec, "fractions must be non-negative");
    total_fraction += s.fraction;
  }
  if (std::abs(total_fraction - 1.0) > 1e-9)
    throw Error(ErrorCode::BadSpec, "fractions sum to " + std::to_string(total_fraction));

  // Largest-remainder apportionment keeps every count within one pixel.
  const std::size_t total = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::size_t> counts(spec.size());
  std::vector<double> remainders(spec.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double exact = spec[i].fraction * static_cast<double>(total);
    counts[i] = std::min(total, static_cast<std::size_t>(std::floor(exact)));
    remainders[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> by_remainder(spec.size());
  std::iota(by_remainder.begin(), by_remainder.end(), 0);
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % spec.size()) {
    ++counts[by_remainder[i]];
    ++assigned;
  }

  std::vector<std::size_t> block_order(spec.size());
  std::iota(block_order.begin(), block_order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = block_order.size(); i > 1; --i)
    std::swap(block_order[i - 1], block_order[rng.below(i)]);

  Image img;
  img.width = width;
  img.height = height;
  img.pixels.reserve(total);
  for (std::size_t b : block_order) img.pixels.insert(img.pixels.end(), counts[b], spec[b].color);
  return img;
}

}  // namespace servant::vision
