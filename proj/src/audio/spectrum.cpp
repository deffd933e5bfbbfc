#include <cmath>
#include <numbers>
#include <utility>

#include "servant/audio.hpp"
#include "servant/error.hpp"

namespace servant::audio {

AudioClip analysis_window(const AudioClip& clip, double seconds) {
  if (!(seconds > 0.0)) throw Error(ErrorCode::InvalidParams, "window length must be positive");
  const auto wanted = static_cast<std::size_t>(std::floor(seconds * clip.sample_rate_hz));
  if (wanted == 0 || clip.samples.size() < wanted)
    throw Error(ErrorCode::ClipTooShort,
                "clip '" + clip.source_id + "' is " + std::to_string(clip.duration_seconds()) +
                    " s, window needs " + std::to_string(seconds) + " s");
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.source_id = clip.source_id;
  out.samples.assign(clip.samples.begin(),
                     clip.samples.begin() + static_cast<std::ptrdiff_t>(wanted));
  return out;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_in_place(std::vector<std::complex<double>>& data, bool inverse) {
  const std::size_t n = data.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles computed directly per index; the recurrence w *= step drifts
    // by ~1e-13 at N = 65536.
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(len);
      const std::complex<double> w(std::cos(angle), std::sin(angle));
      for (std::size_t start = 0; start < n; start += len) {
        const auto u = data[start + k];
        const auto v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

Spectrum magnitude_spectrum(const AudioClip& clip) {
  if (clip.samples.empty()) throw Error(ErrorCode::EmptyData, "cannot analyse an empty clip");
  if (clip.sample_rate_hz <= 0) throw Error(ErrorCode::InvalidParams, "sample rate must be positive");

  const std::size_t n = next_power_of_two(clip.samples.size());
  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < clip.samples.size(); ++i) buf[i] = clip.samples[i];
  fft_in_place(buf);

  const std::size_t bins = n / 2 + 1;
  Spectrum spec;
  spec.freqs_hz.resize(bins);
  spec.amps.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    spec.freqs_hz[k] = static_cast<double>(k) * clip.sample_rate_hz / static_cast<double>(n);
    spec.amps[k] = std::abs(buf[k]);
  }
  return spec;
}

FeatureVector acoustic_features(const Spectrum& spec) {
  FeatureVector fv;
  fv.modality = Modality::Acoustic;
  fv.values.reserve(spec.freqs_hz.size() + spec.amps.size());
  fv.values.insert(fv.values.end(), spec.freqs_hz.begin(), spec.freqs_hz.end());
  fv.values.insert(fv.values.end(), spec.amps.begin(), spec.amps.end());
  return fv;
}

}  // namespace servant::audio
