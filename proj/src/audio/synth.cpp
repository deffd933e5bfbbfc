#include <algorithm>
#include <cmath>
#include <numbers>

#include "servant/audio.hpp"
#include "servant/error.hpp"
#include "servant/random.hpp"

namespace servant::audio {

namespace {

// Peak level of the summed components before clipping; keeps typical
// profiles well inside [-1, 1].
constexpr double kLevel = 0.25;

// Components sit on a comb this far apart, starting at each band's low
// edge. Zero-padding spreads every component over neighbouring bins, and
// with a dense comb the random-phase overlap swamps the envelope.
constexpr double kComponentSpacingHz = 4.0;

}  // namespace

AudioClip synth_ambient(std::span<const SpectralBand> profile, double seconds, int rate_hz,
                        std::uint64_t seed) {
  if (profile.empty()) throw Error(ErrorCode::BadProfile, "profile needs at least one band");
  if (rate_hz <= 0 || !(seconds > 0.0))
    throw Error(ErrorCode::BadProfile, "rate and duration must be positive");
  for (const auto& band : profile) {
    if (!(band.gain >= 0.0) || !(band.low_hz >= 0.0) || band.high_hz < band.low_hz)
      throw Error(ErrorCode::BadProfile, "bands need 0 <= low <= high and gain >= 0");
  }

  const auto length = static_cast<std::size_t>(std::floor(seconds * rate_hz));
  if (length == 0) throw Error(ErrorCode::BadProfile, "duration shorter than one sample");
  const std::size_t n = next_power_of_two(length);
  const double bin_hz = static_cast<double>(rate_hz) / static_cast<double>(n);

  const auto step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(kComponentSpacingHz / bin_hz)));

  // Per-bin gain; overlapping bands add.
  std::vector<double> gains(n / 2 + 1, 0.0);
  for (const auto& band : profile) {
    const auto lo = static_cast<std::size_t>(std::ceil(band.low_hz / bin_hz - 1e-9));
    const auto hi = static_cast<std::size_t>(std::floor(band.high_hz / bin_hz + 1e-9));
    for (std::size_t k = std::max<std::size_t>(lo, 1); k <= hi && k < n / 2; k += step)
      gains[k] += band.gain;
  }
  const auto components =
      static_cast<double>(std::count_if(gains.begin(), gains.end(), [](double g) { return g > 0; }));
  if (components == 0)
    throw Error(ErrorCode::BadProfile, "profile covers no FFT bin between DC and Nyquist");

  // Each component is a * cos(2 pi k t / n + phase); built as a Hermitian
  // spectrum and inverted in one pass.
  Rng rng(seed);
  const double amplitude = kLevel / std::sqrt(components);
  std::vector<std::complex<double>> spec(n);
  for (std::size_t k = 1; k < n / 2; ++k) {
    if (gains[k] <= 0) continue;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto c = std::polar(amplitude * gains[k] * static_cast<double>(n) / 2.0, phase);
    spec[k] = c;
    spec[n - k] = std::conj(c);
  }
  fft_in_place(spec, /*inverse=*/true);

  AudioClip clip;
  clip.sample_rate_hz = rate_hz;
  clip.source_id = "synth:" + std::to_string(seed);
  clip.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i) clip.samples[i] = std::clamp(spec[i].real(), -1.0, 1.0);
  return clip;
}

}  // namespace servant::audio
