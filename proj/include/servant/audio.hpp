#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "servant/feature_vector.hpp"

namespace servant::audio {

/// Normalized mono PCM. Samples lie in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = 0;
  std::string source_id;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// One-sided magnitude spectrum, DC bin first.
struct Spectrum {
  std::vector<double> freqs_hz;
  std::vector<double> amps;
};

// ---------------------------------------------------------------------------
// WAV I/O (RIFF/WAVE, 16-bit PCM, 1 or 2 channels)
// ---------------------------------------------------------------------------

/// Decodes a RIFF/WAVE byte buffer. Stereo is downmixed by averaging the two
/// channels of each frame and samples are scaled by 1/32768.
///
/// Throws Error with MalformedRiff, UnsupportedFormat or EmptyData.
AudioClip decode_wav(std::span<const std::uint8_t> bytes);

/// Encodes a clip as mono 16-bit PCM. Samples are rounded to the nearest
/// step of 1/32768 and saturated to the int16 range.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);

AudioClip read_wav_file(const std::string& path);
void write_wav_file(const std::string& path, const AudioClip& clip);

// ---------------------------------------------------------------------------
// Spectral analysis
// ---------------------------------------------------------------------------

/// Leading window of `seconds` (floor(seconds * rate) samples).
/// Throws ClipTooShort when the clip is shorter than the window.
AudioClip analysis_window(const AudioClip& clip, double seconds = 5.0);

std::size_t next_power_of_two(std::size_t n);

/// In-place iterative radix-2 FFT. data.size() must be a power of two.
/// With `inverse` set the result is scaled by 1/N.
void fft_in_place(std::vector<std::complex<double>>& data, bool inverse = false);

/// Zero-pads to the next power of two N and returns the N/2+1 bin magnitude
/// spectrum with freqs_hz[k] = k * rate / N.
Spectrum magnitude_spectrum(const AudioClip& clip);

/// Frequencies followed by amplitudes, length 2n.
FeatureVector acoustic_features(const Spectrum& spec);

// ---------------------------------------------------------------------------
// Synthetic ambience
// ---------------------------------------------------------------------------

/// Energy between low_hz and high_hz (inclusive) at relative level `gain`.
struct SpectralBand {
  double low_hz = 0.0;
  double high_hz = 0.0;
  double gain = 1.0;
};

/// Sums sinusoids weighted by the band gains, each with a seeded random
/// phase, then clips into [-1, 1]. Components lie on FFT bins of the
/// analysis transform for a clip of this length, about 4 Hz apart starting
/// at each band's low edge, so a band narrowed to one bin frequency yields a
/// single spectral peak.
///
/// Throws BadProfile for an empty profile, negative gains, inverted bands,
/// or a profile that covers no bin.
AudioClip synth_ambient(std::span<const SpectralBand> profile, double seconds,
                        int rate_hz, std::uint64_t seed);

}  // namespace servant::audio
