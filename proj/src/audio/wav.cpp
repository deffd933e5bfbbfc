#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "servant/audio.hpp"
#include "servant/error.hpp"

namespace servant::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

std::int16_t read_i16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::int16_t>(read_u16(b, at));
}

bool has_tag(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !has_tag(bytes, 0, "RIFF") || !has_tag(bytes, 8, "WAVE"))
    throw Error(ErrorCode::MalformedRiff, "missing RIFF/WAVE magic");

  const std::uint64_t riff_size = read_u32(bytes, 4);
  if (riff_size < 4 || riff_size + 8 > bytes.size())
    throw Error(ErrorCode::MalformedRiff, "RIFF size exceeds buffer");
  const std::size_t end = static_cast<std::size_t>(riff_size + 8);

  bool have_fmt = false;
  FmtChunk fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= end) {
    const std::uint64_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > end)
      throw Error(ErrorCode::MalformedRiff, "chunk overruns RIFF container");

    if (has_tag(bytes, pos, "fmt ")) {
      if (size < 16) throw Error(ErrorCode::MalformedRiff, "fmt chunk shorter than 16 bytes");
      fmt.format = read_u16(bytes, body);
      fmt.channels = read_u16(bytes, body + 2);
      fmt.sample_rate = read_u32(bytes, body + 4);
      fmt.block_align = read_u16(bytes, body + 12);
      fmt.bits = read_u16(bytes, body + 14);
      have_fmt = true;
    } else if (has_tag(bytes, pos, "data")) {
      data = bytes.subspan(body, static_cast<std::size_t>(size));
      have_data = true;
    }
    // Chunks are word aligned.
    pos = body + static_cast<std::size_t>(size) + (size & 1);
  }

  if (!have_fmt) throw Error(ErrorCode::MalformedRiff, "no fmt chunk");
  if (!have_data) throw Error(ErrorCode::MalformedRiff, "no data chunk");
  if (fmt.format != kFormatPcm)
    throw Error(ErrorCode::UnsupportedFormat,
                "format code " + std::to_string(fmt.format) + ", only PCM (1) is supported");
  if (fmt.bits != 16)
    throw Error(ErrorCode::UnsupportedFormat,
                std::to_string(fmt.bits) + "-bit samples, only 16-bit is supported");
  if (fmt.channels != 1 && fmt.channels != 2)
    throw Error(ErrorCode::UnsupportedFormat,
                std::to_string(fmt.channels) + " channels, only mono/stereo supported");
  if (fmt.sample_rate == 0 || fmt.sample_rate > 0x7fffffff)
    throw Error(ErrorCode::MalformedRiff, "invalid sample rate");
  if (fmt.block_align != 2 * fmt.channels)
    throw Error(ErrorCode::MalformedRiff, "block align inconsistent with channel count");

  const std::size_t frame_bytes = fmt.block_align;
  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) throw Error(ErrorCode::EmptyData, "data chunk holds no complete frame");

  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(fmt.sample_rate);
  clip.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t at = f * frame_bytes;
    if (fmt.channels == 1) {
      clip.samples[f] = read_i16(data, at) / 32768.0;
    } else {
      const double sum = static_cast<double>(read_i16(data, at)) + read_i16(data, at + 2);
      clip.samples[f] = sum / 2.0 / 32768.0;
    }
  }
  return clip;
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : clip.samples) {
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

AudioClip read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  AudioClip clip = decode_wav(bytes);
  clip.source_id = path;
  return clip;
}

void write_wav_file(const std::string& path, const AudioClip& clip) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

}  // namespace servant::audio
