#include "tafi/media.h"

#include <charconv>
#include <fstream>
#include <iterator>
#include <utility>

#include "tafi/error.h"

namespace tafi {

std::string_view ClassName(TextureClass cls) {
  switch (cls) {
    case TextureClass::kStatic: return "static";
    case TextureClass::kDynDis: return "dyndis";
    case TextureClass::kDynCon: return "dyncon";
  }
  return "static";
}

std::optional<TextureClass> ParseClass(std::string_view name) {
  for (TextureClass cls : kAllClasses) {
    if (ClassName(cls) == name) return cls;
  }
  return std::nullopt;
}

namespace {

void CheckDimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidSpec, "frame dimensions must be positive");
  }
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::kOddGeometry,
                "4:2:0 frames need even dimensions, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Frame::Frame(int width, int height, Sample luma, Sample chroma)
    : width_(width), height_(height) {
  CheckDimensions(width, height);
  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  y_.assign(luma_size, luma);
  u_.assign(luma_size / 4, chroma);
  v_.assign(luma_size / 4, chroma);
}

Frame::Frame(int width, int height, std::vector<Sample> y,
             std::vector<Sample> u, std::vector<Sample> v)
    : width_(width),
      height_(height),
      y_(std::move(y)),
      u_(std::move(u)),
      v_(std::move(v)) {
  CheckDimensions(width, height);
  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  if (y_.size() != luma_size || u_.size() != luma_size / 4 ||
      v_.size() != luma_size / 4) {
    throw Error(ErrorCode::kGeometryMismatch,
                "plane lengths do not match declared dimensions");
  }
}

PlaneView Frame::plane(PlaneId id) const {
  switch (id) {
    case PlaneId::kY: return {y_.data(), width_, height_};
    case PlaneId::kU: return {u_.data(), width_ / 2, height_ / 2};
    case PlaneId::kV: return {v_.data(), width_ / 2, height_ / 2};
  }
  return {};
}

PlaneRef Frame::plane(PlaneId id) {
  switch (id) {
    case PlaneId::kY: return {y_.data(), width_, height_};
    case PlaneId::kU: return {u_.data(), width_ / 2, height_ / 2};
    case PlaneId::kV: return {v_.data(), width_ / 2, height_ / 2};
  }
  return {};
}

std::span<const Sample> Frame::samples(PlaneId id) const {
  switch (id) {
    case PlaneId::kY: return y_;
    case PlaneId::kU: return u_;
    case PlaneId::kV: return v_;
  }
  return {};
}

std::span<Sample> Frame::samples(PlaneId id) {
  switch (id) {
    case PlaneId::kY: return y_;
    case PlaneId::kU: return u_;
    case PlaneId::kV: return v_;
  }
  return {};
}

void Clip::Validate() const {
  if (frames.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "clip '" + name + "' has no frames");
  }
  if (fps.num == 0 || fps.den == 0) {
    throw Error(ErrorCode::kInvalidSpec, "clip '" + name + "' has zero fps");
  }
  for (const Frame& f : frames) {
    if (!f.same_geometry(frames.front())) {
      throw Error(ErrorCode::kGeometryMismatch,
                  "clip '" + name + "' mixes frame sizes");
    }
  }
}

bool Clip::SameContent(const Clip& other) const {
  return fps == other.fps && label == other.label && frames == other.frames;
}

namespace {

constexpr std::string_view kMagic = "YUV4MPEG2";
constexpr std::string_view kFrameMarker = "FRAME";
constexpr std::string_view kLabelTag = "TAFI_LABEL=";

int ParseInt(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kMalformedHeader,
                "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::pair<std::uint32_t, std::uint32_t> ParseRatio(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedHeader,
                "ratio without ':' '" + std::string(text) + "'");
  }
  const int num = ParseInt(text.substr(0, colon), "ratio");
  const int den = ParseInt(text.substr(colon + 1), "ratio");
  if (num < 0 || den < 0) {
    throw Error(ErrorCode::kMalformedHeader, "negative ratio");
  }
  return {static_cast<std::uint32_t>(num), static_cast<std::uint32_t>(den)};
}

// Splits a header line on single spaces, skipping empty tokens.
std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const std::size_t next = line.find(' ', pos);
    const std::size_t end = next == std::string_view::npos ? line.size() : next;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

bool IsSupportedColorspace(std::string_view tag) {
  return tag == "420" || tag == "420jpeg" || tag == "420paldv" ||
         tag == "420mpeg2";
}

}  // namespace

Clip ReadY4m(std::span<const std::uint8_t> stream, std::string name) {
  const std::string_view text(reinterpret_cast<const char*>(stream.data()),
                              stream.size());
  if (!text.starts_with(kMagic)) {
    throw Error(ErrorCode::kMalformedHeader, "missing YUV4MPEG2 signature");
  }
  const std::size_t header_end = text.find('\n');
  if (header_end == std::string_view::npos) {
    throw Error(ErrorCode::kMalformedHeader, "unterminated stream header");
  }
  const auto tokens = Tokens(text.substr(0, header_end));
  if (tokens.empty() || tokens.front() != kMagic) {
    throw Error(ErrorCode::kMalformedHeader, "bad signature token");
  }

  Clip clip;
  clip.name = std::move(name);
  int width = -1;
  int height = -1;
  bool have_fps = false;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::string_view tok = tokens[i];
    const char key = tok.front();
    const std::string_view value = tok.substr(1);
    switch (key) {
      case 'W': width = ParseInt(value, "width"); break;
      case 'H': height = ParseInt(value, "height"); break;
      case 'F': {
        const auto [num, den] = ParseRatio(value);
        if (num == 0 || den == 0) {
          throw Error(ErrorCode::kMalformedHeader, "zero frame rate");
        }
        clip.fps = {num, den};
        have_fps = true;
        break;
      }
      case 'C':
        if (!IsSupportedColorspace(value)) {
          throw Error(ErrorCode::kUnsupportedColorspace,
                      "colorspace C" + std::string(value));
        }
        break;
      case 'A': ParseRatio(value); break;
      case 'I': break;
      case 'X':
        if (value.starts_with(kLabelTag)) {
          clip.label = ParseClass(value.substr(kLabelTag.size()));
          if (!clip.label) {
            throw Error(ErrorCode::kMalformedHeader,
                        "unknown texture label " + std::string(value));
          }
        }
        break;
      default:
        throw Error(ErrorCode::kMalformedHeader,
                    "unknown header parameter '" + std::string(tok) + "'");
    }
  }
  if (width <= 0 || height <= 0 || !have_fps) {
    throw Error(ErrorCode::kMalformedHeader, "W, H and F are required");
  }
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::kOddGeometry, "odd Y4M frame dimensions");
  }

  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  const std::size_t chroma_size = luma_size / 4;
  std::size_t pos = header_end + 1;
  while (pos < text.size()) {
    const std::size_t line_end = text.find('\n', pos);
    if (line_end == std::string_view::npos) {
      throw Error(ErrorCode::kTruncatedFrame, "unterminated FRAME marker");
    }
    const std::string_view marker = text.substr(pos, line_end - pos);
    if (!marker.starts_with(kFrameMarker) ||
        (marker.size() > kFrameMarker.size() &&
         marker[kFrameMarker.size()] != ' ')) {
      throw Error(ErrorCode::kMalformedHeader, "expected FRAME marker");
    }
    pos = line_end + 1;
    if (stream.size() - pos < luma_size + 2 * chroma_size) {
      throw Error(ErrorCode::kTruncatedFrame,
                  "frame " + std::to_string(clip.frames.size()) +
                      " payload is short");
    }
    const auto* p = stream.data() + pos;
    std::vector<Sample> y(p, p + luma_size);
    std::vector<Sample> u(p + luma_size, p + luma_size + chroma_size);
    std::vector<Sample> v(p + luma_size + chroma_size,
                          p + luma_size + 2 * chroma_size);
    clip.frames.emplace_back(width, height, std::move(y), std::move(u),
                             std::move(v));
    pos += luma_size + 2 * chroma_size;
  }
  if (clip.frames.empty()) {
    throw Error(ErrorCode::kMalformedHeader, "stream contains no frames");
  }
  return clip;
}

std::vector<std::uint8_t> WriteY4m(const Clip& clip) {
  clip.Validate();
  std::string header = std::string(kMagic) + " W" +
                       std::to_string(clip.width()) + " H" +
                       std::to_string(clip.height()) + " F" +
                       std::to_string(clip.fps.num) + ":" +
                       std::to_string(clip.fps.den);
  if (clip.label) {
    header += " X" + std::string(kLabelTag) + std::string(ClassName(*clip.label));
  }
  header += '\n';

  const std::size_t frame_bytes =
      static_cast<std::size_t>(clip.width()) * clip.height() * 3 / 2;
  std::vector<std::uint8_t> out;
  out.reserve(header.size() +
              clip.frames.size() * (frame_bytes + kFrameMarker.size() + 1));
  out.insert(out.end(), header.begin(), header.end());
  for (const Frame& f : clip.frames) {
    out.insert(out.end(), kFrameMarker.begin(), kFrameMarker.end());
    out.push_back('\n');
    for (PlaneId id : {PlaneId::kY, PlaneId::kU, PlaneId::kV}) {
      const auto s = f.samples(id);
      out.insert(out.end(), s.begin(), s.end());
    }
  }
  return out;
}

Clip ReadRawYuv(std::span<const std::uint8_t> bytes, int width, int height,
                Rational fps, std::string name) {
  if (width <= 0 || height <= 0 || fps.num == 0 || fps.den == 0) {
    throw Error(ErrorCode::kInvalidSpec, "raw clip needs geometry and fps");
  }
  if (width % 2 != 0 || height % 2 != 0) {
    throw Error(ErrorCode::kOddGeometry, "odd raw frame dimensions");
  }
  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  const std::size_t frame_bytes = luma_size * 3 / 2;
  if (bytes.empty() || bytes.size() % frame_bytes != 0) {
    throw Error(ErrorCode::kTruncatedFrame,
                "raw size " + std::to_string(bytes.size()) +
                    " is not a multiple of the frame size");
  }
  Clip clip;
  clip.name = std::move(name);
  clip.fps = fps;
  for (std::size_t off = 0; off < bytes.size(); off += frame_bytes) {
    const auto* p = bytes.data() + off;
    clip.frames.emplace_back(
        width, height, std::vector<Sample>(p, p + luma_size),
        std::vector<Sample>(p + luma_size, p + luma_size * 5 / 4),
        std::vector<Sample>(p + luma_size * 5 / 4, p + frame_bytes));
  }
  return clip;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kWriteFailed, "cannot write " + path.string());
  }
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  WriteFileBytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()),
                        text.size()});
}

Clip LoadY4mFile(const std::filesystem::path& path, std::string name) {
  const auto bytes = ReadFileBytes(path);
  return ReadY4m(bytes, name.empty() ? path.stem().string() : std::move(name));
}

Clip LoadRawFile(const std::filesystem::path& path, int width, int height,
                 Rational fps, std::string name) {
  const auto bytes = ReadFileBytes(path);
  return ReadRawYuv(bytes, width, height, fps,
                    name.empty() ? path.stem().string() : std::move(name));
}

void SaveY4mFile(const Clip& clip, const std::filesystem::path& path) {
  WriteFileBytes(path, WriteY4m(clip));
}

Frame ExtractPatch(const Frame& frame, int x, int y, int w, int h) {
  if (x % 2 != 0 || y % 2 != 0 || w % 2 != 0 || h % 2 != 0) {
    throw Error(ErrorCode::kOddGeometry, "patch origin and size must be even");
  }
  if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > frame.width() ||
      y + h > frame.height()) {
    throw Error(ErrorCode::kOutOfBounds, "patch exceeds frame bounds");
  }
  Frame patch(w, h);
  for (PlaneId id : {PlaneId::kY, PlaneId::kU, PlaneId::kV}) {
    const int shift = id == PlaneId::kY ? 0 : 1;
    const PlaneView src = frame.plane(id);
    const PlaneRef dst = patch.plane(id);
    for (int row = 0; row < dst.height; ++row) {
      const Sample* s = src.row((y >> shift) + row) + (x >> shift);
      std::copy(s, s + dst.width, dst.row(row));
    }
  }
  return patch;
}

}  // namespace tafi
