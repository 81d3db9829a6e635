#ifndef TAFI_MEDIA_H_
#define TAFI_MEDIA_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tafi/texture_class.h"

namespace tafi {

using Sample = std::uint8_t;

// Read-only view of one image plane.
struct PlaneView {
  const Sample* data = nullptr;
  int width = 0;
  int height = 0;

  Sample at(int x, int y) const { return data[y * width + x]; }
  const Sample* row(int y) const { return data + y * width; }
};

struct PlaneRef {
  Sample* data = nullptr;
  int width = 0;
  int height = 0;

  Sample& at(int x, int y) const { return data[y * width + x]; }
  Sample* row(int y) const { return data + y * width; }
};

enum class PlaneId { kY = 0, kU = 1, kV = 2 };

// 8-bit planar 4:2:0 picture. Dimensions must be even and positive.
class Frame {
 public:
  Frame() = default;
  // Allocates a frame filled with the given luma and chroma values.
  Frame(int width, int height, Sample luma = 0, Sample chroma = 128);
  // Takes ownership of planes; throws kGeometryMismatch/kOddGeometry.
  Frame(int width, int height, std::vector<Sample> y, std::vector<Sample> u,
        std::vector<Sample> v);

  int width() const { return width_; }
  int height() const { return height_; }
  int chroma_width() const { return width_ / 2; }
  int chroma_height() const { return height_ / 2; }
  bool empty() const { return width_ == 0; }

  PlaneView plane(PlaneId id) const;
  PlaneRef plane(PlaneId id);
  PlaneView luma() const { return plane(PlaneId::kY); }
  PlaneRef luma() { return plane(PlaneId::kY); }

  std::span<const Sample> samples(PlaneId id) const;
  std::span<Sample> samples(PlaneId id);

  bool same_geometry(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Sample> y_;
  std::vector<Sample> u_;
  std::vector<Sample> v_;
};

struct Rational {
  std::uint32_t num = 25;
  std::uint32_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

// Ordered frames of one geometry with frame rate and optional texture label.
struct Clip {
  std::string name;
  std::vector<Frame> frames;
  Rational fps;
  std::optional<TextureClass> label;

  int width() const { return frames.empty() ? 0 : frames.front().width(); }
  int height() const { return frames.empty() ? 0 : frames.front().height(); }
  int size() const { return static_cast<int>(frames.size()); }

  // Throws kInvalidSpec / kGeometryMismatch when the clip invariants fail.
  void Validate() const;

  // Equality of content: frames, rate and label. The name is not compared.
  bool SameContent(const Clip& other) const;
};

// YUV4MPEG2 stream parsing. The label is carried in an "XTAFI_LABEL=" comment
// parameter so labelled clips survive a round trip.
Clip ReadY4m(std::span<const std::uint8_t> stream, std::string name = {});
std::vector<std::uint8_t> WriteY4m(const Clip& clip);

// Headerless planar 4:2:0 frames laid back to back.
Clip ReadRawYuv(std::span<const std::uint8_t> bytes, int width, int height,
                Rational fps, std::string name = {});

Clip LoadY4mFile(const std::filesystem::path& path, std::string name = {});
Clip LoadRawFile(const std::filesystem::path& path, int width, int height,
                 Rational fps, std::string name = {});
void SaveY4mFile(const Clip& clip, const std::filesystem::path& path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Copies a w x h region at (x, y). All four values must be even.
Frame ExtractPatch(const Frame& frame, int x, int y, int w, int h);

}  // namespace tafi

#endif  // TAFI_MEDIA_H_
