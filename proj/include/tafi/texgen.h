#ifndef TAFI_TEXGEN_H_
#define TAFI_TEXGEN_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tafi/media.h"
#include "tafi/texture_class.h"

namespace tafi {

// Parameters of one synthetic homogeneous texture clip.
struct SynthSpec {
  TextureClass cls = TextureClass::kStatic;
  int width = 192;
  int height = 192;
  int n_frames = 96;
  Rational fps{25, 1};
  double motion_amplitude = 2.0;   // pixels per frame
  double detail_scale = 1.0;       // multiplies the base spatial frequency
  int n_sprites = 6;               // dyndis only
  double advect_turbulence = 1.0;  // dyncon only
  std::uint64_t seed = 1;

  // Throws kInvalidSpec.
  void Validate() const;
};

// Affine map from frame pixel coordinates to texture-plane coordinates.
struct AffineWarp {
  double a = 1, b = 0, c = 0, d = 1;
  double tx = 0, ty = 0;

  std::pair<double, double> Apply(double x, double y) const {
    return {a * x + b * y + tx, c * x + d * y + ty};
  }
};

// The global similarity used by static clips at frame t. Frame 0 samples the
// texture plane at the identity, so frame t equals frame 0 resampled at
// StaticWarp(spec, t).Apply(x, y).
AffineWarp StaticWarp(const SynthSpec& spec, int t);

// Renders a labelled clip. Output is a pure function of the spec.
Clip SynthClip(const SynthSpec& spec, std::string name = {});

// Relative jitter applied per clip by SynthCorpus.
inline constexpr double kAmplitudeJitterLo = 0.75;
inline constexpr double kAmplitudeJitterHi = 1.25;
inline constexpr double kDetailJitterLo = 0.8;
inline constexpr double kDetailJitterHi = 1.25;

// Per-clip seed derived from (seed, class, index).
std::uint64_t CorpusClipSeed(std::uint64_t seed, TextureClass cls, int index);

// Spec of clip `index` of class `cls` in a corpus built from `base`.
SynthSpec CorpusClipSpec(const SynthSpec& base, std::uint64_t seed,
                         TextureClass cls, int index);

// 3 * per_class labelled clips named "<prefix>_<class>_<index>", ordered by
// class then index.
std::vector<Clip> SynthCorpus(int per_class, const SynthSpec& base,
                              std::uint64_t seed,
                              const std::string& prefix = "clip",
                              int workers = 0);

}  // namespace tafi

#endif  // TAFI_TEXGEN_H_
