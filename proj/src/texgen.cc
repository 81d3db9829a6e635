#include "tafi/texgen.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "tafi/error.h"
#include "tafi/noise.h"
#include "tafi/parallel.h"
#include "tafi/rng.h"

namespace tafi {

namespace {

constexpr double kBasePeriod = 24.0;  // pixels per noise lattice cell
constexpr int kLumaOctaves = 4;
constexpr int kChromaOctaves = 2;
constexpr double kLumaContrast = 110.0;
constexpr double kChromaContrast = 24.0;
constexpr double kSpriteSpeedGain = 2.0;

Sample ToSample(double v) {
  return static_cast<Sample>(std::clamp(std::lround(v), 0L, 255L));
}

double LumaFrom(double n, double offset = 0) {
  return 128.0 + offset + kLumaContrast * n;
}

// Luma-grid coordinates of chroma sample (i, j) in 4:2:0.
double ChromaToLuma(int i) { return 2.0 * i + 0.5; }

// Independent noise fields of one clip, keyed off the spec seed.
struct Fields {
  GradientNoise luma;
  GradientNoise cb;
  GradientNoise cr;

  explicit Fields(std::uint64_t seed, std::uint64_t salt = 0)
      : luma(DeriveSeed(seed, {1, salt})),
        cb(DeriveSeed(seed, {2, salt})),
        cr(DeriveSeed(seed, {3, salt})) {}
};

// Motion parameters of the static class, drawn once per spec.
struct StaticMotion {
  double heading;
  double turn_rate;
  double zoom_phase;
  double rot_phase;
};

StaticMotion DrawStaticMotion(const SynthSpec& spec) {
  Rng rng(DeriveSeed(spec.seed, {0x57a71c}));
  StaticMotion m;
  m.heading = rng.Uniform(0, 2 * M_PI);
  m.turn_rate = rng.Uniform(0.015, 0.035) * (rng.Coin() ? 1 : -1);
  m.zoom_phase = rng.Uniform(0, 2 * M_PI);
  m.rot_phase = rng.Uniform(0, 2 * M_PI);
  return m;
}

void RenderStatic(const SynthSpec& spec, Clip& clip) {
  const Fields fields(spec.seed);
  const double freq = spec.detail_scale / kBasePeriod;
  for (int t = 0; t < spec.n_frames; ++t) {
    const AffineWarp warp = StaticWarp(spec, t);
    Frame f(spec.width, spec.height);
    const PlaneRef y = f.plane(PlaneId::kY);
    for (int j = 0; j < y.height; ++j) {
      for (int i = 0; i < y.width; ++i) {
        const auto [u, v] = warp.Apply(i, j);
        y.at(i, j) = ToSample(LumaFrom(fields.luma.Fbm(u * freq, v * freq,
                                                       kLumaOctaves)));
      }
    }
    const PlaneRef cb = f.plane(PlaneId::kU);
    const PlaneRef cr = f.plane(PlaneId::kV);
    for (int j = 0; j < cb.height; ++j) {
      for (int i = 0; i < cb.width; ++i) {
        const auto [u, v] = warp.Apply(ChromaToLuma(i), ChromaToLuma(j));
        const double fu = u * freq * 0.5;
        const double fv = v * freq * 0.5;
        cb.at(i, j) = ToSample(128 + kChromaContrast *
                                         fields.cb.Fbm(fu, fv, kChromaOctaves));
        cr.at(i, j) = ToSample(128 + kChromaContrast *
                                         fields.cr.Fbm(fu, fv, kChromaOctaves));
      }
    }
    clip.frames.push_back(std::move(f));
  }
}

// One rigid textured part of a dyndis clip.
struct Sprite {
  double cx, cy;          // rest centre
  double ax, ay;          // oscillation amplitudes
  double wx, wy;          // angular frequencies, rad/frame
  double px, py;          // phases
  double rx, ry;          // ellipse radii
  double angle0, spin;    // orientation and rad/frame
  double freq;            // texture frequency
  double luma_offset;
};

std::vector<Sprite> DrawSprites(const SynthSpec& spec) {
  Rng rng(DeriveSeed(spec.seed, {0x5b71e}));
  const double side = std::min(spec.width, spec.height);
  std::vector<Sprite> sprites(spec.n_sprites);
  for (Sprite& s : sprites) {
    s.rx = side * rng.Uniform(0.10, 0.20);
    s.ry = side * rng.Uniform(0.10, 0.20);
    s.cx = rng.Uniform(0.2, 0.8) * spec.width;
    s.cy = rng.Uniform(0.2, 0.8) * spec.height;
    s.wx = rng.Uniform(0.04, 0.09);
    s.wy = rng.Uniform(0.04, 0.09);
    // Parts move faster than a static pan of the same amplitude.
    const double speed =
        kSpriteSpeedGain * spec.motion_amplitude * rng.Uniform(0.6, 1.4);
    const double heading = rng.Uniform(0, 2 * M_PI);
    s.ax = std::min(side / 3, std::fabs(speed * std::cos(heading)) / s.wx);
    s.ay = std::min(side / 3, std::fabs(speed * std::sin(heading)) / s.wy);
    s.px = rng.Uniform(0, 2 * M_PI);
    s.py = rng.Uniform(0, 2 * M_PI);
    s.angle0 = rng.Uniform(0, 2 * M_PI);
    s.spin = spec.motion_amplitude * rng.Uniform(-0.006, 0.006);
    s.freq = spec.detail_scale / kBasePeriod * rng.Uniform(0.8, 1.5);
    s.luma_offset = rng.Uniform(20, 40) * (rng.Coin() ? 1 : -1);
  }
  return sprites;
}

void RenderDynDis(const SynthSpec& spec, Clip& clip) {
  const Fields background(spec.seed);
  std::vector<Fields> sprite_fields;
  for (int k = 0; k < spec.n_sprites; ++k) {
    sprite_fields.emplace_back(spec.seed, 100 + k);
  }
  const auto sprites = DrawSprites(spec);
  Rng rng(DeriveSeed(spec.seed, {0xb6}));
  const double bg_heading = rng.Uniform(0, 2 * M_PI);
  const double bg_speed = 0.3 * spec.motion_amplitude;
  const double freq = spec.detail_scale / kBasePeriod;

  struct Pose {
    double cx, cy, cos_a, sin_a;
  };
  std::vector<Pose> poses(sprites.size());

  // Returns the index of the topmost sprite covering (x, y), or -1, and the
  // sprite-local coordinates.
  auto hit = [&](double x, double y, double& lx, double& ly) {
    for (int k = static_cast<int>(sprites.size()) - 1; k >= 0; --k) {
      const Pose& p = poses[k];
      const double dx = x - p.cx;
      const double dy = y - p.cy;
      const double u = p.cos_a * dx + p.sin_a * dy;
      const double v = -p.sin_a * dx + p.cos_a * dy;
      const double e = (u * u) / (sprites[k].rx * sprites[k].rx) +
                       (v * v) / (sprites[k].ry * sprites[k].ry);
      if (e <= 1.0) {
        lx = u;
        ly = v;
        return k;
      }
    }
    return -1;
  };

  for (int t = 0; t < spec.n_frames; ++t) {
    for (std::size_t k = 0; k < sprites.size(); ++k) {
      const Sprite& s = sprites[k];
      const double angle = s.angle0 + s.spin * t;
      poses[k] = {s.cx + s.ax * std::sin(s.wx * t + s.px),
                  s.cy + s.ay * std::sin(s.wy * t + s.py), std::cos(angle),
                  std::sin(angle)};
    }
    const double bg_x = bg_speed * t * std::cos(bg_heading);
    const double bg_y = bg_speed * t * std::sin(bg_heading);

    Frame f(spec.width, spec.height);
    const PlaneRef y = f.plane(PlaneId::kY);
    for (int j = 0; j < y.height; ++j) {
      for (int i = 0; i < y.width; ++i) {
        double lx, ly;
        const int k = hit(i, j, lx, ly);
        double value;
        if (k >= 0) {
          const double sf = sprites[k].freq;
          value = LumaFrom(
              sprite_fields[k].luma.Fbm(lx * sf, ly * sf, kLumaOctaves),
              sprites[k].luma_offset);
        } else {
          value = LumaFrom(background.luma.Fbm((i + bg_x) * freq,
                                               (j + bg_y) * freq,
                                               kLumaOctaves));
        }
        y.at(i, j) = ToSample(value);
      }
    }
    const PlaneRef cb = f.plane(PlaneId::kU);
    const PlaneRef cr = f.plane(PlaneId::kV);
    for (int j = 0; j < cb.height; ++j) {
      for (int i = 0; i < cb.width; ++i) {
        const double x = ChromaToLuma(i);
        const double yy = ChromaToLuma(j);
        double lx, ly;
        const int k = hit(x, yy, lx, ly);
        const Fields& src = k >= 0 ? sprite_fields[k] : background;
        const double sf = k >= 0 ? sprites[k].freq * 0.5 : freq * 0.5;
        const double u = k >= 0 ? lx : x + bg_x;
        const double v = k >= 0 ? ly : yy + bg_y;
        cb.at(i, j) = ToSample(
            128 + kChromaContrast * src.cb.Fbm(u * sf, v * sf, kChromaOctaves));
        cr.at(i, j) = ToSample(
            128 + kChromaContrast * src.cr.Fbm(u * sf, v * sf, kChromaOctaves));
      }
    }
    clip.frames.push_back(std::move(f));
  }
}

// Dense 2-D vector map sampled bilinearly with edge clamping.
struct CoordMap {
  int width = 0;
  int height = 0;
  std::vector<double> u;
  std::vector<double> v;

  CoordMap(int w, int h) : width(w), height(h), u(std::size_t(w) * h),
                           v(u.size()) {}

  void Reset(double ox, double oy) {
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        u[std::size_t(j) * width + i] = i + ox;
        v[std::size_t(j) * width + i] = j + oy;
      }
    }
  }

  std::pair<double, double> Sample(double x, double y) const {
    x = std::clamp(x, 0.0, width - 1.0);
    y = std::clamp(y, 0.0, height - 1.0);
    const int x0 = std::min(static_cast<int>(x), width - 2);
    const int y0 = std::min(static_cast<int>(y), height - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    auto lerp2 = [&](const std::vector<double>& m) {
      const double* r0 = m.data() + std::size_t(y0) * width + x0;
      const double* r1 = r0 + width;
      return (1 - fy) * ((1 - fx) * r0[0] + fx * r0[1]) +
             fy * ((1 - fx) * r1[0] + fx * r1[1]);
    };
    return {lerp2(u), lerp2(v)};
  }
};

void RenderDynCon(const SynthSpec& spec, Clip& clip) {
  const Fields texture(spec.seed);
  const GradientNoise divergent(DeriveSeed(spec.seed, {0xd17}));
  const GradientNoise rotational(DeriveSeed(spec.seed, {0x207}));
  const double freq = spec.detail_scale / kBasePeriod;
  const double turbulence = spec.advect_turbulence;
  const double flow_freq = (0.5 + turbulence) / 64.0;
  const double flow_time = 0.02 * (0.5 + turbulence);
  const double boil = 0.035 * (0.5 + turbulence);
  // Noise gradients scale with frequency; normalise to the amplitude.
  const double flow_gain = spec.motion_amplitude / (flow_freq * 1.1);
  constexpr int kPeriod = 12;
  constexpr int kFlowStep = 4;  // flow grid spacing in pixels
  constexpr double kEps = 0.25;

  const int w = spec.width;
  const int h = spec.height;
  Rng rng(DeriveSeed(spec.seed, {0xc0}));
  std::array<CoordMap, 2> layers{CoordMap(w, h), CoordMap(w, h)};
  std::array<std::pair<double, double>, 2> offsets;
  for (auto& o : offsets) o = {rng.Uniform(0, 512), rng.Uniform(0, 512)};

  const int gw = w / kFlowStep + 2;
  const int gh = h / kFlowStep + 2;
  CoordMap flow(gw, gh);
  CoordMap scratch(w, h);

  for (int t = 0; t < spec.n_frames; ++t) {
    // Divergent plus rotational flow on a coarse grid.
    const double z = t * flow_time;
    for (int gj = 0; gj < gh; ++gj) {
      for (int gi = 0; gi < gw; ++gi) {
        const double x = gi * kFlowStep * flow_freq;
        const double y = gj * kFlowStep * flow_freq;
        const double e = kEps;
        const double px = (divergent.At(x + e, y, z) -
                           divergent.At(x - e, y, z)) / (2 * e);
        const double py = (divergent.At(x, y + e, z) -
                           divergent.At(x, y - e, z)) / (2 * e);
        const double qx = (rotational.At(x + e, y, z + 7.3) -
                           rotational.At(x - e, y, z + 7.3)) / (2 * e);
        const double qy = (rotational.At(x, y + e, z + 7.3) -
                           rotational.At(x, y - e, z + 7.3)) / (2 * e);
        const std::size_t idx = std::size_t(gj) * gw + gi;
        flow.u[idx] = flow_gain * flow_freq * (px + qy);
        flow.v[idx] = flow_gain * flow_freq * (py - qx);
      }
    }

    std::array<double, 2> weights{};
    for (int l = 0; l < 2; ++l) {
      const int age = (t + l * kPeriod / 2) % kPeriod;
      CoordMap& map = layers[l];
      if (age == 0 || t == 0) {
        map.Reset(offsets[l].first + t * 3.1, offsets[l].second - t * 1.7);
        if (age != 0) {
          // Layer that starts mid-cycle at t = 0: pre-age it in place.
          for (int s = 0; s < age; ++s) {
            for (int j = 0; j < h; ++j) {
              for (int i = 0; i < w; ++i) {
                const auto [fu, fv] = flow.Sample(double(i) / kFlowStep,
                                                  double(j) / kFlowStep);
                const auto [cu, cv] = map.Sample(i - fu, j - fv);
                scratch.u[std::size_t(j) * w + i] = cu;
                scratch.v[std::size_t(j) * w + i] = cv;
              }
            }
            std::swap(map.u, scratch.u);
            std::swap(map.v, scratch.v);
          }
        }
      } else {
        // Semi-Lagrangian step: coordinates flow with the field.
        for (int j = 0; j < h; ++j) {
          for (int i = 0; i < w; ++i) {
            const auto [fu, fv] =
                flow.Sample(double(i) / kFlowStep, double(j) / kFlowStep);
            const auto [cu, cv] = map.Sample(i - fu, j - fv);
            scratch.u[std::size_t(j) * w + i] = cu;
            scratch.v[std::size_t(j) * w + i] = cv;
          }
        }
        std::swap(map.u, scratch.u);
        std::swap(map.v, scratch.v);
      }
      const double phase = double(age) / kPeriod;
      weights[l] = 1.0 - std::fabs(2.0 * phase - 1.0);
    }
    const double norm =
        std::sqrt(weights[0] * weights[0] + weights[1] * weights[1]);
    const double tau = t * boil;

    Frame f(w, h);
    const PlaneRef y = f.plane(PlaneId::kY);
    for (int j = 0; j < h; ++j) {
      for (int i = 0; i < w; ++i) {
        const std::size_t idx = std::size_t(j) * w + i;
        double n = 0;
        for (int l = 0; l < 2; ++l) {
          if (weights[l] == 0) continue;
          n += weights[l] * texture.luma.Fbm(layers[l].u[idx] * freq,
                                             layers[l].v[idx] * freq, tau,
                                             kLumaOctaves);
        }
        // 3-D noise has a smaller spread than 2-D; the factor evens contrast.
        y.at(i, j) = ToSample(LumaFrom(1.4 * n / norm));
      }
    }
    const PlaneRef cb = f.plane(PlaneId::kU);
    const PlaneRef cr = f.plane(PlaneId::kV);
    for (int j = 0; j < cb.height; ++j) {
      for (int i = 0; i < cb.width; ++i) {
        const std::size_t idx = std::size_t(2 * j) * w + 2 * i;
        double nb = 0;
        double nr = 0;
        for (int l = 0; l < 2; ++l) {
          if (weights[l] == 0) continue;
          const double u = layers[l].u[idx] * freq * 0.5;
          const double v = layers[l].v[idx] * freq * 0.5;
          nb += weights[l] * texture.cb.Fbm(u, v, tau, kChromaOctaves);
          nr += weights[l] * texture.cr.Fbm(u, v, tau, kChromaOctaves);
        }
        cb.at(i, j) = ToSample(128 + kChromaContrast * nb / norm);
        cr.at(i, j) = ToSample(128 + kChromaContrast * nr / norm);
      }
    }
    clip.frames.push_back(std::move(f));
  }
}

}  // namespace

void SynthSpec::Validate() const {
  if (width <= 0 || height <= 0 || width % 2 || height % 2) {
    throw Error(ErrorCode::kInvalidSpec, "synth geometry must be even, > 0");
  }
  if (width < 16 || height < 16) {
    throw Error(ErrorCode::kInvalidSpec, "synth geometry below 16x16");
  }
  if (n_frames < 3) {
    throw Error(ErrorCode::kInvalidSpec, "synth clips need >= 3 frames");
  }
  if (fps.num == 0 || fps.den == 0) {
    throw Error(ErrorCode::kInvalidSpec, "zero frame rate");
  }
  if (!(motion_amplitude >= 0) || !std::isfinite(motion_amplitude)) {
    throw Error(ErrorCode::kInvalidSpec, "motion_amplitude must be >= 0");
  }
  if (!(detail_scale > 0) || !std::isfinite(detail_scale)) {
    throw Error(ErrorCode::kInvalidSpec, "detail_scale must be > 0");
  }
  if (cls == TextureClass::kDynDis && n_sprites < 2) {
    throw Error(ErrorCode::kInvalidSpec, "dyndis needs >= 2 sprites");
  }
  if (!(advect_turbulence >= 0)) {
    throw Error(ErrorCode::kInvalidSpec, "advect_turbulence must be >= 0");
  }
}

AffineWarp StaticWarp(const SynthSpec& spec, int t) {
  const StaticMotion m = DrawStaticMotion(spec);
  const double amp = spec.motion_amplitude;
  // Constant speed along a slowly turning heading.
  const double w = m.turn_rate;
  const double dx = amp / w * (std::sin(m.heading + w * t) - std::sin(m.heading));
  const double dy = amp / w * (std::cos(m.heading) - std::cos(m.heading + w * t));
  // Gentle zoom and roll, both vanishing at t = 0 and when amp = 0.
  const double scale =
      std::exp(0.03 * amp * (std::sin(0.05 * t + m.zoom_phase) -
                             std::sin(m.zoom_phase)));
  const double angle =
      0.02 * amp * (std::sin(0.04 * t + m.rot_phase) - std::sin(m.rot_phase));
  const double cx = spec.width / 2.0;
  const double cy = spec.height / 2.0;
  AffineWarp warp;
  warp.a = scale * std::cos(angle);
  warp.b = -scale * std::sin(angle);
  warp.c = scale * std::sin(angle);
  warp.d = scale * std::cos(angle);
  warp.tx = cx + dx - (warp.a * cx + warp.b * cy);
  warp.ty = cy + dy - (warp.c * cx + warp.d * cy);
  return warp;
}

Clip SynthClip(const SynthSpec& spec, std::string name) {
  spec.Validate();
  Clip clip;
  if (name.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%016llx",
                  static_cast<unsigned long long>(spec.seed));
    name = std::string(ClassName(spec.cls)) + buf;
  }
  clip.name = std::move(name);
  clip.fps = spec.fps;
  clip.label = spec.cls;
  clip.frames.reserve(spec.n_frames);
  switch (spec.cls) {
    case TextureClass::kStatic: RenderStatic(spec, clip); break;
    case TextureClass::kDynDis: RenderDynDis(spec, clip); break;
    case TextureClass::kDynCon: RenderDynCon(spec, clip); break;
  }
  return clip;
}

std::uint64_t CorpusClipSeed(std::uint64_t seed, TextureClass cls, int index) {
  return DeriveSeed(seed, {static_cast<std::uint64_t>(cls) + 1,
                           static_cast<std::uint64_t>(index)});
}

SynthSpec CorpusClipSpec(const SynthSpec& base, std::uint64_t seed,
                         TextureClass cls, int index) {
  SynthSpec spec = base;
  spec.cls = cls;
  spec.seed = CorpusClipSeed(seed, cls, index);
  Rng rng(DeriveSeed(spec.seed, {0x717}));
  spec.motion_amplitude =
      base.motion_amplitude * rng.Uniform(kAmplitudeJitterLo, kAmplitudeJitterHi);
  spec.detail_scale =
      base.detail_scale * rng.Uniform(kDetailJitterLo, kDetailJitterHi);
  spec.n_sprites = std::max(2, base.n_sprites - 1 + int(rng.Index(3)));
  spec.advect_turbulence = base.advect_turbulence * rng.Uniform(0.8, 1.2);
  return spec;
}

std::vector<Clip> SynthCorpus(int per_class, const SynthSpec& base,
                              std::uint64_t seed, const std::string& prefix,
                              int workers) {
  if (per_class < 1) {
    throw Error(ErrorCode::kInvalidSpec, "per_class must be >= 1");
  }
  base.Validate();
  std::vector<Clip> clips(3 * static_cast<std::size_t>(per_class));
  ParallelFor(clips.size(), workers, [&](std::size_t i) {
    const TextureClass cls = kAllClasses[i / per_class];
    const int index = static_cast<int>(i % per_class);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", index);
    clips[i] = SynthClip(CorpusClipSpec(base, seed, cls, index),
                         prefix + "_" + std::string(ClassName(cls)) + "_" + buf);
  });
  return clips;
}

}  // namespace tafi
