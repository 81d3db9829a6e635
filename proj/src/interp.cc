#include "tafi/interp.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "tafi/error.h"

namespace tafi {

std::string_view ObmcName(Obmc v) {
  return v == Obmc::kOff ? "off" : "raised_cosine";
}
std::string_view BlendName(Blend v) {
  return v == Blend::kAverage ? "average" : "sad_weighted";
}
std::string_view ModeName(InterpMode v) {
  return v == InterpMode::kMci ? "mci" : "frame_average";
}

std::optional<Obmc> ParseObmc(std::string_view s) {
  if (s == "off") return Obmc::kOff;
  if (s == "raised_cosine") return Obmc::kRaisedCosine;
  return std::nullopt;
}
std::optional<Blend> ParseBlend(std::string_view s) {
  if (s == "average") return Blend::kAverage;
  if (s == "sad_weighted") return Blend::kSadWeighted;
  return std::nullopt;
}
std::optional<InterpMode> ParseMode(std::string_view s) {
  if (s == "mci") return InterpMode::kMci;
  if (s == "frame_average") return InterpMode::kFrameAverage;
  return std::nullopt;
}

void InterpParams::Validate() const {
  if (block_size != 8 && block_size != 16 && block_size != 32) {
    throw Error(ErrorCode::kInvalidSpec,
                "block_size must be 8, 16 or 32, got " +
                    std::to_string(block_size));
  }
  if (search_range < 0 || search_range > 32) {
    throw Error(ErrorCode::kInvalidSpec, "search_range must be in [0, 32]");
  }
  if (!(smoothness_lambda >= 0) || !std::isfinite(smoothness_lambda)) {
    throw Error(ErrorCode::kInvalidSpec, "smoothness_lambda must be >= 0");
  }
}

std::string DescribeParams(const InterpParams& p) {
  std::ostringstream os;
  os << "mode=" << ModeName(p.mode) << " block=" << p.block_size
     << " range=" << p.search_range << " lambda=" << p.smoothness_lambda
     << " obmc=" << ObmcName(p.obmc) << " blend=" << BlendName(p.blend);
  return os.str();
}

namespace {

void CheckGeometry(const Frame& a, const Frame& b) {
  if (!a.same_geometry(b) || a.empty()) {
    throw Error(ErrorCode::kGeometryMismatch,
                "frames differ in geometry: " + std::to_string(a.width()) +
                    "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

// SAD between two blocks, abandoning once the running total exceeds bound.
// The returned value is exact whenever it is <= bound.
std::uint32_t BlockSad(const Sample* a, const Sample* b, int stride, int w,
                       int h, double bound) {
  std::uint32_t total = 0;
#if defined(__SSE2__)
  if (w == 8 || w == 16 || w == 32) {
    for (int y = 0; y < h; ++y) {
      const Sample* ra = a + y * stride;
      const Sample* rb = b + y * stride;
      __m128i acc;
      if (w == 8) {
        acc = _mm_sad_epu8(
            _mm_loadl_epi64(reinterpret_cast<const __m128i*>(ra)),
            _mm_loadl_epi64(reinterpret_cast<const __m128i*>(rb)));
      } else {
        acc = _mm_sad_epu8(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(ra)),
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(rb)));
        if (w == 32) {
          acc = _mm_add_epi64(
              acc, _mm_sad_epu8(
                       _mm_loadu_si128(reinterpret_cast<const __m128i*>(ra + 16)),
                       _mm_loadu_si128(reinterpret_cast<const __m128i*>(rb + 16))));
        }
      }
      total += static_cast<std::uint32_t>(_mm_cvtsi128_si32(acc) +
                                          _mm_extract_epi16(acc, 4));
      if (total > bound) return total;
    }
    return total;
  }
#endif
  for (int y = 0; y < h; ++y) {
    const Sample* ra = a + y * stride;
    const Sample* rb = b + y * stride;
    for (int x = 0; x < w; ++x) total += std::abs(int(ra[x]) - int(rb[x]));
    if (total > bound) return total;
  }
  return total;
}

int Median3(int a, int b, int c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

struct Candidate {
  double cost = std::numeric_limits<double>::infinity();
  MotionVector v;
  std::uint32_t sad = 0;
};

// True when (cost, v) ranks before best under the declared tie-break.
bool Precedes(double cost, MotionVector v, const Candidate& best) {
  if (cost != best.cost) return cost < best.cost;
  const int l1 = std::abs(v.dx) + std::abs(v.dy);
  const int best_l1 = std::abs(best.v.dx) + std::abs(best.v.dy);
  if (l1 != best_l1) return l1 < best_l1;
  if (v.dy != best.v.dy) return v.dy < best.v.dy;
  return v.dx < best.v.dx;
}

}  // namespace

MotionVector PredictVector(const MotionField& field, int bx, int by) {
  if (by == 0) {
    return bx == 0 ? MotionVector{} : field.at(bx - 1, 0);
  }
  const MotionVector top = field.at(bx, by - 1);
  const MotionVector left = bx > 0 ? field.at(bx - 1, by) : top;
  MotionVector top_right = top;
  if (bx + 1 < field.grid_w) {
    top_right = field.at(bx + 1, by - 1);
  } else if (bx > 0) {
    top_right = field.at(bx - 1, by - 1);
  }
  return {Median3(left.dx, top.dx, top_right.dx),
          Median3(left.dy, top.dy, top_right.dy)};
}

MotionField EstimateMotion(const Frame& prev, const Frame& next,
                           const InterpParams& params) {
  CheckGeometry(prev, next);
  params.Validate();
  const int b = params.block_size;
  const int range = params.search_range;
  const double lambda = params.smoothness_lambda;
  const PlaneView src = prev.luma();
  const PlaneView ref = next.luma();
  const int w = src.width;
  const int h = src.height;

  MotionField field;
  field.block_size = b;
  field.search_range = range;
  field.grid_w = (w + b - 1) / b;
  field.grid_h = (h + b - 1) / b;
  field.vectors.resize(static_cast<std::size_t>(field.grid_w) * field.grid_h);
  field.sad.resize(field.vectors.size());

  for (int by = 0; by < field.grid_h; ++by) {
    for (int bx = 0; bx < field.grid_w; ++bx) {
      const int x0 = bx * b;
      const int y0 = by * b;
      const int bw = std::min(b, w - x0);
      const int bh = std::min(b, h - y0);
      const MotionVector pred = PredictVector(field, bx, by);
      const Sample* block = src.row(y0) + x0;

      Candidate best;
      auto consider = [&](MotionVector v) {
        const double penalty =
            lambda * (std::abs(v.dx - pred.dx) + std::abs(v.dy - pred.dy));
        const double bound = best.cost - penalty;
        if (bound < 0) return;
        const std::uint32_t sad = BlockSad(
            block, ref.row(y0 + v.dy) + x0 + v.dx, w, bw, bh, bound);
        if (sad > bound) return;
        const double cost = sad + penalty;
        if (Precedes(cost, v, best)) best = {cost, v, sad};
      };
      // Zero vector first gives the pruning bound a good start.
      consider({0, 0});
      const int dy_lo = std::max(-range, -y0);
      const int dy_hi = std::min(range, h - bh - y0);
      const int dx_lo = std::max(-range, -x0);
      const int dx_hi = std::min(range, w - bw - x0);
      for (int dy = dy_lo; dy <= dy_hi; ++dy) {
        for (int dx = dx_lo; dx <= dx_hi; ++dx) consider({dx, dy});
      }
      const std::size_t idx = static_cast<std::size_t>(by) * field.grid_w + bx;
      field.vectors[idx] = best.v;
      field.sad[idx] = best.sad;
    }
  }
  return field;
}

Frame FrameAverage(const Frame& a, const Frame& b) {
  CheckGeometry(a, b);
  Frame out(a.width(), a.height());
  for (PlaneId id : {PlaneId::kY, PlaneId::kU, PlaneId::kV}) {
    const auto sa = a.samples(id);
    const auto sb = b.samples(id);
    auto so = out.samples(id);
    for (std::size_t i = 0; i < so.size(); ++i) {
      so[i] = static_cast<Sample>((sa[i] + sb[i] + 1) >> 1);
    }
  }
  return out;
}

namespace {

// Weighted splat accumulator for one plane of the midpoint frame.
struct Accumulator {
  int width = 0;
  int height = 0;
  std::vector<double> sum;
  std::vector<double> weight;

  Accumulator(int w, int h)
      : width(w), height(h), sum(std::size_t(w) * h), weight(sum.size()) {}
};

// Raised-cosine taper of length n, sampled at pixel centres. Shifted copies
// at a hop of n / 2 sum to one.
std::vector<double> RaisedCosine(int n) {
  std::vector<double> win(n);
  for (int i = 0; i < n; ++i) {
    const double s = std::sin(M_PI * (i + 0.5) / n);
    win[i] = s * s;
  }
  return win;
}

// Splats every block of one anchor toward the midpoint. Blocks are given in
// plane coordinates; `offset` moves the block from anchor to midpoint.
void SplatPlane(const PlaneView& anchor, const MotionField& field,
                int plane_shift, const InterpParams& params,
                Accumulator& acc) {
  const int b = field.block_size >> plane_shift;
  const bool obmc = params.obmc == Obmc::kRaisedCosine;
  std::vector<double> win_x;
  std::vector<double> win_y;
  for (int by = 0; by < field.grid_h; ++by) {
    for (int bx = 0; bx < field.grid_w; ++bx) {
      const MotionVector v = field.at(bx, by);
      const int x0 = bx * b;
      const int y0 = by * b;
      const int bw = std::min(b, anchor.width - x0);
      const int bh = std::min(b, anchor.height - y0);
      if (bw <= 0 || bh <= 0) continue;
      // Half-vector truncated toward zero, so odd vectors err in opposite
      // directions for the two anchors. Chroma halves it again.
      const int ox = (v.dx / 2) / (1 << plane_shift);
      const int oy = (v.dy / 2) / (1 << plane_shift);

      double block_weight = 1.0;
      if (params.blend == Blend::kSadWeighted) {
        const int luma_area = std::min(field.block_size, (bw << plane_shift)) *
                              std::min(field.block_size, (bh << plane_shift));
        const std::size_t idx = std::size_t(by) * field.grid_w + bx;
        block_weight = 1.0 / (1.0 + double(field.sad[idx]) / luma_area);
      }

      int rx0 = x0;
      int ry0 = y0;
      int rw = bw;
      int rh = bh;
      if (obmc) {
        rx0 = x0 - bw / 2;
        ry0 = y0 - bh / 2;
        rw = 2 * bw;
        rh = 2 * bh;
        win_x = RaisedCosine(rw);
        win_y = RaisedCosine(rh);
      }
      for (int j = 0; j < rh; ++j) {
        const int my = ry0 + j + oy;
        const int sy = ry0 + j;
        if (my < 0 || my >= acc.height || sy < 0 || sy >= anchor.height) {
          continue;
        }
        const double wy = obmc ? win_y[j] * block_weight : block_weight;
        const Sample* src_row = anchor.row(sy);
        double* sum_row = acc.sum.data() + std::size_t(my) * acc.width;
        double* weight_row = acc.weight.data() + std::size_t(my) * acc.width;
        for (int i = 0; i < rw; ++i) {
          const int mx = rx0 + i + ox;
          const int sx = rx0 + i;
          if (mx < 0 || mx >= acc.width || sx < 0 || sx >= anchor.width) {
            continue;
          }
          const double wgt = obmc ? wy * win_x[i] : wy;
          sum_row[mx] += wgt * src_row[sx];
          weight_row[mx] += wgt;
        }
      }
    }
  }
}

}  // namespace

Frame CompensateMidpoint(const Frame& prev, const Frame& next,
                         const MotionField& forward,
                         const MotionField& backward,
                         const InterpParams& params) {
  CheckGeometry(prev, next);
  if (params.mode == InterpMode::kFrameAverage) return FrameAverage(prev, next);

  Frame out(prev.width(), prev.height());
  for (PlaneId id : {PlaneId::kY, PlaneId::kU, PlaneId::kV}) {
    const int shift = id == PlaneId::kY ? 0 : 1;
    const PlaneView p = prev.plane(id);
    const PlaneView n = next.plane(id);
    Accumulator acc(p.width, p.height);
    SplatPlane(p, forward, shift, params, acc);
    SplatPlane(n, backward, shift, params, acc);

    const PlaneRef dst = out.plane(id);
    for (int y = 0; y < dst.height; ++y) {
      for (int x = 0; x < dst.width; ++x) {
        const std::size_t i = std::size_t(y) * dst.width + x;
        int value;
        if (acc.weight[i] > 0) {
          value = static_cast<int>(acc.sum[i] / acc.weight[i] + 0.5);
        } else {
          // Uncovered by either projection.
          value = (p.at(x, y) + n.at(x, y) + 1) >> 1;
        }
        dst.at(x, y) = static_cast<Sample>(std::clamp(value, 0, 255));
      }
    }
  }
  return out;
}

Frame Interpolate(const Frame& prev, const Frame& next,
                  const InterpParams& params) {
  CheckGeometry(prev, next);
  params.Validate();
  if (params.mode == InterpMode::kFrameAverage) return FrameAverage(prev, next);
  const MotionField forward = EstimateMotion(prev, next, params);
  const MotionField backward = EstimateMotion(next, prev, params);
  return CompensateMidpoint(prev, next, forward, backward, params);
}

std::string DumpMotionField(const MotionField& field) {
  std::ostringstream os;
  os << field.grid_w << ' ' << field.grid_h << ' ' << field.block_size << '\n';
  for (int by = 0; by < field.grid_h; ++by) {
    for (int bx = 0; bx < field.grid_w; ++bx) {
      const MotionVector v = field.at(bx, by);
      os << bx << ' ' << by << ' ' << v.dx << ' ' << v.dy << '\n';
    }
  }
  return os.str();
}

}  // namespace tafi
