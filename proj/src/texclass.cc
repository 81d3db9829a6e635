#include "tafi/texclass.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "tafi/error.h"

namespace tafi {

void ClassifierThresholds::Validate() const {
  if (!(static_residual_max > 0) || !(incoherence_split > 0)) {
    throw Error(ErrorCode::kInvalidSpec, "classifier thresholds must be > 0");
  }
}

double GlobalTranslationResidual(const Frame& a, const Frame& b, int range) {
  if (!a.same_geometry(b)) {
    throw Error(ErrorCode::kGeometryMismatch, "GMC frames differ in size");
  }
  const PlaneView pa = a.luma();
  const PlaneView pb = b.luma();
  const int w = pa.width;
  const int h = pa.height;
  range = std::min({range, w / 2, h / 2});

  // Compare sad / area as exact rationals; ties go to the smaller shift.
  std::uint64_t best_sad = 0;
  std::uint64_t best_area = 0;
  int best_l1 = 0;
  bool have = false;
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      const int x0 = std::max(0, -dx);
      const int x1 = std::min(w, w - dx);
      const int y0 = std::max(0, -dy);
      const int y1 = std::min(h, h - dy);
      std::uint64_t sad = 0;
      for (int y = y0; y < y1; ++y) {
        const Sample* ra = pa.row(y);
        const Sample* rb = pb.row(y + dy) + dx;
        std::uint32_t row = 0;
        for (int x = x0; x < x1; ++x) row += std::abs(int(ra[x]) - int(rb[x]));
        sad += row;
      }
      const std::uint64_t area = std::uint64_t(x1 - x0) * (y1 - y0);
      const int l1 = std::abs(dx) + std::abs(dy);
      const unsigned __int128 lhs = (unsigned __int128)sad * best_area;
      const unsigned __int128 rhs = (unsigned __int128)best_sad * area;
      if (!have || lhs < rhs || (lhs == rhs && l1 < best_l1)) {
        best_sad = sad;
        best_area = area;
        best_l1 = l1;
        have = true;
      }
    }
  }
  return double(best_sad) / double(best_area);
}

double FlowIncoherence(std::span<const MotionVector> vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) return 0;
  double mx = 0;
  double my = 0;
  for (const auto& v : vectors) {
    mx += v.dx;
    my += v.dy;
  }
  mx /= double(n);
  my /= double(n);
  double total = 0;
  for (const auto& v : vectors) {
    total += (v.dx - mx) * (v.dx - mx) + (v.dy - my) * (v.dy - my);
  }
  if (total <= 0) return 0;

  auto dist2 = [](double ax, double ay, double bx, double by) {
    return (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
  };
  // Seed: the vector farthest from the mean, then the one farthest from it.
  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (dist2(vectors[i].dx, vectors[i].dy, mx, my) >
        dist2(vectors[first].dx, vectors[first].dy, mx, my)) {
      first = i;
    }
  }
  std::size_t second = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (dist2(vectors[i].dx, vectors[i].dy, vectors[first].dx,
              vectors[first].dy) >
        dist2(vectors[second].dx, vectors[second].dy, vectors[first].dx,
              vectors[first].dy)) {
      second = i;
    }
  }
  double c[2][2] = {{double(vectors[first].dx), double(vectors[first].dy)},
                    {double(vectors[second].dx), double(vectors[second].dy)}};
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 10; ++iter) {
    double sum[2][2] = {{0, 0}, {0, 0}};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = dist2(vectors[i].dx, vectors[i].dy, c[0][0], c[0][1]);
      const double d1 = dist2(vectors[i].dx, vectors[i].dy, c[1][0], c[1][1]);
      assign[i] = d1 < d0 ? 1 : 0;
      sum[assign[i]][0] += vectors[i].dx;
      sum[assign[i]][1] += vectors[i].dy;
      ++count[assign[i]];
    }
    for (int k = 0; k < 2; ++k) {
      if (count[k] > 0) {
        c[k][0] = sum[k][0] / double(count[k]);
        c[k][1] = sum[k][1] / double(count[k]);
      }
    }
  }
  double within = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = assign[i];
    within += dist2(vectors[i].dx, vectors[i].dy, c[k][0], c[k][1]);
  }
  return std::clamp(within / total, 0.0, 1.0);
}

namespace {

double MeanGradient(const Frame& f) {
  const PlaneView p = f.luma();
  double total = 0;
  std::size_t count = 0;
  for (int y = 1; y + 1 < p.height; ++y) {
    for (int x = 1; x + 1 < p.width; ++x) {
      const double gx = 0.5 * (int(p.at(x + 1, y)) - int(p.at(x - 1, y)));
      const double gy = 0.5 * (int(p.at(x, y + 1)) - int(p.at(x, y - 1)));
      total += std::sqrt(gx * gx + gy * gy);
      ++count;
    }
  }
  return count ? total / double(count) : 0.0;
}

}  // namespace

TextureFeatures ExtractFeatures(const Clip& clip, const InterpParams& params) {
  if (clip.size() < 3) {
    throw Error(ErrorCode::kClipTooShort,
                "feature extraction needs >= 3 frames, clip '" + clip.name +
                    "' has " + std::to_string(clip.size()));
  }
  InterpParams me = params;
  me.mode = InterpMode::kMci;
  const int pairs = clip.size() - 1;
  const int stride = (pairs + kMaxFeaturePairs - 1) / kMaxFeaturePairs;

  TextureFeatures acc;
  int used = 0;
  for (int i = 0; i + 1 < clip.size(); i += stride) {
    const Frame& a = clip.frames[i];
    const Frame& b = clip.frames[i + 1];
    const MotionField field = EstimateMotion(a, b, me);
    double motion = 0;
    for (const auto& v : field.vectors) motion += std::hypot(v.dx, v.dy);
    acc.mean_motion += motion / double(field.vectors.size());
    acc.flow_incoherence += FlowIncoherence(field.vectors);
    acc.gmc_residual += GlobalTranslationResidual(a, b, me.search_range);
    acc.spatial_detail += MeanGradient(a);
    ++used;
  }
  acc.gmc_residual /= used;
  acc.flow_incoherence /= used;
  acc.mean_motion /= used;
  acc.spatial_detail /= used;
  return acc;
}

TextureClass Classify(const TextureFeatures& features,
                      const ClassifierThresholds& thresholds) {
  if (features.gmc_residual <= thresholds.static_residual_max) {
    return TextureClass::kStatic;
  }
  if (features.flow_incoherence <= thresholds.incoherence_split) {
    return TextureClass::kDynDis;
  }
  return TextureClass::kDynCon;
}

}  // namespace tafi
