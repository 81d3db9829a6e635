#include "tafi/metrics.h"

#include <array>
#include <cmath>
#include <vector>

#include "tafi/error.h"

namespace tafi {

namespace {

void CheckGeometry(const Frame& a, const Frame& b) {
  if (!a.same_geometry(b) || a.empty()) {
    throw Error(ErrorCode::kGeometryMismatch, "metric inputs differ in size");
  }
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

std::array<double, kWindow> GaussianTaps() {
  std::array<double, kWindow> taps{};
  double total = 0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2 * kSigma * kSigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

// Separable valid-mode filtering of a w x h image.
std::vector<double> FilterValid(const std::vector<double>& img, int w, int h,
                                const std::array<double, kWindow>& taps) {
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;
  std::vector<double> rows(std::size_t(ow) * h);
  for (int y = 0; y < h; ++y) {
    const double* src = img.data() + std::size_t(y) * w;
    for (int x = 0; x < ow; ++x) {
      double acc = 0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * src[x + k];
      rows[std::size_t(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(std::size_t(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0;
      for (int k = 0; k < kWindow; ++k) {
        acc += taps[k] * rows[std::size_t(y + k) * ow + x];
      }
      out[std::size_t(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

PsnrValue Psnr(const Frame& ref, const Frame& test) {
  CheckGeometry(ref, test);
  const auto a = ref.samples(PlaneId::kY);
  const auto b = test.samples(PlaneId::kY);
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = int(a[i]) - int(b[i]);
    sse += std::uint64_t(d * d);
  }
  if (sse == 0) return {kPsnrCap, true};
  const double mse = double(sse) / double(a.size());
  return {10.0 * std::log10(255.0 * 255.0 / mse), false};
}

double Ssim(const Frame& ref, const Frame& test) {
  CheckGeometry(ref, test);
  const int w = ref.width();
  const int h = ref.height();
  if (w < kWindow || h < kWindow) {
    throw Error(ErrorCode::kFrameTooSmall, "SSIM needs at least 11x11");
  }
  const auto a = ref.samples(PlaneId::kY);
  const auto b = test.samples(PlaneId::kY);
  const std::size_t n = a.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a[i];
    y[i] = b[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto taps = GaussianTaps();
  const auto mx = FilterValid(x, w, h, taps);
  const auto my = FilterValid(y, w, h, taps);
  const auto sxx = FilterValid(xx, w, h, taps);
  const auto syy = FilterValid(yy, w, h, taps);
  const auto sxy = FilterValid(xy, w, h, taps);

  double total = 0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double mu_x = mx[i];
    const double mu_y = my[i];
    const double var_x = sxx[i] - mu_x * mu_x;
    const double var_y = syy[i] - mu_y * mu_y;
    const double cov = sxy[i] - mu_x * mu_y;
    const double num = (2 * mu_x * mu_y + kC1) * (2 * cov + kC2);
    const double den = (mu_x * mu_x + mu_y * mu_y + kC1) * (var_x + var_y + kC2);
    total += num / den;
  }
  return total / double(mx.size());
}

MetricRecord ScoreFrame(const Frame& ref, const Frame& test,
                        std::string clip_id, int frame_index) {
  const PsnrValue p = Psnr(ref, test);
  return {std::move(clip_id), frame_index, p.db, Ssim(ref, test), p.capped};
}

}  // namespace tafi
