#include "tafi/stats.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "tafi/error.h"

namespace tafi {

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
// Converges quickly for x < (a + 1) / (a + b + 2).
double BetaContinuedFraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1;
  const double qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kEps) break;
  }
  return h;
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double SumSquaredDeviation(std::span<const double> v, double mean) {
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss;
}

}  // namespace

double RegIncBeta(double x, double a, double b) {
  if (!(x >= 0 && x <= 1) || !(a > 0) || !(b > 0) || !std::isfinite(a) ||
      !std::isfinite(b)) {
    throw Error(ErrorCode::kDomainError, "incomplete beta outside domain");
  }
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) {
    return front * BetaContinuedFraction(x, a, b) / a;
  }
  return 1 - front * BetaContinuedFraction(1 - x, b, a) / b;
}

double FSurvival(double f, double d1, double d2) {
  if (f <= 0) return 1;
  if (std::isinf(f)) return 0;
  return RegIncBeta(d2 / (d2 + d1 * f), d2 / 2, d1 / 2);
}

double StudentTwoSided(double t, double df) {
  if (std::isinf(t)) return 0;
  return RegIncBeta(df / (df + t * t), df / 2, 0.5);
}

AnovaResult OneWayAnova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kInsufficientGroups, "ANOVA needs >= 2 groups");
  }
  std::size_t total_n = 0;
  double total_sum = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "every ANOVA group needs >= 2 samples");
    }
    total_n += g.size();
    total_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand_mean = total_sum / double(total_n);
  double ss_between = 0;
  double ss_within = 0;
  for (const auto& g : groups) {
    const double m = Mean(g);
    ss_between += double(g.size()) * (m - grand_mean) * (m - grand_mean);
    ss_within += SumSquaredDeviation(g, m);
  }
  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total_n - groups.size());
  const double ms_within = ss_within / r.df_within;
  if (ms_within == 0) {
    throw Error(ErrorCode::kZeroWithinVariance, "all groups are constant");
  }
  r.f_stat = (ss_between / r.df_between) / ms_within;
  r.p_value = FSurvival(r.f_stat, r.df_between, r.df_within);
  return r;
}

TTestResult WelchTTest(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw Error(ErrorCode::kInsufficientSamples,
                "Welch test needs >= 2 samples per side");
  }
  const double nx = double(x.size());
  const double ny = double(y.size());
  const double mx = Mean(x);
  const double my = Mean(y);
  const double vx = SumSquaredDeviation(x, mx) / (nx - 1);
  const double vy = SumSquaredDeviation(y, my) / (ny - 1);
  const double sx = vx / nx;
  const double sy = vy / ny;
  TTestResult r;
  if (sx + sy == 0) {
    if (mx != my) {
      throw Error(ErrorCode::kZeroVariance,
                  "both samples constant with different means");
    }
    r.t_stat = 0;
    r.df = nx + ny - 2;
    r.p_value = 1;
    return r;
  }
  r.t_stat = (mx - my) / std::sqrt(sx + sy);
  r.df = (sx + sy) * (sx + sy) /
         (sx * sx / (nx - 1) + sy * sy / (ny - 1));
  r.p_value = StudentTwoSided(r.t_stat, r.df);
  return r;
}

}  // namespace tafi
