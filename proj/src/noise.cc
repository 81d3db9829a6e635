#include "tafi/noise.h"

#include <cmath>
#include <numeric>
#include <utility>

#include "tafi/rng.h"

namespace tafi {

namespace {

double Fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

double Lerp(double t, double a, double b) { return a + t * (b - a); }

double Grad2(int hash, double x, double y) {
  switch (hash & 7) {
    case 0: return x + y;
    case 1: return x - y;
    case 2: return -x + y;
    case 3: return -x - y;
    case 4: return x;
    case 5: return -x;
    case 6: return y;
    default: return -y;
  }
}

double Grad3(int hash, double x, double y, double z) {
  const int h = hash & 15;
  const double u = h < 8 ? x : y;
  const double v = h < 4 ? y : (h == 12 || h == 14 ? x : z);
  return ((h & 1) ? -u : u) + ((h & 2) ? -v : v);
}

}  // namespace

GradientNoise::GradientNoise(std::uint64_t seed) {
  std::iota(perm_.begin(), perm_.end(), 0);
  Rng rng(seed);
  for (int i = 255; i > 0; --i) {
    std::swap(perm_[i], perm_[rng.Index(std::uint64_t(i) + 1)]);
  }
}

double GradientNoise::At(double x, double y) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int xi = static_cast<int>(fx);
  const int yi = static_cast<int>(fy);
  x -= fx;
  y -= fy;
  const double u = Fade(x);
  const double v = Fade(y);
  const int a = Hash(xi) + yi;
  const int b = Hash(xi + 1) + yi;
  const double n00 = Grad2(Hash(a), x, y);
  const double n01 = Grad2(Hash(a + 1), x, y - 1);
  const double n10 = Grad2(Hash(b), x - 1, y);
  const double n11 = Grad2(Hash(b + 1), x - 1, y - 1);
  // Edge gradients like (1, 1) reach sqrt(2); scale toward [-1, 1].
  return 0.7071 * Lerp(v, Lerp(u, n00, n10), Lerp(u, n01, n11));
}

double GradientNoise::At(double x, double y, double z) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double fz = std::floor(z);
  const int xi = static_cast<int>(fx);
  const int yi = static_cast<int>(fy);
  const int zi = static_cast<int>(fz);
  x -= fx;
  y -= fy;
  z -= fz;
  const double u = Fade(x);
  const double v = Fade(y);
  const double w = Fade(z);
  const int a = Hash(xi) + yi;
  const int aa = Hash(a) + zi;
  const int ab = Hash(a + 1) + zi;
  const int b = Hash(xi + 1) + yi;
  const int ba = Hash(b) + zi;
  const int bb = Hash(b + 1) + zi;
  return Lerp(
      w,
      Lerp(v, Lerp(u, Grad3(Hash(aa), x, y, z), Grad3(Hash(ba), x - 1, y, z)),
           Lerp(u, Grad3(Hash(ab), x, y - 1, z),
                Grad3(Hash(bb), x - 1, y - 1, z))),
      Lerp(v,
           Lerp(u, Grad3(Hash(aa + 1), x, y, z - 1),
                Grad3(Hash(ba + 1), x - 1, y, z - 1)),
           Lerp(u, Grad3(Hash(ab + 1), x, y - 1, z - 1),
                Grad3(Hash(bb + 1), x - 1, y - 1, z - 1))));
}

double GradientNoise::Fbm(double x, double y, int octaves) const {
  double total = 0;
  double amp = 1;
  double norm = 0;
  for (int o = 0; o < octaves; ++o) {
    // Per-octave offset decorrelates the lattice zeros between octaves.
    total += amp * At(x + 17.31 * o, y + 9.71 * o);
    norm += amp;
    amp *= 0.5;
    x *= 2;
    y *= 2;
  }
  return total / norm;
}

double GradientNoise::Fbm(double x, double y, double z, int octaves) const {
  double total = 0;
  double amp = 1;
  double norm = 0;
  for (int o = 0; o < octaves; ++o) {
    total += amp * At(x + 17.31 * o, y + 9.71 * o, z + 5.17 * o);
    norm += amp;
    amp *= 0.5;
    x *= 2;
    y *= 2;
    z *= 2;
  }
  return total / norm;
}

}  // namespace tafi
