#ifndef TAFI_NOISE_H_
#define TAFI_NOISE_H_

#include <array>
#include <cstdint>

namespace tafi {

// Seeded Perlin-style gradient noise. Output is roughly in [-1, 1] and zero
// at integer lattice points.
class GradientNoise {
 public:
  explicit GradientNoise(std::uint64_t seed);

  double At(double x, double y) const;
  double At(double x, double y, double z) const;

  // Sum of `octaves` layers, each doubling frequency and halving amplitude,
  // normalised by the total amplitude.
  double Fbm(double x, double y, int octaves) const;
  double Fbm(double x, double y, double z, int octaves) const;

 private:
  int Hash(int i) const { return perm_[i & 255]; }

  std::array<std::uint8_t, 256> perm_{};
};

}  // namespace tafi

#endif  // TAFI_NOISE_H_
