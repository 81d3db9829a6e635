#ifndef TAFI_TESTS_TEST_UTIL_H_
#define TAFI_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "tafi/interp.h"
#include "tafi/media.h"

namespace tafi::testing {

// Frame with independent uniform samples in every plane.
Frame RandomFrame(int w, int h, std::mt19937_64& rng);

// Smooth textured luma (sum of sinusoids) with mid-grey chroma; value at
// (x, y) is Texture(x + ox, y + oy), so shifting the origin translates it.
Frame TexturedFrame(int w, int h, int ox = 0, int oy = 0);
double Texture(double x, double y);

// Clip of `n` frames translating by (vx, vy) pixels per frame.
Clip TranslatingClip(int w, int h, int n, int vx, int vy,
                     std::string name = "shift");

// Exhaustive block search over every in-frame displacement; SAD ties go to
// the smallest |v|_1, then dy, then dx.
MotionField ExhaustiveMotion(const Frame& prev, const Frame& next, int b,
                             int range);

// Whole file as a string; empty if it cannot be read.
std::string ReadText(const std::filesystem::path& path);

// Fresh empty directory under the system temp dir.
std::filesystem::path TempDir(const std::string& tag);

}  // namespace tafi::testing

#endif  // TAFI_TESTS_TEST_UTIL_H_
