#ifndef TAFI_INTERP_H_
#define TAFI_INTERP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tafi/media.h"

namespace tafi {

enum class Obmc { kOff, kRaisedCosine };
enum class Blend { kAverage, kSadWeighted };
enum class InterpMode { kMci, kFrameAverage };

std::string_view ObmcName(Obmc v);
std::string_view BlendName(Blend v);
std::string_view ModeName(InterpMode v);
std::optional<Obmc> ParseObmc(std::string_view s);
std::optional<Blend> ParseBlend(std::string_view s);
std::optional<InterpMode> ParseMode(std::string_view s);

// Tunable interpolator configuration. The default value is the off-the-shelf
// baseline that every specialised profile is compared against.
struct InterpParams {
  int block_size = 16;           // one of 8, 16, 32
  int search_range = 8;          // integer pels, [0, 32]
  double smoothness_lambda = 0;  // SAD units per pel of predictor deviation
  Obmc obmc = Obmc::kOff;
  Blend blend = Blend::kAverage;
  InterpMode mode = InterpMode::kMci;

  // Throws kInvalidSpec.
  void Validate() const;

  friend bool operator==(const InterpParams&, const InterpParams&) = default;
};

std::string DescribeParams(const InterpParams& p);

struct MotionVector {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

// One vector per block of the anchor frame, raster order.
struct MotionField {
  int block_size = 0;
  int search_range = 0;
  int grid_w = 0;
  int grid_h = 0;
  std::vector<MotionVector> vectors;
  std::vector<std::uint32_t> sad;  // SAD of the chosen vector, per block

  const MotionVector& at(int bx, int by) const {
    return vectors[by * grid_w + bx];
  }
};

// Integer-pel block matching of prev against next. For each block of prev,
// minimises SAD(prev block, next block displaced by v) plus
// smoothness_lambda * |v - causal median predictor|_1 over candidates with
// |dx|, |dy| <= search_range whose displaced block lies inside next.
// Ties: smallest |v|_1, then smallest dy, then smallest dx.
MotionField EstimateMotion(const Frame& prev, const Frame& next,
                           const InterpParams& params);

// Raster-order predictor from left, top and top-right neighbours.
MotionVector PredictVector(const MotionField& field, int bx, int by);

// Synthesises the temporal midpoint of prev and next.
Frame Interpolate(const Frame& prev, const Frame& next,
                  const InterpParams& params);

// Midpoint synthesis from precomputed fields (forward: prev->next, backward:
// next->prev). Lets callers reuse motion across blend/OBMC variations.
Frame CompensateMidpoint(const Frame& prev, const Frame& next,
                         const MotionField& forward,
                         const MotionField& backward,
                         const InterpParams& params);

Frame FrameAverage(const Frame& a, const Frame& b);

// Debug sidecar: header line "grid_w grid_h block_size", then one
// "bx by dx dy" line per block.
std::string DumpMotionField(const MotionField& field);

}  // namespace tafi

#endif  // TAFI_INTERP_H_
