#ifndef TAFI_TEXCLASS_H_
#define TAFI_TEXCLASS_H_

#include <span>

#include "tafi/interp.h"
#include "tafi/media.h"
#include "tafi/texture_class.h"

namespace tafi {

struct TextureFeatures {
  double gmc_residual = 0;      // gray levels per pixel
  double flow_incoherence = 0;  // within-cluster / total vector variance
  double mean_motion = 0;       // pixels per frame
  double spatial_detail = 0;    // mean luma gradient magnitude
};

struct ClassifierThresholds {
  double static_residual_max = 2.0;
  double incoherence_split = 0.35;

  void Validate() const;
};

// Maximum number of consecutive-frame pairs inspected per clip.
inline constexpr int kMaxFeaturePairs = 16;

// Averages per-pair features over every k-th consecutive pair, with k chosen
// so at most kMaxFeaturePairs pairs are used. Block motion comes from
// EstimateMotion with `params`; the global shift search uses the same range.
TextureFeatures ExtractFeatures(const Clip& clip, const InterpParams& params);

// gmc_residual <= static_residual_max -> static; otherwise
// flow_incoherence <= incoherence_split -> dyndis; otherwise dyncon.
TextureClass Classify(const TextureFeatures& features,
                      const ClassifierThresholds& thresholds);

// Best integer global translation from `a` to `b` by mean absolute difference
// over the overlap; returns that residual.
double GlobalTranslationResidual(const Frame& a, const Frame& b, int range);

// Ratio of within-cluster to total variance after a deterministic
// 10-iteration two-centroid split. Zero when all vectors coincide.
double FlowIncoherence(std::span<const MotionVector> vectors);

}  // namespace tafi

#endif  // TAFI_TEXCLASS_H_
