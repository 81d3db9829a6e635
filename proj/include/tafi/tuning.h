#ifndef TAFI_TUNING_H_
#define TAFI_TUNING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tafi/interp.h"
#include "tafi/media.h"

namespace tafi {

// Three co-located patches from frames t-1, t, t+1 of one clip.
struct Triplet {
  Frame prev;
  Frame mid;
  Frame next;
  std::string clip_id;
  int t = 0;
  int x = 0;
  int y = 0;
};

// Per draw: a clip uniformly, then t uniformly in [1, len-2], then an
// even-aligned origin uniformly over valid positions.
std::vector<Triplet> SampleTriplets(std::span<const Clip> clips, int n,
                                    int patch, std::uint64_t seed);

// Like SampleTriplets, but draw i comes from group i mod groups.size(), so
// every group contributes equally regardless of its clip count.
std::vector<Triplet> SampleTripletsBalanced(
    std::span<const std::span<const Clip>> groups, int n, int patch,
    std::uint64_t seed);

struct AugmentDraw {
  bool hflip = false;
  bool vflip = false;
  bool reverse = false;
  double gain = 1.0;    // luma gain in [0.9, 1.1]
  double offset = 0.0;  // luma offset in [-10, 10]
};

AugmentDraw DrawAugmentation(std::uint64_t seed);
Triplet ApplyAugmentation(const Triplet& triplet, const AugmentDraw& draw);
Triplet Augment(const Triplet& triplet, std::uint64_t seed);

// Candidate values per InterpParams field.
struct SearchSpace {
  std::vector<int> block_sizes{8, 16, 32};
  std::vector<int> search_ranges{2, 4, 8, 12, 16};
  std::vector<double> smoothness_lambdas{0, 16, 64, 256, 1024};
  std::vector<Obmc> obmc{Obmc::kOff, Obmc::kRaisedCosine};
  std::vector<Blend> blends{Blend::kAverage, Blend::kSadWeighted};
  std::vector<InterpMode> modes{InterpMode::kMci, InterpMode::kFrameAverage};
};

enum class MixPolicy { kProportional, kBalanced };

struct TuningSpec {
  SearchSpace space;
  int triplets_per_round = 200;
  int rounds = 10;
  int decay_rounds = 4;
  int patch = 96;
  std::uint64_t seed = 1;
  int workers = 0;

  // Throws kInvalidSpec.
  void Validate() const;
};

struct TuneResult {
  InterpParams params;
  double final_loss = 0;           // mean absolute luma error, gray levels
  double baseline_final_loss = 0;  // default InterpParams on the same batch
  int triplet_count = 0;           // triplets drawn over all rounds
  std::uint64_t seed = 0;
};

// Mean absolute luma error of interpolate(prev, next) against mid.
double TripletLoss(std::span<const Triplet> batch, const InterpParams& params);

// Coordinate descent over the search space, one full sweep of the fields per
// round on a fresh augmented batch. Every decay_rounds rounds each ordered
// candidate list shrinks to the winner and its immediate neighbours. Ties
// keep the incumbent. `groups` with more than one entry are mixed per
// `mix`; a single group is sampled directly.
TuneResult TuneProfile(std::span<const std::span<const Clip>> groups,
                       const TuningSpec& spec,
                       MixPolicy mix = MixPolicy::kProportional);

TuneResult TuneProfile(std::span<const Clip> clips, const TuningSpec& spec);

}  // namespace tafi

#endif  // TAFI_TUNING_H_
