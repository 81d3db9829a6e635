#include "tafi/tuning.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <tuple>

#include "tafi/error.h"
#include "tafi/parallel.h"
#include "tafi/rng.h"

namespace tafi {

namespace {

void CheckClips(std::span<const Clip> clips, int patch) {
  if (clips.empty()) {
    throw Error(ErrorCode::kEmptyClipList, "no clips to sample from");
  }
  if (patch <= 0 || patch % 2 != 0) {
    throw Error(ErrorCode::kInvalidSpec, "patch size must be even and > 0");
  }
  for (const Clip& c : clips) {
    if (c.size() < 3) {
      throw Error(ErrorCode::kClipTooShort,
                  "clip '" + c.name + "' has fewer than 3 frames");
    }
    if (c.width() < patch || c.height() < patch) {
      throw Error(ErrorCode::kPatchTooLarge,
                  "patch " + std::to_string(patch) + " exceeds clip '" +
                      c.name + "'");
    }
  }
}

Triplet DrawTriplet(const Clip& clip, int patch, Rng& rng) {
  Triplet tr;
  tr.clip_id = clip.name;
  tr.t = 1 + static_cast<int>(rng.Index(clip.size() - 2));
  tr.x = 2 * static_cast<int>(rng.Index((clip.width() - patch) / 2 + 1));
  tr.y = 2 * static_cast<int>(rng.Index((clip.height() - patch) / 2 + 1));
  tr.prev = ExtractPatch(clip.frames[tr.t - 1], tr.x, tr.y, patch, patch);
  tr.mid = ExtractPatch(clip.frames[tr.t], tr.x, tr.y, patch, patch);
  tr.next = ExtractPatch(clip.frames[tr.t + 1], tr.x, tr.y, patch, patch);
  return tr;
}

void FlipPlanes(Frame& f, bool horizontal) {
  for (PlaneId id : {PlaneId::kY, PlaneId::kU, PlaneId::kV}) {
    const PlaneRef p = f.plane(id);
    if (horizontal) {
      for (int y = 0; y < p.height; ++y) std::reverse(p.row(y), p.row(y) + p.width);
    } else {
      for (int y = 0; y < p.height / 2; ++y) {
        std::swap_ranges(p.row(y), p.row(y) + p.width, p.row(p.height - 1 - y));
      }
    }
  }
}

void JitterLuma(Frame& f, double gain, double offset) {
  for (Sample& s : f.samples(PlaneId::kY)) {
    const long v = std::lround(gain * s + offset);
    s = static_cast<Sample>(std::clamp(v, 0L, 255L));
  }
}

}  // namespace

std::vector<Triplet> SampleTriplets(std::span<const Clip> clips, int n,
                                    int patch, std::uint64_t seed) {
  CheckClips(clips, patch);
  if (n < 0) throw Error(ErrorCode::kInvalidSpec, "negative triplet count");
  Rng rng(seed);
  std::vector<Triplet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Clip& clip = clips[rng.Index(clips.size())];
    out.push_back(DrawTriplet(clip, patch, rng));
  }
  return out;
}

std::vector<Triplet> SampleTripletsBalanced(
    std::span<const std::span<const Clip>> groups, int n, int patch,
    std::uint64_t seed) {
  if (groups.empty()) {
    throw Error(ErrorCode::kEmptyClipList, "no clip groups");
  }
  for (const auto& g : groups) CheckClips(g, patch);
  if (n < 0) throw Error(ErrorCode::kInvalidSpec, "negative triplet count");
  Rng rng(seed);
  std::vector<Triplet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto& group = groups[i % groups.size()];
    const Clip& clip = group[rng.Index(group.size())];
    out.push_back(DrawTriplet(clip, patch, rng));
  }
  return out;
}

AugmentDraw DrawAugmentation(std::uint64_t seed) {
  Rng rng(seed);
  AugmentDraw d;
  d.hflip = rng.Coin();
  d.vflip = rng.Coin();
  d.reverse = rng.Coin();
  d.gain = rng.Uniform(0.9, 1.1);
  d.offset = rng.Uniform(-10.0, 10.0);
  return d;
}

Triplet ApplyAugmentation(const Triplet& triplet, const AugmentDraw& draw) {
  Triplet out = triplet;
  for (Frame* f : {&out.prev, &out.mid, &out.next}) {
    if (draw.hflip) FlipPlanes(*f, true);
    if (draw.vflip) FlipPlanes(*f, false);
    if (draw.gain != 1.0 || draw.offset != 0.0) {
      JitterLuma(*f, draw.gain, draw.offset);
    }
  }
  if (draw.reverse) std::swap(out.prev, out.next);
  return out;
}

Triplet Augment(const Triplet& triplet, std::uint64_t seed) {
  return ApplyAugmentation(triplet, DrawAugmentation(seed));
}

void TuningSpec::Validate() const {
  if (space.block_sizes.empty() || space.search_ranges.empty() ||
      space.smoothness_lambdas.empty() || space.obmc.empty() ||
      space.blends.empty() || space.modes.empty()) {
    throw Error(ErrorCode::kInvalidSpec, "every candidate list needs a value");
  }
  if (rounds < 1 || decay_rounds < 1 || triplets_per_round < 1) {
    throw Error(ErrorCode::kInvalidSpec,
                "rounds, decay_rounds and triplets_per_round must be >= 1");
  }
  if (patch <= 0 || patch % 2 != 0) {
    throw Error(ErrorCode::kInvalidSpec, "patch must be even and > 0");
  }
  for (int b : space.block_sizes) {
    InterpParams p;
    p.block_size = b;
    p.Validate();
  }
  for (int r : space.search_ranges) {
    InterpParams p;
    p.search_range = r;
    p.Validate();
  }
  for (double l : space.smoothness_lambdas) {
    InterpParams p;
    p.smoothness_lambda = l;
    p.Validate();
  }
}

namespace {

// Evaluates configurations on one fixed batch. Motion fields are shared by
// all configurations with the same block matcher settings.
class BatchEvaluator {
 public:
  BatchEvaluator(std::span<const Triplet> batch, int workers)
      : batch_(batch), workers_(workers) {}

  // Total absolute luma error over the batch; exact, order independent.
  std::uint64_t ErrorSum(const InterpParams& p) {
    for (const auto& [params, sum] : losses_) {
      if (params == p) return sum;
    }
    const auto* fields = p.mode == InterpMode::kMci ? &Fields(p) : nullptr;
    std::vector<std::uint64_t> per(batch_.size());
    ParallelFor(batch_.size(), workers_, [&](std::size_t i) {
      const Triplet& tr = batch_[i];
      const Frame out =
          fields ? CompensateMidpoint(tr.prev, tr.next, (*fields)[i].first,
                                      (*fields)[i].second, p)
                 : FrameAverage(tr.prev, tr.next);
      const auto a = out.samples(PlaneId::kY);
      const auto b = tr.mid.samples(PlaneId::kY);
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        s += std::abs(int(a[k]) - int(b[k]));
      }
      per[i] = s;
    });
    std::uint64_t total = 0;
    for (std::uint64_t s : per) total += s;
    losses_.emplace_back(p, total);
    return total;
  }

  double MeanError(const InterpParams& p) {
    std::uint64_t samples = 0;
    for (const Triplet& tr : batch_) samples += tr.mid.samples(PlaneId::kY).size();
    return samples ? double(ErrorSum(p)) / double(samples) : 0.0;
  }

 private:
  using FieldPairs = std::vector<std::pair<MotionField, MotionField>>;

  const FieldPairs& Fields(const InterpParams& p) {
    const auto key = std::make_tuple(p.block_size, p.search_range,
                                     p.smoothness_lambda);
    auto it = fields_.find(key);
    if (it != fields_.end()) return it->second;
    FieldPairs pairs(batch_.size());
    ParallelFor(batch_.size(), workers_, [&](std::size_t i) {
      pairs[i].first = EstimateMotion(batch_[i].prev, batch_[i].next, p);
      pairs[i].second = EstimateMotion(batch_[i].next, batch_[i].prev, p);
    });
    return fields_.emplace(key, std::move(pairs)).first->second;
  }

  std::span<const Triplet> batch_;
  int workers_;
  std::vector<std::pair<InterpParams, std::uint64_t>> losses_;
  std::map<std::tuple<int, int, double>, FieldPairs> fields_;
};

template <typename T>
std::size_t IndexOf(const std::vector<T>& list, const T& value) {
  const auto it = std::find(list.begin(), list.end(), value);
  return it == list.end() ? list.size() : std::size_t(it - list.begin());
}

template <typename T>
T StartValue(const std::vector<T>& list, const T& preferred) {
  return IndexOf(list, preferred) < list.size() ? preferred : list.front();
}

// Keeps the incumbent and its immediate neighbours in declared order.
template <typename T>
void Shrink(std::vector<T>& list, const T& winner) {
  const std::size_t i = IndexOf(list, winner);
  if (i >= list.size()) return;
  const std::size_t lo = i > 0 ? i - 1 : 0;
  const std::size_t hi = std::min(list.size(), i + 2);
  list = std::vector<T>(list.begin() + lo, list.begin() + hi);
}

// Tries every value of one field, holding the rest at the incumbent.
template <typename T>
void SweepField(BatchEvaluator& eval, InterpParams& incumbent,
                const std::vector<T>& candidates, T InterpParams::*field) {
  InterpParams best = incumbent;
  std::uint64_t best_err = eval.ErrorSum(best);
  for (const T& value : candidates) {
    InterpParams trial = incumbent;
    trial.*field = value;
    if (trial == incumbent) continue;
    const std::uint64_t err = eval.ErrorSum(trial);
    if (err < best_err) {
      best = trial;
      best_err = err;
    }
  }
  incumbent = best;
}

// Proportional mixing draws a clip uniformly from the union of the groups.
std::vector<Triplet> DrawBatch(std::span<const std::span<const Clip>> groups,
                               MixPolicy mix, int n, int patch,
                               std::uint64_t seed) {
  if (groups.size() == 1) return SampleTriplets(groups[0], n, patch, seed);
  if (mix == MixPolicy::kBalanced) {
    return SampleTripletsBalanced(groups, n, patch, seed);
  }
  for (const auto& g : groups) CheckClips(g, patch);
  std::size_t total = 0;
  for (const auto& g : groups) total += g.size();
  Rng rng(seed);
  std::vector<Triplet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::size_t k = rng.Index(total);
    std::size_t gi = 0;
    while (k >= groups[gi].size()) k -= groups[gi++].size();
    out.push_back(DrawTriplet(groups[gi][k], patch, rng));
  }
  return out;
}

}  // namespace

double TripletLoss(std::span<const Triplet> batch, const InterpParams& params) {
  params.Validate();
  BatchEvaluator eval(batch, 1);
  return eval.MeanError(params);
}

TuneResult TuneProfile(std::span<const std::span<const Clip>> groups,
                       const TuningSpec& spec, MixPolicy mix) {
  spec.Validate();
  bool any = false;
  for (const auto& g : groups) any = any || !g.empty();
  if (!any) throw Error(ErrorCode::kEmptyClipList, "no clips to tune on");
  std::vector<std::span<const Clip>> nonempty;
  for (const auto& g : groups) {
    if (!g.empty()) nonempty.push_back(g);
  }

  SearchSpace space = spec.space;
  const InterpParams baseline;
  InterpParams incumbent;
  incumbent.block_size = StartValue(space.block_sizes, baseline.block_size);
  incumbent.search_range = StartValue(space.search_ranges, baseline.search_range);
  incumbent.smoothness_lambda =
      StartValue(space.smoothness_lambdas, baseline.smoothness_lambda);
  incumbent.obmc = StartValue(space.obmc, baseline.obmc);
  incumbent.blend = StartValue(space.blends, baseline.blend);
  incumbent.mode = StartValue(space.modes, baseline.mode);

  TuneResult result;
  result.seed = spec.seed;
  std::vector<Triplet> batch;
  for (int round = 0; round < spec.rounds; ++round) {
    if (round > 0 && round % spec.decay_rounds == 0) {
      Shrink(space.block_sizes, incumbent.block_size);
      Shrink(space.search_ranges, incumbent.search_range);
      Shrink(space.smoothness_lambdas, incumbent.smoothness_lambda);
      Shrink(space.obmc, incumbent.obmc);
      Shrink(space.blends, incumbent.blend);
      Shrink(space.modes, incumbent.mode);
    }
    const std::uint64_t round_seed = DeriveSeed(spec.seed, {0x70, std::uint64_t(round)});
    batch = DrawBatch(nonempty, mix, spec.triplets_per_round, spec.patch,
                      round_seed);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i] = Augment(batch[i], DeriveSeed(round_seed, {std::uint64_t(i)}));
    }
    result.triplet_count += static_cast<int>(batch.size());

    BatchEvaluator eval(batch, spec.workers);
    SweepField(eval, incumbent, space.block_sizes, &InterpParams::block_size);
    SweepField(eval, incumbent, space.search_ranges, &InterpParams::search_range);
    SweepField(eval, incumbent, space.smoothness_lambdas,
               &InterpParams::smoothness_lambda);
    SweepField(eval, incumbent, space.obmc, &InterpParams::obmc);
    SweepField(eval, incumbent, space.blends, &InterpParams::blend);
    SweepField(eval, incumbent, space.modes, &InterpParams::mode);

    if (round + 1 == spec.rounds) {
      result.final_loss = eval.MeanError(incumbent);
      result.baseline_final_loss = eval.MeanError(baseline);
      // The tuned configuration never loses to the baseline on the batch
      // it is reported against.
      if (eval.ErrorSum(baseline) < eval.ErrorSum(incumbent)) {
        incumbent = baseline;
        result.final_loss = result.baseline_final_loss;
      }
    }
  }
  result.params = incumbent;
  return result;
}

TuneResult TuneProfile(std::span<const Clip> clips, const TuningSpec& spec) {
  const std::span<const Clip> groups[] = {clips};
  return TuneProfile(groups, spec, MixPolicy::kProportional);
}

}  // namespace tafi
