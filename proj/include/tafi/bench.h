#ifndef TAFI_BENCH_H_
#define TAFI_BENCH_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tafi/config.h"
#include "tafi/interp.h"
#include "tafi/manifest.h"
#include "tafi/metrics.h"
#include "tafi/profiles.h"
#include "tafi/stats.h"
#include "tafi/texclass.h"

namespace tafi {

inline constexpr std::string_view kTafiVersion = "tafi";
inline constexpr std::string_view kTafiClassifierVersion = "tafi_classifier";
inline constexpr std::string_view kOverallGroup = "overall";

struct SequenceScore {
  std::string clip_id;
  std::optional<TextureClass> truth;
  std::optional<TextureClass> predicted;
  std::vector<MetricRecord> records;  // ordered by frame index
  double mean_psnr = 0;
  double mean_ssim = 0;
  std::optional<double> vmaf;
  int frames_evaluated = 0;
  std::string profile_key;  // profile that produced the scores

  // Ground truth when known, otherwise the classifier's prediction.
  std::optional<TextureClass> group() const { return truth ? truth : predicted; }
};

// Interpolates every odd frame t (1 <= t <= len - 2) from t - 1 and t + 1 and
// scores it against frame t.
SequenceScore EvaluateClip(const Clip& clip, const InterpParams& params);

// The clip with odd frames replaced by their interpolations; even frames pass
// through untouched. This is the distorted input for whole-video metrics.
Clip ReconstructClip(const Clip& clip, const InterpParams& params);

struct VersionScores {
  std::string version;
  std::vector<SequenceScore> clips;  // manifest order
};

struct Aggregate {
  std::string version;
  std::string group;  // class name or "overall"
  int n_clips = 0;
  double mean_psnr = 0;
  double mean_ssim = 0;
  double delta_psnr = 0;  // version mean - baseline mean, same group
  double delta_ssim = 0;
  std::optional<double> mean_vmaf;
};

struct PairTest {
  TextureClass a;
  TextureClass b;
  TTestResult result;
};

struct VersionStats {
  std::string version;
  std::string metric;  // "psnr" or "ssim"
  std::optional<AnovaResult> anova;
  std::vector<PairTest> pairs;
};

struct ClassifiedClip {
  std::string clip_id;
  std::optional<TextureClass> truth;
  TextureClass predicted;
  TextureFeatures features;
};

struct BenchReport {
  std::vector<VersionScores> versions;
  std::vector<Aggregate> aggregates;
  std::vector<VersionStats> stats;
  std::vector<ClassifiedClip> classification;
  double alpha = 0.05;
  std::string vmaf_version;
  std::string config_echo;  // serialized configuration of the run

  const VersionScores* Find(std::string_view version) const;
  const Aggregate* FindAggregate(std::string_view version,
                                 std::string_view group) const;
};

// Evaluates every clip under baseline, each present class profile, mixed,
// and the routed composite. Routing uses labels (classifier for unlabelled
// clips); with config.bench.classifier_routing a classifier-routed composite
// is reported as well.
BenchReport RunBenchmark(std::span<const Clip> clips,
                         const TunedProfileSet& profiles,
                         const Config& config);

// Loads the manifest's clips, enforces the held-out rule, then runs.
BenchReport RunBenchmark(const Manifest& manifest,
                         const TunedProfileSet& profiles,
                         const Config& config);

// Per-class and overall aggregates with deltas against "baseline".
std::vector<Aggregate> Aggregates(std::span<const VersionScores> versions);

// ANOVA across classes and Welch tests for the three class pairs, computed
// on per-clip mean scores. Tests whose preconditions fail are omitted.
std::vector<VersionStats> ClassStatistics(
    std::span<const VersionScores> versions);

}  // namespace tafi

#endif  // TAFI_BENCH_H_
