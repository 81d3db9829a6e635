#ifndef TAFI_PIPELINE_H_
#define TAFI_PIPELINE_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tafi/bench.h"
#include "tafi/config.h"
#include "tafi/manifest.h"
#include "tafi/profiles.h"

namespace tafi {

struct CorpusSplit {
  std::vector<Clip> train;  // named "train_<class>_<NN>"
  std::vector<Clip> test;   // named "test_<class>_<NN>", disjoint seeds
};

// Train and test corpora drawn from independent seeds derived from
// config.seed.
CorpusSplit SynthesizeSplit(const Config& config);

// Writes each clip as <dir>/<name>.y4m plus <dir>/manifest.csv with labels.
Manifest WriteCorpus(std::span<const Clip> clips,
                     const std::filesystem::path& dir);

struct ProfileRequest {
  std::vector<TextureClass> classes{kAllClasses.begin(), kAllClasses.end()};
  bool mixed = true;
};

// Tunes one profile per requested class on that class's labelled clips, and
// the mixed profile on all labelled clips under config.mixing. Classes
// without training clips are left out, so routing falls back. Unlabelled
// clips are ignored. The training clip ids are recorded in the result.
TunedProfileSet TuneProfiles(std::span<const Clip> train, const Config& config,
                             const ProfileRequest& request = {});

struct PipelineResult {
  TunedProfileSet profiles;
  BenchReport report;
};

// synth -> tune -> evaluate. With a non-empty `out_dir`, writes
// train/ and test/ corpora, profiles.json and report/ there.
PipelineResult RunPipeline(const Config& config,
                           const std::filesystem::path& out_dir = {});

}  // namespace tafi

#endif  // TAFI_PIPELINE_H_
