#include "tafi/pipeline.h"

#include "tafi/error.h"
#include "tafi/report.h"
#include "tafi/rng.h"
#include "tafi/texgen.h"
#include "tafi/tuning.h"

namespace tafi {

namespace {

constexpr std::uint64_t kTrainKey = 0x7261696e;
constexpr std::uint64_t kTestKey = 0x74657374;
constexpr std::uint64_t kMixedTuneKey = 0x6d6978;

}  // namespace

CorpusSplit SynthesizeSplit(const Config& config) {
  CorpusSplit split;
  split.train =
      SynthCorpus(config.corpus.train_per_class, config.corpus.base,
                  DeriveSeed(config.seed, {kTrainKey}), "train", config.workers);
  split.test =
      SynthCorpus(config.corpus.test_per_class, config.corpus.base,
                  DeriveSeed(config.seed, {kTestKey}), "test", config.workers);
  return split;
}

Manifest WriteCorpus(std::span<const Clip> clips,
                     const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kWriteFailed,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  Manifest m;
  m.base_dir = dir;
  for (const Clip& clip : clips) {
    const std::string file = clip.name + ".y4m";
    SaveY4mFile(clip, dir / file);
    ManifestEntry e;
    e.clip_id = clip.name;
    e.path = file;
    e.label = clip.label;
    m.entries.push_back(std::move(e));
  }
  SaveManifest(m, dir / "manifest.csv");
  return m;
}

TunedProfileSet TuneProfiles(std::span<const Clip> train, const Config& config,
                             const ProfileRequest& request) {
  std::vector<std::vector<Clip>> by_class(kAllClasses.size());
  for (const Clip& c : train) {
    if (c.label) by_class[static_cast<int>(*c.label)].push_back(c);
  }
  TuningSpec spec = config.tuning;
  spec.workers = config.workers;

  TunedProfileSet profiles;
  auto store = [&](std::string_view key, const TuneResult& r) {
    profiles.Set(key, Profile{r.params, {r.final_loss, r.seed, r.triplet_count}});
  };
  for (TextureClass cls : request.classes) {
    const auto& clips = by_class[static_cast<int>(cls)];
    if (clips.empty()) continue;
    spec.seed = DeriveSeed(config.tuning.seed,
                           {static_cast<std::uint64_t>(cls) + 1});
    store(ClassName(cls), TuneProfile(std::span<const Clip>(clips), spec));
  }
  if (request.mixed) {
    std::vector<std::span<const Clip>> groups;
    for (const auto& g : by_class) {
      if (!g.empty()) groups.emplace_back(g);
    }
    if (!groups.empty()) {
      spec.seed = DeriveSeed(config.tuning.seed, {kMixedTuneKey});
      store(kMixedKey, TuneProfile(groups, spec, config.mixing));
    }
  }
  for (const auto& g : by_class) {
    for (const Clip& c : g) profiles.training_clips.push_back(c.name);
  }
  return profiles;
}

PipelineResult RunPipeline(const Config& config,
                           const std::filesystem::path& out_dir) {
  const CorpusSplit split = SynthesizeSplit(config);
  PipelineResult result;
  if (out_dir.empty()) {
    result.profiles = TuneProfiles(split.train, config);
    result.report = RunBenchmark(split.test, result.profiles, config);
    return result;
  }
  WriteCorpus(split.train, out_dir / "train");
  const Manifest test = WriteCorpus(split.test, out_dir / "test");
  result.profiles = TuneProfiles(split.train, config);
  SaveProfiles(result.profiles, out_dir / "profiles.json");
  result.report = RunBenchmark(test, result.profiles, config);
  EmitReport(result.report, out_dir / "report");
  return result;
}

}  // namespace tafi
