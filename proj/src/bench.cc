#include "tafi/bench.h"

#include <algorithm>
#include <mutex>
#include <set>

#include "tafi/error.h"
#include "tafi/parallel.h"

namespace tafi {

SequenceScore EvaluateClip(const Clip& clip, const InterpParams& params) {
  if (clip.size() < 3) {
    throw Error(ErrorCode::kClipTooShort,
                "clip '" + clip.name + "' needs >= 3 frames to evaluate");
  }
  params.Validate();
  SequenceScore score;
  score.clip_id = clip.name;
  score.truth = clip.label;
  for (int t = 1; t + 1 < clip.size(); t += 2) {
    const Frame out =
        Interpolate(clip.frames[t - 1], clip.frames[t + 1], params);
    score.records.push_back(ScoreFrame(clip.frames[t], out, clip.name, t));
  }
  double psnr = 0;
  double ssim = 0;
  for (const auto& r : score.records) {
    psnr += r.psnr;
    ssim += r.ssim;
  }
  score.frames_evaluated = static_cast<int>(score.records.size());
  score.mean_psnr = psnr / score.frames_evaluated;
  score.mean_ssim = ssim / score.frames_evaluated;
  return score;
}

Clip ReconstructClip(const Clip& clip, const InterpParams& params) {
  Clip out = clip;
  for (int t = 1; t + 1 < clip.size(); t += 2) {
    out.frames[t] = Interpolate(clip.frames[t - 1], clip.frames[t + 1], params);
  }
  return out;
}

const VersionScores* BenchReport::Find(std::string_view version) const {
  for (const auto& v : versions) {
    if (v.version == version) return &v;
  }
  return nullptr;
}

const Aggregate* BenchReport::FindAggregate(std::string_view version,
                                            std::string_view group) const {
  for (const auto& a : aggregates) {
    if (a.version == version && a.group == group) return &a;
  }
  return nullptr;
}

std::vector<Aggregate> Aggregates(std::span<const VersionScores> versions) {
  std::vector<Aggregate> out;
  for (const auto& vs : versions) {
    std::vector<std::string> groups;
    for (TextureClass c : kAllClasses) groups.emplace_back(ClassName(c));
    groups.emplace_back(kOverallGroup);
    for (const auto& g : groups) {
      Aggregate a;
      a.version = vs.version;
      a.group = g;
      double vmaf = 0;
      int vmaf_n = 0;
      for (const auto& s : vs.clips) {
        const auto cls = s.group();
        if (g != kOverallGroup && (!cls || ClassName(*cls) != g)) continue;
        ++a.n_clips;
        a.mean_psnr += s.mean_psnr;
        a.mean_ssim += s.mean_ssim;
        if (s.vmaf) {
          vmaf += *s.vmaf;
          ++vmaf_n;
        }
      }
      if (a.n_clips > 0) {
        a.mean_psnr /= a.n_clips;
        a.mean_ssim /= a.n_clips;
      }
      if (vmaf_n > 0) a.mean_vmaf = vmaf / vmaf_n;
      out.push_back(a);
    }
  }
  for (auto& a : out) {
    for (const auto& b : out) {
      if (b.version == kBaselineKey && b.group == a.group) {
        a.delta_psnr = a.mean_psnr - b.mean_psnr;
        a.delta_ssim = a.mean_ssim - b.mean_ssim;
      }
    }
  }
  return out;
}

std::vector<VersionStats> ClassStatistics(
    std::span<const VersionScores> versions) {
  std::vector<VersionStats> out;
  for (const auto& vs : versions) {
    for (const std::string metric : {"psnr", "ssim"}) {
      std::vector<std::vector<double>> by_class(3);
      for (const auto& s : vs.clips) {
        const auto cls = s.group();
        if (!cls) continue;
        by_class[static_cast<int>(*cls)].push_back(
            metric == "psnr" ? s.mean_psnr : s.mean_ssim);
      }
      VersionStats st;
      st.version = vs.version;
      st.metric = metric;
      std::vector<std::vector<double>> groups;
      for (const auto& g : by_class) {
        if (!g.empty()) groups.push_back(g);
      }
      try {
        st.anova = OneWayAnova(groups);
      } catch (const Error&) {
        st.anova.reset();
      }
      constexpr std::pair<TextureClass, TextureClass> kPairs[] = {
          {TextureClass::kStatic, TextureClass::kDynDis},
          {TextureClass::kStatic, TextureClass::kDynCon},
          {TextureClass::kDynDis, TextureClass::kDynCon}};
      for (const auto& [a, b] : kPairs) {
        try {
          st.pairs.push_back(
              {a, b, WelchTTest(by_class[static_cast<int>(a)],
                                by_class[static_cast<int>(b)])});
        } catch (const Error&) {
        }
      }
      out.push_back(std::move(st));
    }
  }
  return out;
}

BenchReport RunBenchmark(std::span<const Clip> clips,
                         const TunedProfileSet& profiles,
                         const Config& config) {
  if (clips.empty()) {
    throw Error(ErrorCode::kEmptyManifest, "no clips to evaluate");
  }
  for (const Clip& c : clips) c.Validate();
  const int workers = config.workers;

  BenchReport report;
  report.alpha = config.bench.alpha;
  report.config_echo = SerializeConfig(config);

  report.classification.resize(clips.size());
  ParallelFor(clips.size(), workers, [&](std::size_t i) {
    ClassifiedClip& cc = report.classification[i];
    cc.clip_id = clips[i].name;
    cc.truth = clips[i].label;
    cc.features = ExtractFeatures(clips[i], config.feature_params);
    cc.predicted = Classify(cc.features, config.thresholds);
  });

  std::vector<std::string> keys{std::string(kBaselineKey)};
  for (TextureClass c : kAllClasses) {
    if (profiles.Has(ClassName(c))) keys.emplace_back(ClassName(c));
  }
  if (profiles.Has(kMixedKey)) keys.emplace_back(kMixedKey);

  report.versions.resize(keys.size());
  for (std::size_t v = 0; v < keys.size(); ++v) {
    report.versions[v].version = keys[v];
    report.versions[v].clips.resize(clips.size());
  }
  std::string vmaf_version;
  std::mutex vmaf_mu;
  ParallelFor(keys.size() * clips.size(), workers, [&](std::size_t task) {
    const std::size_t v = task / clips.size();
    const std::size_t i = task % clips.size();
    const InterpParams& params = profiles.Find(keys[v])->params;
    SequenceScore s = EvaluateClip(clips[i], params);
    s.predicted = report.classification[i].predicted;
    s.profile_key = keys[v];
    if (!config.vmaf.command.empty()) {
      const auto vmaf = VmafExternal(clips[i], ReconstructClip(clips[i], params),
                                     config.vmaf);
      if (vmaf) {
        s.vmaf = vmaf->score;
        std::lock_guard lock(vmaf_mu);
        vmaf_version = vmaf->tool_version;
      }
    }
    report.versions[v].clips[i] = std::move(s);
  });
  report.vmaf_version = vmaf_version;

  auto composite = [&](std::string_view name, bool use_labels) {
    VersionScores vs;
    vs.version = name;
    for (std::size_t i = 0; i < clips.size(); ++i) {
      const auto& cc = report.classification[i];
      const TextureClass cls =
          use_labels && cc.truth ? *cc.truth : cc.predicted;
      const RouteResult route = Route(profiles, cls);
      const VersionScores* src = report.Find(route.key);
      SequenceScore s = src->clips[i];
      s.profile_key = route.key;
      vs.clips.push_back(std::move(s));
    }
    return vs;
  };
  report.versions.push_back(composite(kTafiVersion, true));
  if (config.bench.classifier_routing) {
    report.versions.push_back(composite(kTafiClassifierVersion, false));
  }

  report.aggregates = Aggregates(report.versions);
  report.stats = ClassStatistics(report.versions);
  return report;
}

BenchReport RunBenchmark(const Manifest& manifest,
                         const TunedProfileSet& profiles,
                         const Config& config) {
  manifest.Validate();
  if (!config.bench.allow_overlap) {
    const std::set<std::string> trained(profiles.training_clips.begin(),
                                        profiles.training_clips.end());
    for (const auto& e : manifest.entries) {
      if (trained.count(e.clip_id)) {
        throw Error(ErrorCode::kHeldOutViolation,
                    "clip '" + e.clip_id +
                        "' was used for tuning; pass the overlap override "
                        "to evaluate it anyway");
      }
    }
  }
  const auto clips = LoadClips(manifest, config.workers);
  return RunBenchmark(clips, profiles, config);
}

}  // namespace tafi
