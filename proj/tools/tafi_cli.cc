// Command-line front end: synth, classify, tune, interpolate, evaluate,
// stats and run.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tafi/bench.h"
#include "tafi/config.h"
#include "tafi/error.h"
#include "tafi/interp.h"
#include "tafi/manifest.h"
#include "tafi/pipeline.h"
#include "tafi/profiles.h"
#include "tafi/report.h"
#include "tafi/texclass.h"

namespace fs = std::filesystem;
using namespace tafi;

namespace {

Config LoadOrDefault(const std::string& path) {
  return path.empty() ? DefaultConfig() : LoadConfig(path);
}

InterpParams ChooseParams(const std::string& profiles_path,
                          const std::string& key) {
  if (profiles_path.empty()) return InterpParams{};
  const TunedProfileSet set = LoadProfiles(profiles_path);
  if (const auto cls = ParseClass(key)) return Route(set, *cls).params;
  const Profile* p = set.Find(key);
  if (!p) throw Error(ErrorCode::kInvalidSpec, "no profile '" + key + "'");
  return p->params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Texture-aware frame interpolation benchmark"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");
  std::optional<int> workers;
  app.add_option("--workers", workers, "worker threads (0 = all cores)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate train/test corpora");
  std::string synth_out;
  std::optional<std::uint64_t> synth_seed;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed, "corpus seed");

  // classify
  auto* classify = app.add_subcommand("classify", "label clips by features");
  std::string cls_manifest, cls_out;
  classify->add_option("--manifest", cls_manifest)->required();
  classify->add_option("--out", cls_out, "CSV output (default stdout)");

  // tune
  auto* tune = app.add_subcommand("tune", "tune profiles on a manifest");
  std::string tune_manifest, tune_out;
  std::vector<std::string> tune_classes;
  bool tune_mixed = false;
  std::optional<std::uint64_t> tune_seed;
  std::optional<int> tune_rounds;
  tune->add_option("--manifest", tune_manifest, "training manifest")
      ->required();
  tune->add_option("--out", tune_out, "profile file")->required();
  tune->add_option("--class", tune_classes, "class to tune (repeatable)");
  tune->add_flag("--mixed", tune_mixed, "tune the mixed profile");
  tune->add_option("--seed", tune_seed, "tuning seed");
  tune->add_option("--rounds", tune_rounds, "tuning rounds");

  // interpolate
  auto* interp = app.add_subcommand("interpolate",
                                    "interpolate a triplet or a whole clip");
  std::string in_clip, in_prev, in_next, in_out, in_profiles, in_key,
      in_motion;
  in_key = std::string(kBaselineKey);
  interp->add_option("--input", in_clip, "clip to reconstruct (odd frames)");
  interp->add_option("--prev", in_prev, "first frame of this Y4M is prev");
  interp->add_option("--next", in_next, "first frame of this Y4M is next");
  interp->add_option("--out", in_out, "output Y4M")->required();
  interp->add_option("--profiles", in_profiles, "profile file");
  interp->add_option("--profile", in_key,
                     "profile key, or a class name to route");
  interp->add_option("--motion-dump", in_motion,
                     "write the prev->next motion field (triplet mode)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "score a manifest");
  std::string ev_manifest, ev_profiles, ev_out;
  bool ev_overlap = false, ev_classifier = false;
  eval->add_option("--manifest", ev_manifest)->required();
  eval->add_option("--profiles", ev_profiles)->required();
  eval->add_option("--out", ev_out, "report directory")->required();
  eval->add_flag("--allow-overlap", ev_overlap,
                 "accept clips that were used for tuning");
  eval->add_flag("--classifier-routing", ev_classifier,
                 "also report classifier-routed composite");

  // stats
  auto* stats = app.add_subcommand("stats", "class tests on a scores table");
  std::string st_scores;
  std::optional<double> st_alpha;
  stats->add_option("--scores", st_scores, "scores.csv")->required();
  stats->add_option("--alpha", st_alpha, "significance level");

  // run
  auto* run = app.add_subcommand("run", "synth, tune and evaluate");
  std::string run_out;
  run->add_option("--out", run_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    Config config = LoadOrDefault(config_path);
    if (workers) config.workers = *workers;

    if (*synth) {
      if (synth_seed) config.seed = *synth_seed;
      const CorpusSplit split = SynthesizeSplit(config);
      WriteCorpus(split.train, fs::path(synth_out) / "train");
      WriteCorpus(split.test, fs::path(synth_out) / "test");
      std::printf("wrote %zu train and %zu test clips to %s\n",
                  split.train.size(), split.test.size(), synth_out.c_str());
    } else if (*classify) {
      const auto clips = LoadClips(LoadManifest(cls_manifest), config.workers);
      std::string csv =
          "clip_id,truth,predicted,gmc_residual,flow_incoherence,"
          "mean_motion,spatial_detail\n";
      int agree = 0, labelled = 0;
      for (const Clip& c : clips) {
        const auto f = ExtractFeatures(c, config.feature_params);
        const TextureClass p = Classify(f, config.thresholds);
        if (c.label) {
          ++labelled;
          agree += *c.label == p;
        }
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.6f,%.6f,%.6f,%.6f\n",
                      c.name.c_str(),
                      c.label ? std::string(ClassName(*c.label)).c_str() : "",
                      std::string(ClassName(p)).c_str(), f.gmc_residual,
                      f.flow_incoherence, f.mean_motion, f.spatial_detail);
        csv += buf;
      }
      if (cls_out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        WriteTextFile(cls_out, csv);
      }
      if (labelled > 0) {
        std::fprintf(stderr, "agreement with labels: %d/%d\n", agree,
                     labelled);
      }
    } else if (*tune) {
      if (tune_seed) config.tuning.seed = *tune_seed;
      if (tune_rounds) config.tuning.rounds = *tune_rounds;
      config.tuning.Validate();
      ProfileRequest req;
      if (!tune_classes.empty() || tune_mixed) {
        req.classes.clear();
        for (const auto& name : tune_classes) {
          const auto cls = ParseClass(name);
          if (!cls) {
            throw Error(ErrorCode::kInvalidSpec, "unknown class " + name);
          }
          req.classes.push_back(*cls);
        }
        req.mixed = tune_mixed;
      }
      const auto clips = LoadClips(LoadManifest(tune_manifest), config.workers);
      const TunedProfileSet set = TuneProfiles(clips, config, req);
      SaveProfiles(set, tune_out);
      for (const auto& [key, p] : set.entries()) {
        std::printf("%-9s %s  loss=%.4f\n", key.c_str(),
                    DescribeParams(p.params).c_str(), p.meta.final_loss);
      }
    } else if (*interp) {
      const InterpParams params = ChooseParams(in_profiles, in_key);
      if (!in_clip.empty()) {
        SaveY4mFile(ReconstructClip(LoadY4mFile(in_clip), params), in_out);
      } else if (!in_prev.empty() && !in_next.empty()) {
        const Clip a = LoadY4mFile(in_prev);
        const Clip b = LoadY4mFile(in_next);
        Clip out{a.name + "_mid", {Interpolate(a.frames[0], b.frames[0], params)},
                 a.fps, a.label};
        SaveY4mFile(out, in_out);
        if (!in_motion.empty()) {
          if (params.mode != InterpMode::kMci) {
            throw Error(ErrorCode::kInvalidSpec,
                        "motion dump needs mode mci");
          }
          WriteTextFile(in_motion, DumpMotionField(EstimateMotion(
                                       a.frames[0], b.frames[0], params)));
        }
      } else {
        throw Error(ErrorCode::kInvalidSpec,
                    "give --input, or both --prev and --next");
      }
    } else if (*eval) {
      if (ev_overlap) config.bench.allow_overlap = true;
      if (ev_classifier) config.bench.classifier_routing = true;
      const BenchReport report = RunBenchmark(
          LoadManifest(ev_manifest), LoadProfiles(ev_profiles), config);
      EmitReport(report, ev_out);
      std::fputs(ComparisonTable(report).c_str(), stdout);
    } else if (*stats) {
      const auto bytes = ReadFileBytes(st_scores);
      const auto versions = ParseScoresCsv(std::string_view(
          reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      std::fputs(StatsText(ClassStatistics(versions),
                           st_alpha.value_or(config.bench.alpha))
                     .c_str(),
                 stdout);
    } else if (*run) {
      const PipelineResult r = RunPipeline(config, run_out);
      std::fputs(ComparisonTable(r.report).c_str(), stdout);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "tafi: %s\n", e.what());
    return e.code() == ErrorCode::kToolFailed ? 2 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "tafi: %s\n", e.what());
    return 1;
  }
  return 0;
}
