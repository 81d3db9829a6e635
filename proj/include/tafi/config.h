#ifndef TAFI_CONFIG_H_
#define TAFI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "tafi/interp.h"
#include "tafi/metrics.h"
#include "tafi/texclass.h"
#include "tafi/texgen.h"
#include "tafi/tuning.h"

namespace tafi {

struct CorpusConfig {
  SynthSpec base;
  int train_per_class = 8;
  int test_per_class = 12;
};

struct BenchConfig {
  bool classifier_routing = false;  // also report classifier-routed TAFI
  double alpha = 0.05;
  bool allow_overlap = false;  // accept test clips that were tuned on
};

// Hierarchical run configuration, stored as a JSON document. Missing keys keep
// their defaults, so a config file only needs the values it changes.
struct Config {
  std::uint64_t seed = 2021;
  int workers = 0;
  CorpusConfig corpus;
  ClassifierThresholds thresholds;
  InterpParams feature_params;  // block matcher used for texture features
  TuningSpec tuning;
  MixPolicy mixing = MixPolicy::kProportional;
  BenchConfig bench;
  VmafToolConfig vmaf;
};

Config DefaultConfig();
Config ParseConfig(std::string_view text);
Config LoadConfig(const std::filesystem::path& path);
std::string SerializeConfig(const Config& config);

}  // namespace tafi

#endif  // TAFI_CONFIG_H_
