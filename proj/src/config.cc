#include "tafi/config.h"

#include "json.hpp"
#include "tafi/error.h"
#include "tafi/media.h"

namespace tafi {

using nlohmann::ordered_json;

Config DefaultConfig() {
  Config c;
  c.tuning.seed = c.seed;
  // Fitted to the feature spread of the default synthetic corpus.
  c.thresholds.static_residual_max = 1.5;
  c.thresholds.incoherence_split = 0.68;
  return c;
}

namespace {

template <typename T>
void Read(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename E, typename Parse>
void ReadEnum(const ordered_json& j, const char* key, E& out, Parse parse) {
  if (!j.contains(key)) return;
  const auto v = parse(j.at(key).get<std::string>());
  if (!v) {
    throw Error(ErrorCode::kParseError,
                std::string("bad value for config key ") + key);
  }
  out = *v;
}

template <typename E, typename Parse>
void ReadEnumList(const ordered_json& j, const char* key, std::vector<E>& out,
                  Parse parse) {
  if (!j.contains(key)) return;
  out.clear();
  for (const auto& s : j.at(key)) {
    const auto v = parse(s.get<std::string>());
    if (!v) {
      throw Error(ErrorCode::kParseError,
                  std::string("bad value in config list ") + key);
    }
    out.push_back(*v);
  }
}

template <typename E, typename Name>
ordered_json EnumList(const std::vector<E>& v, Name name) {
  ordered_json out = ordered_json::array();
  for (E e : v) out.push_back(name(e));
  return out;
}

std::optional<MixPolicy> ParseMix(std::string_view s) {
  if (s == "proportional") return MixPolicy::kProportional;
  if (s == "balanced") return MixPolicy::kBalanced;
  return std::nullopt;
}

void ReadParams(const ordered_json& j, InterpParams& p) {
  Read(j, "block_size", p.block_size);
  Read(j, "search_range", p.search_range);
  Read(j, "smoothness_lambda", p.smoothness_lambda);
  ReadEnum(j, "obmc", p.obmc, ParseObmc);
  ReadEnum(j, "blend", p.blend, ParseBlend);
  ReadEnum(j, "mode", p.mode, ParseMode);
}

}  // namespace

Config ParseConfig(std::string_view text) {
  Config c = DefaultConfig();
  try {
    const auto doc = ordered_json::parse(text);
    Read(doc, "seed", c.seed);
    c.tuning.seed = c.seed;
    Read(doc, "workers", c.workers);
    if (doc.contains("corpus")) {
      const auto& j = doc.at("corpus");
      SynthSpec& b = c.corpus.base;
      Read(j, "width", b.width);
      Read(j, "height", b.height);
      Read(j, "frames", b.n_frames);
      Read(j, "motion_amplitude", b.motion_amplitude);
      Read(j, "detail_scale", b.detail_scale);
      Read(j, "n_sprites", b.n_sprites);
      Read(j, "advect_turbulence", b.advect_turbulence);
      Read(j, "fps_num", b.fps.num);
      Read(j, "fps_den", b.fps.den);
      Read(j, "train_per_class", c.corpus.train_per_class);
      Read(j, "test_per_class", c.corpus.test_per_class);
    }
    if (doc.contains("classifier")) {
      const auto& j = doc.at("classifier");
      Read(j, "static_residual_max", c.thresholds.static_residual_max);
      Read(j, "incoherence_split", c.thresholds.incoherence_split);
      if (j.contains("feature_params")) {
        ReadParams(j.at("feature_params"), c.feature_params);
      }
    }
    if (doc.contains("tuning")) {
      const auto& j = doc.at("tuning");
      TuningSpec& t = c.tuning;
      Read(j, "rounds", t.rounds);
      Read(j, "decay_rounds", t.decay_rounds);
      Read(j, "triplets_per_round", t.triplets_per_round);
      Read(j, "patch", t.patch);
      ReadEnum(j, "mixing", c.mixing, ParseMix);
      if (j.contains("search_space")) {
        const auto& s = j.at("search_space");
        Read(s, "block_size", t.space.block_sizes);
        Read(s, "search_range", t.space.search_ranges);
        Read(s, "smoothness_lambda", t.space.smoothness_lambdas);
        ReadEnumList(s, "obmc", t.space.obmc, ParseObmc);
        ReadEnumList(s, "blend", t.space.blends, ParseBlend);
        ReadEnumList(s, "mode", t.space.modes, ParseMode);
      }
    }
    if (doc.contains("bench")) {
      const auto& j = doc.at("bench");
      Read(j, "classifier_routing", c.bench.classifier_routing);
      Read(j, "alpha", c.bench.alpha);
      Read(j, "allow_overlap", c.bench.allow_overlap);
    }
    if (doc.contains("vmaf")) {
      const auto& j = doc.at("vmaf");
      Read(j, "command", c.vmaf.command);
      Read(j, "score_key", c.vmaf.score_key);
      Read(j, "version_key", c.vmaf.version_key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("config: ") + e.what());
  }
  c.corpus.base.Validate();
  c.thresholds.Validate();
  c.feature_params.Validate();
  c.tuning.Validate();
  if (!(c.bench.alpha > 0 && c.bench.alpha < 1)) {
    throw Error(ErrorCode::kInvalidSpec, "alpha must be in (0, 1)");
  }
  return c;
}

Config LoadConfig(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseConfig(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string SerializeConfig(const Config& c) {
  ordered_json doc;
  doc["seed"] = c.seed;
  doc["workers"] = c.workers;
  const SynthSpec& b = c.corpus.base;
  doc["corpus"] = {{"width", b.width},
                   {"height", b.height},
                   {"frames", b.n_frames},
                   {"fps_num", b.fps.num},
                   {"fps_den", b.fps.den},
                   {"motion_amplitude", b.motion_amplitude},
                   {"detail_scale", b.detail_scale},
                   {"n_sprites", b.n_sprites},
                   {"advect_turbulence", b.advect_turbulence},
                   {"train_per_class", c.corpus.train_per_class},
                   {"test_per_class", c.corpus.test_per_class}};
  const InterpParams& fp = c.feature_params;
  doc["classifier"] = {
      {"static_residual_max", c.thresholds.static_residual_max},
      {"incoherence_split", c.thresholds.incoherence_split},
      {"feature_params",
       {{"block_size", fp.block_size},
        {"search_range", fp.search_range},
        {"smoothness_lambda", fp.smoothness_lambda},
        {"obmc", ObmcName(fp.obmc)},
        {"blend", BlendName(fp.blend)},
        {"mode", ModeName(fp.mode)}}}};
  const TuningSpec& t = c.tuning;
  doc["tuning"] = {
      {"rounds", t.rounds},
      {"decay_rounds", t.decay_rounds},
      {"triplets_per_round", t.triplets_per_round},
      {"patch", t.patch},
      {"mixing",
       c.mixing == MixPolicy::kProportional ? "proportional" : "balanced"},
      {"search_space",
       {{"block_size", t.space.block_sizes},
        {"search_range", t.space.search_ranges},
        {"smoothness_lambda", t.space.smoothness_lambdas},
        {"obmc", EnumList(t.space.obmc, ObmcName)},
        {"blend", EnumList(t.space.blends, BlendName)},
        {"mode", EnumList(t.space.modes, ModeName)}}}};
  doc["bench"] = {{"classifier_routing", c.bench.classifier_routing},
                  {"alpha", c.bench.alpha},
                  {"allow_overlap", c.bench.allow_overlap}};
  doc["vmaf"] = {{"command", c.vmaf.command},
                 {"score_key", c.vmaf.score_key},
                 {"version_key", c.vmaf.version_key}};
  return doc.dump(2) + "\n";
}

}  // namespace tafi
