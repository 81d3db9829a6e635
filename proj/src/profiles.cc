#include "tafi/profiles.h"

#include "json.hpp"
#include "tafi/error.h"
#include "tafi/media.h"

namespace tafi {

using nlohmann::ordered_json;

TunedProfileSet::TunedProfileSet() {
  entries_.emplace(std::string(kBaselineKey), Profile{});
}

void TunedProfileSet::Set(std::string_view key, Profile profile) {
  if (key != kBaselineKey && key != kMixedKey && !ParseClass(key)) {
    throw Error(ErrorCode::kInvalidSpec,
                "unknown profile key '" + std::string(key) + "'");
  }
  profile.params.Validate();
  entries_.insert_or_assign(std::string(key), std::move(profile));
}

const Profile* TunedProfileSet::Find(std::string_view key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

RouteResult Route(const TunedProfileSet& profiles, TextureClass cls) {
  for (std::string_view key : {ClassName(cls), kMixedKey, kBaselineKey}) {
    if (const Profile* p = profiles.Find(key)) {
      return {p->params, std::string(key), key != ClassName(cls)};
    }
  }
  // The constructor guarantees a baseline entry.
  return {InterpParams{}, std::string(kBaselineKey), true};
}

namespace {

ordered_json ParamsToJson(const InterpParams& p) {
  ordered_json j;
  j["block_size"] = p.block_size;
  j["search_range"] = p.search_range;
  j["smoothness_lambda"] = p.smoothness_lambda;
  j["obmc"] = ObmcName(p.obmc);
  j["blend"] = BlendName(p.blend);
  j["mode"] = ModeName(p.mode);
  return j;
}

template <typename T>
T Required(std::optional<T> v, const std::string& what) {
  if (!v) throw Error(ErrorCode::kParseError, "bad value for " + what);
  return *v;
}

InterpParams ParamsFromJson(const ordered_json& j) {
  InterpParams p;
  p.block_size = j.at("block_size").get<int>();
  p.search_range = j.at("search_range").get<int>();
  p.smoothness_lambda = j.at("smoothness_lambda").get<double>();
  p.obmc = Required(ParseObmc(j.at("obmc").get<std::string>()), "obmc");
  p.blend = Required(ParseBlend(j.at("blend").get<std::string>()), "blend");
  p.mode = Required(ParseMode(j.at("mode").get<std::string>()), "mode");
  p.Validate();
  return p;
}

}  // namespace

std::string SerializeProfiles(const TunedProfileSet& profiles) {
  ordered_json doc;
  doc["format"] = "tafi-profiles-1";
  ordered_json entries = ordered_json::object();
  for (const auto& [key, profile] : profiles.entries()) {
    ordered_json e;
    e["params"] = ParamsToJson(profile.params);
    e["final_loss"] = profile.meta.final_loss;
    e["seed"] = profile.meta.seed;
    e["triplet_count"] = profile.meta.triplet_count;
    entries[key] = std::move(e);
  }
  doc["profiles"] = std::move(entries);
  doc["training_clips"] = profiles.training_clips;
  return doc.dump(2) + "\n";
}

TunedProfileSet ParseProfiles(std::string_view text) {
  try {
    const auto doc = ordered_json::parse(text);
    TunedProfileSet set;
    for (const auto& [key, e] : doc.at("profiles").items()) {
      Profile p;
      p.params = ParamsFromJson(e.at("params"));
      p.meta.final_loss = e.value("final_loss", 0.0);
      p.meta.seed = e.value("seed", std::uint64_t{0});
      p.meta.triplet_count = e.value("triplet_count", 0);
      set.Set(key, p);
    }
    if (doc.contains("training_clips")) {
      set.training_clips =
          doc.at("training_clips").get<std::vector<std::string>>();
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("profile file: ") + e.what());
  }
}

void SaveProfiles(const TunedProfileSet& profiles,
                  const std::filesystem::path& path) {
  WriteTextFile(path, SerializeProfiles(profiles));
}

TunedProfileSet LoadProfiles(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseProfiles(
      std::string_view(reinterpret_cast<const char*>(bytes.data()),
                       bytes.size()));
}

}  // namespace tafi
